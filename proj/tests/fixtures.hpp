#pragma once

// Worked-example inputs shared by the unit and acceptance suites. The same
// inputs ship as JSON under data/.

#include <cmath>
#include <string>
#include <vector>

#include "dsmfuse/dsmfuse.hpp"

namespace fixtures {

inline const dsmfuse::Frame& three_atoms() {
  static const dsmfuse::Frame f = dsmfuse::Frame::with_atoms(3);
  return f;
}

inline const dsmfuse::Frame& two_atoms() {
  static const dsmfuse::Frame f = dsmfuse::Frame::with_atoms(2);
  return f;
}

inline dsmfuse::Proposition prop(const std::string& text, const dsmfuse::Frame& frame = three_atoms()) {
  return dsmfuse::parse_proposition(text, frame);
}

/// Two precise sources on t1, t2, t3 and t1 n t2.
inline std::vector<dsmfuse::PreciseMass> precise_sources() {
  using dsmfuse::PreciseMass;
  return {PreciseMass(three_atoms(), {{"t1", 0.1}, {"t2", 0.2}, {"t3", 0.3}, {"t1 n t2", 0.4}}),
          PreciseMass(three_atoms(), {{"t1", 0.5}, {"t2", 0.3}, {"t3", 0.1}, {"t1 n t2", 0.1}})};
}

/// The same sources as intervals of various radii.
inline std::vector<dsmfuse::ImpreciseMass> interval_sources() {
  using dsmfuse::ImpreciseMass;
  using dsmfuse::parse_set;
  return {ImpreciseMass(three_atoms(), {{"t1", parse_set("[0.05,0.15]")},
                                        {"t2", parse_set("[0.1,0.3]")},
                                        {"t3", parse_set("[0.15,0.45]")},
                                        {"t1 n t2", parse_set("[0.2,0.6]")}}),
          ImpreciseMass(three_atoms(), {{"t1", parse_set("[0.4,0.6]")},
                                        {"t2", parse_set("[0.1,0.5]")},
                                        {"t3", parse_set("[0,0.2]")},
                                        {"t1 n t2", parse_set("[0.05,0.15]")}})};
}

/// Two sources on two atoms whose masses are unions of pieces.
inline std::vector<dsmfuse::ImpreciseMass> multi_piece_sources() {
  using dsmfuse::ImpreciseMass;
  using dsmfuse::parse_set;
  return {ImpreciseMass(two_atoms(), {{"t1", parse_set("[0.1,0.2] U {0.3}")}, {"t2", parse_set("(0.4,0.6) U [0.7,0.8]")}}),
          ImpreciseMass(two_atoms(), {{"t1", parse_set("[0.4,0.5]")}, {"t2", parse_set("[0,0.4] U {0.5,0.6}")}})};
}

/// t1 n t2 forced empty.
inline dsmfuse::HybridModel pair_empty_model(const dsmfuse::Frame& frame) {
  const dsmfuse::Proposition c = dsmfuse::parse_proposition("t1 n t2", frame);
  return dsmfuse::build_model(frame, {&c, 1});
}

struct ExpectedScalar {
  const char* prop;
  double value;
};

struct ExpectedSet {
  const char* prop;
  const char* value;
};

inline const std::vector<ExpectedScalar> kClassicPrecise = {
    {"t1", 0.05},      {"t2", 0.06},      {"t3", 0.03},          {"t1 n t2", 0.52},
    {"t1 n t3", 0.16}, {"t2 n t3", 0.11}, {"t1 n t2 n t3", 0.07},
};

inline const std::vector<ExpectedScalar> kHybridPrecise = {
    {"t1", 0.26},      {"t2", 0.20},      {"t3", 0.10},      {"t1 n t3", 0.16},
    {"t2 n t3", 0.11}, {"t1 u t2", 0.17}, {"t1 n t2", 0.0}, {"t1 n t2 n t3", 0.0},
};

inline const std::vector<ExpectedSet> kClassicInterval = {
    {"t1", "[0.020,0.090]"},      {"t2", "[0.010,0.150]"},      {"t3", "[0,0.090]"},
    {"t1 n t2", "[0.1625,1]"},    {"t1 n t3", "[0.060,0.300]"}, {"t2 n t3", "[0.015,0.285]"},
    {"t1 n t2 n t3", "[0.0075,0.1875]"},
};

inline const std::vector<ExpectedScalar> kClassicLower = {
    {"t1", 0.020},      {"t2", 0.010},      {"t3", 0.0},           {"t1 n t2", 0.1625},
    {"t1 n t3", 0.060}, {"t2 n t3", 0.015}, {"t1 n t2 n t3", 0.0075},
};

/// Before clamping; the t1 n t2 row clamps to 1.
inline const std::vector<ExpectedScalar> kClassicUpper = {
    {"t1", 0.090},      {"t2", 0.150},      {"t3", 0.090},         {"t1 n t2", 1.0725},
    {"t1 n t3", 0.300}, {"t2 n t3", 0.285}, {"t1 n t2 n t3", 0.1875},
};

inline const std::vector<ExpectedSet> kHybridInterval = {
    {"t1", "[0.1025,0.4725]"},    {"t2", "[0.035,0.495]"},      {"t3", "[0.0075,0.2775]"},
    {"t1 n t3", "[0.060,0.300]"}, {"t2 n t3", "[0.015,0.285]"}, {"t1 u t2", "[0.055,0.345]"},
    {"t1 n t2", "{0}"},           {"t1 n t2 n t3", "{0}"},
};

inline const std::vector<ExpectedSet> kClassicMultiPiece = {
    {"t1", "[0.04,0.10] U [0.12,0.15]"},
    {"t2", "[0,0.40] U [0.42,0.48]"},
    {"t1 n t2", "(0.16,0.58]"},
};

inline const std::vector<ExpectedSet> kHybridMultiPiece = {
    {"t1", "[0.04,0.10] U [0.12,0.15]"},
    {"t2", "[0,0.40] U [0.42,0.48]"},
    {"t1 n t2", "{0}"},
    {"t1 u t2", "(0.16,0.58]"},
};

/// Endpoints within tol, openness exact.
inline bool same_set(const dsmfuse::SetValue& got, const dsmfuse::SetValue& want, double tol) {
  const auto& a = got.pieces();
  const auto& b = want.pieces();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto close = [tol](double x, double y) { return x == y || std::abs(x - y) <= tol; };
    if (!close(a[i].lo().value, b[i].lo().value) || !close(a[i].hi().value, b[i].hi().value) ||
        a[i].lo().open != b[i].lo().open || a[i].hi().open != b[i].hi().open) {
      return false;
    }
  }
  return true;
}

/// Rows of `got` match `want` exactly by proposition: no missing and no extra rows.
template <class Value, class Expected, class Match>
bool rows_match(const dsmfuse::BasicMass<Value>& got, const std::vector<Expected>& want, const dsmfuse::Frame& frame,
                Match&& match) {
  if (got.size() != want.size()) return false;
  for (const auto& e : want) {
    const auto p = dsmfuse::parse_proposition(e.prop, frame);
    if (!got.has(p) || !match(got.at(p), e.value)) return false;
  }
  return true;
}

/// Scalar rows compare by value; a missing row reads as 0 and extra rows must be 0.
inline bool scalars_match(const dsmfuse::PreciseMass& got, const std::vector<ExpectedScalar>& want,
                          const dsmfuse::Frame& frame, double tol) {
  std::size_t matched = 0;
  for (const auto& e : want) {
    const auto p = dsmfuse::parse_proposition(e.prop, frame);
    if (std::abs(got.at(p) - e.value) > tol) return false;
    matched += got.has(p);
  }
  std::size_t zero_extras = 0;
  for (const auto& [p, v] : got.values()) zero_extras += v == 0.0;
  return got.size() <= matched + zero_extras;
}

inline bool sets_match(const dsmfuse::ImpreciseMass& got, const std::vector<ExpectedSet>& want,
                       const dsmfuse::Frame& frame, double tol) {
  return rows_match(got, want, frame,
                    [tol](const dsmfuse::SetValue& g, const char* w) { return same_set(g, dsmfuse::parse_set(w), tol); });
}

}  // namespace fixtures
