#pragma once

// Generalized basic belief assignments over D^Θ, precise (scalar) or
// imprecise (set-valued), and their completeness classification.

#include <cmath>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "dsmfuse/hyper_power_set.hpp"
#include "dsmfuse/interval_set.hpp"

namespace dsmfuse {

/// The arithmetic a mass value type brings to the combination rules.
template <class Value>
struct MassAlgebra;

template <>
struct MassAlgebra<double> {
  static double zero() { return 0.0; }
  static bool is_zero(double v) { return v == 0.0; }
  static double add(double a, double b) { return a + b; }
  static double mul(double a, double b) { return a * b; }
  static double lower(double v) { return v; }
  static double upper(double v) { return v; }
  static void validate(double v) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("precise mass " + format_number(v) + " is outside [0,1]");
    }
  }
};

template <>
struct MassAlgebra<SetValue> {
  static SetValue zero() { return SetValue::point(0.0); }
  static bool is_zero(const SetValue& v) { return v.is_point(0.0); }
  static SetValue add(const SetValue& a, const SetValue& b) { return dsmfuse::add(a, b); }
  static SetValue mul(const SetValue& a, const SetValue& b) { return dsmfuse::mul(a, b); }
  static double lower(const SetValue& v) { return v.inf(); }
  static double upper(const SetValue& v) { return v.sup(); }
  static void validate(const SetValue& v) {
    if (v.empty()) throw std::invalid_argument("imprecise mass must be a nonempty set");
    if (v.inf() < 0.0 || v.sup() > 1.0) {
      throw std::invalid_argument("imprecise mass " + format_set(v) + " is not a subset of [0,1]");
    }
  }
};

/// One source's assignment m: D^Θ -> Value. Propositions not stored carry
/// zero mass (the point {0} for set values).
template <class Value>
class BasicMass {
 public:
  using value_type = Value;
  using Algebra = MassAlgebra<Value>;
  using map_type = std::map<Proposition, Value>;

  explicit BasicMass(Frame frame) : frame_(std::move(frame)) {}

  /// Convenience form taking proposition text, e.g. {{"t1 n t2", 0.4}}.
  BasicMass(Frame frame, std::initializer_list<std::pair<std::string_view, Value>> entries)
      : frame_(std::move(frame)) {
    for (const auto& [text, v] : entries) set(parse_proposition(text, frame_), v);
  }

  /// Values for fused results, which may legitimately leave [0,1].
  static BasicMass from_unchecked(Frame frame, map_type values) {
    BasicMass m(std::move(frame));
    m.values_ = std::move(values);
    return m;
  }

  void set(const Proposition& p, Value v) {
    require_in_frame(p, frame_);
    Algebra::validate(v);
    if (p.is_empty()) {
      if (Algebra::is_zero(v)) return;
      throw std::invalid_argument("nonzero mass on the empty set");
    }
    values_.insert_or_assign(p, std::move(v));
  }

  Value at(const Proposition& p) const {
    auto it = values_.find(p);
    return it == values_.end() ? Algebra::zero() : it->second;
  }
  bool has(const Proposition& p) const { return values_.count(p) != 0; }

  const map_type& values() const { return values_; }
  const Frame& frame() const { return frame_; }
  std::size_t size() const { return values_.size(); }

  friend bool operator==(const BasicMass&, const BasicMass&) = default;

 private:
  Frame frame_;
  map_type values_;
};

using PreciseMass = BasicMass<double>;
using ImpreciseMass = BasicMass<SetValue>;

enum class Completeness { incomplete, complete, paraconsistent };

/// |sum - 1| at or below this counts as complete.
inline constexpr double kCompletenessTolerance = 1e-9;

inline Completeness classify_sum(double sum) {
  if (std::abs(sum - 1.0) <= kCompletenessTolerance) return Completeness::complete;
  return sum < 1.0 ? Completeness::incomplete : Completeness::paraconsistent;
}

inline std::string_view to_string(Completeness c) {
  switch (c) {
    case Completeness::incomplete: return "incomplete";
    case Completeness::complete: return "complete";
    case Completeness::paraconsistent: return "paraconsistent";
  }
  return "?";
}

/// Sums of lower and upper mass bounds and their classes. For precise
/// assignments both sides are the same.
struct CompletenessReport {
  double lower_sum = 0.0;
  double upper_sum = 0.0;
  Completeness lower = Completeness::incomplete;
  Completeness upper = Completeness::incomplete;
};

template <class Value>
CompletenessReport classify_completeness(const BasicMass<Value>& m) {
  CompletenessReport r;
  for (const auto& [p, v] : m.values()) {
    r.lower_sum += MassAlgebra<Value>::lower(v);
    r.upper_sum += MassAlgebra<Value>::upper(v);
  }
  r.lower = classify_sum(r.lower_sum);
  r.upper = classify_sum(r.upper_sum);
  return r;
}

}  // namespace dsmfuse
