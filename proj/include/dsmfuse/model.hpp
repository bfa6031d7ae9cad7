#pragma once

// Fusion models over D^Θ: the free model, Shafer's model, and hybrid models
// given by propositions forced to be empty.

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "dsmfuse/error.hpp"
#include "dsmfuse/hyper_power_set.hpp"

namespace dsmfuse {

/// A model M(Θ): the frame plus emptiness constraints.
///
/// A proposition is empty under the model when it lies below the union of
/// all constraints (unions of empty sets are empty), so the set of empty
/// elements is the lattice ideal generated by the constraints. ∅ is always
/// empty and total ignorance never is.
class HybridModel {
 public:
  const Frame& frame() const { return frame_; }
  std::span<const Proposition> forced_empty() const { return forced_; }
  bool is_free() const { return bound_.is_empty(); }

  /// The union of all constraints: the largest empty proposition.
  const Proposition& empty_bound() const { return bound_; }

  bool is_empty(const Proposition& a) const { return leq(a, bound_); }

  /// Characteristic emptiness function: 0 for empty propositions, else 1.
  int phi(const Proposition& a) const { return is_empty(a) ? 0 : 1; }

  /// The canonical representative of a under the model: intersection terms
  /// that are empty are dropped. Empty propositions reduce to ∅.
  Proposition reduce(const Proposition& a) const {
    if (is_free()) return a;
    std::vector<AtomSet> kept;
    for (AtomSet t : a.terms()) {
      if (!is_empty(Proposition::intersection(t))) kept.push_back(t);
    }
    return Proposition::from_terms(std::move(kept));
  }

  /// I_t under the model.
  Proposition total_ignorance() const { return reduce(dsmfuse::total_ignorance(frame_)); }

  /// Every empty element of D^Θ (∅ included), in enumeration order.
  std::vector<Proposition> empty_closure() const { return down_set(bound_, frame_); }

 private:
  friend HybridModel build_model(const Frame& frame, std::span<const Proposition> constraints);

  explicit HybridModel(Frame frame) : frame_(std::move(frame)) {}

  Frame frame_;
  std::vector<Proposition> forced_;
  Proposition bound_;
};

inline HybridModel build_model(const Frame& frame, std::span<const Proposition> constraints) {
  HybridModel m(frame);
  for (const Proposition& c : constraints) {
    if ((c.atoms() & ~frame.all_atoms()) != 0) {
      throw model_error("constraint mentions atoms outside the frame");
    }
    if (c.is_empty()) continue;
    if (std::find(m.forced_.begin(), m.forced_.end(), c) == m.forced_.end()) m.forced_.push_back(c);
    m.bound_ = join(m.bound_, c);
  }
  std::sort(m.forced_.begin(), m.forced_.end());
  if (m.is_empty(dsmfuse::total_ignorance(frame))) {
    throw model_error("degenerate model: the constraints force total ignorance to be empty");
  }
  return m;
}

inline HybridModel free_model(const Frame& frame) { return build_model(frame, {}); }

/// All pairwise intersections θi ∩ θj (i != j) forced empty.
inline HybridModel shafer_model(const Frame& frame) {
  std::vector<Proposition> constraints;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (std::size_t j = i + 1; j < frame.size(); ++j) {
      constraints.push_back(Proposition::intersection((AtomSet{1} << i) | (AtomSet{1} << j)));
    }
  }
  return build_model(frame, constraints);
}

inline int phi(const HybridModel& model, const Proposition& a) { return model.phi(a); }
inline bool is_empty(const HybridModel& model, const Proposition& a) { return model.is_empty(a); }

}  // namespace dsmfuse
