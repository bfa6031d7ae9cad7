#pragma once

// DSm classic and hybrid rules of combination for k >= 2 sources, over
// precise masses, single-interval masses (via lower/upper bound matrices)
// and general set-valued masses; plus admissibility analysis.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "dsmfuse/hyper_power_set.hpp"
#include "dsmfuse/interval_set.hpp"
#include "dsmfuse/mass.hpp"
#include "dsmfuse/model.hpp"

namespace dsmfuse {

struct ClampEvent {
  Proposition proposition;
  SetValue before;
  SetValue after;
};

struct Admissibility {
  bool admissible = false;
  /// One point per stored proposition, summing to 1, when admissible.
  std::map<Proposition, double> witness;
};

template <class Value>
struct FusionResult {
  /// Fused masses. Set values are clamped to [0,1]; rows that are empty
  /// under the model carry zero.
  BasicMass<Value> masses;
  /// The same rows before clamping.
  std::map<Proposition, Value> unclamped;
  /// Rows whose proposition is empty under the model.
  std::vector<Proposition> forced_empty;
  CompletenessReport completeness;
  std::vector<ClampEvent> clamped;
  std::optional<Admissibility> admissibility;

  Value at(const Proposition& p) const { return masses.at(p); }
  bool is_forced_empty(const Proposition& p) const {
    return std::binary_search(forced_empty.begin(), forced_empty.end(), p);
  }
};

using PreciseResult = FusionResult<double>;
using ImpreciseResult = FusionResult<SetValue>;

namespace detail {

template <class Entry, class Visit>
void for_each_tuple(const std::vector<std::vector<Entry>>& lists, Visit&& visit) {
  if (lists.empty()) return;
  for (const auto& l : lists) {
    if (l.empty()) return;
  }
  std::vector<std::size_t> idx(lists.size(), 0);
  std::vector<const Entry*> tuple(lists.size());
  for (;;) {
    for (std::size_t i = 0; i < lists.size(); ++i) tuple[i] = &lists[i][idx[i]];
    visit(tuple);
    // Odometer with the last source varying fastest.
    std::size_t i = lists.size();
    while (i > 0) {
      --i;
      if (++idx[i] < lists[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
  }
}

template <class Value>
void require_sources(std::span<const BasicMass<Value>> sources) {
  if (sources.size() < 2) throw std::invalid_argument("combination needs at least two sources");
  for (const auto& s : sources) {
    if (!(s.frame() == sources.front().frame())) throw std::invalid_argument("sources use different frames");
  }
}

/// Where one focal tuple's product goes.
struct Routing {
  std::optional<Proposition> target;
  /// Set when the tuple's intersection is empty under the model.
  std::optional<Proposition> empty_meet;
};

template <class Props>
Proposition meet_all(const Props& xs) {
  Proposition m = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) m = meet(m, xs[i]);
  return m;
}

template <class Props>
Proposition join_all(const Props& xs) {
  Proposition m = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) m = join(m, xs[i]);
  return m;
}

template <class Props>
Proposition singleton_union(const Props& xs) {
  AtomSet atoms = 0;
  for (const Proposition& x : xs) atoms |= x.atoms();
  return union_of_atoms(atoms);
}

/// Classic rule: all mass goes to the intersection.
template <class Props>
Routing route_classic(const Props& xs) {
  return {meet_all(xs), std::nullopt};
}

/// Hybrid rule. Exactly one of the three terms receives each tuple:
///   S1 when X1 ∩ ... ∩ Xk is nonempty -> that intersection;
///   S3 when the intersection is empty but X1 ∪ ... ∪ Xk is not -> the union;
///   S2 when every Xi is empty -> u(X1) ∪ ... ∪ u(Xk), or I_t if that is empty.
/// Targets are reduced modulo the model so equivalent propositions share a row.
template <class Props>
Routing route_hybrid(const Props& xs, const HybridModel& model) {
  Routing r;
  const Proposition m = meet_all(xs);
  if (!model.is_empty(m)) {
    r.target = model.reduce(m);
    return r;
  }
  r.empty_meet = m;
  const Proposition j = join_all(xs);
  if (!model.is_empty(j)) {
    r.target = model.reduce(j);
    return r;
  }
  const Proposition u = singleton_union(xs);
  r.target = model.is_empty(u) ? model.total_ignorance() : model.reduce(u);
  return r;
}

template <class Value>
using FocalEntry = std::pair<Proposition, Value>;

template <class Value>
std::vector<std::vector<FocalEntry<Value>>> focal_lists(std::span<const BasicMass<Value>> sources) {
  std::vector<std::vector<FocalEntry<Value>>> lists;
  lists.reserve(sources.size());
  for (const auto& s : sources) {
    auto& l = lists.emplace_back();
    for (const auto& [p, v] : s.values()) {
      if (!MassAlgebra<Value>::is_zero(v)) l.emplace_back(p, v);
    }
  }
  return lists;
}

template <class Value, class Router>
FusionResult<Value> combine(std::span<const BasicMass<Value>> sources, Router&& router) {
  using Algebra = MassAlgebra<Value>;
  require_sources(sources);
  const auto lists = focal_lists(sources);

  std::map<Proposition, Value> sums;
  std::set<Proposition> empty_rows;
  std::vector<Proposition> xs(sources.size());
  for_each_tuple(lists, [&](const std::vector<const FocalEntry<Value>*>& tuple) {
    for (std::size_t i = 0; i < tuple.size(); ++i) xs[i] = tuple[i]->first;
    const Routing r = router(xs);
    if (r.empty_meet) empty_rows.insert(*r.empty_meet);
    if (!r.target) return;
    Value product = tuple[0]->second;
    for (std::size_t i = 1; i < tuple.size(); ++i) product = Algebra::mul(product, tuple[i]->second);
    auto it = sums.find(*r.target);
    if (it == sums.end()) {
      sums.emplace(*r.target, std::move(product));
    } else {
      it->second = Algebra::add(it->second, product);
    }
  });

  FusionResult<Value> result{BasicMass<Value>(sources.front().frame()), {}, {}, {}, {}, {}};
  for (const Proposition& e : empty_rows) {
    sums.emplace(e, Algebra::zero());
    result.forced_empty.push_back(e);
  }
  result.unclamped = sums;
  if constexpr (std::is_same_v<Value, SetValue>) {
    for (auto& [p, v] : sums) {
      if (needs_unit_clamp(v)) {
        SetValue after = clamp_unit(v);
        result.clamped.push_back({p, v, after});
        v = std::move(after);
      }
    }
  }
  result.masses = BasicMass<Value>::from_unchecked(sources.front().frame(), std::move(sums));
  result.completeness = classify_completeness(result.masses);
  return result;
}

inline void require_model_frame(const HybridModel& model, const Frame& frame) {
  if (!(model.frame() == frame)) throw std::invalid_argument("model and sources use different frames");
}

}  // namespace detail

/// DSm classic rule on the free model: each tuple's product goes to the
/// intersection of its focal elements.
template <class Value>
FusionResult<Value> dsm_classic(std::span<const BasicMass<Value>> sources) {
  return detail::combine(sources, [](const auto& xs) { return detail::route_classic(xs); });
}

/// DSm hybrid rule for an arbitrary model.
template <class Value>
FusionResult<Value> dsm_hybrid(std::span<const BasicMass<Value>> sources, const HybridModel& model) {
  if (!sources.empty()) detail::require_model_frame(model, sources.front().frame());
  return detail::combine(sources, [&model](const auto& xs) { return detail::route_hybrid(xs, model); });
}

inline PreciseResult dsm_classic_precise(std::span<const PreciseMass> sources) { return dsm_classic(sources); }

inline PreciseResult dsm_hybrid_precise(std::span<const PreciseMass> sources, const HybridModel& model) {
  return dsm_hybrid(sources, model);
}

inline ImpreciseResult dsm_classic_imprecise(std::span<const ImpreciseMass> sources) { return dsm_classic(sources); }

inline ImpreciseResult dsm_hybrid_imprecise(std::span<const ImpreciseMass> sources, const HybridModel& model) {
  return dsm_hybrid(sources, model);
}

// ---------------------------------------------------------------------------
// Single-interval masses through lower/upper bound matrices.

/// k sources x d propositions of interval masses. Columns are the union of
/// the sources' stored propositions, in enumeration order; missing entries
/// are the point {0}.
class MassMatrix {
 public:
  static MassMatrix from_sources(std::span<const ImpreciseMass> sources) {
    if (sources.size() < 2) throw std::invalid_argument("combination needs at least two sources");
    MassMatrix mm(sources.front().frame());
    std::set<Proposition> cols;
    for (const auto& s : sources) {
      if (!(s.frame() == mm.frame_)) throw std::invalid_argument("sources use different frames");
      for (const auto& [p, v] : s.values()) {
        if (!v.is_interval()) {
          throw std::invalid_argument("interval-bounds fusion needs single-interval masses; got " + format_set(v));
        }
        cols.insert(p);
      }
    }
    mm.columns_.assign(cols.begin(), cols.end());
    for (const auto& s : sources) {
      auto& row = mm.rows_.emplace_back();
      for (const Proposition& p : mm.columns_) row.push_back(s.at(p).pieces().front());
    }
    return mm;
  }

  /// Intervals [m - eps, m + eps] around precise masses; each must lie in [0,1].
  static MassMatrix centered(const Frame& frame, std::vector<Proposition> columns,
                             const std::vector<std::vector<double>>& centers,
                             const std::vector<std::vector<double>>& radii) {
    if (centers.size() < 2 || centers.size() != radii.size()) {
      throw std::invalid_argument("centered matrix needs matching center/radius rows for k >= 2 sources");
    }
    MassMatrix mm(frame);
    mm.columns_ = std::move(columns);
    for (std::size_t i = 0; i < centers.size(); ++i) {
      if (centers[i].size() != mm.columns_.size() || radii[i].size() != mm.columns_.size()) {
        throw std::invalid_argument("centered matrix row has the wrong width");
      }
      auto& row = mm.rows_.emplace_back();
      for (std::size_t j = 0; j < mm.columns_.size(); ++j) {
        const double lo = centers[i][j] - radii[i][j];
        const double hi = centers[i][j] + radii[i][j];
        if (radii[i][j] < 0 || lo < 0 || hi > 1) {
          throw std::invalid_argument("centered interval leaves [0,1]");
        }
        row.push_back(Piece::closed(lo, hi));
      }
    }
    return mm;
  }

  const Frame& frame() const { return frame_; }
  std::span<const Proposition> columns() const { return columns_; }
  std::size_t source_count() const { return rows_.size(); }
  const Piece& interval(std::size_t source, std::size_t column) const { return rows_.at(source).at(column); }

  std::vector<std::vector<double>> inf_matrix() const {
    return project([](const Piece& p) { return p.lo().value; });
  }
  std::vector<std::vector<double>> sup_matrix() const {
    return project([](const Piece& p) { return p.hi().value; });
  }

  std::vector<PreciseMass> lower_sources() const { return as_masses(inf_matrix()); }
  std::vector<PreciseMass> upper_sources() const { return as_masses(sup_matrix()); }
  std::vector<ImpreciseMass> interval_sources() const {
    std::vector<ImpreciseMass> out;
    for (const auto& row : rows_) {
      ImpreciseMass m(frame_);
      for (std::size_t j = 0; j < columns_.size(); ++j) m.set(columns_[j], SetValue{row[j]});
      out.push_back(std::move(m));
    }
    return out;
  }

 private:
  explicit MassMatrix(Frame frame) : frame_(std::move(frame)) {}

  template <class F>
  std::vector<std::vector<double>> project(F&& f) const {
    std::vector<std::vector<double>> out;
    for (const auto& row : rows_) {
      auto& r = out.emplace_back();
      for (const Piece& p : row) r.push_back(f(p));
    }
    return out;
  }

  std::vector<PreciseMass> as_masses(const std::vector<std::vector<double>>& matrix) const {
    std::vector<PreciseMass> out;
    for (const auto& row : matrix) {
      PreciseMass m(frame_);
      for (std::size_t j = 0; j < columns_.size(); ++j) m.set(columns_[j], row[j]);
      out.push_back(std::move(m));
    }
    return out;
  }

  Frame frame_;
  std::vector<Proposition> columns_;
  std::vector<std::vector<Piece>> rows_;
};

/// Runs the scalar hybrid rule on the lower-bound matrix and on the
/// upper-bound matrix and pairs the results. An output bound is open when
/// any interval combined into that proposition is open on that side.
inline ImpreciseResult interval_bounds_fusion(const MassMatrix& matrix, const HybridModel& model) {
  detail::require_model_frame(model, matrix.frame());
  const auto lower_src = matrix.lower_sources();
  const auto upper_src = matrix.upper_sources();
  const PreciseResult lower = dsm_hybrid_precise(lower_src, model);
  const PreciseResult upper = dsm_hybrid_precise(upper_src, model);

  struct Openness {
    bool lo = false;
    bool hi = false;
  };
  std::map<Proposition, Openness> openness;
  {
    std::vector<std::vector<std::pair<Proposition, Piece>>> lists;
    for (std::size_t i = 0; i < matrix.source_count(); ++i) {
      auto& l = lists.emplace_back();
      for (std::size_t j = 0; j < matrix.columns().size(); ++j) {
        const Piece& p = matrix.interval(i, j);
        if (!(p.is_point() && p.lo().value == 0)) l.emplace_back(matrix.columns()[j], p);
      }
    }
    std::vector<Proposition> xs(matrix.source_count());
    detail::for_each_tuple(lists, [&](const std::vector<const std::pair<Proposition, Piece>*>& tuple) {
      for (std::size_t i = 0; i < tuple.size(); ++i) xs[i] = tuple[i]->first;
      const detail::Routing r = detail::route_hybrid(xs, model);
      if (!r.target) return;
      Openness& o = openness[*r.target];
      for (const auto* e : tuple) {
        o.lo = o.lo || e->second.lo().open;
        o.hi = o.hi || e->second.hi().open;
      }
    });
  }

  std::map<Proposition, SetValue> sums;
  for (const auto& [p, hi] : upper.masses.values()) {
    const Openness o = openness.count(p) ? openness.at(p) : Openness{};
    sums.emplace(p, SetValue{detail::arithmetic_piece({lower.masses.at(p), o.lo}, {hi, o.hi})});
  }

  ImpreciseResult result{ImpreciseMass(matrix.frame()), {}, upper.forced_empty, {}, {}, {}};
  result.unclamped = sums;
  for (auto& [p, v] : sums) {
    if (needs_unit_clamp(v)) {
      SetValue after = clamp_unit(v);
      result.clamped.push_back({p, v, after});
      v = std::move(after);
    }
  }
  result.masses = ImpreciseMass::from_unchecked(matrix.frame(), std::move(sums));
  result.completeness = classify_completeness(result.masses);
  return result;
}

// ---------------------------------------------------------------------------
// Admissibility.

namespace detail {

inline constexpr double kWitnessTolerance = 1e-12;

class WitnessSearch {
 public:
  explicit WitnessSearch(const ImpreciseMass& m) {
    for (const auto& [p, v] : m.values()) {
      props_.push_back(p);
      sets_.push_back(&v);
    }
    min_rest_.assign(sets_.size() + 1, 0.0);
    max_rest_.assign(sets_.size() + 1, 0.0);
    for (std::size_t j = sets_.size(); j-- > 0;) {
      min_rest_[j] = min_rest_[j + 1] + sets_[j]->inf();
      max_rest_[j] = max_rest_[j + 1] + sets_[j]->sup();
    }
    chosen_.resize(sets_.size(), nullptr);
  }

  Admissibility run() {
    Admissibility out;
    if (sets_.empty()) return out;
    if (search(0, 0.0, 0.0)) {
      out.admissible = true;
      for (std::size_t j = 0; j < props_.size(); ++j) out.witness.emplace(props_[j], witness_[j]);
    } else {
      out.admissible = feasible_seen_;
    }
    return out;
  }

 private:
  bool search(std::size_t j, double lo, double hi) {
    if (lo + min_rest_[j] > 1.0 + kWitnessTolerance) return false;
    if (hi + max_rest_[j] < 1.0 - kWitnessTolerance) return false;
    if (j == sets_.size()) return leaf();
    for (const Piece& p : sets_[j]->pieces()) {
      chosen_[j] = &p;
      if (search(j + 1, lo + p.lo().value, hi + p.hi().value)) return true;
    }
    return false;
  }

  // Sums of points drawn from the chosen pieces fill an interval from
  // sum(lo) to sum(hi), each end included iff every contributing end is.
  bool leaf() {
    double lo = 0, hi = 0;
    bool lo_open = false, hi_open = false;
    for (const Piece* p : chosen_) {
      lo += p->lo().value;
      hi += p->hi().value;
      lo_open = lo_open || p->lo().open;
      hi_open = hi_open || p->hi().open;
    }
    const bool lo_ok = lo < 1.0 - kWitnessTolerance || (std::abs(lo - 1.0) <= kWitnessTolerance && !lo_open);
    const bool hi_ok = hi > 1.0 + kWitnessTolerance || (std::abs(hi - 1.0) <= kWitnessTolerance && !hi_open);
    if (!lo_ok || !hi_ok) return false;
    feasible_seen_ = true;

    // Move every piece the same fraction t of the way from its lower to its
    // upper end. 0 < t < 1 keeps every point interior; t = 0 or 1 only
    // happens when the touched ends are all closed.
    const double width = hi - lo;
    const double t = width <= kWitnessTolerance ? 0.0 : std::clamp((1.0 - lo) / width, 0.0, 1.0);
    witness_.assign(chosen_.size(), 0.0);
    double sum = 0;
    for (std::size_t j = 0; j < chosen_.size(); ++j) {
      const Piece& p = *chosen_[j];
      witness_[j] = p.is_point() ? p.lo().value : p.lo().value + t * (p.hi().value - p.lo().value);
      if (!p.contains(witness_[j])) return false;
      sum += witness_[j];
    }
    return std::abs(sum - 1.0) <= 1e-9;
  }

  std::vector<Proposition> props_;
  std::vector<const SetValue*> sets_;
  std::vector<double> min_rest_;
  std::vector<double> max_rest_;
  std::vector<const Piece*> chosen_;
  std::vector<double> witness_;
  bool feasible_seen_ = false;
};

}  // namespace detail

/// An imprecise assignment is admissible when one point can be picked from
/// every stored mass set so that the points sum to 1. Returns such a
/// witness when one is found.
inline Admissibility check_admissibility(const ImpreciseMass& m) { return detail::WitnessSearch(m).run(); }

/// A precise assignment is admissible exactly when it is complete; the
/// witness is the assignment itself.
inline Admissibility check_admissibility(const PreciseMass& m) {
  Admissibility out;
  if (classify_completeness(m).lower != Completeness::complete) return out;
  out.admissible = true;
  for (const auto& [p, v] : m.values()) out.witness.emplace(p, v);
  return out;
}

/// The ⊞-sum of every stored mass set; contains 1 iff the assignment is admissible.
inline SetValue mass_sum(const ImpreciseMass& m) {
  SetValue total = SetValue::point(0.0);
  for (const auto& [p, v] : m.values()) total = add(total, v);
  return total;
}

// ---------------------------------------------------------------------------
// Pointwise sampling: fuse one chosen point from every mass set.

/// One point per stored proposition of a source.
using PointSelection = std::map<Proposition, double>;

namespace detail {

inline std::vector<PreciseMass> select_points(std::span<const ImpreciseMass> sources,
                                              std::span<const PointSelection> selection) {
  if (sources.size() != selection.size()) throw std::invalid_argument("need one selection per source");
  std::vector<PreciseMass> points;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    PreciseMass m(sources[i].frame());
    for (const auto& [p, x] : selection[i]) {
      if (!sources[i].at(p).contains(x)) {
        throw std::invalid_argument("selected point " + format_number(x) + " is outside its mass set " +
                                    format_set(sources[i].at(p)));
      }
      m.set(p, x);
    }
    for (const auto& [p, v] : sources[i].values()) {
      if (!selection[i].count(p) && !v.is_point(0.0)) {
        throw std::invalid_argument("no point selected for a stored proposition");
      }
    }
    points.push_back(std::move(m));
  }
  return points;
}

}  // namespace detail

/// Classic-rule fusion of the selected points.
inline PreciseMass fuse_pointwise_sample(std::span<const ImpreciseMass> sources,
                                         std::span<const PointSelection> selection) {
  const auto points = detail::select_points(sources, selection);
  return dsm_classic_precise(points).masses;
}

/// Hybrid-rule fusion of the selected points.
inline PreciseMass fuse_pointwise_sample(std::span<const ImpreciseMass> sources,
                                         std::span<const PointSelection> selection, const HybridModel& model) {
  const auto points = detail::select_points(sources, selection);
  return dsm_hybrid_precise(points, model).masses;
}

}  // namespace dsmfuse
