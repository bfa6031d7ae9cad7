#pragma once

// Command-line driver, kept in the library so tests can run it in-process.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dsmfuse/fusion.hpp"
#include "dsmfuse/problem.hpp"

namespace dsmfuse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInadmissible = 1;
inline constexpr int kExitInputError = 2;

struct RunOptions {
  std::string path;
  std::optional<Rule> rule;
  /// "free" or "shafer"; overridden by `empty`.
  std::optional<std::string> model;
  std::vector<std::string> empty;
  bool check_admissibility = false;
  bool require_admissible = false;
  std::optional<OutputFormat> format;
  std::size_t max_frame = kDefaultMaxAtoms;
  Notation notation = Notation::ascii;
  /// Use the lower/upper bound matrices (single-interval inputs only).
  bool interval_bounds = false;
};

/// Loads the problem, fuses it, and returns the report.
inline FusionReport fuse_problem(const ProblemFile& pf, const RunOptions& opts, bool want_admissibility) {
  ModelSpec spec = pf.model;
  if (opts.model) {
    if (*opts.model == "free") {
      spec = {};
    } else if (*opts.model == "shafer") {
      spec = {ModelSpec::Kind::shafer, {}};
    } else {
      throw parse_error("unknown --model '" + *opts.model + "' (expected free or shafer)");
    }
  }
  if (!opts.empty.empty()) spec = {ModelSpec::Kind::explicit_empty, opts.empty};

  HybridModel model = make_model(spec, pf.frame);
  Rule rule = opts.rule ? *opts.rule : pf.rule ? *pf.rule : (model.is_free() ? Rule::classic : Rule::hybrid);
  // The classic rule works on the free model.
  if (rule == Rule::classic) model = free_model(pf.frame);

  FusionReport report{rule, model, PreciseResult{PreciseMass(pf.frame), {}, {}, {}, {}, {}}};
  if (const auto* precise = std::get_if<std::vector<PreciseMass>>(&pf.sources)) {
    if (opts.interval_bounds) throw parse_error("--interval-bounds needs set-valued sources");
    PreciseResult result = rule == Rule::classic ? dsm_classic_precise(*precise) : dsm_hybrid_precise(*precise, model);
    if (want_admissibility) result.admissibility = check_admissibility(result.masses);
    report.result = std::move(result);
    return report;
  }
  const auto& imprecise = std::get<std::vector<ImpreciseMass>>(pf.sources);
  ImpreciseResult result = [&] {
    if (opts.interval_bounds) {
      try {
        return interval_bounds_fusion(MassMatrix::from_sources(imprecise), model);
      } catch (const std::invalid_argument& e) {
        throw parse_error(e.what());
      }
    }
    return rule == Rule::classic ? dsm_classic_imprecise(imprecise) : dsm_hybrid_imprecise(imprecise, model);
  }();
  if (want_admissibility) result.admissibility = check_admissibility(result.masses);
  report.result = std::move(result);
  return report;
}

inline int run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const ProblemFile pf = load_problem(opts.path);
    if (pf.frame.size() > opts.max_frame) {
      err << "error: frame has " << pf.frame.size() << " atoms, above --max-frame " << opts.max_frame << '\n';
      return kExitInputError;
    }
    const bool check = opts.check_admissibility || opts.require_admissible || pf.check_admissibility;
    const FusionReport report = fuse_problem(pf, opts, check);
    const OutputFormat format = opts.format ? *opts.format : pf.format.value_or(OutputFormat::table);
    out << (format == OutputFormat::table ? emit_table(report, opts.notation) : emit_machine(report));

    if (opts.require_admissible) {
      const bool admissible = std::visit([](const auto& r) { return r.admissibility && r.admissibility->admissible; },
                                         report.result);
      if (!admissible) {
        err << "error: fused assignment is not admissible\n";
        return kExitInadmissible;
      }
    }
    return kExitOk;
  } catch (const parse_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const model_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const frame_error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInputError;
}

}  // namespace dsmfuse::cli
