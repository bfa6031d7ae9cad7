// dsmfuse: fuse precise or set-valued belief assignments from a JSON problem
// file with the DSm classic or hybrid rule.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsmfuse/cli.hpp"
#include "dsmfuse/dsmfuse.hpp"

namespace {

int enumerate_command(std::size_t atoms, std::size_t max_frame, dsmfuse::Notation notation) {
  try {
    const dsmfuse::Frame frame = dsmfuse::Frame::with_atoms(atoms);
    const dsmfuse::HyperPowerSet hps = dsmfuse::enumerate(frame, max_frame);
    std::cout << "|D| = " << hps.size() << '\n';
    for (std::size_t i = 0; i < hps.size(); ++i) {
      std::cout << i << "  " << dsmfuse::render(hps[i], frame, notation) << '\n';
    }
    return dsmfuse::cli::kExitOk;
  } catch (const dsmfuse::frame_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dsmfuse::cli::kExitInputError;
  }
}

int calc_command(const std::string& lhs, const std::string& op, const std::string& rhs) {
  try {
    const dsmfuse::SetValue a = dsmfuse::parse_set(lhs);
    const dsmfuse::SetValue b = dsmfuse::parse_set(rhs);
    if (op == "add") {
      std::cout << dsmfuse::add(a, b) << '\n';
    } else if (op == "sub") {
      std::cout << dsmfuse::sub(a, b) << '\n';
    } else if (op == "mul") {
      std::cout << dsmfuse::mul(a, b) << '\n';
    } else if (op == "div") {
      const dsmfuse::Quotient q = dsmfuse::div(a, b);
      if (const auto* s = std::get_if<dsmfuse::SetValue>(&q)) {
        std::cout << *s << '\n';
      } else {
        std::cout << "+inf (unbounded quotient)\n";
      }
    } else {
      std::cerr << "error: unknown operator '" << op << "' (expected add, sub, mul or div)\n";
      return dsmfuse::cli::kExitInputError;
    }
    return dsmfuse::cli::kExitOk;
  } catch (const dsmfuse::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return dsmfuse::cli::kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuse imprecise, uncertain and conflicting belief assignments with DSm rules"};
  app.require_subcommand(1);

  dsmfuse::cli::RunOptions opts;
  std::string rule;
  std::string format;
  bool unicode = false;

  auto* run = app.add_subcommand("run", "Fuse the sources of a problem file");
  run->add_option("file", opts.path, "Problem file (JSON)")->required();
  run->add_option("--rule", rule, "classic or hybrid")->check(CLI::IsMember({"classic", "hybrid"}));
  run->add_option("--model", opts.model, "free or shafer")->check(CLI::IsMember({"free", "shafer"}));
  run->add_option("--empty", opts.empty, "Proposition forced empty (repeatable; overrides --model)");
  run->add_flag("--check-admissibility", opts.check_admissibility, "Search for a unit-sum witness");
  run->add_flag("--require-admissible", opts.require_admissible, "Exit 1 when the result is not admissible");
  run->add_option("--format", format, "table or machine")->check(CLI::IsMember({"table", "machine"}));
  run->add_option("--max-frame", opts.max_frame, "Largest frame accepted")->check(CLI::Range(1, 6));
  run->add_flag("--unicode", unicode, "Render propositions with ∩ and ∪");
  run->add_flag("--interval-bounds", opts.interval_bounds,
                "Fuse single-interval masses through their lower/upper bound matrices");

  std::size_t atoms = 3;
  std::size_t enum_cap = dsmfuse::kDefaultMaxAtoms;
  auto* enumerate = app.add_subcommand("enumerate", "List the hyper-power set of a frame with atoms t1..tn");
  enumerate->add_option("atoms", atoms, "Number of atoms")->required()->check(CLI::Range(1, 6));
  enumerate->add_option("--max-frame", enum_cap, "Largest frame accepted")->check(CLI::Range(1, 6));
  enumerate->add_flag("--unicode", unicode, "Render propositions with ∩ and ∪");

  std::string lhs, op, rhs;
  auto* calc = app.add_subcommand("calc", "Set arithmetic, e.g. calc \"[0.1,0.3]\" add \"{0.4}\"");
  calc->add_option("lhs", lhs)->required();
  calc->add_option("op", op, "add, sub, mul or div")->required();
  calc->add_option("rhs", rhs)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dsmfuse::cli::kExitInputError;
  }

  const auto notation = unicode ? dsmfuse::Notation::unicode : dsmfuse::Notation::ascii;
  if (*enumerate) {
    if (enum_cap > dsmfuse::kDefaultMaxAtoms) {
      std::cerr << "warning: enumerating 6 atoms produces millions of propositions\n";
    }
    return enumerate_command(atoms, enum_cap, notation);
  }
  if (*calc) return calc_command(lhs, op, rhs);

  if (!rule.empty()) opts.rule = dsmfuse::parse_rule(rule);
  if (!format.empty()) opts.format = dsmfuse::parse_format(format);
  opts.notation = notation;
  if (opts.max_frame > dsmfuse::kDefaultMaxAtoms) {
    std::cerr << "warning: frames of 6 atoms make fusion and model closure expensive\n";
  }
  return dsmfuse::cli::run(opts, std::cout, std::cerr);
}
