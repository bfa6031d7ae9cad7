#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dsmfuse/cli.hpp"
#include "dsmfuse/problem.hpp"
#include "fixtures.hpp"

using namespace dsmfuse;
namespace fs = std::filesystem;

namespace {

const char* const kDataFiles[] = {"data/precise_three_atoms.json", "data/interval_three_atoms.json",
                                  "data/multi_piece_two_atoms.json", "data/shafer_conflict.json"};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const cli::RunOptions& opts) {
  std::ostringstream out, err;
  const int code = cli::run(opts, out, err);
  return {code, out.str(), err.str()};
}

cli::RunOptions options(std::string path) {
  cli::RunOptions o;
  o.path = std::move(path);
  return o;
}

// Writes text to a fresh file under the temp directory.
std::string temp_file(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "dsmfuse_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) { return read_text_file(path); }

}  // namespace

TEST(ProblemFile, ParsesPreciseAndImprecise) {
  const ProblemFile p = load_problem("data/precise_three_atoms.json");
  ASSERT_TRUE(std::holds_alternative<std::vector<PreciseMass>>(p.sources));
  EXPECT_EQ(std::get<std::vector<PreciseMass>>(p.sources), fixtures::precise_sources());

  const ProblemFile q = load_problem("data/multi_piece_two_atoms.json");
  ASSERT_TRUE(std::holds_alternative<std::vector<ImpreciseMass>>(q.sources));
  EXPECT_EQ(std::get<std::vector<ImpreciseMass>>(q.sources), fixtures::multi_piece_sources());
  EXPECT_TRUE(q.check_admissibility);
  EXPECT_EQ(q.source_names, (std::vector<std::string>{"m1", "m2"}));

  const ProblemFile mixed = parse_problem(
      R"({"frame": ["a", "b"], "sources": [{"masses": {"a": 0.5, "b": "[0.4,0.5]"}}, {"masses": {"a": 1}}]})");
  const auto& src = std::get<std::vector<ImpreciseMass>>(mixed.sources);
  EXPECT_EQ(src[0].at(parse_proposition("a", mixed.frame)), SetValue::point(0.5));
  EXPECT_EQ(mixed.source_names, (std::vector<std::string>{"source1", "source2"}));
}

TEST(ProblemFile, RejectsMalformedInput) {
  const char* bad[] = {
      "",
      "[]",
      "{",
      R"({"sources": []})",
      R"({"frame": ["a"], "sources": [{"masses": {"a": 1}}]})",
      R"({"frame": ["a", "a"], "sources": [{"masses": {}}, {"masses": {}}]})",
      R"({"frame": "ab", "sources": [{"masses": {}}, {"masses": {}}]})",
      R"({"frame": ["a"], "sources": [{"masses": {"b": 1}}, {"masses": {}}]})",
      R"({"frame": ["a"], "sources": [{"masses": {"a": 1.5}}, {"masses": {}}]})",
      R"({"frame": ["a"], "sources": [{"masses": {"a": -0.1}}, {"masses": {}}]})",
      R"({"frame": ["a"], "sources": [{"masses": {"a": "[0.1,"}}, {"masses": {}}]})",
      R"({"frame": ["a"], "sources": [{"masses": {"a": "[0.5,1.5]"}}, {"masses": {}}]})",
      R"({"frame": ["a"], "sources": [{"masses": {"a": true}}, {"masses": {}}]})",
      R"({"frame": ["a"], "sources": [{"masses": []}, {"masses": {}}]})",
      R"({"frame": ["a"], "sources": [{}, {"masses": {}}]})",
      R"({"frame": ["a", "b"], "sources": [{"masses": {"a n b": 0.1, "b n a": 0.2}}, {"masses": {}}]})",
      R"({"frame": ["a"], "rule": "mixed", "sources": [{"masses": {}}, {"masses": {}}]})",
      R"({"frame": ["a"], "model": "open", "sources": [{"masses": {}}, {"masses": {}}]})",
      R"({"frame": ["a"], "model": {"empty": "a"}, "sources": [{"masses": {}}, {"masses": {}}]})",
      R"({"frame": ["a"], "options": {"format": "xml"}, "sources": [{"masses": {}}, {"masses": {}}]})",
      R"({"frame": ["a"], "options": {"check_admissibility": 1}, "sources": [{"masses": {}}, {"masses": {}}]})",
      R"({"frame": ["a"], "sources": [{"name": 3, "masses": {}}, {"masses": {}}]})",
  };
  for (const char* text : bad) EXPECT_THROW(parse_problem(text), parse_error) << text;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run(options("data/precise_three_atoms.json")).code, cli::kExitOk);
  EXPECT_EQ(run(options("data/does_not_exist.json")).code, cli::kExitInputError);
  EXPECT_EQ(run(options(temp_file("broken.json", "{\"frame\": ["))).code, cli::kExitInputError);

  // Degenerate model: every atom forced empty.
  auto degenerate = options("data/precise_three_atoms.json");
  degenerate.rule = Rule::hybrid;
  degenerate.empty = {"t1 u t2 u t3"};
  const Outcome d = run(degenerate);
  EXPECT_EQ(d.code, cli::kExitInputError);
  EXPECT_NE(d.err.find("error:"), std::string::npos);

  auto bad_model = options("data/precise_three_atoms.json");
  bad_model.model = "closed";
  EXPECT_EQ(run(bad_model).code, cli::kExitInputError);

  auto small = options("data/precise_three_atoms.json");
  small.max_frame = 2;
  EXPECT_EQ(run(small).code, cli::kExitInputError);
}

TEST(Cli, RequireAdmissible) {
  auto ok = options("data/interval_three_atoms.json");
  ok.require_admissible = true;
  const Outcome r = run(ok);
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("admissibility: admissible"), std::string::npos);

  const std::string path = temp_file("inadmissible.json", R"({
    "frame": ["t1", "t2"],
    "sources": [{"masses": {"t1": "[0.1,0.2]"}}, {"masses": {"t1": "[0.1,0.3]"}}]
  })");
  auto bad = options(path);
  bad.require_admissible = true;
  const Outcome b = run(bad);
  EXPECT_EQ(b.code, cli::kExitInadmissible);
  EXPECT_NE(b.out.find("not admissible"), std::string::npos);

  bad.require_admissible = false;
  bad.check_admissibility = true;
  EXPECT_EQ(run(bad).code, cli::kExitOk);
}

TEST(Cli, IntervalBoundsPath) {
  auto o = options("data/interval_three_atoms.json");
  o.interval_bounds = true;
  o.format = OutputFormat::machine;
  const Outcome r = run(o);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  auto full = options("data/interval_three_atoms.json");
  full.format = OutputFormat::machine;
  const MachineDocument a = parse_machine(r.out);
  const MachineDocument b = parse_machine(run(full).out);
  const auto& am = std::get<std::map<Proposition, SetValue>>(a.masses);
  const auto& bm = std::get<std::map<Proposition, SetValue>>(b.masses);
  ASSERT_EQ(am.size(), bm.size());
  for (const auto& [p, v] : bm) EXPECT_TRUE(fixtures::same_set(am.at(p), v, 1e-12));

  auto multi = options("data/multi_piece_two_atoms.json");
  multi.interval_bounds = true;
  EXPECT_EQ(run(multi).code, cli::kExitInputError);
  auto precise = options("data/precise_three_atoms.json");
  precise.interval_bounds = true;
  EXPECT_EQ(run(precise).code, cli::kExitInputError);
}

TEST(Cli, RuleAndModelSelection) {
  // The shafer fixture has no rule, so its constrained model selects the hybrid rule.
  const FusionReport s = cli::fuse_problem(load_problem("data/shafer_conflict.json"), options(""), false);
  EXPECT_EQ(s.rule, Rule::hybrid);
  // Classic always runs on the free model.
  auto classic = options("");
  classic.rule = Rule::classic;
  const FusionReport c = cli::fuse_problem(load_problem("data/shafer_conflict.json"), classic, false);
  EXPECT_TRUE(c.model.is_free());
  // --empty overrides the file's model.
  auto hybrid = options("");
  hybrid.rule = Rule::hybrid;
  hybrid.empty = {"t1 n t2"};
  const FusionReport h = cli::fuse_problem(load_problem("data/precise_three_atoms.json"), hybrid, false);
  const auto& r = std::get<PreciseResult>(h.result);
  EXPECT_TRUE(fixtures::scalars_match(r.masses, fixtures::kHybridPrecise, fixtures::three_atoms(), 1e-9));
}

TEST(Cli, UnicodeNotation) {
  auto o = options("data/precise_three_atoms.json");
  o.notation = Notation::unicode;
  o.rule = Rule::hybrid;
  o.empty = {"t1 n t2"};
  const Outcome r = run(o);
  EXPECT_NE(r.out.find("t1∩t2∩t3 (≡∅)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("t1∪t2"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Machine format.

TEST(MachineFormat, RoundTripIsLossless) {
  for (const char* file : kDataFiles) {
    for (const Rule rule : {Rule::classic, Rule::hybrid}) {
      auto o = options(file);
      o.rule = rule;
      o.check_admissibility = true;
      if (rule == Rule::hybrid && std::string(file).find("shafer") == std::string::npos) o.empty = {"t1 n t2"};
      const FusionReport report = cli::fuse_problem(load_problem(file), o, true);
      const std::string text = emit_machine(report);
      const MachineDocument md = parse_machine(text);

      EXPECT_EQ(md.frame, report.model.frame()) << file;
      EXPECT_EQ(md.rule, rule);
      const HybridModel back = make_model(md.model, md.frame);
      EXPECT_TRUE(std::ranges::equal(back.forced_empty(), report.model.forced_empty())) << file;
      std::visit(
          [&](const auto& result) {
            using R = std::decay_t<decltype(result)>;
            using Map = std::conditional_t<std::is_same_v<R, PreciseResult>, std::map<Proposition, double>,
                                           std::map<Proposition, SetValue>>;
            ASSERT_TRUE(std::holds_alternative<Map>(md.masses)) << file;
            EXPECT_EQ(std::get<Map>(md.masses), result.masses.values()) << file;
            EXPECT_EQ(md.forced_empty, result.forced_empty) << file;
            ASSERT_TRUE(md.admissibility.has_value());
            EXPECT_EQ(md.admissibility->admissible, result.admissibility->admissible);
            EXPECT_EQ(md.admissibility->witness, result.admissibility->witness) << file;
          },
          report.result);
    }
  }
}

TEST(MachineFormat, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_machine("{"), parse_error);
  EXPECT_THROW(parse_machine(R"({"frame": ["a"], "rule": "classic", "model": "free", "masses": {}})"), parse_error);
  EXPECT_THROW(parse_machine(R"({"frame": ["a"], "rule": "classic", "model": "free", "kind": "fuzzy", "masses": {}})"),
               parse_error);
}

// ---------------------------------------------------------------------------
// Table output against checked-in goldens.

TEST(TableOutput, MatchesGoldenFiles) {
  struct Case {
    const char* file;
    bool hybrid;
    const char* golden;
  };
  const Case cases[] = {
      {"data/precise_three_atoms.json", false, "tests/golden/precise_three_atoms.txt"},
      {"data/precise_three_atoms.json", true, "tests/golden/precise_three_atoms_hybrid.txt"},
      {"data/interval_three_atoms.json", false, "tests/golden/interval_three_atoms.txt"},
      {"data/interval_three_atoms.json", true, "tests/golden/interval_three_atoms_hybrid.txt"},
      {"data/multi_piece_two_atoms.json", false, "tests/golden/multi_piece_two_atoms.txt"},
      {"data/multi_piece_two_atoms.json", true, "tests/golden/multi_piece_two_atoms_hybrid.txt"},
      {"data/shafer_conflict.json", true, "tests/golden/shafer_conflict.txt"},
  };
  for (const Case& c : cases) {
    auto o = options(c.file);
    if (c.hybrid && std::string(c.file).find("shafer") == std::string::npos) {
      o.rule = Rule::hybrid;
      o.empty = {"t1 n t2"};
    }
    const Outcome r = run(o);
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out, slurp(c.golden)) << c.golden;
  }
}

TEST(TableOutput, IsByteStable) {
  const std::string first = run(options("data/precise_three_atoms.json")).out;
  for (int i = 0; i < 5; ++i) EXPECT_EQ(run(options("data/precise_three_atoms.json")).out, first);
  auto m = options("data/multi_piece_two_atoms.json");
  m.format = OutputFormat::machine;
  EXPECT_EQ(run(m).out, run(m).out);
}
