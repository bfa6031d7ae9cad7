#pragma once

// Fusion problem files (JSON) and rendering of fusion results.
//
// Problem file:
//   {
//     "frame":   ["t1", "t2", "t3"],
//     "model":   "free" | "shafer" | {"empty": ["t1 n t2", ...]},   optional
//     "rule":    "classic" | "hybrid",                              optional
//     "sources": [{"name": "s1", "masses": {"t1": 0.1, "t1 n t2": "[0.2,0.6]"}}, ...],
//     "options": {"check_admissibility": true, "format": "table"}   optional
//   }
// Numbers are precise masses, strings are set literals. If any value is a
// string the whole problem is imprecise and numbers become points.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsmfuse/error.hpp"
#include "dsmfuse/fusion.hpp"
#include "dsmfuse/hyper_power_set.hpp"
#include "dsmfuse/interval_set.hpp"
#include "dsmfuse/mass.hpp"
#include "dsmfuse/model.hpp"

namespace dsmfuse {

enum class Rule { classic, hybrid };
enum class OutputFormat { table, machine };

inline std::string_view to_string(Rule r) { return r == Rule::classic ? "classic" : "hybrid"; }

inline Rule parse_rule(std::string_view s) {
  if (s == "classic") return Rule::classic;
  if (s == "hybrid") return Rule::hybrid;
  throw parse_error("unknown rule '" + std::string(s) + "' (expected classic or hybrid)");
}

inline OutputFormat parse_format(std::string_view s) {
  if (s == "table") return OutputFormat::table;
  if (s == "machine") return OutputFormat::machine;
  throw parse_error("unknown format '" + std::string(s) + "' (expected table or machine)");
}

struct ModelSpec {
  enum class Kind { free, shafer, explicit_empty };
  Kind kind = Kind::free;
  /// Proposition texts forced empty, for Kind::explicit_empty.
  std::vector<std::string> empty;
};

inline HybridModel make_model(const ModelSpec& spec, const Frame& frame) {
  switch (spec.kind) {
    case ModelSpec::Kind::free: return free_model(frame);
    case ModelSpec::Kind::shafer: return shafer_model(frame);
    case ModelSpec::Kind::explicit_empty: break;
  }
  std::vector<Proposition> constraints;
  for (const auto& text : spec.empty) constraints.push_back(parse_proposition(text, frame));
  return build_model(frame, constraints);
}

using SourceList = std::variant<std::vector<PreciseMass>, std::vector<ImpreciseMass>>;

struct ProblemFile {
  Frame frame;
  ModelSpec model;
  std::optional<Rule> rule;
  std::vector<std::string> source_names;
  SourceList sources;
  bool check_admissibility = false;
  std::optional<OutputFormat> format;

  bool imprecise() const { return std::holds_alternative<std::vector<ImpreciseMass>>(sources); }
};

namespace detail {

using json = nlohmann::json;

inline const json& require_field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw parse_error(std::string("missing field '") + key + "'");
  return doc.at(key);
}

inline Frame parse_frame(const json& j) {
  if (!j.is_array()) throw parse_error("'frame' must be an array of atom labels");
  std::vector<std::string> labels;
  for (const auto& l : j) {
    if (!l.is_string()) throw parse_error("atom labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  try {
    return Frame(std::move(labels));
  } catch (const frame_error& e) {
    throw parse_error(e.what());
  }
}

inline ModelSpec parse_model_spec(const json& j) {
  ModelSpec spec;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "free") return spec;
    if (s == "shafer") {
      spec.kind = ModelSpec::Kind::shafer;
      return spec;
    }
    throw parse_error("unknown model '" + s + "' (expected free, shafer or {\"empty\": [...]})");
  }
  if (j.is_object() && j.contains("empty") && j.at("empty").is_array()) {
    spec.kind = ModelSpec::Kind::explicit_empty;
    for (const auto& e : j.at("empty")) {
      if (!e.is_string()) throw parse_error("model constraints must be proposition strings");
      spec.empty.push_back(e.get<std::string>());
    }
    return spec;
  }
  throw parse_error("'model' must be \"free\", \"shafer\" or {\"empty\": [...]}");
}

inline SetValue parse_mass_value(const json& v) {
  if (v.is_number()) return SetValue::point(v.get<double>());
  if (v.is_string()) return parse_set(v.get<std::string>());
  throw parse_error("mass values must be numbers or set-literal strings");
}

template <class Value>
BasicMass<Value> parse_masses(const json& masses, const Frame& frame, const std::string& name) {
  if (!masses.is_object()) throw parse_error("source '" + name + "': 'masses' must be an object");
  BasicMass<Value> m(frame);
  for (const auto& [key, v] : masses.items()) {
    const Proposition p = parse_proposition(key, frame);
    if (m.has(p)) throw parse_error("source '" + name + "': proposition '" + key + "' given twice");
    try {
      if constexpr (std::is_same_v<Value, double>) {
        m.set(p, v.template get<double>());
      } else {
        m.set(p, parse_mass_value(v));
      }
    } catch (const std::invalid_argument& e) {
      throw parse_error("source '" + name + "', proposition '" + key + "': " + e.what());
    }
  }
  return m;
}

}  // namespace detail

inline ProblemFile parse_problem(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw parse_error("problem file must be a JSON object");

  ProblemFile pf{detail::parse_frame(detail::require_field(doc, "frame")), {}, {}, {}, {}, false, {}};
  if (doc.contains("model")) pf.model = detail::parse_model_spec(doc.at("model"));
  if (doc.contains("rule")) {
    if (!doc.at("rule").is_string()) throw parse_error("'rule' must be a string");
    pf.rule = parse_rule(doc.at("rule").get<std::string>());
  }
  if (doc.contains("options")) {
    const json& opts = doc.at("options");
    if (!opts.is_object()) throw parse_error("'options' must be an object");
    if (opts.contains("check_admissibility")) {
      if (!opts.at("check_admissibility").is_boolean()) throw parse_error("'check_admissibility' must be a boolean");
      pf.check_admissibility = opts.at("check_admissibility").get<bool>();
    }
    if (opts.contains("format")) {
      if (!opts.at("format").is_string()) throw parse_error("'format' must be a string");
      pf.format = parse_format(opts.at("format").get<std::string>());
    }
  }

  const json& sources = detail::require_field(doc, "sources");
  if (!sources.is_array()) throw parse_error("'sources' must be an array");
  if (sources.size() < 2) throw parse_error("at least two sources are required");

  bool any_set = false;
  for (const auto& s : sources) {
    const json& masses = detail::require_field(s, "masses");
    if (!masses.is_object()) throw parse_error("'masses' must be an object");
    for (const auto& [key, v] : masses.items()) {
      if (v.is_string()) any_set = true;
      else if (!v.is_number()) throw parse_error("mass for '" + key + "' must be a number or set literal");
    }
  }

  std::vector<PreciseMass> precise;
  std::vector<ImpreciseMass> imprecise;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const json& s = sources[i];
    std::string name = "source" + std::to_string(i + 1);
    if (s.contains("name")) {
      if (!s.at("name").is_string()) throw parse_error("source names must be strings");
      name = s.at("name").get<std::string>();
    }
    pf.source_names.push_back(name);
    if (any_set) {
      imprecise.push_back(detail::parse_masses<SetValue>(s.at("masses"), pf.frame, name));
    } else {
      precise.push_back(detail::parse_masses<double>(s.at("masses"), pf.frame, name));
    }
  }
  if (any_set) {
    pf.sources = std::move(imprecise);
  } else {
    pf.sources = std::move(precise);
  }
  return pf;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ProblemFile load_problem(const std::string& path) { return parse_problem(read_text_file(path)); }

// ---------------------------------------------------------------------------
// Rendering.

/// Everything a fusion run produced, ready to be emitted.
struct FusionReport {
  Rule rule = Rule::classic;
  HybridModel model;
  std::variant<PreciseResult, ImpreciseResult> result;
};

namespace detail {

inline std::size_t display_width(std::string_view s) {
  std::size_t w = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++w;
  }
  return w;
}

inline std::string pad(std::string s, std::size_t width) {
  const std::size_t w = display_width(s);
  if (w < width) s.append(width - w, ' ');
  return s;
}

inline std::string model_description(const HybridModel& model, Notation notation) {
  if (model.is_free()) return "free";
  std::string out;
  for (const Proposition& c : model.forced_empty()) {
    if (!out.empty()) out += ", ";
    out += render(c, model.frame(), notation);
  }
  return (notation == Notation::ascii ? "empty: " : "≡∅: ") + out;
}

inline std::string table_value(double v) { return format_number_short(v); }
inline std::string table_value(const SetValue& v) { return format_set(v, {true, true}); }

}  // namespace detail

inline std::string emit_table(const FusionReport& report, Notation notation = Notation::ascii) {
  std::ostringstream os;
  const Frame& frame = report.model.frame();
  std::visit(
      [&](const auto& result) {
        const bool set_valued = std::is_same_v<std::decay_t<decltype(result)>, ImpreciseResult>;
        os << "rule:  " << to_string(report.rule) << '\n';
        os << "model: " << detail::model_description(report.model, notation) << '\n';
        os << "masses: " << (set_valued ? "imprecise" : "precise") << "\n\n";

        const std::string empty_mark = notation == Notation::ascii ? " (=empty)" : " (≡∅)";
        std::vector<std::pair<std::string, std::string>> rows;
        for (const auto& [p, v] : result.masses.values()) {
          std::string name = render(p, frame, notation);
          if (result.is_forced_empty(p)) name += empty_mark;
          rows.emplace_back(std::move(name), detail::table_value(v));
        }
        std::size_t width = detail::display_width("proposition");
        for (const auto& r : rows) width = std::max(width, detail::display_width(r.first));
        os << detail::pad("proposition", width + 2) << "mass\n";
        for (const auto& [name, value] : rows) os << detail::pad(name, width + 2) << value << '\n';
        os << '\n';

        const CompletenessReport& c = result.completeness;
        if (set_valued) {
          os << "completeness: lower sum " << format_number_short(c.lower_sum) << " (" << to_string(c.lower)
             << "), upper sum " << format_number_short(c.upper_sum) << " (" << to_string(c.upper) << ")\n";
        } else {
          os << "completeness: sum " << format_number_short(c.lower_sum) << " (" << to_string(c.lower) << ")\n";
        }
        for (const ClampEvent& e : result.clamped) {
          os << "clamped: " << render(e.proposition, frame, notation) << "  "
             << format_set(e.before, {true, true}) << " -> " << format_set(e.after, {true, true}) << '\n';
        }
        if (result.admissibility) {
          const Admissibility& a = *result.admissibility;
          os << "admissibility: " << (a.admissible ? "admissible" : "not admissible") << '\n';
          if (!a.witness.empty()) {
            double sum = 0;
            os << "witness:";
            for (const auto& [p, x] : a.witness) {
              os << "  " << render(p, frame, notation) << '=' << format_number_short(x);
              sum += x;
            }
            os << "  (sum " << format_number_short(sum) << ")\n";
          }
        }
      },
      report.result);
  return os.str();
}

/// JSON document that mirrors the problem-file grammar; parse_machine()
/// reads it back without loss.
inline std::string emit_machine(const FusionReport& report) {
  using ojson = nlohmann::ordered_json;
  const Frame& frame = report.model.frame();
  ojson doc;
  doc["frame"] = frame.labels();
  doc["rule"] = std::string(to_string(report.rule));
  if (report.model.is_free()) {
    doc["model"] = "free";
  } else {
    ojson empty = ojson::array();
    for (const Proposition& c : report.model.forced_empty()) empty.push_back(render(c, frame));
    doc["model"] = ojson{{"empty", empty}};
  }
  std::visit(
      [&](const auto& result) {
        constexpr bool set_valued = std::is_same_v<std::decay_t<decltype(result)>, ImpreciseResult>;
        doc["kind"] = set_valued ? "imprecise" : "precise";
        ojson masses = ojson::object();
        for (const auto& [p, v] : result.masses.values()) {
          if constexpr (set_valued) {
            masses[render(p, frame)] = format_set(v);
          } else {
            masses[render(p, frame)] = v;
          }
        }
        doc["masses"] = masses;
        ojson empty_rows = ojson::array();
        for (const Proposition& p : result.forced_empty) empty_rows.push_back(render(p, frame));
        doc["forced_empty"] = empty_rows;
        doc["completeness"] = {{"lower_sum", result.completeness.lower_sum},
                               {"upper_sum", result.completeness.upper_sum},
                               {"lower", std::string(to_string(result.completeness.lower))},
                               {"upper", std::string(to_string(result.completeness.upper))}};
        ojson clamped = ojson::array();
        for (const ClampEvent& e : result.clamped) {
          clamped.push_back({{"proposition", render(e.proposition, frame)},
                             {"before", format_set(e.before)},
                             {"after", format_set(e.after)}});
        }
        doc["clamped"] = clamped;
        if (result.admissibility) {
          ojson witness = ojson::object();
          for (const auto& [p, x] : result.admissibility->witness) witness[render(p, frame)] = x;
          doc["admissibility"] = {{"admissible", result.admissibility->admissible}, {"witness", witness}};
        }
      },
      report.result);
  return doc.dump(2) + "\n";
}

/// A fused assignment read back from machine output.
struct MachineDocument {
  Frame frame;
  Rule rule = Rule::classic;
  ModelSpec model;
  std::variant<std::map<Proposition, double>, std::map<Proposition, SetValue>> masses;
  std::vector<Proposition> forced_empty;
  std::optional<Admissibility> admissibility;
};

inline MachineDocument parse_machine(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  MachineDocument md{detail::parse_frame(detail::require_field(doc, "frame")), Rule::classic, {}, {}, {}, {}};
  md.rule = parse_rule(detail::require_field(doc, "rule").get<std::string>());
  md.model = detail::parse_model_spec(detail::require_field(doc, "model"));
  const std::string kind = detail::require_field(doc, "kind").get<std::string>();
  const json& masses = detail::require_field(doc, "masses");
  if (kind == "precise") {
    std::map<Proposition, double> m;
    for (const auto& [key, v] : masses.items()) m.emplace(parse_proposition(key, md.frame), v.get<double>());
    md.masses = std::move(m);
  } else if (kind == "imprecise") {
    std::map<Proposition, SetValue> m;
    for (const auto& [key, v] : masses.items()) {
      m.emplace(parse_proposition(key, md.frame), parse_set(v.get<std::string>()));
    }
    md.masses = std::move(m);
  } else {
    throw parse_error("unknown kind '" + kind + "'");
  }
  if (doc.contains("forced_empty")) {
    for (const auto& e : doc.at("forced_empty")) md.forced_empty.push_back(parse_proposition(e.get<std::string>(), md.frame));
  }
  if (doc.contains("admissibility")) {
    Admissibility a;
    a.admissible = doc.at("admissibility").at("admissible").get<bool>();
    for (const auto& [key, v] : doc.at("admissibility").at("witness").items()) {
      a.witness.emplace(parse_proposition(key, md.frame), v.get<double>());
    }
    md.admissibility = std::move(a);
  }
  return md;
}

}  // namespace dsmfuse
