#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "weilrad/error.hpp"
#include "weilrad/experiments.hpp"
#include "weilrad/invariants.hpp"
#include "weilrad/report.hpp"

namespace weilrad::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2, kHypothesis = 3, kBudget = 4 };

enum class Format { Json, Tsv, Pretty };

struct FibreArg {
  std::string text;
  std::optional<bool> phi_injective;
};

struct Options {
  std::string command;
  std::vector<FibreArg> fibres;
  Format format = Format::Json;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t samples = kDefaultSamples;
  unsigned workers = 1;
  std::optional<std::string> field;
  std::vector<std::uint32_t> fields;
  std::optional<std::string> grid;
  std::string witness_type = "class";
  bool exhaustive_only = false;
  bool timings = false;
};

inline const char* kUsageText =
    "usage: weilrad <command> [options]\n"
    "commands:\n"
    "  predict      class N of the geometric unipotent radical (one or more --fibre)\n"
    "  bounds       ideal upper bound, witness lower bound and exponent bounds per fibre\n"
    "  witness      explicit matrices (--type class|superdiagonal|borel)\n"
    "  brute-class  lower central series of the finite group of points\n"
    "  exponent     largest element order (exhaustive within budget, else sampled)\n"
    "  borel        Borel2 exponent against the primitive/imprimitive dichotomy\n"
    "  report       run a grid file (--grid, default: shipped grid)\n"
    "options:\n"
    "  --fibre KIND@p=<p>;e=<e1,...>   KIND in SL2, SL2^r*T<s>, GL<n>, PGL2, T<r>, Borel2, Borel2m\n"
    "  --phi-injective | --phi-not-injective   hypothesis flag for the nearest preceding unusual fibre\n"
    "  --format json|tsv|pretty   --seed N   --budget N   --samples N   --workers N\n"
    "  --field F<q>   --fields d1,d2,...   --grid PATH   --exhaustive   --timings\n"
    "environment: WEILRAD_BUDGET overrides the default budget (2^20)\n";

inline std::uint64_t parse_u64(std::string_view text, const char* what) { return detail::parse_uint(text, what); }

inline std::vector<std::uint32_t> parse_degree_list(std::string_view text) {
  std::vector<std::uint32_t> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      std::uint64_t d = parse_u64(detail::trim(text.substr(start, i - start)), "field degree");
      if (d < 1 || d > 16) throw UsageError("field degree must lie in [1, 16]");
      out.push_back(static_cast<std::uint32_t>(d));
      start = i + 1;
    }
  }
  return out;
}

inline bool parses_as_unusual(const std::string& text) {
  try {
    return is_unusual(FibreSpec::parse(text));
  } catch (const UsageError&) {
    return false;
  }
}

inline Options parse_args(const std::vector<std::string>& args, const char* env_budget) {
  Options o;
  if (args.empty()) throw UsageError("missing command");
  o.command = args[0];
  static const std::vector<std::string> commands{"predict", "bounds", "witness", "brute-class",
                                                 "exponent", "borel", "report"};
  if (std::find(commands.begin(), commands.end(), o.command) == commands.end()) {
    throw UsageError("unknown command '" + o.command + "'");
  }
  if (env_budget && *env_budget) o.budget = parse_u64(env_budget, "WEILRAD_BUDGET");
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string flag = args[i];
    std::optional<std::string> inline_value;
    if (auto eq = flag.find('='); flag.rfind("--", 0) == 0 && eq != std::string::npos) {
      inline_value = flag.substr(eq + 1);
      flag = flag.substr(0, eq);
    }
    auto value = [&]() -> std::string {
      if (inline_value) return *inline_value;
      if (i + 1 >= args.size()) throw UsageError("option " + flag + " needs a value");
      return args[++i];
    };
    if (flag == "--fibre" || flag == "--group") {
      o.fibres.push_back({value(), std::nullopt});
    } else if (flag == "--phi-injective" || flag == "--phi-not-injective") {
      auto it = std::find_if(o.fibres.rbegin(), o.fibres.rend(),
                             [](const FibreArg& f) { return parses_as_unusual(f.text); });
      if (it == o.fibres.rend()) throw UsageError(flag + " must follow an unusual fibre (SL2^r*T<s> with p=2)");
      it->phi_injective = flag == "--phi-injective";
    } else if (flag == "--format") {
      std::string f = value();
      if (f == "json") o.format = Format::Json;
      else if (f == "tsv") o.format = Format::Tsv;
      else if (f == "pretty") o.format = Format::Pretty;
      else throw UsageError("unknown format '" + f + "'");
    } else if (flag == "--seed") {
      o.seed = parse_u64(value(), "--seed");
    } else if (flag == "--budget") {
      o.budget = parse_u64(value(), "--budget");
    } else if (flag == "--samples") {
      o.samples = parse_u64(value(), "--samples");
      if (o.samples == 0) throw UsageError("--samples must be positive");
    } else if (flag == "--workers") {
      std::uint64_t w = parse_u64(value(), "--workers");
      if (w < 1 || w > 256) throw UsageError("--workers must lie in [1, 256]");
      o.workers = static_cast<unsigned>(w);
    } else if (flag == "--field") {
      o.field = value();
    } else if (flag == "--fields") {
      o.fields = parse_degree_list(value());
    } else if (flag == "--grid") {
      o.grid = value();
    } else if (flag == "--type") {
      o.witness_type = value();
      if (o.witness_type != "class" && o.witness_type != "superdiagonal" && o.witness_type != "borel") {
        throw UsageError("unknown witness type '" + o.witness_type + "'");
      }
    } else if (flag == "--exhaustive") {
      o.exhaustive_only = true;
    } else if (flag == "--timings") {
      o.timings = true;
    } else {
      throw UsageError("unknown option '" + args[i] + "'");
    }
  }
  if (o.command != "report" && o.fibres.empty()) throw UsageError(o.command + " needs at least one --fibre");
  if (o.command == "report" && !o.fibres.empty()) throw UsageError("report takes its configurations from --grid");
  return o;
}

// ---------------------------------------------------------------------------
// Output

inline std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

inline void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    if (j.empty()) out.emplace_back(path, "{}");
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    if (j.empty()) out.emplace_back(path, "[]");
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), out);
  } else {
    out.emplace_back(path, scalar_text(j));
  }
}

inline void pretty(const Json& j, int indent, std::ostream& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  auto simple = [](const Json& v) {
    if (!v.is_array()) return !v.is_object();
    return std::all_of(v.begin(), v.end(), [](const Json& x) { return !x.is_structured(); });
  };
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (simple(it.value())) {
        out << pad << it.key() << ": " << (it.value().is_array() ? it.value().dump() : scalar_text(it.value())) << "\n";
      } else {
        out << pad << it.key() << ":\n";
        pretty(it.value(), indent + 1, out);
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (simple(j[i])) {
        out << pad << "- " << (j[i].is_array() ? j[i].dump() : scalar_text(j[i])) << "\n";
      } else {
        out << pad << "- [" << i << "]\n";
        pretty(j[i], indent + 1, out);
      }
    }
  } else {
    out << pad << scalar_text(j) << "\n";
  }
}

/// Documents print indented; experiment records print one per line.
inline void emit(const Json& j, Format format, bool line, std::ostream& out) {
  switch (format) {
    case Format::Json: out << (line ? j.dump() : j.dump(2)) << "\n"; break;
    case Format::Tsv: {
      std::vector<std::pair<std::string, std::string>> rows;
      flatten(j, "", rows);
      for (const auto& [k, v] : rows) out << k << "\t" << v << "\n";
      break;
    }
    case Format::Pretty: pretty(j, 0, out); break;
  }
}

// ---------------------------------------------------------------------------
// Commands

inline FibreSpec fibre_from(const FibreArg& a) {
  FibreSpec f = FibreSpec::parse(a.text);
  if (a.phi_injective) f.phi_injective_on_center = *a.phi_injective;
  return f;
}

/// Brute-force group for a target; SL2^r*T<s> is only supported as plain SL2.
inline std::pair<GroupTag, ExtensionSpec> group_target(const std::string& text) {
  auto at = text.find('@');
  if (at != std::string::npos) {
    const std::string_view kind = detail::trim(std::string_view(text).substr(0, at));
    if (kind == "Borel2" || kind == "Borel2m") {
      return {kind == "Borel2" ? GroupTag::borel2() : GroupTag::borel2m(),
              ExtensionSpec::parse(std::string_view(text).substr(at + 1))};
    }
  }
  FibreSpec f = FibreSpec::parse(text);
  switch (f.kind) {
    case FibreKind::Torus: return {GroupTag::torus(f.torus_rank), f.ext};
    case FibreKind::GL: return {GroupTag::gl(f.gl_size), f.ext};
    case FibreKind::PGL2: return {GroupTag::pgl2(), f.ext};
    case FibreKind::SL2PowerTimesTorus:
      if (f.sl2_power == 1 && f.torus_rank == 0) return {GroupTag::sl2(), f.ext};
      throw UsageError("brute force supports SL2 but not " + f.kind_name());
  }
  throw UsageError("unknown group");
}

inline std::uint32_t field_degree_for(const std::optional<std::string>& field, std::uint32_t p) {
  if (!field) return 1;
  CoefficientField F = CoefficientField::parse(*field);
  if (F.characteristic() != p) {
    throw UsageError("coefficient field " + F.to_string() + " does not have characteristic " + std::to_string(p));
  }
  return F.degree();
}

inline ExperimentConfig experiment_config(const Options& o, const std::string& target) {
  auto [tag, ext] = group_target(target);
  ExperimentConfig cfg;
  cfg.group = tag;
  cfg.ext = ext;
  cfg.field_degree = field_degree_for(o.field, ext.p());
  cfg.budget = o.budget;
  cfg.seed = o.seed;
  cfg.samples = o.samples;
  cfg.workers = o.workers;
  cfg.field_degrees = o.fields;
  return cfg;
}

inline Json config_json(const ExperimentConfig& cfg) {
  Json j{{"group", cfg.group.to_string()}, {"ext", cfg.ext.to_string()}, {"field", cfg.field_name()},
         {"budget", cfg.budget},           {"seed", cfg.seed},            {"samples", cfg.samples}};
  if (!cfg.field_degrees.empty()) {
    Json fields = Json::array();
    for (auto d : cfg.field_degrees) fields.push_back(cfg.field_name(d));
    j["fields"] = fields;
  }
  return j;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline Json experiment_line(const ExperimentConfig& cfg, const Json& cls, const Json& exponent, const Json& stabilized,
                            const Json& witness) {
  return Json{{"config", config_json(cfg)},
              {"class", cls},
              {"exponent", exponent},
              {"stabilized", stabilized},
              {"witness", witness}};
}

inline int cmd_predict(const Options& o, std::ostream& out) {
  std::vector<FibreSpec> fibres;
  for (const auto& a : o.fibres) fibres.push_back(fibre_from(a));
  Stopwatch sw;
  Json j = to_json(predict_class(fibres));
  if (o.timings) j["wall_ms"] = sw.ms();
  emit(j, o.format, false, out);
  return kOk;
}

inline int cmd_bounds(const Options& o, std::ostream& out) {
  Json rows = Json::array();
  for (const auto& a : o.fibres) {
    FibreSpec f = fibre_from(a);
    FibreReport r = certify_fibre(f);
    Json j{{"fibre", f.to_string()}};
    j.update(fibre_bounds_json(r));
    rows.push_back(std::move(j));
  }
  emit(Json{{"fibres", rows}}, o.format, false, out);
  return kOk;
}

inline int cmd_witness(const Options& o, std::ostream& out) {
  Json rows = Json::array();
  for (const auto& a : o.fibres) {
    if (o.witness_type == "class") {
      FibreSpec f = fibre_from(a);
      require_hypothesis(f);
      TruncatedAlgebra A(f.ext);
      rows.push_back(Json{{"fibre", f.to_string()}, {"witness", to_json(fibre_witness(f, A))}});
      continue;
    }
    auto at = a.text.find('@');
    ExtensionSpec ext = ExtensionSpec::parse(at == std::string::npos ? a.text : a.text.substr(at + 1));
    TruncatedAlgebra A(ext);
    const std::uint32_t p = ext.p();
    if (o.witness_type == "superdiagonal") {
      const std::size_t n = A.nilpotency_index();
      AlgebraMatrix x = gln_superdiagonal_witness(A, n);
      UnipotentElement g = UnipotentElement::make(GroupTag::gl(n), AlgebraMatrix::identity(A, n) + x);
      std::uint32_t s = p_power_order(g);
      std::uint64_t order = 1;
      for (std::uint32_t k = 0; k < s; ++k) order *= p;
      rows.push_back(Json{{"ext", ext.to_string()},
                          {"n", n},
                          {"x", to_json(x)},
                          {"top_power_entry", x.pow(n - 1).at(0, n - 1).to_string()},
                          {"p_power_order", s},
                          {"order", order},
                          {"lemma41", lemma41_exponent_bound(ext)}});
    } else {
      AlgebraMatrix w = imprimitive_borel_witness(A);
      UnipotentElement g = UnipotentElement::make(GroupTag::borel2m(), w);
      const std::uint64_t pe = detail::checked_power(p, ext.extension_exponent());
      rows.push_back(Json{{"ext", ext.to_string()},
                          {"witness", to_json(w)},
                          {"power_p_e", to_json(g.pow(pe).matrix())},
                          {"p_power_order", p_power_order(g)},
                          {"e", ext.extension_exponent()}});
    }
  }
  emit(Json{{"witnesses", rows}}, o.format, false, out);
  return kOk;
}

inline int cmd_brute_class(const Options& o, std::ostream& out) {
  for (const auto& a : o.fibres) {
    ExperimentConfig cfg = experiment_config(o, a.text);
    Stopwatch sw;
    Json line;
    if (cfg.field_degrees.size() >= 2) {
      StabilizationResult st = stabilization_details(cfg);
      std::optional<SeriesResult> first;
      for (const auto& l : st.levels) {
        if (l.computed) {
          first = brute_class(make_dense_group(cfg, l.degree), cfg.budget);
          break;
        }
      }
      Json cls = first ? to_json(*first) : Json(nullptr);
      Json wit = first && !first->level_witnesses.empty() ? Json(first->level_witnesses.back()) : Json(nullptr);
      line = experiment_line(cfg, cls, nullptr, to_json(st), wit);
    } else {
      if (cfg.field_degrees.size() == 1) cfg.field_degree = cfg.field_degrees[0];
      SeriesResult s = brute_class(cfg);
      Json wit = s.level_witnesses.empty() ? Json(nullptr) : Json(s.level_witnesses.back());
      line = experiment_line(cfg, to_json(s), nullptr, nullptr, wit);
    }
    if (o.timings) line["wall_ms"] = sw.ms();
    emit(line, o.format, true, out);
  }
  return kOk;
}

inline int cmd_exponent(const Options& o, std::ostream& out) {
  for (const auto& a : o.fibres) {
    ExperimentConfig cfg = experiment_config(o, a.text);
    Stopwatch sw;
    ExponentResult e = brute_exponent(cfg, !o.exhaustive_only);
    Json line = experiment_line(cfg, nullptr, to_json(e), nullptr, e.witness);
    if (o.timings) line["wall_ms"] = sw.ms();
    emit(line, o.format, true, out);
  }
  return kOk;
}

inline int cmd_borel(const Options& o, std::ostream& out) {
  for (const auto& a : o.fibres) {
    auto at = a.text.find('@');
    std::string target = at == std::string::npos ? "Borel2@" + a.text : a.text;
    ExperimentConfig cfg = experiment_config(o, target);
    if (cfg.group.kind != GroupKind::Borel2) throw UsageError("borel needs a Borel2@<ext> target");
    Stopwatch sw;
    BorelRecord r = borel_exponent_experiment(cfg);
    Json line = experiment_line(cfg, nullptr, to_json(r), nullptr, r.witness ? Json(*r.witness) : Json(r.brute.witness));
    if (o.timings) line["wall_ms"] = sw.ms();
    emit(line, o.format, true, out);
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// Grid report

struct GridRow {
  std::string fibre;
  std::vector<std::uint32_t> fields{1};
  bool phi_injective = true;
};

inline std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline std::vector<GridRow> parse_grid(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    auto [line, col] = line_and_column(text, e.byte);
    throw UsageError("malformed grid at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     e.what());
  }
  if (!doc.is_array()) throw UsageError("grid must be a JSON list of configurations");
  std::vector<GridRow> rows;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const Json& r = doc[i];
    auto fail = [&](const std::string& why) { throw UsageError("grid row " + std::to_string(i) + ": " + why); };
    if (!r.is_object()) fail("expected an object");
    GridRow row;
    for (auto it = r.begin(); it != r.end(); ++it) {
      const std::string& key = it.key();
      if (key == "fibre") {
        if (!it.value().is_string()) fail("\"fibre\" must be a string");
        row.fibre = it.value().get<std::string>();
      } else if (key == "fields") {
        if (!it.value().is_array() || it.value().empty()) fail("\"fields\" must be a non-empty list of degrees");
        row.fields.clear();
        for (const auto& d : it.value()) {
          if (!d.is_number_unsigned() || d.get<std::uint64_t>() < 1 || d.get<std::uint64_t>() > 16) {
            fail("field degrees must be integers in [1, 16]");
          }
          row.fields.push_back(d.get<std::uint32_t>());
        }
      } else if (key == "phi_injective") {
        if (!it.value().is_boolean()) fail("\"phi_injective\" must be a boolean");
        row.phi_injective = it.value().get<bool>();
      } else {
        fail("unknown key \"" + key + "\"");
      }
    }
    if (row.fibre.empty()) fail("missing \"fibre\"");
    rows.push_back(std::move(row));
  }
  return rows;
}

inline bool is_borel_target(const std::string& text) {
  auto at = text.find('@');
  if (at == std::string::npos) return false;
  const std::string_view kind = detail::trim(std::string_view(text).substr(0, at));
  return kind == "Borel2" || kind == "Borel2m";
}

inline Json run_grid_row(const GridRow& row, std::size_t index, const Options& o) {
  Stopwatch sw;
  Json config{{"fibre", row.fibre}, {"fields", row.fields}, {"phi_injective", row.phi_injective}};
  Json j{{"row", index}, {"config", config}, {"status", "OK"}};

  ExperimentConfig cfg = experiment_config(o, row.fibre);
  cfg.field_degree = row.fields.front();
  cfg.field_degrees = row.fields;

  std::optional<std::uint64_t> ell;
  std::optional<std::uint64_t> lemma44;
  const bool borel = is_borel_target(row.fibre);
  if (!borel) {
    FibreSpec f = FibreSpec::parse(row.fibre);
    f.phi_injective_on_center = row.phi_injective;
    try {
      FibreReport r = certify_fibre(f);
      Json pred{{"kind", f.kind_name()},
                {"ext", f.ext.to_string()},
                {"commutative", r.commutative},
                {"unusual", r.unusual}};
      pred.update(fibre_bounds_json(r));
      j["prediction"] = pred;
      ell = r.ell;
    } catch (const HypothesisError& e) {
      j["status"] = "HYPOTHESIS-UNMET";
      j["prediction"] = nullptr;
      j["reason"] = e.what();
    }
    if (auto shape = gl_shape(f)) lemma44 = lemma44_exponent_bound(f.ext, *shape);
  } else {
    j["prediction"] = nullptr;
  }

  // Oracles over each field degree; Borel rows only run the exponent experiment.
  Json oracle = Json::object();
  if (!borel) {
    std::vector<StabilizationLevel> levels;
    Json classes = Json::array();
    for (auto d : row.fields) {
      StabilizationLevel l = stabilization_level(cfg, d);
      Json c{{"field", l.field}, {"computed", l.computed}};
      if (l.computed) {
        c["class"] = l.nilpotency_class;
        c["exponent"] = *l.exponent;
        if (ell) c["matches_prediction"] = l.nilpotency_class == *ell;
      } else {
        c["skipped"] = l.skipped_reason;
      }
      classes.push_back(std::move(c));
      levels.push_back(std::move(l));
    }
    oracle["class"] = classes;
    oracle["stabilization"] = row.fields.size() >= 2 ? to_string(classify_levels(levels)) : "SINGLE-FIELD";
  }
  ExponentResult e = brute_exponent(cfg);
  oracle["exponent"] = to_json(e);
  j["oracle"] = oracle;

  // The p^s >= n bound concerns reduction kernels; for Borel2 that is the Borel2m part.
  std::optional<BorelRecord> borel_record;
  if (cfg.group.kind == GroupKind::Borel2) borel_record = borel_exponent_experiment(cfg);
  const ExponentResult& scoped = borel_record ? borel_record->kernel : e;
  const std::uint32_t l41 = lemma41_exponent_bound(cfg.ext);
  Json bounds{{"observed_group", borel_record ? "Borel2m" : cfg.group.to_string()},
              {"observed_exponent", scoped.exponent},
              {"lemma41", l41},
              {"lemma41_ok", scoped.exponent <= l41}};
  if (lemma44) {
    bounds["lemma44"] = *lemma44;
    bounds["lemma44_ok"] = e.exponent <= *lemma44;
  } else {
    bounds["lemma44"] = nullptr;
    bounds["lemma44_ok"] = nullptr;
  }
  j["bounds"] = bounds;
  if (borel_record) j["borel"] = to_json(*borel_record);
  if (o.timings) j["wall_ms"] = sw.ms();
  return j;
}

inline Json run_grid(const std::vector<GridRow>& rows, const Options& o) {
  Json out = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back(run_grid_row(rows[i], i, o));
  std::size_t unmet = 0, mismatches = 0, violations = 0;
  for (const auto& r : out) {
    if (r["status"] == "HYPOTHESIS-UNMET") ++unmet;
    if (r["oracle"].contains("class")) {
      for (const auto& c : r["oracle"]["class"]) {
        if (c.contains("matches_prediction") && !c["matches_prediction"].get<bool>()) ++mismatches;
      }
    }
    if (!r["bounds"]["lemma41_ok"].get<bool>()) ++violations;
    if (r["bounds"]["lemma44_ok"].is_boolean() && !r["bounds"]["lemma44_ok"].get<bool>()) ++violations;
  }
  return Json{{"seed", o.seed},
              {"budget", o.budget},
              {"samples", o.samples},
              {"rows", out},
              {"summary",
               {{"rows", out.size()},
                {"hypothesis_unmet", unmet},
                {"class_mismatches", mismatches},
                {"bound_violations", violations}}}};
}

#ifndef WEILRAD_DEFAULT_GRID
#define WEILRAD_DEFAULT_GRID "data/default_grid.json"
#endif

inline int cmd_report(const Options& o, std::ostream& out) {
  const std::string path = o.grid.value_or(WEILRAD_DEFAULT_GRID);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read grid file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json doc = run_grid(parse_grid(buf.str()), o);
  emit(doc, o.format, false, out);
  return kOk;
}

/// Runs one command. Only the report goes to `out`; diagnostics go to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const char* env_budget = std::getenv("WEILRAD_BUDGET")) {
  try {
    if (!args.empty() && (args[0] == "--help" || args[0] == "-h" || args[0] == "help")) {
      out << kUsageText;
      return kOk;
    }
    Options o = parse_args(args, env_budget);
    if (o.command == "predict") return cmd_predict(o, out);
    if (o.command == "bounds") return cmd_bounds(o, out);
    if (o.command == "witness") return cmd_witness(o, out);
    if (o.command == "brute-class") return cmd_brute_class(o, out);
    if (o.command == "exponent") return cmd_exponent(o, out);
    if (o.command == "borel") return cmd_borel(o, out);
    return cmd_report(o, out);
  } catch (const HypothesisError& e) {
    err << "weilrad: " << e.what() << "\n";
    return kHypothesis;
  } catch (const BudgetExceeded& e) {
    err << "weilrad: " << e.what() << "\n";
    return kBudget;
  } catch (const InvariantViolation& e) {
    err << "weilrad: internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    err << "weilrad: " << e.what() << "\n" << kUsageText;
    return kUsage;
  } catch (const std::exception& e) {
    err << "weilrad: internal error: " << e.what() << "\n";
    return kInternal;
  }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace weilrad::cli
