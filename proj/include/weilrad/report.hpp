#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "weilrad/experiments.hpp"
#include "weilrad/invariants.hpp"

namespace weilrad {

using Json = nlohmann::ordered_json;

inline Json to_json(const AlgebraMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m.at(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return Json{{"n", m.size()}, {"entries", std::move(rows)}};
}

inline Json to_json(const Witness& w) {
  Json gens = Json::array();
  for (std::size_t i = 0; i < w.generators.size(); ++i) {
    gens.push_back(Json{{"name", w.names[i]}, {"matrix", to_json(w.generators[i])}});
  }
  Json j{{"construction", w.construction}, {"group", w.group.to_string()}, {"generators", std::move(gens)}};
  if (w.intermediate) j["w"] = to_json(*w.intermediate);
  j["commutator"] = to_json(w.computed);
  j["closed_form_agrees"] = w.agrees();
  j["nontrivial"] = w.nontrivial();
  j["certified_lower_bound"] = w.valid() ? w.certified_length : 0;
  return j;
}

inline Json to_json(const CoxeterQuestionData& d) {
  return Json{{"group", d.group},        {"ext", d.spec.to_string()},     {"e", d.e},
              {"r_q", d.r_q},            {"coxeter_number", d.coxeter_number}, {"levi_s", d.levi_s},
              {"coxeter_term", d.coxeter_term}, {"predicted_exponent", d.predicted},
              {"status", CoxeterQuestionData::status}};
}

inline Json fibre_bounds_json(const FibreReport& r) {
  Json j{{"ell", r.ell},
         {"upper", r.upper_bound},
         {"upper_source", r.upper_source},
         {"witness_lower", r.witness_lower},
         {"proved", r.proved()},
         {"lemma41", r.lemma41}};
  j["lemma44"] = r.lemma44 ? Json(*r.lemma44) : Json(nullptr);
  return j;
}

inline std::optional<GroupTag> coxeter_group(const FibreSpec& f) {
  if (f.kind == FibreKind::GL && f.gl_size == 2) return GroupTag::gl(2);
  if (f.kind == FibreKind::SL2PowerTimesTorus && f.sl2_power == 1 && f.torus_rank == 0) return GroupTag::sl2();
  return std::nullopt;
}

inline Json to_json(const InvariantReport& rep) {
  Json fibres = Json::array(), witness = Json::object(), bounds = Json::object(), conj = Json::object();
  for (const auto& f : rep.fibres) {
    const std::string key = f.fibre.to_string();
    fibres.push_back(Json{{"kind", f.fibre.kind_name()},
                          {"ext", f.fibre.ext.to_string()},
                          {"ell", f.ell},
                          {"unusual", f.unusual},
                          {"commutative", f.commutative},
                          {"phi_injective", f.fibre.phi_injective_on_center}});
    if (f.witness) witness[key] = to_json(*f.witness);
    bounds[key] = fibre_bounds_json(f);
    if (auto g = coxeter_group(f.fibre)) conj[key] = to_json(coxeter_question_data(*g, f.fibre.ext));
  }
  return Json{{"fibres", std::move(fibres)}, {"N", rep.N},          {"proved", rep.proved()},
              {"witness", std::move(witness)}, {"bounds", std::move(bounds)}, {"conjectural", std::move(conj)}};
}

inline Json to_json(const SeriesResult& s) {
  return Json{{"group_order", s.group_order},     {"sizes", s.sizes},
              {"class", s.nilpotency_class},     {"generator_counts", s.generator_counts},
              {"level_witnesses", s.level_witnesses}, {"lagrange_ok", s.lagrange_ok}};
}

inline Json to_json(const ExponentResult& e) {
  Json j{{"exponent", e.exponent},
         {"max_order", e.max_order},
         {"mode", e.exhaustive ? "exhaustive" : "sampled"},
         {"examined", e.examined},
         {"group_order", e.group_order_text},
         {"histogram", e.histogram},
         {"witness", e.witness}};
  if (!e.exhaustive) j["coverage"] = std::to_string(e.examined) + "/" + e.group_order_text;
  return j;
}

inline Json to_json(const BorelRecord& r) {
  Json j{{"exponent", r.brute.exponent},
         {"max_order", r.brute.max_order},
         {"mode", r.brute.exhaustive ? "exhaustive" : "sampled"},
         {"e", r.e},
         {"primitive", r.primitive},
         {"expected", r.expected},
         {"dichotomy_holds", r.dichotomy_holds},
         {"e_plus_s_bound", r.e_plus_s_bound},
         {"within_bound", r.within_bound}};
  j["witness"] = r.witness ? Json(*r.witness) : Json(nullptr);
  j["witness_exponent"] = r.witness_exponent ? Json(*r.witness_exponent) : Json(nullptr);
  j["conjectural"] = to_json(r.coxeter);
  j["conjecture_matches"] = r.coxeter_matches;
  j["kernel"] = Json{{"group", "Borel2m"},
                     {"exponent", r.kernel.exponent},
                     {"max_order", r.kernel.max_order},
                     {"mode", r.kernel.exhaustive ? "exhaustive" : "sampled"},
                     {"dichotomy_holds", r.kernel_dichotomy_holds}};
  return j;
}

inline Json to_json(const StabilizationResult& s) {
  Json levels = Json::array();
  for (const auto& l : s.levels) {
    Json j{{"field", l.field}, {"computed", l.computed}};
    if (l.computed) {
      j["class"] = l.nilpotency_class;
      j["exponent"] = l.exponent ? Json(*l.exponent) : Json(nullptr);
    } else {
      j["skipped"] = l.skipped_reason;
    }
    levels.push_back(std::move(j));
  }
  return Json{{"status", to_string(s.status)}, {"levels", std::move(levels)}};
}

}  // namespace weilrad
