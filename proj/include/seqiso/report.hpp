#pragma once

// JSON for lemma reports, extension diagnostics and decomposition reports.

#include "seqiso/analyzer.hpp"

namespace seqiso {

inline Json to_json(const ToleranceConfig& cfg) {
  return Json{{"eq_tol", cfg.eq_tol}, {"psd_tol", cfg.psd_tol}, {"trials", cfg.trials}, {"seed", cfg.seed}};
}

inline Json to_json(const LemmaResult& r) {
  Json witness = Json::array();
  for (const auto& w : r.witness) witness.push_back(to_json(w));
  return Json{{"max_residual", r.max_residual},
              {"tolerance", r.tolerance},
              {"pass", r.pass},
              {"skipped", r.skipped},
              {"witness", std::move(witness)}};
}

inline Json to_json(const LemmaReport& r) {
  Json out = Json::object();
  for (const auto& e : r.entries) out[e.name] = to_json(e);
  return out;
}

inline Json to_json(const ExtensionDiagnostics& d) {
  return Json{{"additivity_residual", d.additivity_residual}, {"homogeneity_residual", d.homogeneity_residual},
              {"order_violations", d.order_violations},       {"jordan_residual", d.jordan_residual},
              {"unitality_residual", d.unitality_residual},   {"agreement_residual", d.agreement_residual},
              {"pipeline_residual", d.pipeline_residual}};
}

/// Block indices are 1-based; "perm"[j] is the source block feeding the
/// j-th commutative target block, "exponents"[j] the power applied there.
inline Json to_json(const DecompositionReport& r) {
  Json kinds = Json::array(), unitaries = Json::array(), residuals = Json::object();
  for (auto k : r.kinds) kinds.push_back(std::string(to_string(k)));
  for (const auto& u : r.unitaries) unitaries.push_back(to_json(u));
  for (const auto& [name, v] : r.residuals) residuals[name] = v;
  residuals["max"] = r.max_residual;

  Json out{{"verdict", std::string(to_string(r.verdict))},
           {"correspondence", detail::index_list_json(r.correspondence)},
           {"kinds", std::move(kinds)},
           {"unitaries", std::move(unitaries)},
           {"exponents", r.commutative_part ? Json(r.commutative_part->exponents) : Json::array()},
           {"perm", r.commutative_part ? detail::index_list_json(r.commutative_part->perm) : Json::array()},
           {"commutative_targets",
            r.commutative_part ? detail::index_list_json(r.commutative_part->target_blocks) : Json::array()},
           {"fixed_scalar", r.fixed_scalar ? Json(*r.fixed_scalar) : Json(nullptr)},
           {"extends_to_star_maps", r.extends_to_star_maps},
           {"residuals", std::move(residuals)},
           {"lemmas", to_json(r.lemmas)},
           {"config", to_json(r.config)}};
  if (!r.reason.empty()) out["reason"] = r.reason;
  if (r.extension) out["extension"] = to_json(*r.extension);
  return out;
}

}  // namespace seqiso
