#include "l4u/json.hpp"

namespace l4u {

using nlohmann::json;

void to_json(json& j, const PairDerivative& p) {
  j = json{{"i", p.i}, {"k", p.k}, {"first", p.first}, {"second", p.second}};
}

void to_json(json& j, const DerivativeReport& r) {
  j = json{{"b", r.b}, {"pairs", r.pairs}, {"max_abs_first", r.max_abs_first}, {"max_second", r.max_second}};
}

void to_json(json& j, const LearnTrace& t) {
  json its = json::array();
  for (std::size_t n = 0; n < t.objective.size(); ++n) {
    json it{{"iteration", n}, {"objective", t.objective[n]}};
    it["step_norm"] = n == 0 || n - 1 >= t.step_norm.size() ? json(nullptr) : json(t.step_norm[n - 1]);
    its.push_back(std::move(it));
  }
  j = json{{"terminated_by", std::string(to_string(t.terminated_by))},
           {"iterations", std::move(its)},
           {"reprojections", t.reprojections}};
  if (!t.sweep_gain.empty()) j["sweep_gain"] = t.sweep_gain;
  if (!t.update_objective.empty()) j["update_objective"] = t.update_objective;
}

void to_json(json& j, const PerBResult& r) {
  j = json{{"b", r.b}, {"residual", r.residual}, {"tolerance", r.tolerance}, {"passed", r.passed}};
  j["worst_pair"] = r.has_pair ? json{r.worst_i, r.worst_k} : json(nullptr);
  j["metrics"] = r.metrics;
}

void to_json(json& j, const VerificationReport& r) {
  j = json{{"claim", r.claim}, {"b_range", r.b_range}, {"per_b", r.per_b}, {"passed", r.passed}};
}

void to_json(json& j, const BerCurve& c) {
  j = json{{"snr_db", c.snr_db}, {"ber", c.ber}, {"bit_count", c.bit_count}, {"bit_errors", c.bit_errors}};
}

json envelope(const json& config, const std::string& key, json payload) {
  return json{{"format_version", kFormatVersion}, {"config", config}, {key, std::move(payload)}};
}

}  // namespace l4u
