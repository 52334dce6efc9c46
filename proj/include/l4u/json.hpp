#pragma once

// JSON forms of reports, traces and curves (nlohmann::json). Files written by
// the CLI wrap these in an object carrying "format_version" and "config".

#include <json.hpp>
#include "l4u/analysis.hpp"
#include "l4u/simulate.hpp"

namespace l4u {

inline constexpr int kFormatVersion = 1;

void to_json(nlohmann::json& j, const PairDerivative& p);
void to_json(nlohmann::json& j, const DerivativeReport& r);
/// {"terminated_by", "iterations": [{"iteration", "objective", "step_norm"}],
///  "sweep_gain", "update_objective", "reprojections"}; iteration 0 is the
/// initial point and has no step.
void to_json(nlohmann::json& j, const LearnTrace& t);
void to_json(nlohmann::json& j, const PerBResult& r);
void to_json(nlohmann::json& j, const VerificationReport& r);
void to_json(nlohmann::json& j, const BerCurve& c);

/// {"format_version": kFormatVersion, "config": config, key: payload}
nlohmann::json envelope(const nlohmann::json& config, const std::string& key, nlohmann::json payload);

}  // namespace l4u
