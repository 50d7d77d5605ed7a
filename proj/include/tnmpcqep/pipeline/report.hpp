#pragma once

#include <json.hpp>

#include "tnmpcqep/mpc/meter.hpp"
#include "tnmpcqep/pipeline/demo.hpp"

namespace tnmpcqep::pipeline {

nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const qep::QepDiagnostics& d);
nlohmann::json to_json(const mpc::CostReport& c);
nlohmann::json to_json(const qsim::NoiseSpec& n);
/// Echo of every setting that influences the result.
nlohmann::json config_json(const DemoConfig& config);

/// {"config", "evaluation", "evaluation_at_half", "threshold", "diagnostics",
///  "cost", "notes"}. Runtime is deliberately absent.
nlohmann::json demo_report(const DemoConfig& config, const DemoResult& result);

}  // namespace tnmpcqep::pipeline
