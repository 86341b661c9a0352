#pragma once

#include <string>

#include "barylab/common.hpp"

namespace barylab {

// Dispatches one batch subcommand (gamma, calculus, cotype, pisier,
// counterexample, extend, hcert, kalton, genchain, verify) on a JSON
// request and returns the JSON report. Deterministic per request.
json run_request(const std::string& subcommand, const json& request);

// Two-column key,value flattening of a report for the CSV sidecar.
std::string report_to_csv(const json& report);

}  // namespace barylab
