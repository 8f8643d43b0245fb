#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "quattrack/sim_engine.hpp"

namespace quattrack {

// Configuration problem: missing file, malformed JSON, schema violation,
// value out of range.  `field` names the offending entry.
struct ConfigError : std::runtime_error {
    ConfigError(std::string field_, const std::string& why)
        : std::runtime_error(field_ + ": " + why), field(std::move(field_)) {}
    std::string field;
};

// Scenario config is a single JSON document:
//   {
//     "inertia": [4.25, 4.337, 3.664],          // diag triple, flat 9, or 3x3 rows
//     "gains": {"alpha": 1.0, "k_q": 3.0, "k1": 3.0, "k_omega": 3.0,
//               "k_delta": 1000.0, "delta_bound": 2.0},
//     "mode": "robust" | "non_robust",
//     "disturbance": {"type": "none" | "constant" | "sinusoidal",
//                     "vector": [1,1,1], "frequency": 0.5},
//     "initial": {"q": [w,x,y,z], "omega": [x,y,z]},
//     "sim": {"dt": 1e-3, "t_end": 40.0, "record_stride": 10},
//     "region": {"c": 1.0, "epsilon": 0.1}      // optional
//   }
// The reference trajectory is always the built-in analytic one.  Unknown
// keys are rejected.  k_delta is required in robust mode; alpha defaults
// to 1 and k_q to k1.
Scenario load_scenario(const std::filesystem::path& file);  // throws ConfigError
Scenario parse_scenario(const std::string& json_text);      // throws ConfigError

// Fixed-column trace CSV.  One header line, comma separated, period decimal
// separator regardless of locale, shortest round-trip formatting; the same
// scenario yields byte-identical output.
extern const char* const trace_csv_header;
void write_trace_csv(std::ostream& out, const Trace& trace);
void write_trace_json(std::ostream& out, const Trace& trace);

// Metrics as a flat JSON object with fixed keys: final_eq_norm,
// final_ew_norm, final_delta_err_norm, rms_ew_20_40, settle_time_eq_1e-2,
// vk1_monotonicity_violations.
void write_metrics_json(std::ostream& out, const Metrics& m);

}  // namespace quattrack
