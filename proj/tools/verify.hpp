#pragma once

#include <iosfwd>
#include <string>

namespace quattrack::cli {

// Executable property battery: quaternion algebra laws, dynamics and
// norm-drift oracles, closed-loop energy decrease bounds and region
// monitors.  suite is "algebra", "dynamics", "lyapunov", or "all".
// Prints one PASS/FAIL line per property with the measured residual;
// returns true iff every property passed.
bool run_verify(const std::string& suite, std::ostream& out);

}  // namespace quattrack::cli
