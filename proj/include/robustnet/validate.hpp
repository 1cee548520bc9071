#pragma once
// Built-in self checks behind the `validate` subcommand: closed-form
// oracles, PMF normalizations, brute-force chain equivalence at toy sizes,
// determinism, and (at full level) large Monte Carlo cross-checks.

#include <iosfwd>

namespace robustnet {

enum class ValidateLevel { Fast, Full };

// Runs every check for the level, prints one PASS/FAIL line per check to
// `os`, and returns the number of failures.  Never aborts early; a check
// that throws is reported as a failure.
int run_validate(ValidateLevel level, std::ostream& os);

}  // namespace robustnet
