#pragma once
// Scenario description for the clustered network: parameter set, geometry,
// node roles, unit conversion, and the shared result record produced by the
// robustness engines.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace robustnet {

// A config field failed validation. `field` names the offender.
struct InvalidParameter : std::invalid_argument {
    InvalidParameter(std::string f, const std::string& why)
        : std::invalid_argument(f + ": " + why), field(std::move(f)) {}
    std::string field;
};

// Expected baseline of successfully communicating nodes is zero; the
// robustness ratio is undefined.
struct NoSuccessBaseline : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pre-disruption mean degree is zero; the degree ratio is undefined.
struct DegenerateDegree : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad command line.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Position {
    double x = 0;
    double y = 0;
};

inline double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance_to_origin(const Position& p) { return std::hypot(p.x, p.y); }

enum class Role : uint8_t { CH, NCH };

// All power fields are dBm at the interface; engines convert to linear mW
// internally.  Exactly one of grid_half_width / node_density may be left
// unset (<= 0); validate() derives the other.  Defaults describe the desk
// scenario: 150 nodes at unit density with a strong base station.
struct NetworkConfig {
    int n_nodes = 150;
    double ch_probability = 0.5;
    double grid_half_width = 0;   // a: deployment square is [-a, a]^2, metres
    double node_density = 1.0;    // nodes per square metre
    double p_tx_node_dbm = 23.0;
    double p_tx_bs_dbm = 46.0;
    double p_threshold_dbm = -111.0;
    double path_loss_exponent = 3.0;  // tool default; echoed in all outputs
};

double dbm_to_linear(double dbm);  // dBm -> mW
double linear_to_dbm(double mw);   // mW -> dBm, mw > 0

// half-width a such that n nodes over [-a, a]^2 give the requested density
double grid_half_width_from_density(int n_nodes, double density);

// Checks ranges, resolves the half-width/density pair (consistency within
// 1e-6 relative when both are given), and returns the completed config.
// Throws InvalidParameter naming the offending field.
NetworkConfig validate(const NetworkConfig& cfg);

// Flat key=value scenario file; '#' starts a comment.  Keys match the
// NetworkConfig field names.  The result is validate()d.
NetworkConfig parse_config(const std::string& text);
NetworkConfig load_config(const std::string& path);

// Robustness value with provenance.  Simulation-backed estimates carry a
// bootstrap standard error and 95% interval; quadrature-backed estimates
// report zero error and a collapsed interval.
struct RobustnessEstimate {
    double mean = 0;
    double std_error = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    long iterations = 0;     // realizations or MC samples; 0 for closed form
    std::string engine;      // "sim", "analytic-exact", "analytic-approx", "mean-degree"
    std::string mode;        // engine-specific detail, e.g. "exact-mc/floored"
    std::string policy;      // disruption policy tag; empty for analytic engines
    double alpha = 0;        // path-loss exponent echo
    uint64_t seed = 0;
};

}  // namespace robustnet
