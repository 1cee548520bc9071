#pragma once
// One-axis parameter sweeps with every requested engine evaluated at every
// point, and deterministic CSV emission.
//
// Each point derives its own seed from the master seed and the point index;
// the simulation and mean-degree engines share one realization pass per
// point, and the analytic ExactMc engine reuses the same point seed, so
// engines see common random numbers where that makes sense.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robustnet/analytic.hpp"
#include "robustnet/model.hpp"
#include "robustnet/simulator.hpp"

namespace robustnet {

enum class Engine { Sim, AnalyticExact, AnalyticApprox, MeanDegree };

const char* engine_name(Engine e);
std::optional<Engine> engine_from_name(std::string_view name);

enum class SweepAxis { ChProbability, NNodes, PThresholdDbm, FailureQ };

const char* axis_name(SweepAxis a);
std::optional<SweepAxis> axis_from_name(std::string_view name);

struct SweepPlan {
    SweepAxis axis = SweepAxis::ChProbability;
    std::vector<double> values;   // non-empty, strictly monotonic
    std::vector<Engine> engines;  // non-empty
    NetworkConfig base;
    long iterations = 10000;
    uint64_t master_seed = 1;
    // Disruption applied by the sim engines; on the failure_q axis the
    // policy is per-node Bernoulli with the axis value and this field is
    // ignored.
    DisruptionPolicy policy;
    PostMode post_mode = PostMode::Reassociate;
    CountMode counts = CountMode::Floored;  // analytic engines
    AnalyticOptions analytic;               // seed is overridden per point
};

struct SweepRow {
    double value = 0;
    Engine engine = Engine::Sim;
    uint64_t seed = 0;  // per-point derived seed actually consumed
    double alpha = 0;
    bool ok = false;
    std::string error;  // tag when !ok, e.g. "no-success-baseline"
    RobustnessEstimate est;
    // sim-engine extras
    bool has_counts = false;
    double pre_success = 0, post_success = 0;  // mean per realization
    bool has_breakdown = false;
    double pct_fail_nodes = 0, pct_fail_chs = 0;
    double se_fail_nodes = 0, se_fail_chs = 0;  // not part of the CSV schema
};

struct SweepResult {
    SweepPlan plan;
    std::vector<SweepRow> rows;  // value-major, engines in plan order
};

// Evaluates the plan; engine failures at single points become error-tagged
// rows and the sweep continues.  Throws InvalidParameter only for a plan
// that is broken as a whole (empty values, bad base config, ...).
SweepResult run_sweep(const SweepPlan& plan);

// Fixed schema, 9-significant-digit floats, byte-identical for identical
// invocations:
// axis,value,engine,robustness,std_error,ci_lo,ci_hi,pre_success,
// post_success,pct_fail_nodes,pct_fail_chs,seed,alpha,mode
void write_csv(const SweepResult& result, std::ostream& os);

// Preset plans replaying the five standard figures on top of `base`:
//   fig3  robustness vs network size, sim + analytic-exact
//   fig4  robustness vs CH probability, sim + analytic-approx + mean-degree
//   fig5  pre/post success counts vs CH probability, sim
//   fig6  failing-node and failing-CH percentages vs CH probability, sim
//   fig7  robustness vs per-node failure probability, sim
// Throws UsageError for an unknown name.
SweepPlan figure_plan(const std::string& name, const NetworkConfig& base);

}  // namespace robustnet
