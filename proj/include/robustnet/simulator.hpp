#pragma once
// Monte Carlo engine for the time-switching connectivity graph.
//
// Each realization draws node positions, CH/NCH roles, and a fresh set of
// unit-mean exponential fading gains, evaluates which nodes communicate
// successfully, removes nodes per the disruption policy, and re-evaluates.
// Fading is drawn once per realization and shared by the pre and post
// evaluations, so the disruption is the only thing that changes; per
// realization post <= pre and the ratio estimator stays in [0, 1].
//
// Everything is sequential and seed-deterministic: realization t draws from
// substream(master_seed, t), so results do not depend on how the loop is
// batched.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "robustnet/model.hpp"
#include "robustnet/rng.hpp"

namespace robustnet {

// How surviving nodes are re-evaluated after the disruption.
//   Reassociate    - NCHs may bind to any surviving CH (default).
//   FrozenTopology - a node keeps its pre-disruption success status; removal
//                    is the only way to fail.  Matches the chain engine's
//                    frozen blackout term exactly in expectation.
enum class PostMode { Reassociate, FrozenTopology };

const char* post_mode_name(PostMode m);

struct DisruptionPolicy {
    enum class Kind { UniformCount, BernoulliPerNode, FixedCount };
    Kind kind = Kind::UniformCount;
    double q = 0;   // BernoulliPerNode: independent removal probability
    int count = 0;  // FixedCount: exact number removed

    static DisruptionPolicy uniform_count() { return {}; }
    static DisruptionPolicy bernoulli(double q) {
        return {Kind::BernoulliPerNode, q, 0};
    }
    static DisruptionPolicy fixed_count(int count) {
        return {Kind::FixedCount, 0, count};
    }
};

const char* policy_name(const DisruptionPolicy& p);

// One sampled snapshot.  Gains are indexed role-locally (position in
// ch_nodes / nch_nodes); gains_nch_ch is row-major, one row per NCH in
// nch_nodes order, one column per CH in ch_nodes order.
struct Realization {
    std::vector<Position> positions;
    std::vector<Role> roles;
    std::vector<int> ch_nodes;
    std::vector<int> nch_nodes;
    std::vector<double> gains_bs_ch;   // BS downlink gain per CH
    std::vector<double> gains_bs_nch;  // BS downlink gain per NCH
    std::vector<double> gains_nch_ch;  // relay hop gain, NCH x CH
    uint64_t master_seed = 0;
    long index = 0;
};

Realization sample_realization(const NetworkConfig& cfg, uint64_t master_seed,
                               long index);

// Sorted ids of nodes that communicate successfully when only `survivors`
// are present: a CH needs its BS link, an NCH needs a direct BS link or a
// surviving CH with both hops of the relay up.  Pass all ids for the
// pre-disruption set.
std::vector<int> success_set(const Realization& rz, const NetworkConfig& cfg,
                             std::span<const int> survivors);

// Sorted survivor ids after one disruption draw from `rng`.
std::vector<int> apply_disruption(const Realization& rz, const DisruptionPolicy& policy,
                                  Xoshiro256& rng);

// Per-realization tallies; every aggregate below is a ratio of sums over
// these.
struct SimRecord {
    uint32_t pre = 0, post = 0;        // successful node counts
    uint32_t pre_ch = 0, post_ch = 0;  // CH-role subset of the above
    uint32_t deg_pre = 0, deg_post = 0;  // feasibility-degree sums
};

struct SimPass {
    NetworkConfig cfg;
    DisruptionPolicy policy;
    PostMode post_mode = PostMode::Reassociate;
    uint64_t master_seed = 0;
    std::vector<SimRecord> records;
};

// Runs `iterations` independent realizations.  The workhorse behind the
// estimators; exposed so several metrics can share one pass.
SimPass run_sim_pass(const NetworkConfig& cfg, const DisruptionPolicy& policy,
                     long iterations, uint64_t master_seed,
                     PostMode post_mode = PostMode::Reassociate);

// Ratio-of-sums estimators over a finished pass.  Standard errors and the
// 95% interval come from a realization-level bootstrap (1000 resamples,
// seed-derived).  Throws NoSuccessBaseline / DegenerateDegree when the
// denominator sum is zero.
RobustnessEstimate robustness_from(const SimPass& pass);
RobustnessEstimate degree_ratio_from(const SimPass& pass);

struct FailureBreakdown {
    double pct_failing_nodes = 0;  // 100 * (pre - post) / pre, all nodes
    double pct_failing_chs = 0;    // same restricted to CH-role nodes
    double se_nodes = 0;
    double se_chs = 0;
};

FailureBreakdown breakdown_from(const SimPass& pass);

// Convenience wrappers: one pass, one estimate.  iterations >= 100.
RobustnessEstimate estimate_robustness(const NetworkConfig& cfg,
                                       const DisruptionPolicy& policy, long iterations,
                                       uint64_t master_seed,
                                       PostMode post_mode = PostMode::Reassociate);

RobustnessEstimate mean_degree_metric(const NetworkConfig& cfg,
                                      const DisruptionPolicy& policy, long iterations,
                                      uint64_t master_seed);

FailureBreakdown failure_breakdown(const NetworkConfig& cfg,
                                   const DisruptionPolicy& policy, long iterations,
                                   uint64_t master_seed,
                                   PostMode post_mode = PostMode::Reassociate);

}  // namespace robustnet
