#include "robustnet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robustnet/linkprob.hpp"

namespace robustnet {

const char* post_mode_name(PostMode m) {
    return m == PostMode::Reassociate ? "reassociate" : "frozen";
}

const char* policy_name(const DisruptionPolicy& p) {
    switch (p.kind) {
        case DisruptionPolicy::Kind::UniformCount: return "uniform-count";
        case DisruptionPolicy::Kind::BernoulliPerNode: return "bernoulli";
        case DisruptionPolicy::Kind::FixedCount: return "fixed-count";
    }
    return "unknown";
}

namespace {

void check_policy(const DisruptionPolicy& policy, int n) {
    if (policy.kind == DisruptionPolicy::Kind::BernoulliPerNode &&
        !(policy.q >= 0 && policy.q <= 1))
        throw InvalidParameter("q", "removal probability must lie in [0, 1]");
    if (policy.kind == DisruptionPolicy::Kind::FixedCount &&
        (policy.count < 0 || policy.count > n))
        throw InvalidParameter("count", "removed count must lie in [0, n_nodes]");
}

// Fixed draw order per realization: positions (x, y per node), roles, BS
// gains for CHs then NCHs in id order, then the relay matrix NCH-major.
// Everything downstream relies on this order staying put.
void sample_into(const NetworkConfig& cfg, Xoshiro256& rng, Realization& rz) {
    const int n = cfg.n_nodes;
    const double a = cfg.grid_half_width;
    rz.positions.resize(n);
    rz.roles.resize(n);
    rz.ch_nodes.clear();
    rz.nch_nodes.clear();
    for (int i = 0; i < n; ++i) {
        const double x = rng.uniform_sym(a);
        const double y = rng.uniform_sym(a);
        rz.positions[i] = Position{x, y};
    }
    for (int i = 0; i < n; ++i) {
        const bool ch = rng.uniform01() < cfg.ch_probability;
        rz.roles[i] = ch ? Role::CH : Role::NCH;
        (ch ? rz.ch_nodes : rz.nch_nodes).push_back(i);
    }
    const size_t c = rz.ch_nodes.size();
    const size_t m = rz.nch_nodes.size();
    rz.gains_bs_ch.resize(c);
    for (auto& g : rz.gains_bs_ch) g = rng.exp1();
    rz.gains_bs_nch.resize(m);
    for (auto& g : rz.gains_bs_nch) g = rng.exp1();
    rz.gains_nch_ch.resize(m * c);
    for (auto& g : rz.gains_nch_ch) g = rng.exp1();
}

// Link feasibility under the realization's fading draw, independent of who
// survives.
struct LinkEval {
    std::vector<uint8_t> bs_ok;    // per node id: its BS link is up
    std::vector<uint8_t> pair_ok;  // NCH x CH: relay hop and CH BS link up
    std::vector<uint8_t> pre_ok;   // per node id: succeeds with all nodes present
};

void evaluate_links(const Realization& rz, const LinearPowers& pw, LinkEval& ev) {
    const int n = (int)rz.positions.size();
    const size_t c = rz.ch_nodes.size();
    const size_t m = rz.nch_nodes.size();
    ev.bs_ok.assign(n, 0);
    for (size_t ci = 0; ci < c; ++ci) {
        const int id = rz.ch_nodes[ci];
        ev.bs_ok[id] =
            rz.gains_bs_ch[ci] >= bs_gain_threshold(rz.positions[id], pw);
    }
    for (size_t mi = 0; mi < m; ++mi) {
        const int id = rz.nch_nodes[mi];
        ev.bs_ok[id] =
            rz.gains_bs_nch[mi] >= bs_gain_threshold(rz.positions[id], pw);
    }
    ev.pair_ok.assign(m * c, 0);
    for (size_t mi = 0; mi < m; ++mi) {
        const Position pj = rz.positions[rz.nch_nodes[mi]];
        for (size_t ci = 0; ci < c; ++ci) {
            if (!ev.bs_ok[rz.ch_nodes[ci]]) continue;
            const double z1 =
                relay_gain_threshold(pj, rz.positions[rz.ch_nodes[ci]], pw);
            ev.pair_ok[mi * c + ci] = rz.gains_nch_ch[mi * c + ci] >= z1;
        }
    }
    ev.pre_ok.assign(n, 0);
    for (int id : rz.ch_nodes) ev.pre_ok[id] = ev.bs_ok[id];
    for (size_t mi = 0; mi < m; ++mi) {
        const int id = rz.nch_nodes[mi];
        uint8_t ok = ev.bs_ok[id];
        for (size_t ci = 0; !ok && ci < c; ++ci) ok = ev.pair_ok[mi * c + ci];
        ev.pre_ok[id] = ok;
    }
}

// Marks removed nodes dead in `alive`; draws come from the realization's
// stream, continuing right after the sampling draws.
void draw_removals(int n, const DisruptionPolicy& policy, Xoshiro256& rng,
                   std::vector<uint8_t>& alive, std::vector<int>& scratch) {
    alive.assign(n, 1);
    switch (policy.kind) {
        case DisruptionPolicy::Kind::BernoulliPerNode:
            for (int i = 0; i < n; ++i)
                if (rng.uniform01() < policy.q) alive[i] = 0;
            return;
        case DisruptionPolicy::Kind::UniformCount:
        case DisruptionPolicy::Kind::FixedCount: {
            const int k = policy.kind == DisruptionPolicy::Kind::FixedCount
                              ? policy.count
                              : 1 + (int)rng.below((uint64_t)n);
            scratch.resize(n);
            std::iota(scratch.begin(), scratch.end(), 0);
            for (int t = 0; t < k; ++t) {
                const int j = t + (int)rng.below((uint64_t)(n - t));
                std::swap(scratch[t], scratch[j]);
                alive[scratch[t]] = 0;
            }
            return;
        }
    }
}

struct RatioBoot {
    double ratio = 0;
    double se = 0;
};

// Ratio-of-sums point estimate with a realization-level bootstrap standard
// error (1000 resamples).  nd maps a record to its (numerator, denominator)
// contribution.
template <class NumDen>
RatioBoot bootstrap_ratio(const std::vector<SimRecord>& recs, uint64_t master,
                          uint64_t purpose, NumDen nd) {
    double num = 0, den = 0;
    for (const auto& r : recs) {
        const auto [nu, de] = nd(r);
        num += nu;
        den += de;
    }
    RatioBoot out;
    out.ratio = num / den;  // caller guarantees den > 0

    constexpr int kResamples = 1000;
    const size_t t = recs.size();
    Xoshiro256 rng = substream(master, purpose, 0);
    double sum = 0, sumsq = 0;
    int used = 0;
    for (int b = 0; b < kResamples; ++b) {
        double bn = 0, bd = 0;
        for (size_t i = 0; i < t; ++i) {
            const auto [nu, de] = nd(recs[rng.below(t)]);
            bn += nu;
            bd += de;
        }
        if (bd <= 0) continue;
        const double r = bn / bd;
        sum += r;
        sumsq += r * r;
        ++used;
    }
    if (used > 1) {
        const double mean = sum / used;
        out.se = std::sqrt(std::max(0.0, sumsq / used - mean * mean));
    }
    return out;
}

// Stream purposes for the bootstrap draws, distinct per metric.
constexpr uint64_t kBootRobustness = 0xB001;
constexpr uint64_t kBootDegree = 0xB002;
constexpr uint64_t kBootFailNodes = 0xB003;
constexpr uint64_t kBootFailChs = 0xB004;

RobustnessEstimate fill_common(const SimPass& pass, const RatioBoot& rb,
                               const char* engine, std::string mode) {
    RobustnessEstimate est;
    est.mean = rb.ratio;
    est.std_error = rb.se;
    est.ci_lo = rb.ratio - 1.96 * rb.se;
    est.ci_hi = rb.ratio + 1.96 * rb.se;
    est.iterations = (long)pass.records.size();
    est.engine = engine;
    est.mode = std::move(mode);
    est.policy = policy_name(pass.policy);
    est.alpha = pass.cfg.path_loss_exponent;
    est.seed = pass.master_seed;
    return est;
}

}  // namespace

Realization sample_realization(const NetworkConfig& cfg, uint64_t master_seed,
                               long index) {
    const NetworkConfig c = validate(cfg);
    Realization rz;
    rz.master_seed = master_seed;
    rz.index = index;
    Xoshiro256 rng = substream(master_seed, (uint64_t)index);
    sample_into(c, rng, rz);
    return rz;
}

std::vector<int> success_set(const Realization& rz, const NetworkConfig& cfg,
                             std::span<const int> survivors) {
    const NetworkConfig c = validate(cfg);
    const LinearPowers pw = linear_powers(c);
    LinkEval ev;
    evaluate_links(rz, pw, ev);
    const int n = (int)rz.positions.size();
    std::vector<uint8_t> alive(n, 0);
    for (int id : survivors) {
        if (id < 0 || id >= n)
            throw InvalidParameter("survivors", "node id out of range");
        alive[id] = 1;
    }
    // local index of each CH, for the relay scan
    const size_t nch_count = rz.nch_nodes.size();
    const size_t ch_count = rz.ch_nodes.size();
    std::vector<int> out;
    for (int id = 0; id < n; ++id) {
        if (!alive[id]) continue;
        if (rz.roles[id] == Role::CH) {
            if (ev.bs_ok[id]) out.push_back(id);
            continue;
        }
        const size_t mi =
            std::lower_bound(rz.nch_nodes.begin(), rz.nch_nodes.end(), id) -
            rz.nch_nodes.begin();
        uint8_t ok = ev.bs_ok[id];
        for (size_t ci = 0; !ok && ci < ch_count; ++ci)
            ok = alive[rz.ch_nodes[ci]] && ev.pair_ok[mi * ch_count + ci];
        if (ok) out.push_back(id);
    }
    (void)nch_count;
    return out;
}

std::vector<int> apply_disruption(const Realization& rz, const DisruptionPolicy& policy,
                                  Xoshiro256& rng) {
    const int n = (int)rz.positions.size();
    check_policy(policy, n);
    std::vector<uint8_t> alive;
    std::vector<int> scratch;
    draw_removals(n, policy, rng, alive, scratch);
    std::vector<int> out;
    for (int id = 0; id < n; ++id)
        if (alive[id]) out.push_back(id);
    return out;
}

SimPass run_sim_pass(const NetworkConfig& cfg, const DisruptionPolicy& policy,
                     long iterations, uint64_t master_seed, PostMode post_mode) {
    const NetworkConfig c = validate(cfg);
    check_policy(policy, c.n_nodes);
    if (iterations < 1) throw InvalidParameter("iterations", "must be >= 1");
    const LinearPowers pw = linear_powers(c);
    const int n = c.n_nodes;

    SimPass pass;
    pass.cfg = c;
    pass.policy = policy;
    pass.post_mode = post_mode;
    pass.master_seed = master_seed;
    pass.records.resize(iterations);

    Realization rz;
    LinkEval ev;
    std::vector<uint8_t> alive;
    std::vector<int> scratch;
    for (long t = 0; t < iterations; ++t) {
        Xoshiro256 rng = substream(master_seed, (uint64_t)t);
        sample_into(c, rng, rz);
        evaluate_links(rz, pw, ev);
        draw_removals(n, policy, rng, alive, scratch);

        SimRecord& rec = pass.records[t];
        rec = SimRecord{};
        const size_t ch_count = rz.ch_nodes.size();
        const size_t nch_count = rz.nch_nodes.size();

        for (int id : rz.ch_nodes) {
            rec.pre += ev.pre_ok[id];
            rec.pre_ch += ev.pre_ok[id];
            const uint8_t post = alive[id] && ev.pre_ok[id];
            rec.post += post;
            rec.post_ch += post;
            rec.deg_pre += ev.bs_ok[id];
            rec.deg_post += alive[id] && ev.bs_ok[id];
        }
        for (size_t mi = 0; mi < nch_count; ++mi) {
            const int id = rz.nch_nodes[mi];
            rec.pre += ev.pre_ok[id];
            rec.deg_pre += ev.bs_ok[id];
            rec.deg_post += alive[id] && ev.bs_ok[id];
            if (!alive[id]) continue;
            if (post_mode == PostMode::FrozenTopology) {
                rec.post += ev.pre_ok[id];
            } else {
                uint8_t ok = ev.bs_ok[id];
                for (size_t ci = 0; !ok && ci < ch_count; ++ci)
                    ok = alive[rz.ch_nodes[ci]] && ev.pair_ok[mi * ch_count + ci];
                rec.post += ok;
            }
        }
        for (size_t mi = 0; mi < nch_count; ++mi) {
            const int jd = rz.nch_nodes[mi];
            for (size_t ci = 0; ci < ch_count; ++ci) {
                if (!ev.pair_ok[mi * ch_count + ci]) continue;
                rec.deg_pre += 2;
                if (alive[jd] && alive[rz.ch_nodes[ci]]) rec.deg_post += 2;
            }
        }
    }
    return pass;
}

RobustnessEstimate robustness_from(const SimPass& pass) {
    double pre = 0;
    for (const auto& r : pass.records) pre += r.pre;
    if (pre <= 0)
        throw NoSuccessBaseline("no node ever communicated before the disruption");
    const auto rb = bootstrap_ratio(
        pass.records, pass.master_seed, kBootRobustness,
        [](const SimRecord& r) { return std::pair<double, double>(r.post, r.pre); });
    return fill_common(pass, rb, "sim", post_mode_name(pass.post_mode));
}

RobustnessEstimate degree_ratio_from(const SimPass& pass) {
    double pre = 0;
    for (const auto& r : pass.records) pre += r.deg_pre;
    if (pre <= 0)
        throw DegenerateDegree("the pre-disruption graph never had an edge");
    const auto rb = bootstrap_ratio(pass.records, pass.master_seed, kBootDegree,
                                    [](const SimRecord& r) {
                                        return std::pair<double, double>(r.deg_post,
                                                                         r.deg_pre);
                                    });
    return fill_common(pass, rb, "mean-degree", "degree-ratio");
}

FailureBreakdown breakdown_from(const SimPass& pass) {
    double pre = 0, pre_ch = 0;
    for (const auto& r : pass.records) {
        pre += r.pre;
        pre_ch += r.pre_ch;
    }
    if (pre <= 0)
        throw NoSuccessBaseline("no node ever communicated before the disruption");
    FailureBreakdown out;
    const auto nodes = bootstrap_ratio(pass.records, pass.master_seed, kBootFailNodes,
                                       [](const SimRecord& r) {
                                           return std::pair<double, double>(
                                               r.pre - r.post, r.pre);
                                       });
    out.pct_failing_nodes = 100.0 * nodes.ratio;
    out.se_nodes = 100.0 * nodes.se;
    if (pre_ch > 0) {
        const auto chs = bootstrap_ratio(pass.records, pass.master_seed, kBootFailChs,
                                         [](const SimRecord& r) {
                                             return std::pair<double, double>(
                                                 r.pre_ch - r.post_ch, r.pre_ch);
                                         });
        out.pct_failing_chs = 100.0 * chs.ratio;
        out.se_chs = 100.0 * chs.se;
    }
    return out;
}

RobustnessEstimate estimate_robustness(const NetworkConfig& cfg,
                                       const DisruptionPolicy& policy, long iterations,
                                       uint64_t master_seed, PostMode post_mode) {
    if (iterations < 100)
        throw InvalidParameter("iterations", "need at least 100 realizations");
    return robustness_from(run_sim_pass(cfg, policy, iterations, master_seed, post_mode));
}

RobustnessEstimate mean_degree_metric(const NetworkConfig& cfg,
                                      const DisruptionPolicy& policy, long iterations,
                                      uint64_t master_seed) {
    if (iterations < 100)
        throw InvalidParameter("iterations", "need at least 100 realizations");
    return degree_ratio_from(
        run_sim_pass(cfg, policy, iterations, master_seed, PostMode::Reassociate));
}

FailureBreakdown failure_breakdown(const NetworkConfig& cfg,
                                   const DisruptionPolicy& policy, long iterations,
                                   uint64_t master_seed, PostMode post_mode) {
    if (iterations < 100)
        throw InvalidParameter("iterations", "need at least 100 realizations");
    return breakdown_from(run_sim_pass(cfg, policy, iterations, master_seed, post_mode));
}

}  // namespace robustnet
