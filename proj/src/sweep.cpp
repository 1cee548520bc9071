#include "robustnet/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "robustnet/rng.hpp"

namespace robustnet {

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::Sim: return "sim";
        case Engine::AnalyticExact: return "analytic-exact";
        case Engine::AnalyticApprox: return "analytic-approx";
        case Engine::MeanDegree: return "mean-degree";
    }
    return "unknown";
}

std::optional<Engine> engine_from_name(std::string_view name) {
    if (name == "sim") return Engine::Sim;
    if (name == "analytic-exact") return Engine::AnalyticExact;
    if (name == "analytic-approx") return Engine::AnalyticApprox;
    if (name == "mean-degree") return Engine::MeanDegree;
    return std::nullopt;
}

const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::ChProbability: return "ch_probability";
        case SweepAxis::NNodes: return "n_nodes";
        case SweepAxis::PThresholdDbm: return "p_threshold_dbm";
        case SweepAxis::FailureQ: return "failure_q";
    }
    return "unknown";
}

std::optional<SweepAxis> axis_from_name(std::string_view name) {
    if (name == "ch_probability") return SweepAxis::ChProbability;
    if (name == "n_nodes") return SweepAxis::NNodes;
    if (name == "p_threshold_dbm") return SweepAxis::PThresholdDbm;
    if (name == "failure_q") return SweepAxis::FailureQ;
    return std::nullopt;
}

namespace {

void check_plan(const SweepPlan& plan) {
    if (plan.values.empty())
        throw InvalidParameter("values", "sweep needs at least one axis value");
    if (plan.engines.empty())
        throw InvalidParameter("engines", "sweep needs at least one engine");
    const bool ascending = plan.values.size() < 2 || plan.values[1] > plan.values[0];
    for (size_t i = 1; i < plan.values.size(); ++i) {
        const bool ok = ascending ? plan.values[i] > plan.values[i - 1]
                                  : plan.values[i] < plan.values[i - 1];
        if (!ok)
            throw InvalidParameter("values", "axis values must be strictly ordered");
    }
    for (Engine e : plan.engines)
        if ((e == Engine::Sim || e == Engine::MeanDegree) && plan.iterations < 100)
            throw InvalidParameter("iterations", "need at least 100 realizations");
}

// The point's scenario; FailureQ additionally swaps the policy.
NetworkConfig config_at(const SweepPlan& plan, const NetworkConfig& base, double v) {
    NetworkConfig cfg = base;
    switch (plan.axis) {
        case SweepAxis::ChProbability:
            cfg.ch_probability = v;
            break;
        case SweepAxis::NNodes: {
            const double r = std::nearbyint(v);
            if (!(v > 0) || std::abs(v - r) > 1e-9)
                throw InvalidParameter("values", "n_nodes values must be positive integers");
            cfg.n_nodes = (int)r;
            cfg.grid_half_width = 0;  // rescale the grid at fixed density
            break;
        }
        case SweepAxis::PThresholdDbm:
            cfg.p_threshold_dbm = v;
            break;
        case SweepAxis::FailureQ:
            break;
    }
    return validate(cfg);
}

const char* tag_for(const std::exception& e) {
    if (dynamic_cast<const NoSuccessBaseline*>(&e)) return "no-success-baseline";
    if (dynamic_cast<const DegenerateDegree*>(&e)) return "degenerate-degree";
    if (dynamic_cast<const InvalidParameter*>(&e)) return "invalid-parameter";
    return "numeric-error";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan) {
    check_plan(plan);
    const NetworkConfig base = validate(plan.base);

    SweepResult result;
    result.plan = plan;
    for (size_t pi = 0; pi < plan.values.size(); ++pi) {
        const double v = plan.values[pi];
        const uint64_t seed_pt = substream_seed(plan.master_seed, (uint64_t)pi);

        NetworkConfig cfg_pt;
        std::string point_err;
        try {
            cfg_pt = config_at(plan, base, v);
        } catch (const std::exception& e) {
            point_err = tag_for(e);
        }
        const DisruptionPolicy pol_pt = plan.axis == SweepAxis::FailureQ
                                            ? DisruptionPolicy::bernoulli(v)
                                            : plan.policy;

        // one realization pass per point, shared by sim and mean-degree
        std::optional<SimPass> pass;
        std::string pass_err;
        auto ensure_pass = [&]() {
            if (!pass && pass_err.empty()) {
                try {
                    pass = run_sim_pass(cfg_pt, pol_pt, plan.iterations, seed_pt,
                                        plan.post_mode);
                } catch (const std::exception& e) {
                    pass_err = tag_for(e);
                }
            }
            return pass_err.empty();
        };

        for (Engine eng : plan.engines) {
            SweepRow row;
            row.value = v;
            row.engine = eng;
            row.seed = seed_pt;
            row.alpha = point_err.empty() ? cfg_pt.path_loss_exponent
                                          : base.path_loss_exponent;
            if (!point_err.empty()) {
                row.error = point_err;
                result.rows.push_back(std::move(row));
                continue;
            }
            try {
                switch (eng) {
                    case Engine::Sim: {
                        if (!ensure_pass()) {
                            row.error = pass_err;
                            break;
                        }
                        row.est = robustness_from(*pass);
                        double pre = 0, post = 0;
                        for (const auto& r : pass->records) {
                            pre += r.pre;
                            post += r.post;
                        }
                        row.has_counts = true;
                        row.pre_success = pre / (double)pass->records.size();
                        row.post_success = post / (double)pass->records.size();
                        const FailureBreakdown fb = breakdown_from(*pass);
                        row.has_breakdown = true;
                        row.pct_fail_nodes = fb.pct_failing_nodes;
                        row.pct_fail_chs = fb.pct_failing_chs;
                        row.se_fail_nodes = fb.se_nodes;
                        row.se_fail_chs = fb.se_chs;
                        row.ok = true;
                        break;
                    }
                    case Engine::MeanDegree: {
                        if (!ensure_pass()) {
                            row.error = pass_err;
                            break;
                        }
                        row.est = degree_ratio_from(*pass);
                        row.ok = true;
                        break;
                    }
                    case Engine::AnalyticExact:
                    case Engine::AnalyticApprox: {
                        if (plan.axis == SweepAxis::FailureQ) {
                            row.error = "unsupported-axis";
                            break;
                        }
                        AnalyticMode mode;
                        mode.fnch = eng == Engine::AnalyticExact
                                        ? FnchMethod::ExactMc
                                        : FnchMethod::Approximated;
                        mode.counts = plan.counts;
                        AnalyticOptions opts = plan.analytic;
                        opts.seed = seed_pt;
                        row.est = robustness(cfg_pt, mode, opts);
                        row.ok = true;
                        break;
                    }
                }
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = tag_for(e);
            }
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

void write_csv(const SweepResult& result, std::ostream& os) {
    os << "axis,value,engine,robustness,std_error,ci_lo,ci_hi,pre_success,"
          "post_success,pct_fail_nodes,pct_fail_chs,seed,alpha,mode\n";
    const char* axis = axis_name(result.plan.axis);
    for (const SweepRow& row : result.rows) {
        os << axis << ',' << fmt(row.value) << ',' << engine_name(row.engine) << ',';
        if (row.ok)
            os << fmt(row.est.mean) << ',' << fmt(row.est.std_error) << ','
               << fmt(row.est.ci_lo) << ',' << fmt(row.est.ci_hi) << ',';
        else
            os << ",,,,";
        if (row.has_counts)
            os << fmt(row.pre_success) << ',' << fmt(row.post_success) << ',';
        else
            os << ",,";
        if (row.has_breakdown)
            os << fmt(row.pct_fail_nodes) << ',' << fmt(row.pct_fail_chs) << ',';
        else
            os << ",,";
        os << row.seed << ',' << fmt(row.alpha) << ',';
        if (row.ok) {
            os << row.est.mode;
            if (!row.est.policy.empty()) os << '/' << row.est.policy;
        } else {
            os << "error:" << row.error;
        }
        os << '\n';
    }
}

SweepPlan figure_plan(const std::string& name, const NetworkConfig& base) {
    SweepPlan plan;
    plan.base = base;
    auto p_grid = [] {
        std::vector<double> v;
        for (int i = 1; i <= 9; ++i) v.push_back(i / 10.0);
        return v;
    };
    if (name == "fig3") {
        plan.axis = SweepAxis::NNodes;
        plan.values = {50, 100, 150};
        plan.engines = {Engine::Sim, Engine::AnalyticExact};
    } else if (name == "fig4") {
        plan.axis = SweepAxis::ChProbability;
        plan.values = p_grid();
        plan.engines = {Engine::Sim, Engine::AnalyticApprox, Engine::MeanDegree};
    } else if (name == "fig5" || name == "fig6") {
        plan.axis = SweepAxis::ChProbability;
        plan.values = p_grid();
        plan.engines = {Engine::Sim};
    } else if (name == "fig7") {
        plan.axis = SweepAxis::FailureQ;
        plan.values = {0.0, 0.2, 0.4, 0.6, 0.8};
        plan.engines = {Engine::Sim};
    } else {
        throw UsageError("unknown figure name: " + name);
    }
    return plan;
}

}  // namespace robustnet
