#include "robustnet/analytic.hpp"

#include <cmath>
#include <mutex>

#include "robustnet/linkprob.hpp"
#include "robustnet/rng.hpp"

namespace robustnet {

namespace {

// Floor of a count product like n*p, snapping near-integer values so that
// decimal probabilities (0.6 * 150 = 89.999...96 in binary) floor to the
// intended integer.
int floored_count(double x) {
    const double r = std::nearbyint(x);
    if (std::abs(x - r) < 1e-9 * std::max(1.0, std::abs(x))) return (int)r;
    return (int)std::floor(x);
}

void check_prob(double v, const char* field) {
    if (!(v >= 0 && v <= 1))
        throw InvalidParameter(field, "must be a probability in [0, 1]");
}

// log k! table in long double; binom_pmf sums over the full support must
// close to 1 well below 1e-12 even at n = 10^4, which a plain double
// accumulation of log terms cannot guarantee.
const long double* logfact_ld(int n) {
    static std::vector<long double> table{0.0L, 0.0L};
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    while ((int)table.size() <= n)
        table.push_back(table.back() + logl((long double)table.size()));
    return table.data();
}

// double-precision log k! used by the chain hot loops (exponents stay small
// there)
std::vector<double> logfact(int n) {
    std::vector<double> lf(n + 1, 0.0);
    long double acc = 0.0L;
    for (int i = 2; i <= n; ++i) {
        acc += logl((long double)i);
        lf[i] = (double)acc;
    }
    return lf;
}

inline double log_choose(const double* lf, int n, int k) {
    return lf[n] - lf[k] - lf[n - k];
}

// Inner double loop of the chain for one CH count: mean over K of the
// hypergeometric average of l0.  Optionally accumulates d/d(p_fnch).
double l2_impl(int n_ch, double pf, double ps, int n, const double* lf, double* dl2) {
    double acc = 0, dacc = 0;
    const int n_nch = n - n_ch;
    for (int k = 1; k <= n; ++k) {
        const int rlo = std::max(0, k - n_nch);
        const int rhi = std::min(k, n_ch);
        const double lck = log_choose(lf, n, k);
        for (int r = rlo; r <= rhi; ++r) {
            const double w =
                std::exp(log_choose(lf, n_ch, r) + log_choose(lf, n_nch, k - r) - lck);
            const double surv_nch = n_nch - (k - r);
            const double surv_ch = n_ch - r;
            acc += (surv_nch * (1.0 - pf) + surv_ch * ps) * w;
            dacc -= surv_nch * w;
        }
    }
    if (dl2) *dl2 = dacc / n;
    return acc / n;
}

}  // namespace

double binom_pmf(int n_ch, int n, double p) {
    if (n < 0) throw InvalidParameter("n", "must be >= 0");
    check_prob(p, "p");
    if (n_ch < 0 || n_ch > n) return 0.0;
    if (p == 0.0) return n_ch == 0 ? 1.0 : 0.0;
    if (p == 1.0) return n_ch == n ? 1.0 : 0.0;
    const long double* lf = logfact_ld(n);
    const long double lp =
        lf[n] - lf[n_ch] - lf[n - n_ch] + n_ch * logl((long double)p) +
        (n - n_ch) * log1pl((long double)-p);
    return (double)expl(lp);
}

std::pair<int, int> r_range(int k, int n_ch, int n) {
    if (n < 1) throw InvalidParameter("n", "must be >= 1");
    if (k < 1 || k > n) throw InvalidParameter("k", "must lie in [1, n]");
    if (n_ch < 0 || n_ch > n) throw InvalidParameter("n_ch", "must lie in [0, n]");
    return {std::max(0, k - (n - n_ch)), std::min(k, n_ch)};
}

double p_fch(int r, int k, int n_ch, int n) {
    const auto [rlo, rhi] = r_range(k, n_ch, n);
    if (r < rlo || r > rhi)
        throw InvalidParameter("r", "outside the feasible removed-CH range");
    const double num = std::lgamma(n_ch + 1.0) - std::lgamma(r + 1.0) -
                       std::lgamma(n_ch - r + 1.0) + std::lgamma(n - n_ch + 1.0) -
                       std::lgamma(k - r + 1.0) - std::lgamma(n - n_ch - (k - r) + 1.0);
    const double den = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                       std::lgamma(n - k + 1.0);
    return std::exp(num - den);
}

double l0(int k, int r, int n_ch, const DisruptionChainTerms& terms, int n) {
    if (n < 1) throw InvalidParameter("n", "must be >= 1");
    if (n_ch < 0 || n_ch > n) throw InvalidParameter("n_ch", "must lie in [0, n]");
    if (k < 0 || k > n) throw InvalidParameter("k", "must lie in [0, n]");
    if (r < 0 || r > std::min(k, n_ch) || k - r > n - n_ch)
        throw InvalidParameter("r", "outside the feasible removed-CH range");
    check_prob(terms.p_fnch, "p_fnch");
    check_prob(terms.p_sch, "p_sch");
    const double surv_nch = (n - n_ch) - (k - r);
    const double surv_ch = n_ch - r;
    return surv_nch * (1.0 - terms.p_fnch) + surv_ch * terms.p_sch;
}

double l1(int k, int n_ch, const DisruptionChainTerms& terms, int n) {
    const auto [rlo, rhi] = r_range(k, n_ch, n);
    check_prob(terms.p_fnch, "p_fnch");
    check_prob(terms.p_sch, "p_sch");
    double acc = 0;
    for (int r = rlo; r <= rhi; ++r)
        acc += l0(k, r, n_ch, terms, n) * p_fch(r, k, n_ch, n);
    return acc;
}

double l2(int n_ch, const DisruptionChainTerms& terms, int n) {
    if (n < 1) throw InvalidParameter("n", "must be >= 1");
    if (n_ch < 0 || n_ch > n) throw InvalidParameter("n_ch", "must lie in [0, n]");
    check_prob(terms.p_fnch, "p_fnch");
    check_prob(terms.p_sch, "p_sch");
    const auto lf = logfact(n);
    return l2_impl(n_ch, terms.p_fnch, terms.p_sch, n, lf.data(), nullptr);
}

double l3_chain(int n, double p, std::span<const double> p_fnch_by_nch, double p_sch,
                std::span<double> dl3_dpf) {
    if (n < 1) throw InvalidParameter("n", "must be >= 1");
    check_prob(p, "p");
    check_prob(p_sch, "p_sch");
    if ((int)p_fnch_by_nch.size() != n + 1)
        throw InvalidParameter("p_fnch_by_nch", "needs one entry per CH count (n+1)");
    if (!dl3_dpf.empty() && (int)dl3_dpf.size() != n + 1)
        throw InvalidParameter("dl3_dpf", "must be empty or of size n+1");
    for (double v : p_fnch_by_nch) check_prob(v, "p_fnch_by_nch");

    const auto lf = logfact(n);
    const double logp = p > 0 ? std::log(p) : 0.0;
    const double log1mp = p < 1 ? std::log1p(-p) : 0.0;
    double acc = 0;
    for (int nc = 0; nc <= n; ++nc) {
        double w;
        if (p == 0.0)
            w = nc == 0 ? 1.0 : 0.0;
        else if (p == 1.0)
            w = nc == n ? 1.0 : 0.0;
        else
            w = std::exp(log_choose(lf.data(), n, nc) + nc * logp + (n - nc) * log1mp);
        double dl2 = 0;
        const double v = l2_impl(nc, p_fnch_by_nch[nc], p_sch, n, lf.data(),
                                 dl3_dpf.empty() ? nullptr : &dl2);
        acc += w * v;
        if (!dl3_dpf.empty()) dl3_dpf[nc] = w * dl2;
    }
    return acc;
}

double l3_chain_rescaled(int n, double p, std::span<const double> p_fnch_by_nch,
                         double p_sch, std::span<double> dl3_dpf) {
    if (n < 1) throw InvalidParameter("n", "must be >= 1");
    check_prob(p, "p");
    check_prob(p_sch, "p_sch");
    if ((int)p_fnch_by_nch.size() != n + 1)
        throw InvalidParameter("p_fnch_by_nch", "needs one entry per CH count (n+1)");
    if (!dl3_dpf.empty() && (int)dl3_dpf.size() != n + 1)
        throw InvalidParameter("dl3_dpf", "must be empty or of size n+1");
    for (double v : p_fnch_by_nch) check_prob(v, "p_fnch_by_nch");

    const auto lf = logfact(n);
    const double logp = p > 0 ? std::log(p) : 0.0;
    const double log1mp = p < 1 ? std::log1p(-p) : 0.0;
    for (double& d : dl3_dpf) d = 0;
    double total = 0;
    for (int nc = 0; nc <= n; ++nc) {
        double w;
        if (p == 0.0)
            w = nc == 0 ? 1.0 : 0.0;
        else if (p == 1.0)
            w = nc == n ? 1.0 : 0.0;
        else
            w = std::exp(log_choose(lf.data(), n, nc) + nc * logp + (n - nc) * log1mp);
        const int n_nch = n - nc;
        double acc = 0;
        for (int k = 1; k <= n; ++k) {
            const int rlo = std::max(0, k - n_nch);
            const int rhi = std::min(k, nc);
            const double lck = log_choose(lf.data(), n, k);
            for (int r = rlo; r <= rhi; ++r) {
                const double wh = std::exp(log_choose(lf.data(), nc, r) +
                                           log_choose(lf.data(), n_nch, k - r) - lck);
                const double surv_nch = n_nch - (k - r);
                const double surv_ch = nc - r;
                acc += (surv_nch * (1.0 - p_fnch_by_nch[nc - r]) + surv_ch * p_sch) * wh;
                if (!dl3_dpf.empty()) dl3_dpf[nc - r] -= w * surv_nch * wh / n;
            }
        }
        total += w * acc / n;
    }
    return total;
}

double l3_chain_approx(int n, double p, double p_fnch, double p_sch, double* dl3_dpf) {
    if (n < 1) throw InvalidParameter("n", "must be >= 1");
    check_prob(p, "p");
    check_prob(p_fnch, "p_fnch");
    check_prob(p_sch, "p_sch");
    const auto lf = logfact(n);
    return l2_impl(floored_count(n * p), p_fnch, p_sch, n, lf.data(), dl3_dpf);
}

double p_sch(const NetworkConfig& cfg, const QuadratureSpec& spec) {
    const NetworkConfig c = validate(cfg);
    const LinearPowers pw = linear_powers(c);
    QuadratureSpec s = spec;
    s.domain_half_width = c.grid_half_width;
    return integrate_mean_2d([&](Position r) { return p_link_ch_to_bs(r, pw); }, s);
}

double p_fnch_approx(const NetworkConfig& cfg, int n_ch, const QuadratureSpec& spec) {
    const NetworkConfig c = validate(cfg);
    if (n_ch < 0) throw InvalidParameter("n_ch", "must be >= 0");
    const LinearPowers pw = linear_powers(c);
    QuadratureSpec s = spec;
    s.domain_half_width = c.grid_half_width;
    const double relay_fail =
        integrate_mean_4d([&](Position j, Position i) { return p_relay_pair_fails(j, i, pw); }, s);
    const double direct_fail =
        integrate_mean_2d([&](Position j) { return -std::expm1(-bs_gain_threshold(j, pw)); }, s);
    return std::pow(relay_fail, n_ch) * direct_fail;
}

McIntegrationResult p_fnch_exact(const NetworkConfig& cfg, int n_ch, long samples,
                                 uint64_t seed) {
    const NetworkConfig c = validate(cfg);
    if (n_ch < 0) throw InvalidParameter("n_ch", "must be >= 0");
    const LinearPowers pw = linear_powers(c);
    const int dim = 2 * (n_ch + 1);
    std::vector<Position> chs(n_ch);
    auto integrand = [&](std::span<const double> pt) {
        const Position r_j{pt[0], pt[1]};
        for (int i = 0; i < n_ch; ++i) chs[i] = Position{pt[2 + 2 * i], pt[3 + 2 * i]};
        return p_fbe(r_j, chs, pw);
    };
    return mc_mean(integrand, dim, c.grid_half_width, samples,
                   substream_seed(seed, (uint64_t)n_ch));
}

namespace {

// Probability terms shared by the top-level quantities.
struct EngineTerms {
    double ps = 1;
    int f = 0;                    // floored CH count
    double pf_f = 0, se_f = 0;    // blackout probability at f
    std::vector<double> pf, se;   // per CH count (ExactMc l3 only)
};

EngineTerms build_terms(const NetworkConfig& c, FnchMethod method,
                        const AnalyticOptions& opts, bool need_all) {
    EngineTerms t;
    const double a = c.grid_half_width;
    t.ps = p_sch(c, {opts.quad_order_2d, a});
    t.f = floored_count(c.n_nodes * c.ch_probability);
    if (method == FnchMethod::Approximated) {
        const LinearPowers pw = linear_powers(c);
        const double relay_fail = integrate_mean_4d(
            [&](Position j, Position i) { return p_relay_pair_fails(j, i, pw); },
            {opts.quad_order_4d, a});
        const double direct_fail = integrate_mean_2d(
            [&](Position j) { return -std::expm1(-bs_gain_threshold(j, pw)); },
            {opts.quad_order_2d, a});
        t.pf_f = std::pow(relay_fail, t.f) * direct_fail;
        if (need_all) {
            t.pf.resize(c.n_nodes + 1);
            t.se.resize(c.n_nodes + 1, 0.0);
            for (int nc = 0; nc <= c.n_nodes; ++nc)
                t.pf[nc] = std::pow(relay_fail, nc) * direct_fail;
        }
    } else if (need_all) {
        t.pf.resize(c.n_nodes + 1);
        t.se.resize(c.n_nodes + 1);
        for (int nc = 0; nc <= c.n_nodes; ++nc) {
            const auto r = p_fnch_exact(c, nc, opts.exact_samples, opts.seed);
            t.pf[nc] = r.estimate;
            t.se[nc] = r.std_error;
        }
        t.pf_f = t.pf[t.f];
        t.se_f = t.se[t.f];
    } else {
        const auto r = p_fnch_exact(c, t.f, opts.exact_samples, opts.seed);
        t.pf_f = r.estimate;
        t.se_f = r.std_error;
    }
    return t;
}

// standard-operation count multipliers (NCH, CH)
std::pair<double, double> count_multipliers(const NetworkConfig& c, CountMode counts) {
    const double np = c.n_nodes * c.ch_probability;
    const double nn = c.n_nodes * (1.0 - c.ch_probability);
    if (counts == CountMode::Smooth) return {nn, np};
    return {(double)floored_count(nn), (double)floored_count(np)};
}

double n_espa_from(const NetworkConfig& c, CountMode counts, const EngineTerms& t) {
    const auto [a_nch, b_ch] = count_multipliers(c, counts);
    return a_nch * (1.0 - t.pf_f) + b_ch * t.ps;
}

}  // namespace

double n_espa(const NetworkConfig& cfg, AnalyticMode mode, const AnalyticOptions& opts) {
    const NetworkConfig c = validate(cfg);
    return n_espa_from(c, mode.counts, build_terms(c, mode.fnch, opts, false));
}

double l3(const NetworkConfig& cfg, AnalyticMode mode, const AnalyticOptions& opts) {
    const NetworkConfig c = validate(cfg);
    const bool exact = mode.fnch == FnchMethod::ExactMc;
    const EngineTerms t = build_terms(c, mode.fnch, opts, exact || opts.rescale_fnch);
    if (opts.rescale_fnch)
        return l3_chain_rescaled(c.n_nodes, c.ch_probability, t.pf, t.ps);
    if (exact) return l3_chain(c.n_nodes, c.ch_probability, t.pf, t.ps);
    return l3_chain_approx(c.n_nodes, c.ch_probability, t.pf_f, t.ps);
}

RobustnessEstimate robustness(const NetworkConfig& cfg, AnalyticMode mode,
                              const AnalyticOptions& opts) {
    const NetworkConfig c = validate(cfg);
    const int n = c.n_nodes;
    const bool exact = mode.fnch == FnchMethod::ExactMc;
    const EngineTerms t = build_terms(c, mode.fnch, opts, exact || opts.rescale_fnch);

    double l3v;
    std::vector<double> dl3(exact ? n + 1 : 0);
    double dl3_f_approx = 0;
    if (opts.rescale_fnch)
        l3v = l3_chain_rescaled(n, c.ch_probability, t.pf, t.ps,
                                exact ? std::span<double>(dl3) : std::span<double>());
    else if (exact)
        l3v = l3_chain(n, c.ch_probability, t.pf, t.ps, dl3);
    else
        l3v = l3_chain_approx(n, c.ch_probability, t.pf_f, t.ps, &dl3_f_approx);

    const double espa = n_espa_from(c, mode.counts, t);
    if (!(espa > 0))
        throw NoSuccessBaseline("expected standard-operation success count is zero");
    const double r = l3v / espa;

    // delta method through the chain; only the ExactMc route carries MC
    // uncertainty (quadrature terms are treated as exact)
    double var = 0;
    if (exact) {
        const double a_nch = count_multipliers(c, mode.counts).first;
        for (int nc = 0; nc <= n; ++nc) {
            double dr = dl3[nc] / espa;
            if (nc == t.f) dr += l3v * a_nch / (espa * espa);
            var += dr * dr * t.se[nc] * t.se[nc];
        }
    }

    RobustnessEstimate est;
    est.mean = r;
    est.std_error = std::sqrt(var);
    est.ci_lo = r - 1.96 * est.std_error;
    est.ci_hi = r + 1.96 * est.std_error;
    est.iterations = exact ? opts.exact_samples : 0;
    est.engine = exact ? "analytic-exact" : "analytic-approx";
    est.mode = std::string(exact ? "exact-mc" : "approx") + "/" +
               (mode.counts == CountMode::Floored ? "floored" : "smooth") +
               (opts.rescale_fnch ? "/rescaled-fnch" : "");
    est.alpha = c.path_loss_exponent;
    est.seed = exact ? opts.seed : 0;
    return est;
}

}  // namespace robustnet
