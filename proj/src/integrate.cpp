#include "robustnet/integrate.hpp"

#include <cmath>
#include <numbers>

namespace robustnet {

namespace detail {

void check_quadrature(const QuadratureSpec& spec) {
    if (spec.order < 2) throw InvalidParameter("order", "quadrature order must be >= 2");
    if (!(spec.domain_half_width > 0) || !std::isfinite(spec.domain_half_width))
        throw InvalidParameter("domain_half_width", "must be positive and finite");
}

}  // namespace detail

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order) {
    if (order < 2) throw InvalidParameter("order", "quadrature order must be >= 2");
    const int n = order;
    std::vector<double> x(n), w(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-ish starting guess, then Newton on P_n
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            // p0 = P_n(z); derivative from the recurrence
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    if (n % 2 == 1) x[n / 2] = 0.0;  // centre node is exact
    return {x, w};
}

McIntegrationResult mc_mean(const std::function<double(std::span<const double>)>& f,
                            int dim, double half_width, long samples, uint64_t seed) {
    if (dim < 1) throw InvalidParameter("dim", "must be >= 1");
    if (!(half_width > 0) || !std::isfinite(half_width))
        throw InvalidParameter("half_width", "must be positive and finite");
    if (samples < 2) throw InvalidParameter("samples", "must be >= 2");

    Xoshiro256 rng(seed);
    std::vector<double> pt(dim);
    double sum = 0, sumsq = 0;
    for (long s = 0; s < samples; ++s) {
        for (int d = 0; d < dim; ++d) pt[d] = rng.uniform_sym(half_width);
        const double v = f(pt);
        sum += v;
        sumsq += v * v;
    }
    McIntegrationResult r;
    r.samples = samples;
    r.seed = seed;
    r.estimate = sum / samples;
    const double var = (sumsq - sum * sum / samples) / (samples - 1.0);
    r.std_error = std::sqrt(std::max(0.0, var) / samples);
    return r;
}

}  // namespace robustnet
