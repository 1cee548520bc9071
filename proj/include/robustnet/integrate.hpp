#pragma once
// Normalized-mean integration kernels over the deployment square.
//
// Both routes compute (1/(2a)^d) * Integral of f over [-a, a]^d, i.e. the
// mean of f under a uniformly distributed point.  The quadrature route uses
// tensor-product Gauss-Legendre rules (positive weights, so means of bounded
// integrands stay inside the integrand's bounds); the Monte Carlo route is
// bit-reproducible for a fixed (samples, seed) pair.

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "robustnet/model.hpp"
#include "robustnet/rng.hpp"

namespace robustnet {

struct QuadratureSpec {
    int order = 32;               // points per dimension, >= 2
    double domain_half_width = 1;  // a
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
// Weights sum to 2.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order);

struct McIntegrationResult {
    double estimate = 0;
    double std_error = 0;
    long samples = 0;
    uint64_t seed = 0;
};

namespace detail {
void check_quadrature(const QuadratureSpec& spec);
}

// Mean of f over [-a, a]^2.
template <class F>
double integrate_mean_2d(F&& f, const QuadratureSpec& spec) {
    detail::check_quadrature(spec);
    const auto [x, w] = gauss_legendre(spec.order);
    const double a = spec.domain_half_width;
    double acc = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double row = 0;
        for (size_t j = 0; j < x.size(); ++j)
            row += w[j] * f(Position{a * x[i], a * x[j]});
        acc += w[i] * row;
    }
    return acc / 4.0;  // weights sum to 2 per dimension
}

// Mean of f over [-a, a]^4, f taking two planar points.
template <class F>
double integrate_mean_4d(F&& f, const QuadratureSpec& spec) {
    detail::check_quadrature(spec);
    const auto [x, w] = gauss_legendre(spec.order);
    const double a = spec.domain_half_width;
    const size_t n = x.size();
    double acc = 0;
    for (size_t i = 0; i < n; ++i) {
        double acc_i = 0;
        for (size_t j = 0; j < n; ++j) {
            double acc_j = 0;
            for (size_t k = 0; k < n; ++k) {
                double acc_k = 0;
                for (size_t l = 0; l < n; ++l)
                    acc_k += w[l] * f(Position{a * x[i], a * x[j]},
                                      Position{a * x[k], a * x[l]});
                acc_j += w[k] * acc_k;
            }
            acc_i += w[j] * acc_j;
        }
        acc += w[i] * acc_i;
    }
    return acc / 16.0;
}

// Monte Carlo mean of f over [-a, a]^dim with a fixed accumulation order.
// f receives the sample point as a dim-long span.
McIntegrationResult mc_mean(const std::function<double(std::span<const double>)>& f,
                            int dim, double half_width, long samples, uint64_t seed);

}  // namespace robustnet
