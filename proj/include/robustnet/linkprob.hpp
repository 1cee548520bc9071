#pragma once
// Single-link statistics under Rayleigh fading.
//
// A link carrying transmit power P over distance d exists when the unit-mean
// exponential power gain h clears the fade threshold z = P_th * d^alpha / P,
// which happens with probability exp(-z).  Node-to-node links use the node
// power, both directions of the base-station link use the BS power (downlink
// budget).  The BS sits at the origin.

#include <span>

#include "robustnet/model.hpp"

namespace robustnet {

// Transmit/threshold powers in linear mW plus the path-loss exponent.
struct LinearPowers {
    double p_t = 0;    // node transmit power
    double p_b = 0;    // base-station transmit power
    double p_th = 0;   // decode threshold
    double alpha = 3;  // path-loss exponent
};

LinearPowers linear_powers(const NetworkConfig& cfg);

// d^alpha from the squared distance, with fast paths for common exponents.
inline double pow_alpha(double d2, double alpha) {
    if (alpha == 3.0) return d2 * std::sqrt(d2);
    if (alpha == 2.0) return d2;
    if (alpha == 4.0) return d2 * d2;
    return d2 == 0 ? 0.0 : std::pow(d2, 0.5 * alpha);
}

// Fade threshold a gain must clear for the NCH -> CH link.
inline double relay_gain_threshold(const Position& r_j, const Position& r_i,
                                   const LinearPowers& pw) {
    const double dx = r_j.x - r_i.x, dy = r_j.y - r_i.y;
    return pw.p_th * pow_alpha(dx * dx + dy * dy, pw.alpha) / pw.p_t;
}

// Fade threshold for either direction of a node <-> BS link.
inline double bs_gain_threshold(const Position& r, const LinearPowers& pw) {
    return pw.p_th * pow_alpha(r.x * r.x + r.y * r.y, pw.alpha) / pw.p_b;
}

// Existence probabilities of the three link kinds.
double p_link_nch_to_ch(const Position& r_j, const Position& r_i, const LinearPowers& pw);
double p_link_ch_to_bs(const Position& r_i, const LinearPowers& pw);
double p_link_nch_to_bs(const Position& r_j, const LinearPowers& pw);

// Probability that the relay pair through CH i is unusable for NCH j:
// 1 - exp(-(z_relay + z_chbs)), i.e. the complement of both links existing.
double p_relay_pair_fails(const Position& r_j, const Position& r_i, const LinearPowers& pw);

// Conditional blackout probability of NCH j given fixed CH positions: every
// relay pair fails and the direct BS link fails.  Empty CH list leaves the
// direct-link factor alone.
double p_fbe(const Position& r_j, std::span<const Position> ch_positions,
             const LinearPowers& pw);

}  // namespace robustnet
