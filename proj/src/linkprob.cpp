#include "robustnet/linkprob.hpp"

#include <cmath>

namespace robustnet {

LinearPowers linear_powers(const NetworkConfig& cfg) {
    LinearPowers pw;
    pw.p_t = dbm_to_linear(cfg.p_tx_node_dbm);
    pw.p_b = dbm_to_linear(cfg.p_tx_bs_dbm);
    pw.p_th = dbm_to_linear(cfg.p_threshold_dbm);
    pw.alpha = cfg.path_loss_exponent;
    return pw;
}

double p_link_nch_to_ch(const Position& r_j, const Position& r_i, const LinearPowers& pw) {
    return std::exp(-relay_gain_threshold(r_j, r_i, pw));
}

double p_link_ch_to_bs(const Position& r_i, const LinearPowers& pw) {
    return std::exp(-bs_gain_threshold(r_i, pw));
}

double p_link_nch_to_bs(const Position& r_j, const LinearPowers& pw) {
    return std::exp(-bs_gain_threshold(r_j, pw));
}

double p_relay_pair_fails(const Position& r_j, const Position& r_i, const LinearPowers& pw) {
    // complement of independent relay and CH-BS links both existing; the two
    // exponents fold into one exp
    return -std::expm1(-(relay_gain_threshold(r_j, r_i, pw) + bs_gain_threshold(r_i, pw)));
}

double p_fbe(const Position& r_j, std::span<const Position> ch_positions,
             const LinearPowers& pw) {
    double prod = 1.0;
    for (const Position& r_i : ch_positions) prod *= p_relay_pair_fails(r_j, r_i, pw);
    return prod * -std::expm1(-bs_gain_threshold(r_j, pw));
}

}  // namespace robustnet
