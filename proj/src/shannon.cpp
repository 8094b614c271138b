#include "psalink/shannon.hpp"

#include <cmath>
#include <stdexcept>

namespace psalink {

SnrPair snr(const SignalState& state) {
    if (!(state.n_q > 0.0) || !(state.n_i > 0.0))
        throw std::domain_error("snr: zero noise variance is unphysical");
    return SnrPair{state.s_q / state.n_q, state.s_i / state.n_i};
}

double capacity_homodyne(double snr_q) {
    if (!(snr_q >= 0.0))
        throw std::domain_error("capacity_homodyne: snr must be >= 0");
    // log1p keeps precision when the SNR is many orders below 1
    return 0.5 * std::log1p(snr_q) / M_LN2;
}

double capacity_dual_quadrature(const SnrPair& s) {
    return capacity_homodyne(s.snr_q) + capacity_homodyne(s.snr_i);
}

}  // namespace psalink
