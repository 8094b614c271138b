#pragma once

#include "psalink/link_model.hpp"

namespace psalink {

struct SnrPair {
    double snr_q = 0.0;
    double snr_i = 0.0;
};

// Output signal-to-noise ratio per quadrature; domain error on zero noise.
SnrPair snr(const SignalState& state);

// Shannon-Hartley over both quadratures: 1/2 log2(1+snr_q) + 1/2 log2(1+snr_i).
double capacity_dual_quadrature(const SnrPair& s);

// Single-quadrature (homodyne) bound: 1/2 log2(1+snr_q).
double capacity_homodyne(double snr_q);

}  // namespace psalink
