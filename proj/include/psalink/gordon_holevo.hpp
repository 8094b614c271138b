#pragma once

#include <stdexcept>
#include <string>

#include "psalink/link_model.hpp"

namespace psalink {

// Diagonal single-mode Gaussian channel: output covariance = X S X + Y with
// X = diag(x1, x2) and Y = diag(y_q, y_i).
struct ChannelMatrices {
    double x1 = 1.0;
    double x2 = 1.0;
    double y_q = 0.0;
    double y_i = 0.0;
};

// Canonical three-parameter form sharing the channel's capacity:
// tau = det X, y = sqrt(det Y), omega the noise-asymmetry parameter.
struct FiducialParams {
    double tau = 1.0;
    double y = 0.0;
    double omega = 1.0;
};

enum class GhRegime { above_threshold, below_threshold, coherent_forced };

struct GhResult {
    double capacity = 0.0;
    GhRegime regime = GhRegime::above_threshold;
    double omega_in = 1.0;   // optimal input squeezing parameter
    double wbar_in = 1.0;    // optimal modulation-asymmetry parameter
    double m_out = 0.0;      // output symplectic-eigenvalue offset, unmodulated
    double mbar_out = 0.0;   // same for the modulated average state
};

enum class GhMode { optimal, coherent };

// Channel additive noise vanished in exactly one quadrature; the asymmetry
// parameter is undefined there.
class degenerate_channel_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The transcendental solve found no sign change; carries the scanned bracket.
class solve_error : public std::runtime_error {
public:
    solve_error(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), bracket_lo(lo), bracket_hi(hi) {}
    double bracket_lo;
    double bracket_hi;
};

// Thermal-state entropy g(x) = (x+1)log2(x+1) - x log2 x, bits.
double g_function(double x);

// g'(x) = log2((x+1)/x).
double g_prime(double x);

// Composed channel matrices of a link plan:
// x1 = sqrt(tau_tot*G_tot), x2 = sqrt(tau_tot/G_tot), Y from the additive noise.
ChannelMatrices channel_of_link(const LinkPlan& plan);

FiducialParams compute_fiducial(const ChannelMatrices& ch);

// Input energy separating the two analytic branches:
// (1/(2w))*(1 + (y/|tau|)*|1-w^2|) - 1/2.
double threshold_energy(const FiducialParams& f);

GhResult capacity_above_threshold(const FiducialParams& f, double nbar);

GhResult capacity_below_threshold(const FiducialParams& f, double nbar);

// Capacity restricted to coherent-state modulation (omega_in = 1).
double capacity_coherent(const FiducialParams& f, double nbar);

// Full dispatch: fiducial reduction, threshold test, branch selection.
GhResult gh_capacity(const ChannelMatrices& ch, double nbar, GhMode mode = GhMode::optimal);

}  // namespace psalink
