#pragma once

#include <utility>
#include <vector>

namespace psalink {

// Per-quadrature second moments of the field at one point in the link.
// s_* is the ensemble power of the modulation, n_* the noise variance.
// Units are photons; the vacuum contributes 1/2 per quadrature.
struct SignalState {
    double s_q = 0.0;
    double s_i = 0.0;
    double n_q = 0.5;
    double n_i = 0.5;
};

// Physical layout of a multispan link: fiber attenuation alpha [1/km],
// total length [km], and R phase-sensitive amplifiers at strictly
// increasing positions in (0, total_length] with gains G_i > 0.
// The segment after the last amplifier is always a real span (possibly
// of zero length when an amplifier sits exactly at the end).
struct LinkPlan {
    double alpha = 0.0;
    double total_length = 0.0;
    std::vector<double> amp_positions;
    std::vector<double> amp_gains;

    // throws std::invalid_argument on any violated invariant
    void validate() const;
};

// Mean photon number constraint of the input ensemble: s_q + s_i = 2*nbar.
struct EnergyBudget {
    double nbar = 0.0;
};

// Coherent ensemble putting the whole budget into the Q quadrature.
SignalState coherent_q_input(double nbar);

// exp(-alpha*length); domain error on negative arguments.
double span_transmittance(double alpha, double length);

// One lossy span: s -> tau*s, n -> tau*n + (1-tau)/2 in both quadratures.
SignalState propagate_span(const SignalState& state, double tau);

// Noiseless phase-sensitive amplifier: Q powers scaled by G, I powers by 1/G.
SignalState apply_psa(const SignalState& state, double gain);

// Fold of propagate_span / apply_psa over the whole plan, final span included.
SignalState propagate_link(const LinkPlan& plan, const SignalState& input);

// Same map evaluated through the closed-form product/sum expressions;
// used to cross-check the fold.
SignalState propagate_link_closed_form(const LinkPlan& plan, const SignalState& input);

// The channel's own additive noise per quadrature (output noise for a
// hypothetical zero-noise, zero-signal input).
std::pair<double, double> additive_noise_of_link(const LinkPlan& plan);

// s_q + s_i + n_q + n_i
double total_power(const SignalState& state);

namespace detail {
// Span transmittances tau_1..tau_{R+1} derived from the plan geometry.
std::vector<double> span_transmittances(const LinkPlan& plan);
}  // namespace detail

}  // namespace psalink
