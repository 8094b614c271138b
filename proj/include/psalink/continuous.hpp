#pragma once

#include <functional>

#include "psalink/link_model.hpp"

namespace psalink {

// Distributed gain density gamma(l) [1/km] over the link.
struct GainProfile {
    enum class Kind { amplitude_restoration, power_restoration, custom };
    std::function<double(double)> gamma;
    Kind kind = Kind::custom;
};

// Closed-form state of the power-restoration trajectory at position l,
// together with the combined Q power z_q = s_q + n_q and the integration
// constant a fixed by the initial conditions (a = 2*nbar for coherent input).
struct ContinuousState {
    SignalState state;
    double z_q = 0.0;
    double a = 0.0;
};

// Fixed-step 4th-order integration of
//   ds_q/dl = (gamma-alpha) s_q        ds_i/dl = -(gamma+alpha) s_i
//   dn_q/dl = (gamma-alpha) n_q + a/2  dn_i/dl = -(gamma+alpha) n_i + a/2
// Serves as the independent oracle for every closed form below.
SignalState ode_integrate(const GainProfile& profile, const SignalState& input,
                          double alpha, double length, double step);

GainProfile gain_profile_amplitude(double alpha);

// Amplitude-restoration closed form: s_q = 2 nbar, n_q = (1+alpha*L)/2,
// n_i = (1+exp(-2 alpha L))/4.
SignalState state_amplitude_restoration(double alpha, double length, double nbar);

// Large-distance homodyne asymptote of the amplitude regime: 2 nbar/(alpha L ln 2).
double asymptotic_capacity_amplitude(double alpha, double length, double nbar);

// Optimal power-restoration gain density
//   gamma(l) = 2 alpha nbar / sqrt(4 nbar^2 + 2 nbar - a exp(-2 alpha l)),
// with a = 2*nbar for a coherent input (pass a_const to override).
GainProfile gain_profile_power(double alpha, double nbar, double a_const = -1.0);

// Closed-form power-restoration trajectory (coherent input), evaluated in log
// space so extreme alpha*l and nbar stay representable.
ContinuousState exact_state_power(double alpha, double l, double nbar);

// Homodyne capacity approximation of the power regime,
//   1/2 log2(1 + 4 nbar e^{-x} / (4 nbar (1-e^{-x}) + 1)), x = alpha L/(4 nbar + 1).
double capacity_power_approx(double alpha, double length, double nbar);

// Large-distance asymptote of capacity_power_approx.
double asymptotic_capacity_power(double alpha, double length, double nbar);

// Strong-signal expansion of the power-restoration state.
SignalState large_n_state_power(double alpha, double l, double nbar);

}  // namespace psalink
