#include "psalink/link_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace psalink {

void LinkPlan::validate() const {
    if (!(alpha >= 0.0))
        throw std::invalid_argument("LinkPlan: alpha must be >= 0");
    if (!(total_length > 0.0))
        throw std::invalid_argument("LinkPlan: total_length must be > 0");
    if (amp_positions.size() != amp_gains.size())
        throw std::invalid_argument("LinkPlan: positions/gains length mismatch");
    double prev = 0.0;
    for (std::size_t i = 0; i < amp_positions.size(); ++i) {
        const double l = amp_positions[i];
        if (!(l > prev) || !(l <= total_length))
            throw std::invalid_argument("LinkPlan: amp position " + std::to_string(i) +
                                        " not strictly increasing within (0, L]");
        if (!(amp_gains[i] > 0.0))
            throw std::invalid_argument("LinkPlan: amp gain " + std::to_string(i) +
                                        " must be > 0");
        prev = l;
    }
}

SignalState coherent_q_input(double nbar) {
    if (!(nbar >= 0.0))
        throw std::invalid_argument("coherent_q_input: nbar must be >= 0");
    return SignalState{2.0 * nbar, 0.0, 0.5, 0.5};
}

double span_transmittance(double alpha, double length) {
    if (!(alpha >= 0.0) || !(length >= 0.0))
        throw std::domain_error("span_transmittance: alpha and length must be >= 0");
    return std::exp(-alpha * length);
}

SignalState propagate_span(const SignalState& state, double tau) {
    if (!(tau > 0.0) || !(tau <= 1.0))
        throw std::domain_error("propagate_span: tau must lie in (0, 1]");
    const double vac = 0.5 * (1.0 - tau);  // vacuum mixed in by the loss
    return SignalState{tau * state.s_q, tau * state.s_i,
                       tau * state.n_q + vac, tau * state.n_i + vac};
}

SignalState apply_psa(const SignalState& state, double gain) {
    if (!(gain > 0.0))
        throw std::domain_error("apply_psa: gain must be > 0");
    return SignalState{gain * state.s_q, state.s_i / gain,
                       gain * state.n_q, state.n_i / gain};
}

namespace detail {

std::vector<double> span_transmittances(const LinkPlan& plan) {
    std::vector<double> taus;
    taus.reserve(plan.amp_positions.size() + 1);
    double prev = 0.0;
    for (double l : plan.amp_positions) {
        taus.push_back(span_transmittance(plan.alpha, l - prev));
        prev = l;
    }
    taus.push_back(span_transmittance(plan.alpha, plan.total_length - prev));
    return taus;
}

}  // namespace detail

SignalState propagate_link(const LinkPlan& plan, const SignalState& input) {
    plan.validate();
    const std::vector<double> taus = detail::span_transmittances(plan);
    SignalState st = input;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        st = propagate_span(st, taus[i]);
        if (i < plan.amp_gains.size())
            st = apply_psa(st, plan.amp_gains[i]);
    }
    return st;
}

SignalState propagate_link_closed_form(const LinkPlan& plan, const SignalState& input) {
    plan.validate();
    const std::vector<double> taus = detail::span_transmittances(plan);
    const std::vector<double>& g = plan.amp_gains;
    const std::size_t r = g.size();

    double tau_tot = 1.0, g_tot = 1.0;
    for (double t : taus) tau_tot *= t;
    for (double gi : g) g_tot *= gi;

    // Additive noise picked up along the chain: vacuum admixed in span i is
    // amplified by G_i and then rescaled by everything downstream of it.
    double add_q = 0.0, add_i = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        double down_q = 1.0, down_i = 1.0;
        for (std::size_t j = i + 1; j < r; ++j) {
            down_q *= g[j] * taus[j];
            down_i *= taus[j] / g[j];
        }
        const double mixed = 1.0 - taus[i];
        add_q += mixed * g[i] * down_q;
        add_i += mixed / g[i] * down_i;
    }
    const double tau_last = taus.back();
    add_q = 0.5 * tau_last * add_q + 0.5 * (1.0 - tau_last);
    add_i = 0.5 * tau_last * add_i + 0.5 * (1.0 - tau_last);

    const double xq2 = tau_tot * g_tot;  // power scale factor, Q
    const double xi2 = tau_tot / g_tot;  // power scale factor, I
    return SignalState{xq2 * input.s_q, xi2 * input.s_i,
                       xq2 * input.n_q + add_q, xi2 * input.n_i + add_i};
}

std::pair<double, double> additive_noise_of_link(const LinkPlan& plan) {
    const SignalState zero{0.0, 0.0, 0.0, 0.0};
    const SignalState out = propagate_link_closed_form(plan, zero);
    return {out.n_q, out.n_i};
}

double total_power(const SignalState& state) {
    return state.s_q + state.s_i + state.n_q + state.n_i;
}

}  // namespace psalink
