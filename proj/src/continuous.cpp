#include "psalink/continuous.hpp"

#include <cmath>
#include <stdexcept>

namespace psalink {

namespace {

struct Deriv {
    double s_q, s_i, n_q, n_i;
};

inline Deriv rhs(const SignalState& st, double gamma, double alpha) {
    return Deriv{(gamma - alpha) * st.s_q,
                 -(gamma + alpha) * st.s_i,
                 (gamma - alpha) * st.n_q + 0.5 * alpha,
                 -(gamma + alpha) * st.n_i + 0.5 * alpha};
}

inline SignalState shift(const SignalState& st, const Deriv& d, double h) {
    return SignalState{st.s_q + h * d.s_q, st.s_i + h * d.s_i,
                       st.n_q + h * d.n_q, st.n_i + h * d.n_i};
}

}  // namespace

SignalState ode_integrate(const GainProfile& profile, const SignalState& input,
                          double alpha, double length, double step) {
    if (!(step > 0.0))
        throw std::domain_error("ode_integrate: step must be > 0");
    if (!(alpha >= 0.0) || !(length >= 0.0))
        throw std::domain_error("ode_integrate: alpha and length must be >= 0");
    if (length == 0.0)
        return input;

    const auto nsteps = static_cast<std::size_t>(std::ceil(length / step - 1e-9));
    const double h = length / static_cast<double>(nsteps);
    SignalState st = input;
    double l = 0.0;
    for (std::size_t i = 0; i < nsteps; ++i) {
        const double g0 = profile.gamma(l);
        const double gm = profile.gamma(l + 0.5 * h);
        const double g1 = profile.gamma(l + h);
        const Deriv k1 = rhs(st, g0, alpha);
        const Deriv k2 = rhs(shift(st, k1, 0.5 * h), gm, alpha);
        const Deriv k3 = rhs(shift(st, k2, 0.5 * h), gm, alpha);
        const Deriv k4 = rhs(shift(st, k3, h), g1, alpha);
        st.s_q += h / 6.0 * (k1.s_q + 2.0 * k2.s_q + 2.0 * k3.s_q + k4.s_q);
        st.s_i += h / 6.0 * (k1.s_i + 2.0 * k2.s_i + 2.0 * k3.s_i + k4.s_i);
        st.n_q += h / 6.0 * (k1.n_q + 2.0 * k2.n_q + 2.0 * k3.n_q + k4.n_q);
        st.n_i += h / 6.0 * (k1.n_i + 2.0 * k2.n_i + 2.0 * k3.n_i + k4.n_i);
        l += h;
    }
    return st;
}

GainProfile gain_profile_amplitude(double alpha) {
    GainProfile p;
    p.kind = GainProfile::Kind::amplitude_restoration;
    p.gamma = [alpha](double) { return alpha; };
    return p;
}

SignalState state_amplitude_restoration(double alpha, double length, double nbar) {
    if (!(alpha >= 0.0) || !(length >= 0.0) || !(nbar >= 0.0))
        throw std::domain_error("state_amplitude_restoration: negative input");
    const double al = alpha * length;
    return SignalState{2.0 * nbar, 0.0, 0.5 * (1.0 + al),
                       0.25 * (1.0 + std::exp(-2.0 * al))};
}

double asymptotic_capacity_amplitude(double alpha, double length, double nbar) {
    return 2.0 * nbar / (alpha * length * M_LN2);
}

GainProfile gain_profile_power(double alpha, double nbar, double a_const) {
    if (!(nbar > 0.0))
        throw std::domain_error("gain_profile_power: nbar must be > 0");
    const double a = a_const < 0.0 ? 2.0 * nbar : a_const;
    GainProfile p;
    p.kind = GainProfile::Kind::power_restoration;
    p.gamma = [alpha, nbar, a](double l) {
        return 2.0 * alpha * nbar /
               std::sqrt(4.0 * nbar * nbar + 2.0 * nbar - a * std::exp(-2.0 * alpha * l));
    };
    return p;
}

ContinuousState exact_state_power(double alpha, double l, double nbar) {
    if (!(nbar > 0.0) || !(l >= 0.0) || !(alpha >= 0.0))
        throw std::domain_error("exact_state_power: require nbar > 0, alpha, l >= 0");

    const double n = nbar;
    ContinuousState cs;
    cs.a = 2.0 * n;
    if (l == 0.0) {
        cs.state = SignalState{2.0 * n, 0.0, 0.5, 0.5};
        cs.z_q = 2.0 * n + 0.5;
        return cs;
    }

    const double ee = std::exp(-2.0 * alpha * l);
    const double s = std::sqrt(4.0 * n * n + 2.0 * n - 2.0 * n * ee);
    const double zq = 0.5 * (1.0 + 2.0 * n + s);
    // n_i = (1 + 2n - s)/2 suffers cancellation at large n; rationalize.
    const double ni = 0.5 * (1.0 + 2.0 * n * (1.0 + ee)) / (1.0 + 2.0 * n + s);

    // s_q = 2n e^{-alpha l} [ (a-1)/(a+1) * (b+1)/(b-1) ]^p with
    // a = sqrt((1+2n)/(2n)), b = sqrt((1+2n)/(2n+1-ee)), p = sqrt(n/(4n+2)).
    // Both a-1 and b-1 vanish like e^{-2 alpha l} at large distance, so the
    // ratio is assembled in log space from cancellation-free pieces.
    const double a = std::sqrt((1.0 + 2.0 * n) / (2.0 * n));
    const double b = std::sqrt((1.0 + 2.0 * n) / (2.0 * n + 1.0 - ee));
    const double am1 = 1.0 / (std::sqrt(2.0 * n) * (std::sqrt(2.0 * n + 1.0) + std::sqrt(2.0 * n)));
    const double ln_bm1 = -2.0 * alpha * l -
        std::log(std::sqrt(2.0 * n + 1.0 - ee) *
                 (std::sqrt(1.0 + 2.0 * n) + std::sqrt(2.0 * n + 1.0 - ee)));
    const double log_ratio = std::log(am1) - std::log(a + 1.0) + std::log(b + 1.0) - ln_bm1;
    const double p = std::sqrt(n / (4.0 * n + 2.0));
    const double sq = 2.0 * n * std::exp(-alpha * l + p * log_ratio);

    cs.state = SignalState{sq, 0.0, zq - sq, ni};
    cs.z_q = zq;
    return cs;
}

double capacity_power_approx(double alpha, double length, double nbar) {
    if (!(alpha >= 0.0) || !(length >= 0.0) || !(nbar >= 0.0))
        throw std::domain_error("capacity_power_approx: negative input");
    if (nbar == 0.0)
        return 0.0;
    const double x = alpha * length / (4.0 * nbar + 1.0);
    const double ex = std::exp(-x);
    const double r = 4.0 * nbar * ex / (4.0 * nbar * (1.0 - ex) + 1.0);
    return 0.5 * std::log1p(r) / M_LN2;
}

double asymptotic_capacity_power(double alpha, double length, double nbar) {
    const double x = alpha * length / (4.0 * nbar + 1.0);
    return 2.0 * nbar / ((4.0 * nbar + 1.0) * M_LN2) * std::exp(-x);
}

SignalState large_n_state_power(double alpha, double l, double nbar) {
    const double al = alpha * l;
    const double ee = std::exp(-2.0 * al);
    return SignalState{2.0 * nbar - 0.5 * al + 0.25 * (1.0 - ee), 0.0,
                       0.5 * (1.0 + al), 0.25 * (1.0 + ee)};
}

}  // namespace psalink
