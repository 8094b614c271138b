#include <doctest.h>

#include <psalink/continuous.hpp>
#include <psalink/link_model.hpp>
#include <psalink/shannon.hpp>

#include <cmath>
#include <stdexcept>

using namespace psalink;
using doctest::Approx;

TEST_CASE("amplitude-restoration closed form") {
    SignalState at0 = state_amplitude_restoration(0.05, 0.0, 100.0);
    CHECK(at0.s_q == Approx(200.0));
    CHECK(at0.n_q == Approx(0.5));
    CHECK(at0.n_i == Approx(0.5));

    SignalState st = state_amplitude_restoration(0.05, 100.0, 100.0);
    CHECK(st.s_q == Approx(200.0));
    CHECK(st.s_i == Approx(0.0));
    CHECK(st.n_q == Approx(3.0).epsilon(1e-14));
    CHECK(st.n_i == Approx(0.2500113499824406).epsilon(1e-13));

    // Q noise grows linearly, I noise saturates at 1/4
    SignalState far = state_amplitude_restoration(0.05, 14000.0, 100.0);
    CHECK(far.n_q == Approx(0.5 * (1.0 + 700.0)).epsilon(1e-14));
    CHECK(far.n_i == Approx(0.25).epsilon(1e-12));

    CHECK_THROWS_AS(state_amplitude_restoration(-0.05, 1.0, 1.0), std::domain_error);
}

TEST_CASE("amplitude-restoration asymptote") {
    // alpha*L = 2000, nbar = 100
    CHECK(asymptotic_capacity_amplitude(0.05, 40000.0, 100.0) ==
          Approx(0.14426950408889636).epsilon(1e-14));
    SignalState st = state_amplitude_restoration(0.05, 40000.0, 100.0);
    const double exact = capacity_homodyne(st.s_q / st.n_q);
    CHECK(exact == Approx(0.13145711816233763).epsilon(1e-13));
    // asymptote bounds the exact value from above at long distance
    CHECK(asymptotic_capacity_amplitude(0.05, 40000.0, 100.0) > exact);
    // doubling the budget doubles the asymptote
    CHECK(asymptotic_capacity_amplitude(0.05, 40000.0, 200.0) ==
          Approx(2.0 * 0.14426950408889636).epsilon(1e-14));
}

TEST_CASE("power-restoration gain density") {
    GainProfile p = gain_profile_power(0.05, 100.0);
    CHECK(p.kind == GainProfile::Kind::power_restoration);
    CHECK(p.gamma(0.0) == Approx(0.05).epsilon(1e-14));
    // saturates below alpha: the state never needs full loss compensation
    CHECK(p.gamma(1e9) == Approx(0.049875466805381644).epsilon(1e-12));
    for (double l : {0.0, 10.0, 100.0, 1000.0})
        CHECK(p.gamma(l) <= 0.05 + 1e-15);
    // enormous budgets push the density back to plain loss compensation
    GainProfile big = gain_profile_power(0.05, 1e12);
    CHECK(big.gamma(50.0) == Approx(0.05).epsilon(1e-9));
    CHECK_THROWS_AS(gain_profile_power(0.05, 0.0), std::domain_error);
}

TEST_CASE("power-restoration closed-form trajectory") {
    ContinuousState at0 = exact_state_power(0.05, 0.0, 100.0);
    CHECK(at0.state.s_q == Approx(200.0));
    CHECK(at0.state.n_q == Approx(0.5));
    CHECK(at0.state.n_i == Approx(0.5));
    CHECK(at0.z_q == Approx(200.5));
    CHECK(at0.a == Approx(200.0));

    ContinuousState cs = exact_state_power(0.05, 500.0, 10.0);
    CHECK(cs.state.s_q == Approx(11.07915132368605).epsilon(1e-12));
    CHECK(cs.z_q == Approx(20.746950765959596).epsilon(1e-12));
    CHECK(cs.state.n_q == Approx(9.667799442273546).epsilon(1e-11));
    CHECK(cs.state.n_i == Approx(0.253049234040402).epsilon(1e-12));

    ContinuousState lo = exact_state_power(0.05, 100.0, 1.0);
    CHECK(lo.state.s_q == Approx(0.8643345087007043).epsilon(1e-12));
    CHECK(lo.z_q == Approx(2.7247356041346715).epsilon(1e-12));
    CHECK(lo.state.n_q == Approx(1.8604010954339674).epsilon(1e-11));
    CHECK(lo.state.n_i == Approx(0.27526439586532847).epsilon(1e-12));

    // total power is pinned to the launch power along the whole trajectory
    for (double l : {0.0, 1.0, 10.0, 100.0, 1000.0, 14000.0}) {
        ContinuousState c = exact_state_power(0.05, l, 100.0);
        CHECK(c.z_q + c.state.n_i == Approx(201.0).epsilon(1e-12));
        CHECK(c.state.n_q * c.state.n_i >= 0.25 * (1.0 - 1e-12));
    }
}

TEST_CASE("power-restoration capacity approximation and asymptote") {
    CHECK(capacity_power_approx(0.05, 0.0, 100.0) ==
          Approx(4.32372921322746).epsilon(1e-14));  // 1/2 log2(401)
    CHECK(capacity_power_approx(0.05, 2000.0, 100.0) ==
          Approx(1.0835529302426825).epsilon(1e-13));  // alpha*L = 100
    CHECK(asymptotic_capacity_power(0.05, 40000.0, 100.0) ==
          Approx(0.004909111492802711).epsilon(1e-13));  // alpha*L = 2000
    // the asymptote converges to the approximation at long distance
    const double ratio = capacity_power_approx(0.05, 40000.0, 100.0) /
                         asymptotic_capacity_power(0.05, 40000.0, 100.0);
    CHECK(ratio == Approx(1.0).epsilon(5e-3));
    CHECK(capacity_power_approx(0.05, 1.0, 0.0) == 0.0);
}

TEST_CASE("moderate-distance behaviour of the power capacity") {
    // tracks the crude strong-signal estimate 1/2 log2(4 nbar / (alpha L))
    // while alpha*L stays well below the budget scale
    const double nbar = 100.0;
    for (double al : {20.0, 50.0, 100.0}) {
        const double crude = 0.5 * std::log2(4.0 * nbar / al);
        const double full = capacity_power_approx(0.05, al / 0.05, nbar);
        CHECK(std::fabs(full - crude) / full < 0.10);
    }
}

TEST_CASE("strong-signal expansion of the power trajectory") {
    // nbar = 1000, alpha*l = 5
    SignalState approx = large_n_state_power(0.05, 100.0, 1000.0);
    ContinuousState exact = exact_state_power(0.05, 100.0, 1000.0);
    CHECK(approx.s_q == Approx(1997.7499886500175).epsilon(1e-13));
    CHECK(exact.state.s_q == Approx(1997.7520494824535).epsilon(1e-12));
    CHECK(std::fabs(approx.s_q - exact.state.s_q) / exact.state.s_q < 1e-4);
    CHECK(approx.n_q == Approx(3.0));
    CHECK(exact.state.n_q == Approx(2.997907928210452).epsilon(1e-10));
    CHECK(std::fabs(approx.n_q - exact.state.n_q) / exact.state.n_q < 1e-2);
    // at l = 0 the expansion is exact
    SignalState at0 = large_n_state_power(0.05, 0.0, 1000.0);
    CHECK(at0.s_q == Approx(2000.0));
    CHECK(at0.n_q == Approx(0.5));
    CHECK(at0.n_i == Approx(0.5));
    // Q-noise growth matches the amplitude regime at leading order
    SignalState amp = state_amplitude_restoration(0.05, 100.0, 1000.0);
    CHECK(approx.n_q == Approx(amp.n_q));
}

TEST_CASE("integrator reproduces a plain span") {
    GainProfile off;
    off.gamma = [](double) { return 0.0; };
    const double alpha = 0.05;
    const double length = std::log(2.0) / alpha;  // transmittance 1/2
    SignalState in = coherent_q_input(100.0);
    SignalState out = ode_integrate(off, in, alpha, length, 0.01);
    SignalState ref = propagate_span(in, 0.5);
    CHECK(out.s_q == Approx(ref.s_q).epsilon(1e-10));
    CHECK(out.n_q == Approx(ref.n_q).epsilon(1e-10));
    CHECK(out.n_i == Approx(ref.n_i).epsilon(1e-10));

    CHECK_THROWS_AS(ode_integrate(off, in, alpha, length, 0.0), std::domain_error);
    SignalState same = ode_integrate(off, in, alpha, 0.0, 0.01);
    CHECK(same.s_q == Approx(in.s_q));
}

TEST_CASE("integrator confirms the amplitude closed form") {
    const double alpha = 0.05, length = 100.0, nbar = 100.0;
    SignalState out = ode_integrate(gain_profile_amplitude(alpha),
                                    coherent_q_input(nbar), alpha, length, 0.01);
    SignalState ref = state_amplitude_restoration(alpha, length, nbar);
    CHECK(out.s_q == Approx(ref.s_q).epsilon(1e-8));
    CHECK(out.n_q == Approx(ref.n_q).epsilon(1e-8));
    CHECK(out.n_i == Approx(ref.n_i).epsilon(1e-8));
}

TEST_CASE("integrator confirms the power closed form and power pinning") {
    const double alpha = 0.05, length = 100.0, nbar = 100.0;
    SignalState out = ode_integrate(gain_profile_power(alpha, nbar),
                                    coherent_q_input(nbar), alpha, length, 0.01);
    ContinuousState ref = exact_state_power(alpha, length, nbar);
    CHECK(out.s_q == Approx(ref.state.s_q).epsilon(1e-8));
    CHECK(out.n_q == Approx(ref.state.n_q).epsilon(1e-7));
    CHECK(out.n_i == Approx(ref.state.n_i).epsilon(1e-8));
    // the integrated trajectory holds the launch power to integration accuracy
    CHECK(total_power(out) == Approx(2.0 * nbar + 1.0).epsilon(1e-8));
}
