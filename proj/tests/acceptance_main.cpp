// Acceptance gate: one check per line, nonzero exit if any check fails.
// Every expected value is either an analytic anchor or cross-validated
// against an independent numerical oracle inside the check itself.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <psalink/continuous.hpp>
#include <psalink/gordon_holevo.hpp>
#include <psalink/link_model.hpp>
#include <psalink/montecarlo.hpp>
#include <psalink/optimizer.hpp>
#include <psalink/shannon.hpp>

using namespace psalink;

namespace {

using clock_type = std::chrono::steady_clock;

bool g_all_pass = true;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

void report(int idx, const char* name, bool pass, const std::string& detail,
            double elapsed_ms, double limit_ms) {
    const bool in_time = elapsed_ms < limit_ms;
    const bool ok = pass && in_time;
    std::printf("[%s] %02d %-24s %s  (%.1f ms, limit %.0f ms%s)\n", ok ? "PASS" : "FAIL",
                idx, name, detail.c_str(), elapsed_ms, limit_ms,
                in_time ? "" : " EXCEEDED");
    g_all_pass = g_all_pass && ok;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double rel_err(double a, double b) {
    const double m = std::max(std::fabs(a), std::fabs(b));
    return m == 0.0 ? 0.0 : std::fabs(a - b) / m;
}

double max_state_rel(const SignalState& a, const SignalState& b) {
    return std::max({rel_err(a.s_q, b.s_q), rel_err(a.s_i, b.s_i),
                     rel_err(a.n_q, b.n_q), rel_err(a.n_i, b.n_i)});
}

ChannelMatrices pure_loss_channel(double tau) {
    const double x = std::sqrt(tau);
    return ChannelMatrices{x, x, 0.5 * (1.0 - tau), 0.5 * (1.0 - tau)};
}

// Gaussian channel of the continuous amplitude-restoration link: the Q signal
// is preserved, the I signal decays, and the additive parts follow the
// closed-form output noise.
ChannelMatrices continuous_amplitude_channel(double al) {
    const double e2 = std::exp(-2.0 * al);
    return ChannelMatrices{1.0, std::exp(-al), 0.5 * al, 0.25 * (1.0 - e2)};
}

LinkPlan equal_amp_plan(double alpha, double length, int amps) {
    LinkPlan plan;
    plan.alpha = alpha;
    plan.total_length = length;
    plan.amp_positions = equal_spacing_positions(amps, length);
    plan.amp_gains = gains_amplitude_restoration(plan.amp_positions, alpha);
    return plan;
}

int worker_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 16u));
}

// ---------------------------------------------------------------------------

void check_01_input_snr() {
    const auto t0 = clock_type::now();
    const SnrPair s = snr(coherent_q_input(100.0));
    const double db = 10.0 * std::log10(s.snr_q);
    const double elapsed = ms_since(t0);
    const bool pass = s.snr_q == 400.0 && std::fabs(db - 26.02) <= 0.1;
    report(1, "input-snr-anchor", pass,
           fmt("snr_q = %.0f = %.4f dB (target 26.02 +/- 0.1 dB)", s.snr_q, db),
           elapsed, 1.0);
}

void check_02_pure_loss_collapse() {
    const auto t0 = clock_type::now();
    double worst = 0.0;
    for (double tau : {0.01, 0.1, 0.5, 0.9, 1.0}) {
        for (double nbar : {0.1, 1.0, 10.0, 100.0}) {
            const ChannelMatrices ch =
                tau < 1.0 ? pure_loss_channel(tau) : ChannelMatrices{1.0, 1.0, 0.0, 0.0};
            const double got = gh_capacity(ch, nbar).capacity;
            worst = std::max(worst, std::fabs(got - g_function(tau * nbar)));
        }
    }
    report(2, "pure-loss-collapse", worst < 1e-10,
           fmt("worst |C - g(tau nbar)| = %.3g over 20 channels (tol 1e-10)", worst),
           ms_since(t0), 1000.0);
}

void check_03_crossover() {
    const auto t0 = clock_type::now();
    const double alpha = 0.05, nbar = 100.0;
    auto excess = [&](double length) {
        const double al = alpha * length;
        const double psa =
            gh_capacity(continuous_amplitude_channel(al), nbar, GhMode::coherent).capacity;
        const double bare = gh_capacity(pure_loss_channel(std::exp(-al)), nbar).capacity;
        return psa - bare;
    };
    bool pass = true;
    double last_short = 0.0, first_long = 0.0;
    for (double length : {10.0, 20.0, 30.0, 40.0, 50.0}) {
        const double e = excess(length);
        if (length == 50.0) last_short = e;
        pass = pass && e <= 0.0;
    }
    for (double length : {90.0, 100.0, 120.0, 150.0, 200.0, 300.0, 500.0, 1000.0}) {
        const double e = excess(length);
        if (length == 90.0) first_long = e;
        pass = pass && e > 0.0;
    }
    report(3, "amplification-crossover", pass,
           fmt("excess at 50 km = %.3f <= 0, at 90 km = %.3f > 0", last_short, first_long),
           ms_since(t0), 10000.0);
}

void check_04_large_noise() {
    const auto t0 = clock_type::now();
    double worst = 0.0;
    bool precondition = true;
    int points = 0;
    for (double nbar : {50.0, 100.0, 200.0, 400.0, 1000.0}) {
        for (double al : {99.0, 120.0, 150.0, 200.0, 260.0, 330.0, 420.0, 530.0, 650.0, 700.0}) {
            const ChannelMatrices ch = continuous_amplitude_channel(al);
            const double nq_out = 0.5 * (1.0 + al);
            precondition = precondition && nq_out >= 50.0;
            const double coh = gh_capacity(ch, nbar, GhMode::coherent).capacity;
            const double hom = capacity_homodyne(2.0 * nbar / nq_out);
            worst = std::max(worst, std::fabs(coh - hom) / coh);
            ++points;
        }
    }
    report(4, "large-noise-convergence", precondition && worst < 0.01,
           fmt("worst |C_coh - C_hom|/C_coh = %.4f%% over %d points (tol 1%%)",
               100.0 * worst, points),
           ms_since(t0), 10000.0);
}

void check_05_closed_forms_vs_ode() {
    const auto t0 = clock_type::now();
    const double alpha = 0.05, step = 0.01;
    double worst_closed = 0.0, worst_self = 0.0;
    for (double length : {1.0, 10.0, 100.0, 1000.0, 2000.0}) {
        for (double nbar : {1.0, 10.0, 100.0}) {
            const SignalState in = coherent_q_input(nbar);

            const GainProfile pa = gain_profile_amplitude(alpha);
            const SignalState oa = ode_integrate(pa, in, alpha, length, step);
            const SignalState oa2 = ode_integrate(pa, in, alpha, length, 0.5 * step);
            worst_self = std::max(worst_self, max_state_rel(oa, oa2));
            worst_closed = std::max(
                worst_closed,
                max_state_rel(oa, state_amplitude_restoration(alpha, length, nbar)));

            const GainProfile pp = gain_profile_power(alpha, nbar);
            const SignalState op = ode_integrate(pp, in, alpha, length, step);
            const SignalState op2 = ode_integrate(pp, in, alpha, length, 0.5 * step);
            worst_self = std::max(worst_self, max_state_rel(op, op2));
            worst_closed = std::max(
                worst_closed, max_state_rel(op, exact_state_power(alpha, length, nbar).state));
        }
    }
    report(5, "closed-forms-vs-ode", worst_closed < 1e-6 && worst_self < 1e-6,
           fmt("worst closed-vs-RK4 rel = %.3g (tol 1e-6), step-halving drift = %.3g",
               worst_closed, worst_self),
           ms_since(t0), 30000.0);
}

void check_06_asymptote_saturation() {
    const auto t0 = clock_type::now();
    const double alpha = 0.05;
    const std::vector<double> als{500.0, 750.0, 1000.0, 1250.0, 1500.0, 1750.0, 2000.0};
    bool pass = true;
    double amp_at_2000 = 0.0, pow_at_2000 = 0.0;
    for (double nbar : {10.0, 100.0}) {
        double prev_amp = 0.0, prev_pow = 0.0;
        for (double al : als) {
            const double length = al / alpha;
            const SignalState st = state_amplitude_restoration(alpha, length, nbar);
            const double amp_exact = capacity_homodyne(st.s_q / st.n_q);
            const double amp_asym = asymptotic_capacity_amplitude(alpha, length, nbar);
            double ra = amp_exact / amp_asym;
            ra = std::min(ra, 1.0 / ra);  // fold: saturation from either side

            const double pow_exact = capacity_power_approx(alpha, length, nbar);
            const double pow_asym = asymptotic_capacity_power(alpha, length, nbar);
            double rp = pow_exact / pow_asym;
            rp = std::min(rp, 1.0 / rp);

            pass = pass && ra >= prev_amp - 1e-12 && rp >= prev_pow - 1e-12;
            prev_amp = ra;
            prev_pow = rp;
            if (al == 2000.0) {
                pass = pass && ra >= 0.9 && ra <= 1.0 + 1e-12;
                pass = pass && rp >= 0.9 && rp <= 1.0 + 1e-12;
                if (nbar == 100.0) {
                    amp_at_2000 = ra;
                    pow_at_2000 = rp;
                }
            }
        }
    }
    report(6, "asymptote-saturation", pass,
           fmt("ratios at alpha*L=2000 (nbar=100): amplitude %.4f, power %.4f in [0.9, 1]",
               amp_at_2000, pow_at_2000),
           ms_since(t0), 10000.0);
}

void check_07_regime_equivalence() {
    const auto t0 = clock_type::now();
    const double alpha = 0.05, nbar = 100.0;
    auto gap_at = [&](double al) {
        const SignalState amp = state_amplitude_restoration(alpha, al / alpha, nbar);
        const double ca = capacity_homodyne(amp.s_q / amp.n_q);
        const SignalState pow = exact_state_power(alpha, al / alpha, nbar).state;
        const double cp = capacity_homodyne(pow.s_q / pow.n_q);
        return std::fabs(ca - cp) / ca;
    };
    double worst_short = 0.0;
    for (double al : {1.0, 5.0, 10.0, 20.0, 50.0, 100.0})
        worst_short = std::max(worst_short, gap_at(al));
    const double far_gap = gap_at(2000.0);
    const bool pass = worst_short < 0.01 && far_gap > 0.10;
    report(7, "regime-equivalence", pass,
           fmt("max gap for alpha*L<=100 = %.4f%% (required < 1%%), gap at 2000 = %.1f%%",
               100.0 * worst_short, 100.0 * far_gap),
           ms_since(t0), 10000.0);
}

void check_08_discrete_to_continuous() {
    const auto t0 = clock_type::now();
    const LinkPlan plan = equal_amp_plan(0.05, 100.0, 1000);
    const SignalState out = propagate_link(plan, coherent_q_input(100.0));
    const double target = 0.5 * (1.0 + 0.05 * 100.0);
    const double rel = std::fabs(out.n_q - target) / target;
    report(8, "discrete-to-continuous", rel < 0.01,
           fmt("R=1000 N^Q_out = %.6f vs %.1f, rel = %.3f%% (tol 1%%)", out.n_q, target,
               100.0 * rel),
           ms_since(t0), 1000.0);
}

// Exhaustive grid oracle for the power-restoration optimizer.
double grid_best_r1(double alpha, double length, double nbar) {
    const SignalState in = coherent_q_input(nbar);
    const double budget = total_power(in);
    double best = 0.0;
    for (int ip = 1; ip < 200; ++ip) {
        const double l1 = length * ip / 200.0;
        const SignalState st = propagate_span(in, span_transmittance(alpha, l1));
        const double a = st.s_q + st.n_q, b = st.s_i + st.n_i;
        const double gmax = std::max(
            1.0, (budget + std::sqrt(std::max(0.0, budget * budget - 4.0 * a * b))) / (2.0 * a));
        const double tau2 = span_transmittance(alpha, length - l1);
        for (int ig = 0; ig <= 200; ++ig) {
            const double g = std::exp(std::log(gmax) * ig / 200.0);
            const SignalState amp = apply_psa(st, g);
            const SignalState out = propagate_span(amp, tau2);
            best = std::max(best, capacity_homodyne(out.s_q / out.n_q));
        }
    }
    return best;
}

double grid_best_r2(double alpha, double length, double nbar) {
    const SignalState in = coherent_q_input(nbar);
    const double budget = total_power(in);
    const int np = 60, nf = 40;
    double best = 0.0;
    for (int i = 1; i <= np; ++i) {
        for (int j = i + 1; j <= np + 1; ++j) {
            const double l1 = length * i / (np + 2);
            const double l2 = length * j / (np + 2);
            const SignalState s1 = propagate_span(in, span_transmittance(alpha, l1));
            const double a1 = s1.s_q + s1.n_q, b1 = s1.s_i + s1.n_i;
            const double g1max = std::max(
                1.0,
                (budget + std::sqrt(std::max(0.0, budget * budget - 4.0 * a1 * b1))) / (2.0 * a1));
            const double tau12 = span_transmittance(alpha, l2 - l1);
            const double tau2e = span_transmittance(alpha, length - l2);
            for (int fi = 0; fi <= nf; ++fi) {
                const double g1 = std::exp(std::log(g1max) * fi / nf);
                const SignalState s2 = propagate_span(apply_psa(s1, g1), tau12);
                const double a2 = s2.s_q + s2.n_q, b2 = s2.s_i + s2.n_i;
                const double g2max = std::max(
                    1.0, (budget + std::sqrt(std::max(0.0, budget * budget - 4.0 * a2 * b2))) /
                             (2.0 * a2));
                for (int fj = 0; fj <= nf; ++fj) {
                    const double g2 = std::exp(std::log(g2max) * fj / nf);
                    const SignalState out = propagate_span(apply_psa(s2, g2), tau2e);
                    best = std::max(best, capacity_homodyne(out.s_q / out.n_q));
                }
            }
        }
    }
    return best;
}

void check_09_optimizer_vs_grid() {
    const auto t0 = clock_type::now();
    const double alpha = 0.05, length = 100.0, nbar = 100.0;
    OptimizationProblem prob;
    prob.alpha = alpha;
    prob.total_length = length;
    prob.budget.nbar = nbar;
    prob.regime = AmpRegime::power_restoration;
    prob.objective = Objective::homodyne;
    prob.positions = PositionMode::free_positions;

    prob.amp_count = 1;
    const double opt1 = optimize(prob).capacity;
    const double grid1 = grid_best_r1(alpha, length, nbar);
    const double gap1 = std::fabs(opt1 - grid1) / grid1;

    prob.amp_count = 2;
    const double opt2 = optimize(prob).capacity;
    const double grid2 = grid_best_r2(alpha, length, nbar);
    const double gap2 = std::fabs(opt2 - grid2) / grid2;

    report(9, "optimizer-vs-grid", gap1 < 1e-3 && gap2 < 1e-3,
           fmt("R=1 gap %.3g, R=2 gap %.3g (tol 1e-3); C = %.6f / %.6f", gap1, gap2, opt1,
               opt2),
           ms_since(t0), 60000.0);
}

void check_10_monte_carlo() {
    const auto t0 = clock_type::now();
    const LinkPlan plan = equal_amp_plan(0.05, 100.0, 10);
    const SignalState in = coherent_q_input(100.0);
    const SignalState exact = propagate_link(plan, in);
    const int threads = worker_threads();
    int passed = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const McEstimate mc = simulate_link(plan, in, 1000000, seed, threads);
        auto within = [&](double est, double se, double truth) {
            return std::fabs(est - truth) <= 3.0 * se;
        };
        const bool ok = within(mc.estimate.s_q, mc.std_error.s_q, exact.s_q) &&
                        within(mc.estimate.s_i, mc.std_error.s_i, exact.s_i) &&
                        within(mc.estimate.n_q, mc.std_error.n_q, exact.n_q) &&
                        within(mc.estimate.n_i, mc.std_error.n_i, exact.n_i);
        if (ok) ++passed;
    }
    report(10, "monte-carlo-consistency", passed >= 99,
           fmt("%d/100 seeds inside 3-sigma on all four variances (need >= 99)", passed),
           ms_since(t0), 60000.0);
}

void check_11_hierarchy_and_continuity() {
    const auto t0 = clock_type::now();
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ua(0.01, 0.1), ul(10.0, 300.0), un(-1.0, 2.4),
        ug(0.0, 1.0), uni(0.0, 1.0);
    std::uniform_int_distribution<int> ur(0, 8);

    double worst_slack = 0.0;  // most negative ordering violation
    double worst_jump = 0.0;
    int continuity_checked = 0;
    bool solver_ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        const double alpha = ua(rng), length = ul(rng);
        const double nbar = std::pow(10.0, un(rng));
        const int amps = ur(rng);
        const bool restore = uni(rng) < 0.5;
        LinkPlan plan;
        plan.alpha = alpha;
        plan.total_length = length;
        const double spacing = length / (amps + 1);
        for (int i = 1; i <= amps; ++i) {
            plan.amp_positions.push_back(i * spacing);
            const double scale = restore ? 1.0 : ug(rng);
            plan.amp_gains.push_back(std::exp(scale * alpha * spacing));
        }

        const ChannelMatrices ch = channel_of_link(plan);
        const double hom =
            capacity_homodyne(snr(propagate_link(plan, coherent_q_input(nbar))).snr_q);
        const double coh = gh_capacity(ch, nbar, GhMode::coherent).capacity;
        const double opt = gh_capacity(ch, nbar, GhMode::optimal).capacity;
        worst_slack = std::min({worst_slack, coh - hom, opt - coh});

        FiducialParams f = compute_fiducial(ch);
        if (f.omega > 1.0)
            f.omega = 1.0 / f.omega;
        const double thr = threshold_energy(f);
        if (thr > 1e-4 && thr < 1e6) {
            try {
                const double below =
                    capacity_below_threshold(f, thr * (1.0 - 1e-9)).capacity;
                const double above =
                    capacity_above_threshold(f, thr * (1.0 + 1e-9)).capacity;
                worst_jump = std::max(worst_jump, std::fabs(above - below));
                ++continuity_checked;
            } catch (const solve_error&) {
                solver_ok = false;
            }
        }
    }
    const bool pass = worst_slack >= -1e-9 && worst_jump < 1e-6 && solver_ok;
    report(11, "hierarchy-and-continuity", pass,
           fmt("worst ordering slack %.3g (>= -1e-9), worst threshold jump %.3g over %d "
               "checks (tol 1e-6)",
               worst_slack, worst_jump, continuity_checked),
           ms_since(t0), 60000.0);
}

}  // namespace

int main() {
    std::printf("acceptance checks\n-----------------\n");
    check_01_input_snr();
    check_02_pure_loss_collapse();
    check_03_crossover();
    check_04_large_noise();
    check_05_closed_forms_vs_ode();
    check_06_asymptote_saturation();
    check_07_regime_equivalence();
    check_08_discrete_to_continuous();
    check_09_optimizer_vs_grid();
    check_10_monte_carlo();
    check_11_hierarchy_and_continuity();
    std::printf("-----------------\n%s\n", g_all_pass ? "all acceptance checks passed"
                                                      : "ACCEPTANCE FAILURES PRESENT");
    return g_all_pass ? 0 : 1;
}
