#include "psalink/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "psalink/gordon_holevo.hpp"
#include "psalink/shannon.hpp"

namespace psalink {

namespace {

constexpr double kCapTol = 1e-9;    // capacity convergence
constexpr double kSlackTol = 1e-9;  // constraint slack
constexpr int kMaxSweeps = 200;

// Golden-section maximization on [lo, hi]; f assumed unimodal-ish, and for
// our smooth objectives the scheme converges to a stationary point anyway.
double golden_max(double lo, double hi, const std::function<double(double)>& f,
                  double xtol) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Largest gain keeping an amplifier's output within the power budget, given
// the state entering it: solve a*G + b/G = budget for the larger root.
double max_gain_at_node(const SignalState& entering, double budget) {
    const double a = entering.s_q + entering.n_q;
    const double b = entering.s_i + entering.n_i;
    const double disc = budget * budget - 4.0 * a * b;
    if (disc < 0.0)
        return 1.0;  // node already at or over budget; do not amplify
    return std::max(1.0, (budget + std::sqrt(disc)) / (2.0 * a));
}

// Realize a gain vector from per-node fractions in [0,1]: each amplifier
// takes its cap^f, processed front to back so the caps account for all
// upstream choices. The result is feasible by construction.
std::vector<double> gains_from_fractions(const LinkPlan& geometry,
                                         const std::vector<double>& fractions,
                                         const SignalState& input, double budget) {
    const std::vector<double> taus = detail::span_transmittances(geometry);
    std::vector<double> gains(fractions.size(), 1.0);
    SignalState st = input;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        st = propagate_span(st, taus[i]);
        const double gmax = max_gain_at_node(st, budget);
        gains[i] = std::exp(fractions[i] * std::log(gmax));
        st = apply_psa(st, gains[i]);
    }
    return gains;
}

struct PowerGainSolve {
    std::vector<double> gains;
    double capacity = 0.0;
    int iterations = 0;
    bool converged = true;
};

// Coordinate ascent over the gain fractions with golden-section line search.
PowerGainSolve solve_power_gains(LinkPlan geometry, double nbar, Objective objective) {
    const int r = static_cast<int>(geometry.amp_positions.size());
    const SignalState input = coherent_q_input(nbar);
    const double budget = total_power(input);
    PowerGainSolve out;
    if (r == 0) {
        out.capacity = plan_capacity(geometry, nbar, objective);
        return out;
    }

    std::vector<double> frac(r, 1.0);  // saturated start: best for one amp
    auto eval = [&](const std::vector<double>& fr) {
        LinkPlan plan = geometry;
        plan.amp_gains = gains_from_fractions(geometry, fr, input, budget);
        return plan_capacity(plan, nbar, objective);
    };

    double best = eval(frac);
    out.converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const double before = best;
        for (int i = 0; i < r; ++i) {
            std::vector<double> trial = frac;
            const double fi = golden_max(
                0.0, 1.0,
                [&](double x) {
                    trial[i] = x;
                    return eval(trial);
                },
                1e-10);
            trial[i] = fi;
            const double c = eval(trial);
            if (c > best) {
                best = c;
                frac = trial;
            }
        }
        ++out.iterations;
        if (best - before < kCapTol) {
            out.converged = true;
            break;
        }
    }
    out.gains = gains_from_fractions(geometry, frac, input, budget);
    out.capacity = best;
    return out;
}

}  // namespace

std::vector<double> gains_amplitude_restoration(const std::vector<double>& positions,
                                                double alpha) {
    std::vector<double> gains;
    gains.reserve(positions.size());
    double prev = 0.0;
    for (double l : positions) {
        gains.push_back(std::exp(alpha * (l - prev)));
        prev = l;
    }
    return gains;
}

std::vector<double> equal_spacing_positions(int amp_count, double total_length) {
    std::vector<double> pos;
    pos.reserve(amp_count);
    const double dl = total_length / (amp_count + 1);
    for (int i = 1; i <= amp_count; ++i)
        pos.push_back(i * dl);
    return pos;
}

double feasibility_check(const LinkPlan& plan, const SignalState& input) {
    plan.validate();
    const double budget = total_power(input);
    const std::vector<double> taus = detail::span_transmittances(plan);
    SignalState st = input;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < taus.size(); ++i) {
        st = propagate_span(st, taus[i]);
        if (i < plan.amp_gains.size()) {
            st = apply_psa(st, plan.amp_gains[i]);
            margin = std::min(margin, budget - total_power(st));
        }
    }
    margin = std::min(margin, budget - total_power(st));
    return margin;
}

double plan_capacity(const LinkPlan& plan, double nbar, Objective objective) {
    const SignalState input = coherent_q_input(nbar);
    switch (objective) {
        case Objective::homodyne: {
            const SignalState out = propagate_link(plan, input);
            return capacity_homodyne(snr(out).snr_q);
        }
        case Objective::gh_coherent:
            return gh_capacity(channel_of_link(plan), nbar, GhMode::coherent).capacity;
        case Objective::gh_optimal:
            return gh_capacity(channel_of_link(plan), nbar, GhMode::optimal).capacity;
    }
    throw std::invalid_argument("plan_capacity: unknown objective");
}

OptimizationResult optimize(const OptimizationProblem& problem) {
    if (problem.amp_count < 0)
        throw std::invalid_argument("optimize: amp_count must be >= 0");
    if (!(problem.alpha >= 0.0) || !(problem.total_length > 0.0))
        throw std::invalid_argument("optimize: invalid geometry");
    if (!(problem.budget.nbar >= 0.0))
        throw std::invalid_argument("optimize: nbar must be >= 0");
    if (problem.regime == AmpRegime::power_restoration && problem.budget.nbar == 0.0 &&
        problem.amp_count > 0)
        throw infeasible_error("optimize: zero budget leaves no feasible amplified plan");

    const double nbar = problem.budget.nbar;
    const SignalState input = coherent_q_input(nbar);
    const int r = problem.amp_count;

    auto assemble = [&](const std::vector<double>& pos) {
        LinkPlan plan;
        plan.alpha = problem.alpha;
        plan.total_length = problem.total_length;
        plan.amp_positions = pos;
        plan.amp_gains.assign(pos.size(), 1.0);
        return plan;
    };

    // Capacity of the best gain assignment for a fixed geometry.
    int inner_iters = 0;
    bool inner_converged = true;
    auto solve_geometry = [&](const std::vector<double>& pos) {
        LinkPlan plan = assemble(pos);
        if (problem.regime == AmpRegime::amplitude_restoration) {
            plan.amp_gains = gains_amplitude_restoration(pos, problem.alpha);
            return std::make_pair(plan, plan_capacity(plan, nbar, problem.objective));
        }
        PowerGainSolve sol = solve_power_gains(plan, nbar, problem.objective);
        inner_iters += sol.iterations;
        inner_converged = inner_converged && sol.converged;
        plan.amp_gains = sol.gains.empty() ? plan.amp_gains : sol.gains;
        return std::make_pair(plan, sol.capacity);
    };

    std::vector<double> pos = equal_spacing_positions(r, problem.total_length);
    auto [plan, capacity] = solve_geometry(pos);
    int iterations = inner_iters;

    if (problem.positions == PositionMode::free_positions && r > 0) {
        // Coordinate descent over positions; gains re-solved at every trial.
        bool converged = false;
        for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
            const double before = capacity;
            for (int i = 0; i < r; ++i) {
                const double lo = (i == 0 ? 0.0 : pos[i - 1]) + 1e-6;
                const double hi =
                    (i + 1 < r ? pos[i + 1] : problem.total_length) - 1e-6;
                if (hi <= lo)
                    continue;
                std::vector<double> trial = pos;
                const double li = golden_max(
                    lo, hi,
                    [&](double x) {
                        trial[i] = x;
                        return solve_geometry(trial).second;
                    },
                    1e-7 * problem.total_length);
                trial[i] = li;
                const auto [p, c] = solve_geometry(trial);
                if (c > capacity) {
                    capacity = c;
                    pos = trial;
                    plan = p;
                }
            }
            ++iterations;
            converged = capacity - before < kCapTol;
        }
        inner_converged = inner_converged && converged;
    }

    OptimizationResult res;
    res.plan = plan;
    res.capacity = capacity;
    res.feasibility_margin = feasibility_check(plan, input);
    res.iterations = std::max(iterations, 1);
    res.converged = inner_converged;
    if (problem.regime == AmpRegime::power_restoration &&
        res.feasibility_margin < -kSlackTol)
        throw infeasible_error("optimize: no feasible gain assignment found");
    return res;
}

}  // namespace psalink
