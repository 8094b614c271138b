#include "psalink/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <sstream>

#include "psalink/shannon.hpp"

namespace psalink {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string regime_name(AmpRegime r) {
    return r == AmpRegime::amplitude_restoration ? "amplitude" : "power";
}

std::string objective_name(Objective o) {
    switch (o) {
        case Objective::homodyne: return "homodyne";
        case Objective::gh_coherent: return "gh-coherent";
        case Objective::gh_optimal: return "gh-optimal";
    }
    return "?";
}

std::string branch_name(GhRegime r) {
    switch (r) {
        case GhRegime::above_threshold: return "above-threshold";
        case GhRegime::below_threshold: return "below-threshold";
        case GhRegime::coherent_forced: return "coherent-forced";
    }
    return "?";
}

}  // namespace

LinkSpec link_spec_from_config(const Config& cfg) {
    LinkSpec spec;
    spec.alpha = cfg.get_double("link.alpha_per_km");
    spec.length = cfg.get_double("link.length_km", 0.0);
    spec.nbar = cfg.get_double("link.nbar");
    spec.amp_count = static_cast<int>(cfg.get_long("link.amp_count", 0));

    const std::string regime = cfg.get_string("link.regime", "amplitude");
    if (regime == "amplitude")
        spec.regime = AmpRegime::amplitude_restoration;
    else if (regime == "power")
        spec.regime = AmpRegime::power_restoration;
    else if (regime == "none")
        spec.no_amps = true;
    else
        throw config_error("link.regime must be amplitude, power, or none");
    if (spec.no_amps)
        spec.amp_count = 0;

    const std::string objective = cfg.get_string("link.objective", "homodyne");
    if (objective == "homodyne")
        spec.objective = Objective::homodyne;
    else if (objective == "gh-coherent")
        spec.objective = Objective::gh_coherent;
    else if (objective == "gh-optimal")
        spec.objective = Objective::gh_optimal;
    else
        throw config_error("link.objective must be homodyne, gh-coherent, or gh-optimal");

    const std::string positions = cfg.get_string("link.positions", "equal");
    if (positions == "equal")
        spec.positions = PositionMode::fixed_equal_spacing;
    else if (positions == "free")
        spec.positions = PositionMode::free_positions;
    else
        throw config_error("link.positions must be equal or free");

    if (cfg.has("link.amp_positions_km")) {
        LinkPlan plan;
        plan.alpha = spec.alpha;
        plan.total_length = spec.length;
        plan.amp_positions = cfg.get_double_list("link.amp_positions_km");
        if (cfg.has("link.amp_gains")) {
            plan.amp_gains = cfg.get_double_list("link.amp_gains");
        } else {
            plan.amp_gains = gains_amplitude_restoration(plan.amp_positions, spec.alpha);
        }
        if (plan.amp_gains.size() != plan.amp_positions.size())
            throw config_error("link.amp_gains length must match link.amp_positions_km");
        spec.explicit_plan = plan;
        spec.amp_count = static_cast<int>(plan.amp_positions.size());
    }
    return spec;
}

SweepRecord evaluate_link(const LinkSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();

    LinkPlan plan;
    double margin;
    if (spec.explicit_plan) {
        plan = *spec.explicit_plan;
        plan.total_length = spec.length > 0.0 ? spec.length : plan.total_length;
        plan.validate();
        margin = feasibility_check(plan, coherent_q_input(spec.nbar));
        if (spec.regime == AmpRegime::power_restoration && margin < -1e-9)
            throw infeasible_error("explicit plan violates the power budget (margin " +
                                   std::to_string(margin) + ")");
    } else {
        OptimizationProblem prob;
        prob.alpha = spec.alpha;
        prob.total_length = spec.length;
        prob.amp_count = spec.no_amps ? 0 : spec.amp_count;
        prob.budget.nbar = spec.nbar;
        prob.regime = spec.regime;
        prob.objective = spec.objective;
        prob.positions = spec.positions;
        const OptimizationResult res = optimize(prob);
        plan = res.plan;
        margin = res.feasibility_margin;
    }

    SweepRecord rec;
    rec.length_km = plan.total_length;
    rec.alpha_per_km = plan.alpha;
    rec.nbar = spec.nbar;
    rec.amp_count = static_cast<int>(plan.amp_positions.size());
    rec.regime = spec.no_amps ? "none" : regime_name(spec.regime);
    rec.objective = objective_name(spec.objective);
    rec.feasibility_margin = margin;

    const SignalState out = propagate_link(plan, coherent_q_input(spec.nbar));
    rec.c_homodyne = capacity_homodyne(snr(out).snr_q);

    // Dual-quadrature bound with the budget split evenly between quadratures.
    SignalState dual_in{spec.nbar, spec.nbar, 0.5, 0.5};
    rec.c_dual = capacity_dual_quadrature(snr(propagate_link(plan, dual_in)));

    const ChannelMatrices ch = channel_of_link(plan);
    const FiducialParams fid = compute_fiducial(ch);
    rec.fid_tau = fid.tau;
    rec.fid_y = fid.y;
    rec.fid_omega = fid.omega;

    const GhResult opt = gh_capacity(ch, spec.nbar, GhMode::optimal);
    const GhResult coh = gh_capacity(ch, spec.nbar, GhMode::coherent);
    rec.c_gh_optimal = opt.capacity;
    rec.c_gh_coherent = coh.capacity;
    rec.regime_branch = branch_name(opt.regime);

    rec.eval_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rec;
}

std::string csv_header() {
    return "length_km,alpha_per_km,nbar,amp_count,regime,objective,"
           "c_homodyne,c_dual,c_gh_coherent,c_gh_optimal,"
           "fid_tau,fid_y,fid_omega,feasibility_margin,regime_branch";
}

std::string to_csv_row(const SweepRecord& r) {
    std::ostringstream os;
    os << fmt17(r.length_km) << ',' << fmt17(r.alpha_per_km) << ',' << fmt17(r.nbar)
       << ',' << r.amp_count << ',' << r.regime << ',' << r.objective << ','
       << fmt17(r.c_homodyne) << ',' << fmt17(r.c_dual) << ','
       << fmt17(r.c_gh_coherent) << ',' << fmt17(r.c_gh_optimal) << ','
       << fmt17(r.fid_tau) << ',' << fmt17(r.fid_y) << ',' << fmt17(r.fid_omega) << ','
       << fmt17(r.feasibility_margin) << ',' << r.regime_branch;
    return os.str();
}

SweepRecord from_csv_row(const std::string& line) {
    std::vector<std::string> f;
    std::istringstream in(line);
    std::string item;
    while (std::getline(in, item, ','))
        f.push_back(item);
    if (f.size() != 15)
        throw config_error("csv row has " + std::to_string(f.size()) +
                           " fields, expected 15");
    SweepRecord r;
    r.length_km = std::stod(f[0]);
    r.alpha_per_km = std::stod(f[1]);
    r.nbar = std::stod(f[2]);
    r.amp_count = std::stoi(f[3]);
    r.regime = f[4];
    r.objective = f[5];
    r.c_homodyne = std::stod(f[6]);
    r.c_dual = std::stod(f[7]);
    r.c_gh_coherent = std::stod(f[8]);
    r.c_gh_optimal = std::stod(f[9]);
    r.fid_tau = std::stod(f[10]);
    r.fid_y = std::stod(f[11]);
    r.fid_omega = std::stod(f[12]);
    r.feasibility_margin = std::stod(f[13]);
    r.regime_branch = f[14];
    return r;
}

void print_table(std::ostream& os, const SweepRecord& r) {
    os << "link:            L = " << r.length_km << " km, alpha = " << r.alpha_per_km
       << " /km, nbar = " << r.nbar << ", R = " << r.amp_count << " (" << r.regime
       << ", " << r.objective << ")\n"
       << "c_homodyne:      " << fmt17(r.c_homodyne) << " bits/use\n"
       << "c_dual:          " << fmt17(r.c_dual) << " bits/use\n"
       << "c_gh_coherent:   " << fmt17(r.c_gh_coherent) << " bits/use\n"
       << "c_gh_optimal:    " << fmt17(r.c_gh_optimal) << " bits/use ("
       << r.regime_branch << ")\n"
       << "fiducial:        tau = " << fmt17(r.fid_tau) << ", y = " << fmt17(r.fid_y)
       << ", omega = " << fmt17(r.fid_omega) << "\n"
       << "power margin:    " << fmt17(r.feasibility_margin) << " photons\n"
       << "eval time:       " << r.eval_ms << " ms\n";
}

std::string to_json(const SweepRecord& r) {
    std::ostringstream os;
    os << "{\"length_km\":" << fmt17(r.length_km)
       << ",\"alpha_per_km\":" << fmt17(r.alpha_per_km) << ",\"nbar\":" << fmt17(r.nbar)
       << ",\"amp_count\":" << r.amp_count << ",\"regime\":\"" << r.regime
       << "\",\"objective\":\"" << r.objective << "\""
       << ",\"c_homodyne\":" << fmt17(r.c_homodyne) << ",\"c_dual\":" << fmt17(r.c_dual)
       << ",\"c_gh_coherent\":" << fmt17(r.c_gh_coherent)
       << ",\"c_gh_optimal\":" << fmt17(r.c_gh_optimal)
       << ",\"fid_tau\":" << fmt17(r.fid_tau) << ",\"fid_y\":" << fmt17(r.fid_y)
       << ",\"fid_omega\":" << fmt17(r.fid_omega)
       << ",\"feasibility_margin\":" << fmt17(r.feasibility_margin)
       << ",\"regime_branch\":\"" << r.regime_branch << "\""
       << ",\"eval_ms\":" << fmt17(r.eval_ms) << "}";
    return os.str();
}

std::vector<double> sweep_lengths_from_config(const Config& cfg) {
    if (cfg.has("sweep.lengths_km"))
        return cfg.get_double_list("sweep.lengths_km");
    const double lmin = cfg.get_double("sweep.length_km_min");
    const double lmax = cfg.get_double("sweep.length_km_max");
    const double step = cfg.get_double("sweep.length_km_step");
    if (!(step > 0.0))
        throw config_error("sweep.length_km_step must be > 0");
    std::vector<double> out;
    for (double l = lmin; l <= lmax + 1e-9 * step; l += step)
        out.push_back(l);
    return out;
}

std::vector<SweepRecord> run_sweep(const LinkSpec& base, const std::vector<double>& lengths,
                                   int threads) {
    std::vector<SweepRecord> records(lengths.size());
    const int nworkers = threads <= 0 ? 1 : threads;
    if (nworkers <= 1) {
        for (std::size_t i = 0; i < lengths.size(); ++i) {
            LinkSpec spec = base;
            spec.length = lengths[i];
            records[i] = evaluate_link(spec);
        }
        return records;
    }
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < nworkers; ++w) {
        futures.push_back(std::async(std::launch::async, [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= lengths.size())
                    return;
                LinkSpec spec = base;
                spec.length = lengths[i];
                records[i] = evaluate_link(spec);
            }
        }));
    }
    for (auto& f : futures)
        f.get();
    return records;
}

}  // namespace psalink
