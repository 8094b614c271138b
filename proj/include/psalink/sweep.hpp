#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psalink/config.hpp"
#include "psalink/gordon_holevo.hpp"
#include "psalink/optimizer.hpp"

namespace psalink {

// One evaluated link configuration with every capacity variant and the
// diagnostics needed to audit it.
struct SweepRecord {
    double length_km = 0.0;
    double alpha_per_km = 0.0;
    double nbar = 0.0;
    int amp_count = 0;
    std::string regime;     // "amplitude" | "power" | "none"
    std::string objective;  // optimizer objective used to pick the plan
    double c_homodyne = 0.0;
    double c_dual = 0.0;
    double c_gh_coherent = 0.0;
    double c_gh_optimal = 0.0;
    double fid_tau = 0.0;
    double fid_y = 0.0;
    double fid_omega = 0.0;
    double feasibility_margin = 0.0;
    std::string regime_branch;  // GH branch of the optimal-mode solve
    double eval_ms = 0.0;       // wall time; reported in table/json only
};

// Problem description parsed from the [link] section (+ CLI overrides).
struct LinkSpec {
    double alpha = 0.0;
    double length = 0.0;
    double nbar = 0.0;
    int amp_count = 0;
    AmpRegime regime = AmpRegime::amplitude_restoration;
    bool no_amps = false;  // R = 0 / "none"
    Objective objective = Objective::homodyne;
    PositionMode positions = PositionMode::fixed_equal_spacing;
    std::optional<LinkPlan> explicit_plan;  // overrides regime machinery
};

LinkSpec link_spec_from_config(const Config& cfg);

// Build the plan (optimizing where the regime requires it) and fill a record.
SweepRecord evaluate_link(const LinkSpec& spec);

// Serialization. CSV uses 17 significant digits so numeric round-trips are
// exact; metadata lines are '#'-prefixed.
std::string csv_header();
std::string to_csv_row(const SweepRecord& r);
SweepRecord from_csv_row(const std::string& line);
void print_table(std::ostream& os, const SweepRecord& r);
std::string to_json(const SweepRecord& r);

// Sweep over lengths; records evaluated in parallel (threads > 1) but
// emitted in input order.
std::vector<SweepRecord> run_sweep(const LinkSpec& base, const std::vector<double>& lengths,
                                   int threads);

std::vector<double> sweep_lengths_from_config(const Config& cfg);

}  // namespace psalink
