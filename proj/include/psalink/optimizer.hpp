#pragma once

#include <stdexcept>
#include <vector>

#include "psalink/link_model.hpp"

namespace psalink {

enum class AmpRegime { amplitude_restoration, power_restoration };
enum class Objective { homodyne, gh_coherent, gh_optimal };
enum class PositionMode { fixed_equal_spacing, free_positions };

struct OptimizationProblem {
    double alpha = 0.0;
    double total_length = 0.0;
    int amp_count = 0;
    EnergyBudget budget;
    AmpRegime regime = AmpRegime::amplitude_restoration;
    Objective objective = Objective::homodyne;
    PositionMode positions = PositionMode::fixed_equal_spacing;
};

struct OptimizationResult {
    LinkPlan plan;
    double capacity = 0.0;
    double feasibility_margin = 0.0;
    int iterations = 0;
    bool converged = true;
};

class infeasible_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// G_i = exp(alpha * (l_i - l_{i-1})): each amplifier undoes its span's loss.
std::vector<double> gains_amplitude_restoration(const std::vector<double>& positions,
                                                double alpha);

// Minimum over all amplifier-output nodes (and the link output) of
// total_power(input) - total_power(node state); nonnegative iff the power
// budget holds everywhere.
double feasibility_check(const LinkPlan& plan, const SignalState& input);

// Equally spaced positions i*L/(R+1), i = 1..R.
std::vector<double> equal_spacing_positions(int amp_count, double total_length);

// Capacity of a concrete plan under the given objective and budget.
double plan_capacity(const LinkPlan& plan, double nbar, Objective objective);

OptimizationResult optimize(const OptimizationProblem& problem);

}  // namespace psalink
