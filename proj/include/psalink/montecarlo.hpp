#pragma once

#include <cstdint>
#include <vector>

#include "psalink/link_model.hpp"

namespace psalink {

// One shard of per-sample quadrature values, reproducible from its seed.
struct SampleBatch {
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::vector<double> x_q;
    std::vector<double> x_i;
};

struct McEstimate {
    SignalState estimate;    // sample variances split into signal/noise parts
    SignalState std_error;   // standard error of each variance estimate
    std::size_t count = 0;
    std::uint64_t seed = 0;
};

// Sample-level propagation: draws the input ensemble, pushes each sample
// through loss (sqrt(tau) scaling plus fresh vacuum of variance 1/2) and PSA
// (sqrt(G) / 1/sqrt(G) scaling), and reports variance estimates. The signal
// component is obtained by propagating the drawn modulation amplitude through
// the deterministic part of the map; noise is the residual.
//
// Deterministic for a given (plan, input, count, seed) regardless of thread
// count: work is split into fixed-size shards with seeds derived via
// splitmix64, and shard moments are pooled in index order. threads = 0 uses
// one worker.
McEstimate simulate_link(const LinkPlan& plan, const SignalState& input,
                         std::size_t count, std::uint64_t seed, int threads = 0);

}  // namespace psalink
