#include "psalink/montecarlo.hpp"

#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace psalink {

namespace {

constexpr std::size_t kShardSize = 1 << 16;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Marsaglia polar method on top of mt19937_64; fixed algorithm so the
// sample stream is identical for a given seed on any platform with IEEE
// doubles (bit determinism is only promised per platform).
class GaussianGen {
public:
    explicit GaussianGen(std::uint64_t seed) : eng_(seed) {}

    double operator()() {
        if (have_) {
            have_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * m;
        have_ = true;
        return u * m;
    }

private:
    double uniform() {
        // 53-bit mantissa in (0, 1]
        return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    }
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool have_ = false;
};

struct Moments {
    double sum = 0.0, sumsq = 0.0;
    void add(double x) {
        sum += x;
        sumsq += x * x;
    }
    void merge(const Moments& m) {
        sum += m.sum;
        sumsq += m.sumsq;
    }
};

struct ShardMoments {
    Moments sig_q, sig_i, noi_q, noi_i;
};

ShardMoments run_shard(const LinkPlan& plan, const SignalState& input,
                       std::size_t count, std::uint64_t shard_seed,
                       const std::vector<double>& taus) {
    GaussianGen rng(shard_seed);
    const double sd_sq = std::sqrt(input.s_q);
    const double sd_si = std::sqrt(input.s_i);
    const double sd_nq = std::sqrt(input.n_q);
    const double sd_ni = std::sqrt(input.n_i);
    const std::size_t namps = plan.amp_gains.size();

    // Deterministic amplitude scale factors of the full chain.
    double det_q = 1.0, det_i = 1.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double st = std::sqrt(taus[i]);
        det_q *= st;
        det_i *= st;
        if (i < namps) {
            const double sg = std::sqrt(plan.amp_gains[i]);
            det_q *= sg;
            det_i /= sg;
        }
    }

    ShardMoments m;
    for (std::size_t k = 0; k < count; ++k) {
        const double a_q = sd_sq * rng();
        const double a_i = sd_si * rng();
        double x_q = a_q + sd_nq * rng();
        double x_i = a_i + sd_ni * rng();
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const double st = std::sqrt(taus[i]);
            const double mix = std::sqrt(0.5 * (1.0 - taus[i]));
            x_q = st * x_q + mix * rng();
            x_i = st * x_i + mix * rng();
            if (i < namps) {
                const double sg = std::sqrt(plan.amp_gains[i]);
                x_q *= sg;
                x_i /= sg;
            }
        }
        const double out_sig_q = det_q * a_q;
        const double out_sig_i = det_i * a_i;
        m.sig_q.add(out_sig_q);
        m.sig_i.add(out_sig_i);
        m.noi_q.add(x_q - out_sig_q);
        m.noi_i.add(x_i - out_sig_i);
    }
    return m;
}

double variance_of(const Moments& m, std::size_t n) {
    const double mean = m.sum / static_cast<double>(n);
    return (m.sumsq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
}

}  // namespace

McEstimate simulate_link(const LinkPlan& plan, const SignalState& input,
                         std::size_t count, std::uint64_t seed, int threads) {
    plan.validate();
    if (count < 1000)
        throw std::invalid_argument("simulate_link: count must be >= 1000");

    const std::vector<double> taus = detail::span_transmittances(plan);
    const std::size_t nshards = (count + kShardSize - 1) / kShardSize;
    std::vector<ShardMoments> shard(nshards);

    auto work = [&](std::size_t s) {
        const std::size_t n =
            s + 1 == nshards ? count - s * kShardSize : kShardSize;
        shard[s] = run_shard(plan, input, n, splitmix64(seed + 0x9E3779B97F4A7C15ull * (s + 1)),
                             taus);
    };

    const int nworkers = threads <= 0 ? 1 : threads;
    if (nworkers <= 1 || nshards <= 1) {
        for (std::size_t s = 0; s < nshards; ++s)
            work(s);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        const std::size_t chunk = 1;
        std::mutex mu;
        for (int w = 0; w < nworkers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    std::size_t s;
                    {
                        std::lock_guard<std::mutex> lk(mu);
                        if (next >= nshards)
                            return;
                        s = next;
                        next += chunk;
                    }
                    work(s);
                }
            });
        }
        for (auto& t : pool)
            t.join();
    }

    ShardMoments total;
    for (const ShardMoments& s : shard) {  // fixed order: exact pooled moments
        total.sig_q.merge(s.sig_q);
        total.sig_i.merge(s.sig_i);
        total.noi_q.merge(s.noi_q);
        total.noi_i.merge(s.noi_i);
    }

    const double se_scale = std::sqrt(2.0 / static_cast<double>(count - 1));
    McEstimate est;
    est.count = count;
    est.seed = seed;
    est.estimate.s_q = variance_of(total.sig_q, count);
    est.estimate.s_i = variance_of(total.sig_i, count);
    est.estimate.n_q = variance_of(total.noi_q, count);
    est.estimate.n_i = variance_of(total.noi_i, count);
    est.std_error.s_q = est.estimate.s_q * se_scale;
    est.std_error.s_i = est.estimate.s_i * se_scale;
    est.std_error.n_q = est.estimate.n_q * se_scale;
    est.std_error.n_i = est.estimate.n_i * se_scale;
    return est;
}

}  // namespace psalink
