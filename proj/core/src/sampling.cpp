#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "unsharp/errors.hpp"
#include "unsharp/experiment.hpp"

namespace unsharp {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) {
    return splitmix64(splitmix64(seed) ^ splitmix64(shard + 0x632be59bd9b4e019ULL));
}

using Counts = std::array<std::uint64_t, 4>;

Counts draw_shard(const std::array<double, 3>& cdf, std::uint64_t shots, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    Counts counts{};
    for (std::uint64_t s = 0; s < shots; ++s) {
        // 53-bit uniform in [0, 1); avoids implementation-defined distributions.
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        const std::size_t k = static_cast<std::size_t>(u >= cdf[0]) + static_cast<std::size_t>(u >= cdf[1]) +
                              static_cast<std::size_t>(u >= cdf[2]);
        ++counts[k];
    }
    return counts;
}

}  // namespace

CoincidenceCounts sample_coincidences(const JointProbabilities& p, std::uint64_t shots, std::uint64_t seed,
                                      const NoiseModel& noise, unsigned workers) {
    if (shots == 0) throw UsageError("shots must be at least 1");
    for (double v : p.p) {
        if (!std::isfinite(v) || v < -1e-12) throw UsageError("outcome probabilities must be finite and non-negative");
    }
    if (std::abs(p.total() - 1.0) > 1e-9) throw UsageError("outcome probabilities must sum to 1");

    const JointProbabilities mixed = apply_noise(p, noise);
    const std::array<double, 3> cdf = {mixed.p[0], mixed.p[0] + mixed.p[1], mixed.p[0] + mixed.p[1] + mixed.p[2]};

    const std::uint64_t shard_count = (shots + kShardShots - 1) / kShardShots;
    std::vector<Counts> shards(shard_count);
    auto run_shard = [&](std::uint64_t k) {
        const std::uint64_t n = std::min(kShardShots, shots - k * kShardShots);
        shards[k] = draw_shard(cdf, n, shard_seed(seed, k));
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const auto threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, shard_count));
    if (threads <= 1) {
        for (std::uint64_t k = 0; k < shard_count; ++k) run_shard(k);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::uint64_t k = t; k < shard_count; k += threads) run_shard(k);
            });
        }
    }

    CoincidenceCounts out;
    out.shots = shots;
    out.seed = seed;
    for (const Counts& c : shards) {
        for (std::size_t i = 0; i < 4; ++i) out.n[i] += c[i];
    }
    return out;
}

}  // namespace unsharp
