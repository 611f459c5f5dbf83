#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace hemon {

// Deterministic RNG with named substreams. Sampling is implemented here
// instead of through <random> distributions so identical seeds produce
// identical streams across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Stream derived from (seed, name). Different names give unrelated
    // streams from the same master seed; this is how data/init/dropout/
    // shuffle randomness stays independent.
    static Rng substream(std::uint64_t seed, std::string_view name);

    std::uint64_t next_u64() { return engine_(); }

    double uniform();                     // [0, 1)
    double uniform(double lo, double hi); // [lo, hi)
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive
    double normal();                      // standard normal, Box-Muller
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace hemon
