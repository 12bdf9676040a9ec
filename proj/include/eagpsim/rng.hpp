#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace eagpsim {

enum class Stream : std::uint64_t {
    Topology = 1,
    Battery = 2,
    Traffic = 3,
    Mobility = 4,
    Protocol = 5,
    Loss = 6,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Bit-reproducible random source. std::mt19937_64's output sequence is fixed
// by the standard; the distributions below are hand-rolled because the
// library distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0, n), unbiased via rejection
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // k distinct elements chosen uniformly, partial Fisher-Yates.
    template <typename T>
    std::vector<T> sample(std::vector<T> pool, std::size_t k)
    {
        if (k > pool.size()) k = pool.size();
        for (std::size_t i = 0; i < k; ++i) {
            const auto j = i + static_cast<std::size_t>(below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

private:
    std::mt19937_64 engine_;
};

// Independent streams per (purpose, index) derived from one run seed.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    Rng stream(Stream purpose, std::uint64_t index = 0) const
    {
        std::uint64_t s = splitmix64(seed_);
        s = splitmix64(s ^ static_cast<std::uint64_t>(purpose) * 0xD1B54A32D192ED03ull);
        s = splitmix64(s ^ (index + 1) * 0xA0761D6478BD642Full);
        return Rng(s);
    }

private:
    std::uint64_t seed_;
};

}  // namespace eagpsim
