#ifndef GENECLUSTER_RNG_HPP
#define GENECLUSTER_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace genecluster {

/// Deterministic random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the distributions below are implemented
/// by hand because the std distribution adaptors are implementation-defined
/// and would break bit-reproducibility across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n) via rejection sampling. n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform01() {
        return double(engine_() >> 11) * 0x1.0p-53;
    }

    /// Approximately standard normal: sum of 12 uniforms minus 6
    /// (Irwin-Hall). Uses only IEEE additions, so the result is bit-identical
    /// on every platform; tails are truncated at +/-6 sigma, which is
    /// irrelevant for blob generation.
    double gaussian() {
        double s = 0.0;
        for (int i = 0; i < 12; ++i) s += uniform01();
        return s - 6.0;
    }

    /// k distinct indices drawn uniformly without replacement from [0, n),
    /// in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        std::vector<std::size_t> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + std::size_t(below(n - i));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace genecluster

#endif  // GENECLUSTER_RNG_HPP
