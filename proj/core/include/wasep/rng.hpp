#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace wasep {

// Finalizer of the splitmix64 generator.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Splittable seed derivation: child seeds are consecutive elements of the
// splitmix64 output stream of the root seed. derive_seed(root, i) is a pure
// function, so a run can be replayed from (root_seed, run_index) alone.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    return splitmix64_mix(root + index * 0x9e3779b97f4a7c15ULL);
}

// xoshiro256++ with explicit, serializable state. All sampling used by the
// simulator goes through this class so that results are reproducible across
// compilers and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        // Expand the seed through splitmix64, per the xoshiro authors.
        std::uint64_t z = seed;
        for (auto& w : state_) {
            z += 0x9e3779b97f4a7c15ULL;
            std::uint64_t t = z;
            t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ULL;
            t = (t ^ (t >> 27)) * 0x94d049bb133111ebULL;
            w = t ^ (t >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53-bit resolution.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1); never returns an exact endpoint.
    double u01_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Exponential with the given rate, via inverse CDF. Strictly positive.
    double exponential(double rate) { return -std::log(u01_open()) / rate; }

    // Standard normal (Box-Muller, cosine branch).
    double normal() {
        const double r = std::sqrt(-2.0 * std::log(u01_open()));
        const double theta = 6.283185307179586476925286766559 * u01();
        return r * std::cos(theta);
    }

    // Uniform integer in [0, n) by 128-bit multiply (Lemire); bias < 2^-64.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    std::array<std::uint64_t, 4> state() const { return state_; }
    void set_state(const std::array<std::uint64_t, 4>& s) { state_ = s; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace wasep
