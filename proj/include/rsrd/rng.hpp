#ifndef RSRD_RNG_HPP
#define RSRD_RNG_HPP

#include <cmath>
#include <cstdint>

namespace rsrd {

// xoshiro256** seeded through SplitMix64. Frame-level streams are derived
// from (master seed, stream id, counter) so simulation results do not
// depend on the thread schedule.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
        have_gauss_ = false;
    }

    static Rng derive(std::uint64_t master, std::uint64_t stream, std::uint64_t counter) {
        std::uint64_t x = master;
        x = splitmix64(x) ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        x = splitmix64(x) ^ (0xbf58476d1ce4e5b9ULL * (counter + 1));
        return Rng(splitmix64(x));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(next_double() * static_cast<double>(n)) % n;
    }

    double next_gaussian() {
        if (have_gauss_) {
            have_gauss_ = false;
            return gauss_;
        }
        double u1 = 0.0;
        do { u1 = next_double(); } while (u1 <= 0.0);
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        gauss_ = r * std::sin(a);
        have_gauss_ = true;
        return r * std::cos(a);
    }

    // sample an index from a discrete distribution (probabilities sum to ~1)
    template <class Vec>
    int next_categorical(const Vec& probs) {
        double u = next_double();
        double acc = 0.0;
        int last = 0;
        for (int k = 0; k < static_cast<int>(probs.size()); ++k) {
            acc += probs[k];
            last = k;
            if (u < acc) return k;
        }
        return last;
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    bool have_gauss_;
    double gauss_ = 0.0;
};

}  // namespace rsrd

#endif
