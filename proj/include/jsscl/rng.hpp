#ifndef JSSCL_RNG_HPP
#define JSSCL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jsscl/common.hpp"

namespace jsscl {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Independent stream seed for (master, stream). Streams are order-free, so
// per-instance generation can run in parallel and still match serial output.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = a ^ (stream * 0x9e3779b97f4a7c15ull + 0x7f4a7c15ull);
    std::uint64_t b = splitmix64(s);
    return b;
}

// Deterministic draws on top of mt19937_64. The engine's output sequence is
// fixed by the standard; the distribution code lives here because the
// std::*_distribution mappings are implementation-defined and would break
// bit-reproducibility across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform integer in [lo, hi], unbiased via rejection.
    int uniform_int(int lo, int hi) {
        if (hi < lo) throw ValidationError("uniform_int: empty range");
        std::uint64_t range = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return static_cast<int>(lo + static_cast<std::int64_t>(x % range));
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Box-Muller, cosine branch only (keeps the state a plain engine).
    double normal(double mean, double stddev) {
        double u1 = 1.0 - uniform01(); // (0, 1]
        double u2 = uniform01();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
        return mean + stddev * z;
    }

    // Fisher-Yates with the portable bounded draw above.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            int j = uniform_int(0, i);
            std::swap(v[i], v[j]);
        }
    }

    // Engine state as text (operator<< format is standard-defined).
    std::string save_state() const {
        std::ostringstream os;
        os << eng_;
        return os.str();
    }

    void load_state(const std::string& s) {
        std::istringstream is(s);
        is >> eng_;
        if (is.fail()) throw ValidationError("Rng::load_state: malformed state string");
    }

  private:
    std::mt19937_64 eng_;
};

} // namespace jsscl

#endif
