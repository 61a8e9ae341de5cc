// Counter-based random number generation for reproducible parallel Monte Carlo.
//
// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3",
// SC 2011). Each path owns an independent stream keyed by a seed derived from
// (master_seed, path_index), so results do not depend on thread scheduling.

#ifndef EXITTAILS_RNG_HPP
#define EXITTAILS_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace exittails {

// 10-round Philox 4x32. Produces 128 random bits per block; the counter is
// advanced after every block.
class Philox4x32 {
  public:
    explicit Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)} {}

    std::array<std::uint32_t, 4> next_block() {
        std::array<std::uint32_t, 4> c = counter_;
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k0 += 0x9E3779B9u;
                k1 += 0xBB67AE85u;
            }
            const std::uint64_t p0 = 0xD2511F53ull * c[0];
            const std::uint64_t p1 = 0xCD9E8D57ull * c[2];
            c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0,
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1,
                 static_cast<std::uint32_t>(p0)};
        }
        if (++counter_[0] == 0)
            if (++counter_[1] == 0)
                if (++counter_[2] == 0) ++counter_[3];
        return c;
    }

  private:
    std::array<std::uint32_t, 4> counter_{0, 0, 0, 0};
    std::array<std::uint32_t, 2> key_;
};

// SplitMix64 finalizer; decorrelates per-path seeds derived from a master seed.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t path_index) {
    return mix64(master_seed + 0x9E3779B97F4A7C15ull * (path_index + 1));
}

// Sequential stream of standard normals (Box-Muller on Philox output).
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const auto blk = gen_.next_block();
        const std::uint64_t a = (std::uint64_t(blk[1]) << 32) | blk[0];
        const std::uint64_t b = (std::uint64_t(blk[3]) << 32) | blk[2];
        // u1 in (0,1], u2 in [0,1)
        const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

  private:
    Philox4x32 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace exittails

#endif
