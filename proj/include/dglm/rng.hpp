#pragma once

#include <array>
#include <cstdint>

namespace dglm {

/// Philox4x32-10 counter-based generator (output-identical to the published
/// reference vectors). Counter-based construction gives reproducible,
/// platform-independent streams: a (seed, stream) pair fully determines the
/// sequence, and disjoint stream ids give statistically independent streams.
class Philox4x32 {
  public:
    explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          block_{0, 0, static_cast<std::uint32_t>(stream),
                 static_cast<std::uint32_t>(stream >> 32)} {}

    /// One 10-round block for an explicit counter/key; exposed for the
    /// reference-vector test.
    static std::array<std::uint32_t, 4> encrypt(
        std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = 0xD2511F53ull * ctr[0];
            const std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            buf_ = encrypt(block_, key_);
            if (++block_[0] == 0) ++block_[1];
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform on the open interval (0, 1) using 53 random bits.
    double next_uniform() {
        const double x = static_cast<double>(next_u64() >> 11);
        return (x + 0.5) * 0x1p-53;
    }

    /// Standard normal via the Box-Muller transform (deterministic, no
    /// rejection); draws a pair of uniforms and caches the second variate.
    double next_normal();

  private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> block_;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace dglm
