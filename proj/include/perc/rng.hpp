#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>
#include <utility>

// Deterministic label pipeline. The mapping (seed, replica, edge key) -> label
// is frozen; changing any constant here invalidates recorded results.
//
//   edge digest : two SipHash-2-4 values of the canonical edge key, computed
//                 with the fixed 128-bit keys K0 and K1 below. Depends only on
//                 the key bytes, so nested windows agree edge by edge.
//   label       : Philox4x32-10 with counter (d0.lo, d0.hi, replica.lo,
//                 replica.hi) and key (seed.lo ^ d1.lo, seed.hi ^ d1.hi);
//                 the top 53 bits of (x1,x0) scaled to [0,1).

namespace perc::rng {

struct Digest {
    std::uint64_t d0;
    std::uint64_t d1;
};

namespace detail {

inline std::uint64_t rotl(std::uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

inline void sipround(std::uint64_t& v0, std::uint64_t& v1, std::uint64_t& v2, std::uint64_t& v3) {
    v0 += v1;
    v1 = rotl(v1, 13);
    v1 ^= v0;
    v0 = rotl(v0, 32);
    v2 += v3;
    v3 = rotl(v3, 16);
    v3 ^= v2;
    v0 += v3;
    v3 = rotl(v3, 21);
    v3 ^= v0;
    v2 += v1;
    v1 = rotl(v1, 17);
    v1 ^= v2;
    v2 = rotl(v2, 32);
}

}  // namespace detail

// SipHash-2-4 (Aumasson & Bernstein), 64-bit output.
inline std::uint64_t siphash24(std::uint64_t k0, std::uint64_t k1, std::string_view data) {
    using namespace detail;
    std::uint64_t v0 = 0x736f6d6570736575ULL ^ k0;
    std::uint64_t v1 = 0x646f72616e646f6dULL ^ k1;
    std::uint64_t v2 = 0x6c7967656e657261ULL ^ k0;
    std::uint64_t v3 = 0x7465646279746573ULL ^ k1;

    const std::size_t n = data.size();
    const char* p = data.data();
    const char* end = p + (n - n % 8);
    for (; p != end; p += 8) {
        std::uint64_t m;
        std::memcpy(&m, p, 8);
        v3 ^= m;
        sipround(v0, v1, v2, v3);
        sipround(v0, v1, v2, v3);
        v0 ^= m;
    }
    std::uint64_t b = static_cast<std::uint64_t>(n) << 56;
    for (std::size_t i = 0; i < n % 8; ++i)
        b |= static_cast<std::uint64_t>(static_cast<unsigned char>(end[i])) << (8 * i);
    v3 ^= b;
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    v0 ^= b;
    v2 ^= 0xff;
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    return v0 ^ v1 ^ v2 ^ v3;
}

inline Digest edge_digest(std::string_view edge_key) {
    // Fixed digest keys (ASCII "perc-edg"/"e-label-", "coupled-"/"uniform.").
    constexpr std::uint64_t k00 = 0x706572632d656467ULL;
    constexpr std::uint64_t k01 = 0x652d6c6162656c2dULL;
    constexpr std::uint64_t k10 = 0x636f75706c65642dULL;
    constexpr std::uint64_t k11 = 0x756e69666f726d2eULL;
    return Digest{siphash24(k00, k01, edge_key), siphash24(k10, k11, edge_key)};
}

namespace detail {

inline void philox_round(std::uint32_t& x0, std::uint32_t& x1, std::uint32_t& x2,
                         std::uint32_t& x3, std::uint32_t k0, std::uint32_t k1) {
    constexpr std::uint64_t M0 = 0xD2511F53ULL;
    constexpr std::uint64_t M1 = 0xCD9E8D57ULL;
    const std::uint64_t p0 = M0 * x0;
    const std::uint64_t p1 = M1 * x2;
    const std::uint32_t h0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t l0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t h1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t l1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t y0 = h1 ^ x1 ^ k0;
    const std::uint32_t y1 = l1;
    const std::uint32_t y2 = h0 ^ x3 ^ k1;
    const std::uint32_t y3 = l0;
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
}

}  // namespace detail

// Philox4x32-10 (Salmon et al.), returning the (x1,x0) word pair.
inline std::uint64_t philox10(std::uint64_t ctr_lo, std::uint64_t ctr_hi, std::uint64_t key) {
    std::uint32_t x0 = static_cast<std::uint32_t>(ctr_lo);
    std::uint32_t x1 = static_cast<std::uint32_t>(ctr_lo >> 32);
    std::uint32_t x2 = static_cast<std::uint32_t>(ctr_hi);
    std::uint32_t x3 = static_cast<std::uint32_t>(ctr_hi >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    constexpr std::uint32_t W0 = 0x9E3779B9u;
    constexpr std::uint32_t W1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
        detail::philox_round(x0, x1, x2, x3, k0, k1);
        k0 += W0;
        k1 += W1;
    }
    return (static_cast<std::uint64_t>(x1) << 32) | x0;
}

// Uniform label in [0,1) from the frozen pipeline.
inline double label_from_digest(const Digest& d, std::uint64_t seed, std::uint64_t replica) {
    const std::uint64_t out = philox10(d.d0, replica, seed ^ d.d1);
    return static_cast<double>(out >> 11) * 0x1.0p-53;
}

// Small deterministic stream for auxiliary sampling (path sampling etc.),
// independent of the edge-label pipeline.
class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t replica = 0)
        : ctr_lo_(replica), ctr_hi_(stream), key_(seed ^ 0xA5A5A5A55A5A5A5AULL) {}

    std::uint64_t next_u64() { return philox10(ctr_lo_++, ctr_hi_, key_); }

    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [0, bound) via rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (~0ULL / bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

  private:
    std::uint64_t ctr_lo_;
    std::uint64_t ctr_hi_;
    std::uint64_t key_;
};

}  // namespace perc::rng
