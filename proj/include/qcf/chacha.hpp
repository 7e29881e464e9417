#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <vector>

namespace qcf {

// ChaCha20 keystream, RFC 8439 layout. Used as the length-expanding
// generator behind the production commitment scheme and for hash-derived
// oracle challenges.
namespace chacha {

inline std::uint32_t rotl32(std::uint32_t v, int k) { return (v << k) | (v >> (32 - k)); }

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c, std::uint32_t& d) {
    a += b; d ^= a; d = rotl32(d, 16);
    c += d; b ^= c; b = rotl32(b, 12);
    a += b; d ^= a; d = rotl32(d, 8);
    c += d; b ^= c; b = rotl32(b, 7);
}

inline void block(const std::array<std::uint8_t, 32>& key,
                  const std::array<std::uint8_t, 12>& nonce,
                  std::uint32_t counter,
                  std::uint8_t out[64]) {
    std::uint32_t st[16];
    st[0] = 0x61707865u; st[1] = 0x3320646eu; st[2] = 0x79622d32u; st[3] = 0x6b206574u;
    for (int i = 0; i < 8; ++i) {
        st[4 + i] = static_cast<std::uint32_t>(key[4 * i]) |
                    (static_cast<std::uint32_t>(key[4 * i + 1]) << 8) |
                    (static_cast<std::uint32_t>(key[4 * i + 2]) << 16) |
                    (static_cast<std::uint32_t>(key[4 * i + 3]) << 24);
    }
    st[12] = counter;
    for (int i = 0; i < 3; ++i) {
        st[13 + i] = static_cast<std::uint32_t>(nonce[4 * i]) |
                     (static_cast<std::uint32_t>(nonce[4 * i + 1]) << 8) |
                     (static_cast<std::uint32_t>(nonce[4 * i + 2]) << 16) |
                     (static_cast<std::uint32_t>(nonce[4 * i + 3]) << 24);
    }
    std::uint32_t w[16];
    std::memcpy(w, st, sizeof w);
    for (int round = 0; round < 10; ++round) {
        quarter_round(w[0], w[4], w[8], w[12]);
        quarter_round(w[1], w[5], w[9], w[13]);
        quarter_round(w[2], w[6], w[10], w[14]);
        quarter_round(w[3], w[7], w[11], w[15]);
        quarter_round(w[0], w[5], w[10], w[15]);
        quarter_round(w[1], w[6], w[11], w[12]);
        quarter_round(w[2], w[7], w[8], w[13]);
        quarter_round(w[3], w[4], w[9], w[14]);
    }
    for (int i = 0; i < 16; ++i) {
        const std::uint32_t v = w[i] + st[i];
        out[4 * i] = static_cast<std::uint8_t>(v);
        out[4 * i + 1] = static_cast<std::uint8_t>(v >> 8);
        out[4 * i + 2] = static_cast<std::uint8_t>(v >> 16);
        out[4 * i + 3] = static_cast<std::uint8_t>(v >> 24);
    }
}

inline std::vector<std::uint8_t> stream(const std::array<std::uint8_t, 32>& key,
                                        const std::array<std::uint8_t, 12>& nonce,
                                        std::size_t out_len) {
    std::vector<std::uint8_t> out(out_len);
    std::uint8_t buf[64];
    std::uint32_t counter = 0;
    std::size_t off = 0;
    while (off < out_len) {
        block(key, nonce, counter++, buf);
        const std::size_t take = std::min<std::size_t>(64, out_len - off);
        std::memcpy(out.data() + off, buf, take);
        off += take;
    }
    return out;
}

}  // namespace chacha

inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace qcf
