#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>

#include "qcf/bits.hpp"
#include "qcf/chacha.hpp"
#include "qcf/rng.hpp"

namespace qcf::commitment {

// Two-message bit commitment after Naor: the receiver first sends a 3n-bit
// nonce sigma, the committer expands n bits of randomness through a PRG and
// sends the expansion as-is for bit 0, or XORed with sigma for bit 1.
// Unconditionally binding (up to a 2^-n nonce failure), computationally
// hiding when the generator is.

struct CommitParams {
    std::size_t n = 16;  // seed / security parameter, bits
    std::size_t l = 16;  // committer randomness, bits (= n here)

    static CommitParams naor(std::size_t n) { return CommitParams{n, n}; }

    std::size_t nonce_bits() const { return 3 * n; }
    std::size_t commitment_bits() const { return 3 * n; }

    void validate() const {
        if (n < 1 || l < 1) throw std::invalid_argument("CommitParams: n and l must be >= 1");
        if (l != n) throw std::invalid_argument("CommitParams: instantiation requires l = n");
    }
};

struct ReceiverNonce {
    Bits sigma;  // exactly 3n bits; must be fresh per session

    static ReceiverNonce random(const CommitParams& params, Rng& rng) {
        return ReceiverNonce{Bits::random(params.nonce_bits(), rng)};
    }
};

struct Commitment {
    Bits value;
    bool operator==(const Commitment& other) const { return value == other.value; }
};

struct Opening {
    std::uint8_t bit = 0;
    Bits randomness;
};

class Prg {
public:
    virtual ~Prg() = default;
    virtual Bits expand(const Bits& seed, std::size_t out_bits) const = 0;
};

// ChaCha20 keystream keyed by the seed bits (zero padded, XOR-folded past
// 256 bits). Deterministic in the seed.
class ChaChaPrg final : public Prg {
public:
    Bits expand(const Bits& seed, std::size_t out_bits) const override {
        std::array<std::uint8_t, 32> key{};
        const auto packed = seed.pack();
        for (std::size_t i = 0; i < packed.size(); ++i) key[i % 32] ^= packed[i];
        // domain-separate by seed length so 0-padding cannot alias seeds
        std::array<std::uint8_t, 12> nonce{};
        const std::uint64_t len = seed.size();
        for (int i = 0; i < 8; ++i) nonce[i] = static_cast<std::uint8_t>(len >> (8 * i));
        const auto bytes = chacha::stream(key, nonce, (out_bits + 7) / 8);
        Bits out(out_bits);
        for (std::size_t i = 0; i < out_bits; ++i)
            out.set(i, (bytes[i / 8] >> (7 - i % 8)) & 1);
        return out;
    }
};

// Test stub: G(r) = r || r || r. Exhaustive and trivially invertible.
class TriplePrg final : public Prg {
public:
    Bits expand(const Bits& seed, std::size_t out_bits) const override {
        if (out_bits != 3 * seed.size())
            throw std::invalid_argument("TriplePrg: output must be exactly three seed lengths");
        return seed + seed + seed;
    }
};

inline const Prg& production_prg() {
    static const ChaChaPrg prg;
    return prg;
}

inline const Prg& stub_prg() {
    static const TriplePrg prg;
    return prg;
}

struct Scheme {
    CommitParams params;
    const Prg* prg = &production_prg();

    static Scheme naor(std::size_t n) { return Scheme{CommitParams::naor(n), &production_prg()}; }
    static Scheme stub(std::size_t n) { return Scheme{CommitParams::naor(n), &stub_prg()}; }
};

inline Bits prg_expand(const Scheme& scheme, const Bits& seed) {
    if (seed.size() != scheme.params.n)
        throw std::invalid_argument("prg_expand: seed must be exactly n bits");
    return scheme.prg->expand(seed, 3 * scheme.params.n);
}

inline Commitment commit(const Scheme& scheme, const ReceiverNonce& nonce,
                         std::uint8_t bit, const Bits& randomness) {
    if (randomness.size() != scheme.params.l)
        throw std::invalid_argument("commit: randomness must be exactly l bits");
    if (nonce.sigma.size() != scheme.params.nonce_bits())
        throw std::invalid_argument("commit: nonce must be exactly 3n bits");
    Bits expanded = scheme.prg->expand(randomness, scheme.params.commitment_bits());
    if (bit & 1) expanded = expanded ^ nonce.sigma;
    return Commitment{std::move(expanded)};
}

// False on any malformed length; never throws.
inline bool verify_open(const Scheme& scheme, const ReceiverNonce& nonce,
                        const Commitment& c, const Opening& o) {
    if (o.randomness.size() != scheme.params.l) return false;
    if (nonce.sigma.size() != scheme.params.nonce_bits()) return false;
    if (c.value.size() != scheme.params.commitment_bits()) return false;
    return commit(scheme, nonce, o.bit & 1, o.randomness) == c;
}

}  // namespace qcf::commitment
