#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qcf/lwe.hpp"
#include "qcf/sigma.hpp"

namespace qcf::dualmode {

using zk::GIInstance;
using zk::Graph;
using zk::Permutation;

// Extended commitment: committing to bit a means simulating a sigma round
// with challenge a, publishing its first message and two ciphertext vectors,
// of which slot a holds the encoded response and the other slot all zeros.
// With a binding key over a witness-free instance the committed bit is
// extractable by decryption; with a hiding key over a witnessed instance one
// commitment opens to both bits.

inline std::size_t response_entry_bits(std::uint16_t v) {
    if (v < 2) throw std::invalid_argument("response encoding needs v >= 2");
    std::size_t bits = 1;
    while ((std::size_t{1} << bits) < v) ++bits;
    return bits;
}

// Fixed-width vertex image list, so every response encodes to the same
// length z' and the zero string is never a valid permutation.
inline std::size_t response_bits(std::uint16_t v) { return v * response_entry_bits(v); }

inline Bits encode_response(const Permutation& z, std::uint16_t v) {
    if (z.size() != v) throw std::invalid_argument("encode_response: size mismatch");
    const std::size_t w = response_entry_bits(v);
    Bits out;
    for (auto image : z) {
        const Bits entry = Bits::from_value(image, w);
        out = out + entry;
    }
    return out;
}

inline std::optional<Permutation> decode_response(const Bits& bits, std::uint16_t v) {
    const std::size_t w = response_entry_bits(v);
    if (bits.size() != static_cast<std::size_t>(v) * w) return std::nullopt;
    Permutation z(v);
    for (std::uint16_t i = 0; i < v; ++i) {
        const auto image = bits.slice(i * w, w).to_value();
        if (image >= v) return std::nullopt;
        z[i] = static_cast<std::uint16_t>(image);
    }
    if (!zk::is_permutation(z)) return std::nullopt;
    return z;
}

struct ExtCrs {
    RegevKey key;
    GIInstance instance;
    std::optional<Permutation> witness;  // hiding setup only

    std::uint16_t vertices() const { return instance.g0.v; }
};

// Binding setup: regular key (secret retained) plus a witness-free instance.
inline ExtCrs make_binding_crs(const LweParams& params, std::uint16_t v, Rng& rng) {
    ExtCrs crs;
    crs.key = keygen_binding(params, rng);
    crs.instance = zk::make_nonisomorphic_instance(v, rng);
    return crs;
}

// Hiding setup: uniform key plus a witnessed instance.
inline ExtCrs make_hiding_crs(const LweParams& params, std::uint16_t v, Rng& rng) {
    ExtCrs crs;
    crs.key = keygen_hiding(params, rng);
    auto witnessed = zk::make_isomorphic_instance(v, rng);
    crs.instance = witnessed.instance;
    crs.witness = witnessed.witness;
    return crs;
}

struct ExtCommitment {
    Graph a_sigma;
    std::vector<LweCiphertext> c0, c1;  // both of length z'
};

struct ExtOpening {
    std::uint8_t bit = 0;
    Permutation z;
    std::vector<std::vector<std::uint32_t>> subsets;  // randomness of slot `bit`
};

namespace detail {

inline std::vector<LweCiphertext> commit_string(const RegevKey& key, const Bits& bits, Rng& rng,
                                                std::vector<std::vector<std::uint32_t>>* subsets) {
    std::vector<LweCiphertext> out;
    out.reserve(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        auto [ct, opening] = commit_bit(key, bits[i], rng);
        out.push_back(std::move(ct));
        if (subsets) subsets->push_back(std::move(opening.subset));
    }
    return out;
}

}  // namespace detail

inline std::pair<ExtCommitment, ExtOpening> ext_commit(const ExtCrs& crs, std::uint8_t bit,
                                                       Rng& rng) {
    const std::uint16_t v = crs.vertices();
    const auto conv = zk::gi_simulate_round(crs.instance, bit & 1, rng);
    const Bits encoded = encode_response(conv.response, v);
    const Bits zeros(response_bits(v));

    ExtCommitment com;
    com.a_sigma = conv.a_sigma;
    ExtOpening opening;
    opening.bit = bit & 1;
    opening.z = conv.response;
    auto committed = detail::commit_string(crs.key, encoded, rng, &opening.subsets);
    auto padding = detail::commit_string(crs.key, zeros, rng, nullptr);
    if (opening.bit == 0) {
        com.c0 = std::move(committed);
        com.c1 = std::move(padding);
    } else {
        com.c1 = std::move(committed);
        com.c0 = std::move(padding);
    }
    return {std::move(com), std::move(opening)};
}

inline bool ext_verify(const ExtCrs& crs, const ExtCommitment& com, const ExtOpening& opening) {
    const std::uint16_t v = crs.vertices();
    if (!zk::is_permutation(opening.z) || opening.z.size() != v) return false;
    const std::size_t zprime = response_bits(v);
    if (com.c0.size() != zprime || com.c1.size() != zprime) return false;
    if (opening.subsets.size() != zprime) return false;
    const Bits encoded = encode_response(opening.z, v);
    const auto& slot = (opening.bit & 1) ? com.c1 : com.c0;
    for (std::size_t i = 0; i < zprime; ++i) {
        if (!verify_bit_opening(crs.key, slot[i], BitOpening{encoded[i], opening.subsets[i]}))
            return false;
    }
    return zk::gi_verify_round(crs.instance,
                               zk::SigmaConversation{com.a_sigma, opening.bit, opening.z});
}

enum class ExtractFlag { Ok, Junk, RelationBreak };

struct ExtExtractResult {
    ExtractFlag flag = ExtractFlag::Junk;
    std::uint8_t bit = 0;
};

// Decrypt both slots and keep the one that decodes to an accepting response.
// Junk: neither slot is valid. RelationBreak: both are, which would exhibit
// a witness for the supposedly witness-free instance.
inline ExtExtractResult ext_extract(const ExtCrs& crs, const ExtCommitment& com) {
    if (crs.key.mode != KeyMode::Binding) throw NoSecretError();
    const std::uint16_t v = crs.vertices();
    const std::size_t zprime = response_bits(v);
    if (com.c0.size() != zprime || com.c1.size() != zprime)
        return ExtExtractResult{ExtractFlag::Junk, 0};

    const auto slot_valid = [&](const std::vector<LweCiphertext>& slot,
                                std::uint8_t challenge) -> bool {
        Bits decrypted(zprime);
        for (std::size_t i = 0; i < zprime; ++i) decrypted.set(i, extract(crs.key, slot[i]));
        const auto z = decode_response(decrypted, v);
        if (!z) return false;
        return zk::gi_verify_round(crs.instance, zk::SigmaConversation{com.a_sigma, challenge, *z});
    };

    const bool valid0 = slot_valid(com.c0, 0);
    const bool valid1 = slot_valid(com.c1, 1);
    if (valid0 && valid1) return ExtExtractResult{ExtractFlag::RelationBreak, 0};
    if (!valid0 && !valid1) return ExtExtractResult{ExtractFlag::Junk, 0};
    return ExtExtractResult{ExtractFlag::Ok, static_cast<std::uint8_t>(valid1 ? 1 : 0)};
}

struct Equivocation {
    ExtCommitment commitment;
    ExtOpening open0, open1;
};

// With a hiding key and a witness, one first message answers both
// challenges, so both slots carry valid responses.
inline Equivocation ext_equivocate(const ExtCrs& crs, Rng& rng) {
    if (crs.key.mode != KeyMode::Hiding)
        throw std::invalid_argument("ext_equivocate: requires a hiding key");
    if (!crs.witness || !zk::witness_valid(crs.instance, *crs.witness))
        throw std::invalid_argument("ext_equivocate: requires a valid witness");
    const std::uint16_t v = crs.vertices();
    const auto round = zk::gi_prove_round(crs.instance, *crs.witness, rng);

    Equivocation eq;
    eq.commitment.a_sigma = round.a_sigma;
    eq.open0.bit = 0;
    eq.open0.z = round.responses[0];
    eq.open1.bit = 1;
    eq.open1.z = round.responses[1];
    eq.commitment.c0 = detail::commit_string(crs.key, encode_response(round.responses[0], v), rng,
                                             &eq.open0.subsets);
    eq.commitment.c1 = detail::commit_string(crs.key, encode_response(round.responses[1], v), rng,
                                             &eq.open1.subsets);
    return eq;
}

}  // namespace qcf::dualmode
