#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qcf/oracle.hpp"
#include "qcf/sigma.hpp"

namespace qcf::zk {

// Non-interactive proof bound to a reference string omega of size k: one
// sigma round per bit, challenges drawn from the oracle over the whole
// first-message batch.
struct NizkProof {
    std::vector<Graph> first_messages;
    std::vector<Permutation> responses;

    std::size_t rounds() const { return first_messages.size(); }
};

inline NizkProof nizk_prove(const Bits& omega, const GIInstance& x, const Permutation& w,
                            OracleTable& oracle, Rng& rng) {
    const std::size_t k = omega.size();
    if (k == 0) throw std::invalid_argument("nizk_prove: empty reference string");
    std::vector<ProverRound> rounds;
    rounds.reserve(k);
    NizkProof proof;
    for (std::size_t i = 0; i < k; ++i) {
        rounds.push_back(gi_prove_round(x, w, rng));
        proof.first_messages.push_back(rounds.back().a_sigma);
    }
    const Bits challenges = oracle.challenges(oracle_key(omega, x, proof.first_messages), k);
    for (std::size_t i = 0; i < k; ++i)
        proof.responses.push_back(rounds[i].responses[challenges[i]]);
    return proof;
}

inline bool nizk_verify(const Bits& omega, const GIInstance& x, const NizkProof& proof,
                        OracleTable& oracle) {
    const std::size_t k = omega.size();
    if (proof.first_messages.size() != k || proof.responses.size() != k || k == 0) return false;
    const Bits challenges = oracle.challenges(oracle_key(omega, x, proof.first_messages), k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!gi_verify_round(x, SigmaConversation{proof.first_messages[i], challenges[i],
                                                  proof.responses[i]}))
            return false;
    }
    return true;
}

// Witness-free prover: guesses the challenge of every round and builds the
// rounds via the simulator. Accepted exactly when all k guesses match.
inline NizkProof nizk_guess_prove(const Bits& omega, const GIInstance& x, Rng& rng) {
    const std::size_t k = omega.size();
    NizkProof proof;
    for (std::size_t i = 0; i < k; ++i) {
        const SigmaConversation conv = gi_simulate_round(x, rng.bit(), rng);
        proof.first_messages.push_back(conv.a_sigma);
        proof.responses.push_back(conv.response);
    }
    return proof;
}

// --- length-prefixed binary proof format -----------------------------------
// u32 round count, length-prefixed omega bits, then per round a graph
// (u16 v, u32 edge count, u16 pairs) and a permutation (u16 v, u16 images).

inline void append_graph(std::vector<std::uint8_t>& out, const Graph& g) {
    append_u16be(out, g.v);
    append_u32be(out, static_cast<std::uint32_t>(g.edges.size()));
    for (const auto& e : g.edges) {
        append_u16be(out, e.first);
        append_u16be(out, e.second);
    }
}

inline std::optional<Graph> read_graph(const std::vector<std::uint8_t>& in, std::size_t& pos) {
    const auto v = read_u16be(in, pos);
    const auto count = read_u32be(in, pos);
    if (!v || !count || *count > 4096) return std::nullopt;
    Graph g{*v, {}};
    for (std::uint32_t i = 0; i < *count; ++i) {
        const auto a = read_u16be(in, pos);
        const auto b = read_u16be(in, pos);
        if (!a || !b) return std::nullopt;
        g.edges.emplace_back(*a, *b);
    }
    try {
        g.normalize();
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return g;
}

inline std::vector<std::uint8_t> proof_to_bytes(const Bits& omega, const NizkProof& proof) {
    std::vector<std::uint8_t> out;
    append_u32be(out, static_cast<std::uint32_t>(proof.rounds()));
    append_bits(out, omega);
    for (std::size_t i = 0; i < proof.rounds(); ++i) {
        append_graph(out, proof.first_messages[i]);
        append_u16be(out, static_cast<std::uint16_t>(proof.responses[i].size()));
        for (auto image : proof.responses[i]) append_u16be(out, image);
    }
    return out;
}

inline std::optional<std::pair<Bits, NizkProof>> proof_from_bytes(
    const std::vector<std::uint8_t>& in) {
    std::size_t pos = 0;
    const auto rounds = read_u32be(in, pos);
    if (!rounds || *rounds == 0 || *rounds > 4096) return std::nullopt;
    const auto omega = read_bits(in, pos);
    if (!omega || omega->size() != *rounds) return std::nullopt;
    NizkProof proof;
    for (std::uint32_t i = 0; i < *rounds; ++i) {
        auto g = read_graph(in, pos);
        if (!g) return std::nullopt;
        proof.first_messages.push_back(std::move(*g));
        const auto n = read_u16be(in, pos);
        if (!n) return std::nullopt;
        Permutation p(*n);
        for (std::uint16_t j = 0; j < *n; ++j) {
            const auto image = read_u16be(in, pos);
            if (!image) return std::nullopt;
            p[j] = *image;
        }
        proof.responses.push_back(std::move(p));
    }
    if (pos != in.size()) return std::nullopt;
    return std::make_pair(*omega, std::move(proof));
}

// Zero-knowledge simulator: picks omega and the challenges itself, builds
// accepting rounds without a witness and programs the oracle accordingly.
// Fails (nullopt) if the oracle entry is already fixed.
inline std::optional<std::pair<Bits, NizkProof>> nizk_simulate(const GIInstance& x, std::size_t k,
                                                               OracleTable& oracle, Rng& rng) {
    if (k == 0) throw std::invalid_argument("nizk_simulate: k must be >= 1");
    const Bits omega = Bits::random(k, rng);
    const Bits challenges = Bits::random(k, rng);
    NizkProof proof;
    for (std::size_t i = 0; i < k; ++i) {
        const SigmaConversation conv = gi_simulate_round(x, challenges[i], rng);
        proof.first_messages.push_back(conv.a_sigma);
        proof.responses.push_back(conv.response);
    }
    if (!oracle.program(oracle_key(omega, x, proof.first_messages), challenges))
        return std::nullopt;
    return std::make_pair(omega, std::move(proof));
}

// Variant with every tape supplied by the caller (reference string,
// challenge bits, one relabeling per round); enumeration harnesses drive
// the simulator exhaustively through this.
inline std::optional<NizkProof> nizk_simulate_with(const GIInstance& x, const Bits& omega,
                                                   const Bits& challenges,
                                                   const std::vector<Permutation>& rhos,
                                                   OracleTable& oracle) {
    if (omega.size() != challenges.size() || omega.size() != rhos.size() || omega.empty())
        throw std::invalid_argument("nizk_simulate_with: length mismatch");
    NizkProof proof;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const SigmaConversation conv = gi_simulate_round_with(x, challenges[i], rhos[i]);
        proof.first_messages.push_back(conv.a_sigma);
        proof.responses.push_back(conv.response);
    }
    if (!oracle.program(oracle_key(omega, x, proof.first_messages), challenges))
        return std::nullopt;
    return proof;
}

}  // namespace qcf::zk
