#pragma once

#include <array>
#include <stdexcept>

#include "qcf/graph.hpp"

namespace qcf::zk {

// Three-move graph isomorphism proof round. The prover sends a relabeled
// copy of g0, the verifier picks a challenge bit, the prover reveals the
// permutation carrying the challenged graph onto the copy.
struct SigmaConversation {
    Graph a_sigma;
    std::uint8_t challenge = 0;
    Permutation response;
};

struct ProverRound {
    Graph a_sigma;
    std::array<Permutation, 2> responses;  // indexed by challenge bit

    SigmaConversation answer(std::uint8_t challenge) const {
        return SigmaConversation{a_sigma, static_cast<std::uint8_t>(challenge & 1),
                                 responses[challenge & 1]};
    }
};

inline ProverRound gi_prove_round_with(const GIInstance& x, const Permutation& w,
                                       const Permutation& rho) {
    if (!witness_valid(x, w)) throw std::invalid_argument("gi_prove_round: invalid witness");
    ProverRound round;
    round.a_sigma = apply_perm(x.g0, rho);
    round.responses[0] = rho;
    round.responses[1] = compose(rho, inverse(w));
    return round;
}

inline ProverRound gi_prove_round(const GIInstance& x, const Permutation& w, Rng& rng) {
    return gi_prove_round_with(x, w, random_perm(x.g0.v, rng));
}

inline bool gi_verify_round(const GIInstance& x, const SigmaConversation& conv) {
    const Graph& target = (conv.challenge & 1) ? x.g1 : x.g0;
    if (!is_permutation(conv.response) || conv.response.size() != target.v) return false;
    if (conv.a_sigma.v != target.v) return false;
    return apply_perm(target, conv.response) == conv.a_sigma;
}

// Honest-verifier simulator: relabel the challenged graph directly. Needs
// no witness and produces exactly the honest conversation distribution.
inline SigmaConversation gi_simulate_round_with(const GIInstance& x, std::uint8_t challenge,
                                                const Permutation& rho) {
    const Graph& target = (challenge & 1) ? x.g1 : x.g0;
    return SigmaConversation{apply_perm(target, rho), static_cast<std::uint8_t>(challenge & 1), rho};
}

inline SigmaConversation gi_simulate_round(const GIInstance& x, std::uint8_t challenge, Rng& rng) {
    return gi_simulate_round_with(x, challenge, random_perm(x.g0.v, rng));
}

}  // namespace qcf::zk
