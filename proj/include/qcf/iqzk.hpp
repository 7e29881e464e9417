#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcf/coinflip.hpp"
#include "qcf/nizk.hpp"
#include "qcf/qrewind.hpp"

namespace qcf::zk {

// Interactive protocol: k coin-flip sessions build the reference string,
// then a single non-interactive proof bound to it.

struct IqzkVerifier {
    std::function<Bits(std::size_t session, Rng&)> nonce;
    std::function<std::uint8_t(std::size_t session, const coinflip::Transcript&, Rng&)> challenge;
};

inline IqzkVerifier honest_iqzk_verifier(const commitment::Scheme& scheme) {
    return IqzkVerifier{
        [params = scheme.params](std::size_t, Rng& rng) {
            return Bits::random(params.nonce_bits(), rng);
        },
        [](std::size_t, const coinflip::Transcript&, Rng& rng) { return rng.bit(); }};
}

inline IqzkVerifier bit_fixing_iqzk_verifier(const commitment::Scheme& scheme, std::uint8_t b) {
    return IqzkVerifier{
        [params = scheme.params](std::size_t, Rng& rng) {
            return Bits::random(params.nonce_bits(), rng);
        },
        [b](std::size_t, const coinflip::Transcript&, Rng&) {
            return static_cast<std::uint8_t>(b & 1);
        }};
}

struct IqzkProver {
    std::optional<Permutation> witness;    // honest when set, guessing otherwise
    std::optional<std::size_t> refuse_at;  // abort instead of opening session i
};

struct IqzkRun {
    bool accepted = false;
    std::vector<coinflip::Transcript> sessions;
    Bits omega;
    std::optional<NizkProof> proof;
};

inline std::string iqzk_transcript_key(const IqzkRun& run) {
    std::string key;
    for (const auto& session : run.sessions) {
        key += coinflip::transcript_key(session);
        key += '/';
    }
    key += "pi:";
    if (run.proof) {
        for (std::uint8_t byte : proof_to_bytes(run.omega, *run.proof)) {
            static const char* hex = "0123456789abcdef";
            key += hex[byte >> 4];
            key += hex[byte & 15];
        }
    }
    key += run.accepted ? "|accept" : "|reject";
    return key;
}

// Intermediate protocol against the ideal coin functionality.
inline IqzkRun iqzk_fcoin_run(const GIInstance& x, const IqzkProver& prover, std::size_t k,
                              OracleTable& oracle, Rng& rng) {
    IqzkRun run;
    Bits coins(k);
    for (std::size_t i = 0; i < k; ++i) {
        coinflip::FcoinSession fcoin;
        fcoin.start(rng);  // the prover sees the coin before deciding
        const auto decision = (prover.refuse_at && *prover.refuse_at == i)
                                  ? coinflip::AliceDecision::Refuse
                                  : coinflip::AliceDecision::Ok;
        const coinflip::Outcome out = fcoin.finish(decision);
        if (out.failed) return run;  // verifier aborts, no proof checked
        coins.set(i, out.coin);
    }
    run.omega = coins;
    run.proof = prover.witness ? nizk_prove(run.omega, x, *prover.witness, oracle, rng)
                               : nizk_guess_prove(run.omega, x, rng);
    run.accepted = nizk_verify(run.omega, x, *run.proof, oracle);
    return run;
}

// The real protocol: coin-flips over the commitment scheme, then the proof.
inline IqzkRun iqzk_run(const commitment::Scheme& scheme, const GIInstance& x,
                        const IqzkProver& prover, std::size_t k, const IqzkVerifier& verifier,
                        OracleTable& oracle, Rng& prover_rng, Rng& verifier_rng) {
    IqzkRun run;
    Bits coins(k);
    for (std::size_t i = 0; i < k; ++i) {
        coinflip::Transcript t;
        const Bits sigma = verifier.nonce(i, verifier_rng);
        t.push_back(coinflip::ProtocolMessage::nonce(sigma));
        const commitment::ReceiverNonce nonce{sigma};

        const std::uint8_t a = prover_rng.bit();
        const Bits randomness = Bits::random(scheme.params.l, prover_rng);
        const auto c = commitment::commit(scheme, nonce, a, randomness);
        t.push_back(coinflip::ProtocolMessage::commit(c.value));

        const std::uint8_t b = verifier.challenge(i, t, verifier_rng) & 1;
        t.push_back(coinflip::ProtocolMessage::challenge(b));

        if (prover.refuse_at && *prover.refuse_at == i) {
            t.push_back(coinflip::ProtocolMessage::abort());
            run.sessions.push_back(std::move(t));
            return run;  // verifier rejects outright
        }
        t.push_back(coinflip::ProtocolMessage::open(a, randomness));
        run.sessions.push_back(std::move(t));
        if (!commitment::verify_open(scheme, nonce, c, commitment::Opening{a, randomness}))
            return run;
        coins.set(i, a ^ b);
    }
    run.omega = coins;
    run.proof = prover.witness ? nizk_prove(run.omega, x, *prover.witness, oracle, prover_rng)
                               : nizk_guess_prove(run.omega, x, prover_rng);
    run.accepted = nizk_verify(run.omega, x, *run.proof, oracle);
    return run;
}

// One forcing attempt of the coin-flip side of the simulator: commit to the
// supplied (a, r), let the verifier answer, keep the session only when the
// produced coin matches. The caller rewinds by retrying with fresh tapes.
inline std::optional<coinflip::Transcript> force_session_attempt(
    const commitment::Scheme& scheme, const Bits& sigma, std::uint8_t a, const Bits& randomness,
    const std::function<std::uint8_t(const coinflip::Transcript&)>& challenge, std::uint8_t coin) {
    coinflip::Transcript t;
    t.push_back(coinflip::ProtocolMessage::nonce(sigma));
    const auto c = commitment::commit(scheme, commitment::ReceiverNonce{sigma}, a, randomness);
    t.push_back(coinflip::ProtocolMessage::commit(c.value));
    const std::uint8_t b = challenge(t) & 1;
    t.push_back(coinflip::ProtocolMessage::challenge(b));
    if (((a ^ b) & 1) != (coin & 1)) return std::nullopt;
    t.push_back(coinflip::ProtocolMessage::open(a, randomness));
    return t;
}

// Transcript simulator against a classical verifier: obtain (omega, proof)
// from the proof simulator, then force every coin-flip session to land on
// the matching bit of omega by rewinding the verifier.
inline std::optional<IqzkRun> iqzk_simulate(const commitment::Scheme& scheme, const GIInstance& x,
                                            std::size_t k, const IqzkVerifier& verifier,
                                            OracleTable& oracle, Rng& rng,
                                            std::size_t attempt_budget = 64) {
    auto simulated = nizk_simulate(x, k, oracle, rng);
    if (!simulated) return std::nullopt;
    IqzkRun run;
    run.omega = simulated->first;
    run.proof = std::move(simulated->second);
    for (std::size_t i = 0; i < k; ++i) {
        bool forced = false;
        for (std::size_t attempt = 0; attempt < attempt_budget; ++attempt) {
            const Bits sigma = verifier.nonce(i, rng);
            const std::uint8_t a = rng.bit();
            const Bits randomness = Bits::random(scheme.params.l, rng);
            auto session = force_session_attempt(
                scheme, sigma, a, randomness,
                [&](const coinflip::Transcript& t) { return verifier.challenge(i, t, rng); },
                run.omega[i]);
            if (session) {
                run.sessions.push_back(std::move(*session));
                forced = true;
                break;
            }
        }
        if (!forced) return std::nullopt;  // rewind budget exhausted
    }
    run.accepted = nizk_verify(run.omega, x, *run.proof, oracle);
    return run;
}

// Demonstration wiring of the statevector rewinder as the per-session coin
// forcer: each session runs against a quantum answer strategy over the toy
// commitment, and the measured conversation supplies (com, b, open).
struct QuantumSessionConversation {
    std::uint8_t coin = 0;
    qrewind::Conversation conversation;
    qrewind::RewindReport report;
};

struct QuantumIqzkSimulation {
    Bits omega;
    NizkProof proof;
    std::vector<QuantumSessionConversation> sessions;
    bool proof_verifies = false;
};

inline std::optional<QuantumIqzkSimulation> iqzk_simulate_quantum(
    const GIInstance& x, std::size_t k, const qrewind::RegisterLayout& layout,
    const qrewind::ToyCommitment& toy, const qrewind::AdversaryCircuit& adversary,
    OracleTable& oracle, Rng& rng, std::size_t max_iters = 64) {
    auto simulated = nizk_simulate(x, k, oracle, rng);
    if (!simulated) return std::nullopt;
    QuantumIqzkSimulation sim;
    sim.omega = simulated->first;
    sim.proof = std::move(simulated->second);
    for (std::size_t i = 0; i < k; ++i) {
        const std::uint8_t coin = sim.omega[i];
        qrewind::RewindRun run = qrewind::run_rcoin(layout, toy, adversary, coin, rng, max_iters);
        if (!run.report.success) return std::nullopt;
        const auto conv = qrewind::measure_conversation(run.final_state, layout, rng);
        sim.sessions.push_back(QuantumSessionConversation{coin, conv, run.report});
    }
    sim.proof_verifies = nizk_verify(sim.omega, x, sim.proof, oracle);
    return sim;
}

}  // namespace qcf::zk
