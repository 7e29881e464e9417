#pragma once

// Test-side oracles: exact distribution comparison by full tape
// enumeration, and the deterministic adversary suites they run over.
// Nothing here is used by the library itself.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qcf/coinflip.hpp"
#include "qcf/iqzk.hpp"

namespace harness {

using qcf::Bits;
using qcf::Rng;

// Exact finite distribution: counts over string keys with a common
// denominator. Equality is cross-multiplied so differing denominators
// (conditioned enumerations) compare exactly.
struct Dist {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(const std::string& key) {
        ++counts[key];
        ++total;
    }
};

inline bool same_distribution(const Dist& a, const Dist& b) {
    if (a.total == 0 || b.total == 0) return a.total == b.total;
    if (a.counts.size() != b.counts.size()) return false;
    for (const auto& [key, count] : a.counts) {
        const auto it = b.counts.find(key);
        if (it == b.counts.end()) return false;
        if (static_cast<unsigned __int128>(count) * b.total !=
            static_cast<unsigned __int128>(it->second) * a.total)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Deterministic dishonest-Alice strategies for the coin-flip protocol.

struct StrategyCase {
    std::string name;
    qcf::coinflip::AliceStrategy strategy;
};

namespace detail {

inline Bits sigma_of(const qcf::coinflip::Transcript& t) {
    return t.front().as<qcf::coinflip::NonceMsg>()->sigma;
}

inline std::uint8_t challenge_of(const qcf::coinflip::Transcript& t) {
    for (const auto& msg : t)
        if (msg.tag() == qcf::coinflip::MsgTag::Challenge)
            return msg.as<qcf::coinflip::ChallengeMsg>()->b;
    return 0;
}

}  // namespace detail

enum class OpenMode { Honest, Refuse, WrongBit, WrongRand };

inline qcf::coinflip::AliceStrategy fixed_choice_strategy(const qcf::commitment::Scheme& scheme,
                                                          std::uint8_t a, std::uint64_t r,
                                                          OpenMode mode) {
    return [scheme, a, r, mode](const qcf::coinflip::Transcript& t) {
        using qcf::coinflip::ProtocolMessage;
        const Bits randomness = Bits::from_value(r, scheme.params.l);
        if (t.size() == 1) {
            const auto c = qcf::commitment::commit(
                scheme, qcf::commitment::ReceiverNonce{detail::sigma_of(t)}, a, randomness);
            return ProtocolMessage::commit(c.value);
        }
        switch (mode) {
            case OpenMode::Honest: return ProtocolMessage::open(a, randomness);
            case OpenMode::Refuse: return ProtocolMessage::abort();
            case OpenMode::WrongBit: return ProtocolMessage::open(1 ^ a, randomness);
            case OpenMode::WrongRand:
                return ProtocolMessage::open(
                    a, Bits::from_value((r + 1) % (1ULL << scheme.params.l), scheme.params.l));
        }
        return ProtocolMessage::abort();
    };
}

// a and r read off the received nonce; exercises transcript-dependent play.
inline qcf::coinflip::AliceStrategy nonce_driven_strategy(const qcf::commitment::Scheme& scheme,
                                                          OpenMode mode) {
    return [scheme, mode](const qcf::coinflip::Transcript& t) {
        using qcf::coinflip::ProtocolMessage;
        const Bits sigma = detail::sigma_of(t);
        const std::uint8_t a = sigma[0];
        const Bits randomness = sigma.slice(1, scheme.params.l);
        if (t.size() == 1) {
            const auto c = qcf::commitment::commit(
                scheme, qcf::commitment::ReceiverNonce{sigma}, a, randomness);
            return ProtocolMessage::commit(c.value);
        }
        if (mode == OpenMode::Refuse) return ProtocolMessage::abort();
        return ProtocolMessage::open(a, randomness);
    };
}

inline qcf::coinflip::AliceStrategy abort_at_commit_strategy() {
    return [](const qcf::coinflip::Transcript&) {
        return qcf::coinflip::ProtocolMessage::abort();
    };
}

// Commits to an arbitrary constant string; opening (if any) cannot verify
// unless that string happens to be in the image.
inline qcf::coinflip::AliceStrategy garbage_commit_strategy(const qcf::commitment::Scheme& scheme,
                                                            std::uint64_t pattern, bool open_after) {
    return [scheme, pattern, open_after](const qcf::coinflip::Transcript& t) {
        using qcf::coinflip::ProtocolMessage;
        if (t.size() == 1) {
            Bits value(scheme.params.commitment_bits());
            for (std::size_t i = 0; i < value.size(); ++i)
                value.set(i, (pattern >> (i % 64)) & 1);
            return ProtocolMessage::commit(value);
        }
        if (!open_after) return ProtocolMessage::abort();
        return ProtocolMessage::open(0, Bits(scheme.params.l));
    };
}

inline qcf::coinflip::AliceStrategy short_commit_strategy(const qcf::commitment::Scheme& scheme) {
    return [scheme](const qcf::coinflip::Transcript& t) {
        using qcf::coinflip::ProtocolMessage;
        if (t.size() == 1) return ProtocolMessage::commit(Bits(scheme.params.commitment_bits() - 1));
        return ProtocolMessage::abort();
    };
}

// Opens to the challenge bit itself when possible: a transcript-dependent
// (but still deterministic) opening rule.
inline qcf::coinflip::AliceStrategy echo_challenge_strategy(const qcf::commitment::Scheme& scheme,
                                                            std::uint8_t a, std::uint64_t r) {
    return [scheme, a, r](const qcf::coinflip::Transcript& t) {
        using qcf::coinflip::ProtocolMessage;
        const Bits randomness = Bits::from_value(r, scheme.params.l);
        if (t.size() == 1) {
            const auto c = qcf::commitment::commit(
                scheme, qcf::commitment::ReceiverNonce{detail::sigma_of(t)}, a, randomness);
            return ProtocolMessage::commit(c.value);
        }
        const std::uint8_t b = detail::challenge_of(t);
        if (b == a) return ProtocolMessage::open(a, randomness);
        return ProtocolMessage::abort();
    };
}

inline std::vector<StrategyCase> deterministic_alice_suite(const qcf::commitment::Scheme& scheme) {
    std::vector<StrategyCase> suite;
    const std::uint64_t r_count = 1ULL << scheme.params.l;
    for (std::uint8_t a = 0; a <= 1; ++a)
        for (std::uint64_t r = 0; r < r_count; ++r)
            suite.push_back({"honest a=" + std::to_string(a) + " r=" + std::to_string(r),
                             fixed_choice_strategy(scheme, a, r, OpenMode::Honest)});
    for (std::uint8_t a = 0; a <= 1; ++a)
        for (std::uint64_t r = 0; r < std::min<std::uint64_t>(r_count, 4); ++r) {
            suite.push_back({"refuse a=" + std::to_string(a) + " r=" + std::to_string(r),
                             fixed_choice_strategy(scheme, a, r, OpenMode::Refuse)});
            suite.push_back({"wrongbit a=" + std::to_string(a) + " r=" + std::to_string(r),
                             fixed_choice_strategy(scheme, a, r, OpenMode::WrongBit)});
            suite.push_back({"wrongrand a=" + std::to_string(a) + " r=" + std::to_string(r),
                             fixed_choice_strategy(scheme, a, r, OpenMode::WrongRand)});
        }
    suite.push_back({"nonce-driven honest", nonce_driven_strategy(scheme, OpenMode::Honest)});
    suite.push_back({"nonce-driven refuse", nonce_driven_strategy(scheme, OpenMode::Refuse)});
    suite.push_back({"abort at commit", abort_at_commit_strategy()});
    suite.push_back({"garbage commit abort", garbage_commit_strategy(scheme, 0, false)});
    suite.push_back({"garbage commit open", garbage_commit_strategy(scheme, 0x5a5a5a5a, true)});
    suite.push_back({"short commit", short_commit_strategy(scheme)});
    suite.push_back({"echo challenge", echo_challenge_strategy(scheme, 1, 2 % r_count)});
    return suite;
}

// ---------------------------------------------------------------------------
// Exactness harness: for a fixed nonce, enumerate honest Bob's challenge in
// the real world against the functionality coin in the ideal world and
// compare the (transcript, outcome) distributions exactly.

inline std::string run_key(const qcf::coinflip::RunResult& run) {
    return qcf::coinflip::transcript_key(run.transcript) + "=>" + run.outcome.str();
}

struct ExactnessReport {
    std::size_t nonces_checked = 0;
    std::size_t nonces_skipped = 0;  // extraction hit a binding break
    bool all_equal = true;
};

inline ExactnessReport check_alice_simulation_exactness(const qcf::commitment::Scheme& scheme,
                                                        const qcf::coinflip::AliceStrategy& strategy,
                                                        std::size_t nonce_samples, Rng& rng) {
    ExactnessReport report;
    while (report.nonces_checked < nonce_samples) {
        const Bits sigma = Bits::random(scheme.params.nonce_bits(), rng);
        Dist real, ideal;
        bool violated = false;
        try {
            for (std::uint8_t coin = 0; coin <= 1; ++coin)
                ideal.add(run_key(qcf::coinflip::simulate_dishonest_alice(scheme, strategy, sigma, coin)));
        } catch (const qcf::coinflip::BindingViolationError&) {
            violated = true;
        }
        if (violated) {
            // charged to the 2^-n bad-nonce event; skip and record
            ++report.nonces_skipped;
            if (report.nonces_skipped > 4 + nonce_samples) {
                report.all_equal = false;
                return report;
            }
            continue;
        }
        for (std::uint8_t b = 0; b <= 1; ++b)
            real.add(run_key(qcf::coinflip::run_real_alice(scheme, strategy, sigma, b)));
        if (!same_distribution(real, ideal)) report.all_equal = false;
        ++report.nonces_checked;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Full-enumeration harness for the composed protocol at k = 1: the real
// prover-verifier run on every tape versus the simulator conditioned on the
// session landing on the simulated coin (rejection sampling semantics).

struct IqzkEnumerationConfig {
    qcf::commitment::Scheme scheme = qcf::commitment::Scheme::stub(2);
    qcf::zk::GIInstance x;
    qcf::zk::Permutation witness;
    bool bit_fixing_verifier = false;  // verifier always answers 0
};

inline std::vector<qcf::zk::Permutation> all_perms(std::uint16_t v) {
    std::vector<qcf::zk::Permutation> out;
    qcf::zk::Permutation p = qcf::zk::identity_perm(v);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

inline Dist enumerate_real_iqzk(const IqzkEnumerationConfig& config) {
    using namespace qcf;
    const auto& scheme = config.scheme;
    const std::size_t sigma_space = 1ULL << scheme.params.nonce_bits();
    const std::size_t r_space = 1ULL << scheme.params.l;
    const auto perms = all_perms(config.x.g0.v);
    Dist dist;
    for (std::uint64_t sv = 0; sv < sigma_space; ++sv) {
        const Bits sigma = Bits::from_value(sv, scheme.params.nonce_bits());
        for (std::uint8_t a = 0; a <= 1; ++a)
            for (std::uint64_t r = 0; r < r_space; ++r)
                for (std::uint8_t b = 0; b <= (config.bit_fixing_verifier ? 0 : 1); ++b)
                    for (const auto& rho : perms)
                        for (std::uint8_t oracle_bit = 0; oracle_bit <= 1; ++oracle_bit) {
                            const Bits randomness = Bits::from_value(r, scheme.params.l);
                            zk::IqzkRun run;
                            coinflip::Transcript t;
                            t.push_back(coinflip::ProtocolMessage::nonce(sigma));
                            const auto c = commitment::commit(
                                scheme, commitment::ReceiverNonce{sigma}, a, randomness);
                            t.push_back(coinflip::ProtocolMessage::commit(c.value));
                            t.push_back(coinflip::ProtocolMessage::challenge(b));
                            t.push_back(coinflip::ProtocolMessage::open(a, randomness));
                            run.sessions.push_back(t);
                            const std::uint8_t coin = a ^ b;
                            Bits omega(1);
                            omega.set(0, coin);
                            run.omega = omega;

                            auto oracle = zk::OracleTable::fixed_tape([&] {
                                Bits tape(1);
                                tape.set(0, oracle_bit);
                                return tape;
                            }());
                            const auto round = zk::gi_prove_round_with(config.x, config.witness, rho);
                            zk::NizkProof proof;
                            proof.first_messages.push_back(round.a_sigma);
                            const Bits challenge = oracle.challenges(
                                zk::oracle_key(omega, config.x, proof.first_messages), 1);
                            proof.responses.push_back(round.responses[challenge[0]]);
                            run.accepted = zk::nizk_verify(omega, config.x, proof, oracle);
                            run.proof = std::move(proof);
                            dist.add(zk::iqzk_transcript_key(run));
                        }
    }
    return dist;
}

inline Dist enumerate_simulated_iqzk(const IqzkEnumerationConfig& config) {
    using namespace qcf;
    const auto& scheme = config.scheme;
    const std::size_t sigma_space = 1ULL << scheme.params.nonce_bits();
    const std::size_t r_space = 1ULL << scheme.params.l;
    const auto perms = all_perms(config.x.g0.v);
    Dist dist;
    for (std::uint8_t omega_bit = 0; omega_bit <= 1; ++omega_bit)
        for (std::uint8_t challenge = 0; challenge <= 1; ++challenge)
            for (const auto& rho : perms)
                for (std::uint64_t sv = 0; sv < sigma_space; ++sv)
                    for (std::uint8_t a = 0; a <= 1; ++a)
                        for (std::uint64_t r = 0; r < r_space; ++r)
                            for (std::uint8_t b = 0; b <= (config.bit_fixing_verifier ? 0 : 1);
                                 ++b) {
                                Bits omega(1);
                                omega.set(0, omega_bit);
                                Bits challenges(1);
                                challenges.set(0, challenge);
                                auto oracle = zk::OracleTable::fixed_tape(Bits{});
                                auto proof = zk::nizk_simulate_with(config.x, omega, challenges,
                                                                    {rho}, oracle);
                                if (!proof) continue;  // cannot happen on a fresh table
                                const Bits sigma =
                                    Bits::from_value(sv, scheme.params.nonce_bits());
                                const std::uint8_t fixed_b =
                                    config.bit_fixing_verifier ? 0 : b;
                                auto session = zk::force_session_attempt(
                                    scheme, sigma, a, Bits::from_value(r, scheme.params.l),
                                    [fixed_b](const coinflip::Transcript&) { return fixed_b; },
                                    omega_bit);
                                if (!session) continue;  // rejection-sampled away
                                zk::IqzkRun run;
                                run.omega = omega;
                                run.sessions.push_back(std::move(*session));
                                run.accepted = zk::nizk_verify(omega, config.x, *proof, oracle);
                                run.proof = std::move(*proof);
                                dist.add(zk::iqzk_transcript_key(run));
                            }
    return dist;
}

}  // namespace harness
