#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qcf/commitment.hpp"

namespace qcf::coinflip {

using commitment::Commitment;
using commitment::Opening;
using commitment::ReceiverNonce;
using commitment::Scheme;

// Wire messages, in protocol order. The receiver nonce is message zero of
// every session because the commitment scheme is two-message.
struct NonceMsg { Bits sigma; };
struct CommitMsg { Bits value; };
struct ChallengeMsg { std::uint8_t b = 0; };
struct OpenMsg { std::uint8_t bit = 0; Bits randomness; };
struct AbortMsg {};

enum class MsgTag : std::uint8_t { Nonce = 0, Commit = 1, Challenge = 2, Open = 3, Abort = 4 };

struct ProtocolMessage {
    std::variant<NonceMsg, CommitMsg, ChallengeMsg, OpenMsg, AbortMsg> body;

    MsgTag tag() const { return static_cast<MsgTag>(body.index()); }

    template <typename T> const T* as() const { return std::get_if<T>(&body); }

    static ProtocolMessage nonce(Bits sigma) { return {NonceMsg{std::move(sigma)}}; }
    static ProtocolMessage commit(Bits value) { return {CommitMsg{std::move(value)}}; }
    static ProtocolMessage challenge(std::uint8_t b) { return {ChallengeMsg{static_cast<std::uint8_t>(b & 1)}}; }
    static ProtocolMessage open(std::uint8_t bit, Bits randomness) {
        return {OpenMsg{static_cast<std::uint8_t>(bit & 1), std::move(randomness)}};
    }
    static ProtocolMessage abort() { return {AbortMsg{}}; }
};

using Transcript = std::vector<ProtocolMessage>;

// Stable text key for distribution comparisons.
inline std::string transcript_key(const Transcript& transcript) {
    std::string key;
    for (const auto& msg : transcript) {
        key += static_cast<char>('0' + static_cast<int>(msg.tag()));
        key += ':';
        switch (msg.tag()) {
            case MsgTag::Nonce: key += msg.as<NonceMsg>()->sigma.str(); break;
            case MsgTag::Commit: key += msg.as<CommitMsg>()->value.str(); break;
            case MsgTag::Challenge: key += static_cast<char>('0' + msg.as<ChallengeMsg>()->b); break;
            case MsgTag::Open: {
                const auto* o = msg.as<OpenMsg>();
                key += static_cast<char>('0' + o->bit);
                key += '|';
                key += o->randomness.str();
                break;
            }
            case MsgTag::Abort: break;
        }
        key += ';';
    }
    return key;
}

struct Outcome {
    bool failed = true;
    std::uint8_t coin = 0;

    static Outcome fail() { return Outcome{true, 0}; }
    static Outcome coin_value(std::uint8_t c) { return Outcome{false, static_cast<std::uint8_t>(c & 1)}; }
    bool operator==(const Outcome& other) const {
        return failed == other.failed && (failed || coin == other.coin);
    }
    std::string str() const { return failed ? "FAIL" : (coin ? "COIN(1)" : "COIN(0)"); }
};

enum class Role : std::uint8_t { Alice, Bob };
enum class Phase : std::uint8_t { Start, AwaitCommit, AwaitChallenge, AwaitOpen, Done, Aborted };

// One honest party of the session. Bob speaks first (nonce), then commit,
// challenge, open; both ends land in Done with coin = a XOR b.
struct SessionState {
    Role role = Role::Alice;
    Phase phase = Phase::Start;
    std::optional<std::uint8_t> a;
    std::optional<std::uint8_t> b;
    std::optional<Bits> randomness;
    std::optional<ReceiverNonce> nonce;
    std::optional<Commitment> received_commit;
    Transcript transcript;

    static SessionState alice() { return SessionState{Role::Alice, Phase::Start, {}, {}, {}, {}, {}, {}}; }
    static SessionState bob() { return SessionState{Role::Bob, Phase::Start, {}, {}, {}, {}, {}, {}}; }

    bool done() const { return phase == Phase::Done; }
    bool aborted() const { return phase == Phase::Aborted; }
    bool finished() const { return done() || aborted(); }

    Outcome outcome() const {
        if (done() && a && b) return Outcome::coin_value(*a ^ *b);
        return Outcome::fail();
    }
};

// Advances one honest party by exactly one phase. A message of the wrong
// variant, a malformed payload or an invalid opening moves the state to
// Aborted; the transition never throws on peer-controlled data.
inline std::optional<ProtocolMessage> honest_step(SessionState& state, const Scheme& scheme,
                                                  const std::optional<ProtocolMessage>& incoming,
                                                  Rng& rng) {
    const auto abort_session = [&]() -> std::optional<ProtocolMessage> {
        state.phase = Phase::Aborted;
        return std::nullopt;
    };
    if (incoming) state.transcript.push_back(*incoming);
    if (incoming && incoming->tag() == MsgTag::Abort) return abort_session();

    switch (state.phase) {
        case Phase::Start:
            if (state.role == Role::Bob) {
                if (incoming) return abort_session();
                state.nonce = ReceiverNonce::random(scheme.params, rng);
                state.phase = Phase::AwaitCommit;
                auto msg = ProtocolMessage::nonce(state.nonce->sigma);
                state.transcript.push_back(msg);
                return msg;
            } else {
                const auto* nonce = incoming ? incoming->as<NonceMsg>() : nullptr;
                if (!nonce || nonce->sigma.size() != scheme.params.nonce_bits()) return abort_session();
                state.nonce = ReceiverNonce{nonce->sigma};
                state.a = rng.bit();
                state.randomness = Bits::random(scheme.params.l, rng);
                state.phase = Phase::AwaitChallenge;
                auto msg = ProtocolMessage::commit(
                    commitment::commit(scheme, *state.nonce, *state.a, *state.randomness).value);
                state.transcript.push_back(msg);
                return msg;
            }
        case Phase::AwaitCommit: {
            const auto* commit = incoming ? incoming->as<CommitMsg>() : nullptr;
            if (!commit || commit->value.size() != scheme.params.commitment_bits()) return abort_session();
            state.received_commit = Commitment{commit->value};
            state.b = rng.bit();
            state.phase = Phase::AwaitOpen;
            auto msg = ProtocolMessage::challenge(*state.b);
            state.transcript.push_back(msg);
            return msg;
        }
        case Phase::AwaitChallenge: {
            const auto* challenge = incoming ? incoming->as<ChallengeMsg>() : nullptr;
            if (!challenge) return abort_session();
            state.b = challenge->b & 1;
            state.phase = Phase::Done;
            auto msg = ProtocolMessage::open(*state.a, *state.randomness);
            state.transcript.push_back(msg);
            return msg;
        }
        case Phase::AwaitOpen: {
            const auto* open = incoming ? incoming->as<OpenMsg>() : nullptr;
            if (!open) return abort_session();
            const Opening opening{open->bit, open->randomness};
            if (!commitment::verify_open(scheme, *state.nonce, *state.received_commit, opening))
                return abort_session();
            state.a = open->bit & 1;
            state.phase = Phase::Done;
            return std::nullopt;
        }
        case Phase::Done:
        case Phase::Aborted:
            return abort_session();
    }
    return std::nullopt;
}

struct HonestRun {
    Transcript transcript;
    Outcome alice_out;
    Outcome bob_out;
};

inline HonestRun run_honest_session(const Scheme& scheme, Rng& alice_rng, Rng& bob_rng) {
    SessionState alice = SessionState::alice();
    SessionState bob = SessionState::bob();
    std::optional<ProtocolMessage> msg = honest_step(bob, scheme, std::nullopt, bob_rng);
    bool alice_turn = true;
    while (msg) {
        msg = alice_turn ? honest_step(alice, scheme, msg, alice_rng)
                         : honest_step(bob, scheme, msg, bob_rng);
        alice_turn = !alice_turn;
    }
    return HonestRun{bob.transcript, alice.outcome(), bob.outcome()};
}

// ---------------------------------------------------------------------------
// Ideal functionality: a trusted coin tosser where Alice sees the coin first
// and may refuse, turning Bob's output into FAIL.

enum class AliceDecision : std::uint8_t { Ok, Refuse };

class FcoinSession {
public:
    std::uint8_t start(Rng& rng) {
        coin_ = rng.bit();
        started_ = true;
        return coin_;
    }
    Outcome finish(AliceDecision second) const {
        if (!started_) throw std::logic_error("FcoinSession: finish before start");
        return second == AliceDecision::Ok ? Outcome::coin_value(coin_) : Outcome::fail();
    }

private:
    std::uint8_t coin_ = 0;
    bool started_ = false;
};

inline std::pair<std::uint8_t, Outcome> ideal_fcoin(AliceDecision second, Rng& rng) {
    FcoinSession session;
    const std::uint8_t coin = session.start(rng);
    return {coin, session.finish(second)};
}

// ---------------------------------------------------------------------------
// Exhaustive extraction from a commitment. Deliberately exponential in n;
// the efficient trapdoor route lives in the dual-mode scheme.

struct Preimage {
    std::uint8_t bit = 0;
    Bits randomness;
};

class BindingViolationError : public std::runtime_error {
public:
    BindingViolationError(Preimage first, Preimage second)
        : std::runtime_error("commitment opens to both bits"),
          first_(std::move(first)), second_(std::move(second)) {}
    const Preimage& first_preimage() const { return first_; }
    const Preimage& second_preimage() const { return second_; }

private:
    Preimage first_, second_;
};

inline std::optional<Preimage> extract_commitment(const Scheme& scheme, const ReceiverNonce& nonce,
                                                  const Commitment& c) {
    if (scheme.params.n > 20)
        throw std::invalid_argument("extract_commitment: exhaustive search capped at n <= 20");
    std::optional<Preimage> found;
    for (std::uint8_t bit = 0; bit <= 1; ++bit) {
        for (std::uint64_t r = 0; r < (1ULL << scheme.params.l); ++r) {
            const Bits randomness = Bits::from_value(r, scheme.params.l);
            if (commitment::commit(scheme, nonce, bit, randomness) == c) {
                Preimage preimage{bit, randomness};
                if (found && found->bit != bit)
                    throw BindingViolationError(*found, preimage);
                if (!found) found = std::move(preimage);
                // same-bit second preimage: keep the first, binding is intact
            }
        }
    }
    return found;
}

// ---------------------------------------------------------------------------
// Adversarial Alice harness: a strategy supplies each outgoing message as a
// function of the transcript so far. Honest Bob (real world) or the ideal
// simulation (extract, then answer coin XOR a) drives it.

using AliceStrategy = std::function<ProtocolMessage(const Transcript&)>;

struct RunResult {
    Transcript transcript;
    Outcome outcome;  // Bob's output
};

// Real-world run against honest Bob with fixed receiver tape (sigma, b).
inline RunResult run_real_alice(const Scheme& scheme, const AliceStrategy& strategy,
                                const Bits& sigma, std::uint8_t b) {
    RunResult result;
    result.outcome = Outcome::fail();
    Transcript& t = result.transcript;
    t.push_back(ProtocolMessage::nonce(sigma));

    ProtocolMessage commit_msg = strategy(t);
    t.push_back(commit_msg);
    const auto* commit = commit_msg.as<CommitMsg>();
    if (!commit || commit->value.size() != scheme.params.commitment_bits()) return result;

    t.push_back(ProtocolMessage::challenge(b));

    ProtocolMessage open_msg = strategy(t);
    t.push_back(open_msg);
    const auto* open = open_msg.as<OpenMsg>();
    if (!open) return result;
    const Opening opening{open->bit, open->randomness};
    if (!commitment::verify_open(scheme, ReceiverNonce{sigma}, Commitment{commit->value}, opening))
        return result;
    result.outcome = Outcome::coin_value((open->bit & 1) ^ (b & 1));
    return result;
}

inline RunResult run_real_alice(const Scheme& scheme, const AliceStrategy& strategy, Rng& rng) {
    const Bits sigma = Bits::random(scheme.params.nonce_bits(), rng);
    return run_real_alice(scheme, strategy, sigma, rng.bit());
}

// Ideal-world simulation with fixed tape (sigma, coin): extract Alice's bit
// from her commitment, answer b = coin XOR a, then report OK or REFUSE to
// the functionality depending on whether she opens validly.
inline RunResult simulate_dishonest_alice(const Scheme& scheme, const AliceStrategy& strategy,
                                          const Bits& sigma, std::uint8_t coin) {
    RunResult result;
    result.outcome = Outcome::fail();
    Transcript& t = result.transcript;
    t.push_back(ProtocolMessage::nonce(sigma));
    const ReceiverNonce nonce{sigma};

    ProtocolMessage commit_msg = strategy(t);
    t.push_back(commit_msg);
    const auto* commit = commit_msg.as<CommitMsg>();
    if (!commit || commit->value.size() != scheme.params.commitment_bits()) return result;
    const Commitment c{commit->value};

    // May throw BindingViolationError; the caller sees the same failure the
    // security argument charges to the 2^-n nonce event.
    const auto preimage = extract_commitment(scheme, nonce, c);
    const std::uint8_t a = preimage ? preimage->bit : 0;

    const std::uint8_t b = (coin ^ a) & 1;
    t.push_back(ProtocolMessage::challenge(b));

    ProtocolMessage open_msg = strategy(t);
    t.push_back(open_msg);
    const auto* open = open_msg.as<OpenMsg>();
    if (!open) return result;  // REFUSE
    const Opening opening{open->bit, open->randomness};
    if (!commitment::verify_open(scheme, nonce, c, opening)) return result;  // REFUSE
    result.outcome = Outcome::coin_value(coin);
    return result;
}

inline RunResult simulate_dishonest_alice(const Scheme& scheme, const AliceStrategy& strategy,
                                          Rng& rng) {
    const Bits sigma = Bits::random(scheme.params.nonce_bits(), rng);
    FcoinSession fcoin;
    const std::uint8_t coin = fcoin.start(rng);
    return simulate_dishonest_alice(scheme, strategy, sigma, coin);
}

// ---------------------------------------------------------------------------
// Adversarial Bob harness: the strategy supplies the nonce and the challenge
// bit; Alice is honest and the driver verifies like honest Bob would.

struct BobStrategy {
    std::function<Bits(Rng&)> nonce;
    std::function<std::uint8_t(const Transcript&, Rng&)> challenge;
};

inline BobStrategy honest_bob(const Scheme& scheme) {
    return BobStrategy{
        [params = scheme.params](Rng& rng) { return Bits::random(params.nonce_bits(), rng); },
        [](const Transcript&, Rng& rng) { return rng.bit(); }};
}

inline BobStrategy bit_fixing_bob(const Scheme& scheme, std::uint8_t fixed_b) {
    return BobStrategy{
        [params = scheme.params](Rng& rng) { return Bits::random(params.nonce_bits(), rng); },
        [fixed_b](const Transcript&, Rng&) { return static_cast<std::uint8_t>(fixed_b & 1); }};
}

inline RunResult run_against_bob(const Scheme& scheme, const BobStrategy& bob,
                                 Rng& alice_rng, Rng& bob_rng) {
    RunResult result;
    result.outcome = Outcome::fail();
    Transcript& t = result.transcript;
    const Bits sigma = bob.nonce(bob_rng);
    t.push_back(ProtocolMessage::nonce(sigma));
    if (sigma.size() != scheme.params.nonce_bits()) return result;
    const ReceiverNonce nonce{sigma};

    const std::uint8_t a = alice_rng.bit();
    const Bits randomness = Bits::random(scheme.params.l, alice_rng);
    const Commitment c = commitment::commit(scheme, nonce, a, randomness);
    t.push_back(ProtocolMessage::commit(c.value));

    const std::uint8_t b = bob.challenge(t, bob_rng) & 1;
    t.push_back(ProtocolMessage::challenge(b));

    t.push_back(ProtocolMessage::open(a, randomness));
    result.outcome = Outcome::coin_value(a ^ b);
    return result;
}

// ---------------------------------------------------------------------------
// k sequential coin-flips; any failed session aborts the whole string.

inline std::optional<Bits> generate_crs(std::size_t k,
                                        const std::function<Outcome(std::size_t)>& run_flip) {
    if (k < 1) throw std::invalid_argument("generate_crs: k must be >= 1");
    Bits coins(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Outcome out = run_flip(i);
        if (out.failed) return std::nullopt;
        coins.set(i, out.coin);
    }
    return coins;
}

}  // namespace qcf::coinflip
