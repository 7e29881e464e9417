#pragma once

#include <optional>
#include <string>

#include "qcf/transport.hpp"

namespace qcf::shell {

struct SessionResult {
    coinflip::Outcome outcome = coinflip::Outcome::fail();
    coinflip::Transcript transcript;
    std::optional<std::string> error;  // framing or transport diagnostic
};

// Drives one honest coin-flip session over an endpoint. Any framing or
// transport fault ends the session as FAIL with the diagnostic attached;
// nothing is retried.
inline SessionResult run_session(coinflip::Role role, Endpoint& endpoint,
                                 const coinflip::Scheme& scheme, Rng& rng) {
    SessionResult result;
    coinflip::SessionState state =
        role == coinflip::Role::Alice ? coinflip::SessionState::alice()
                                      : coinflip::SessionState::bob();
    try {
        if (role == coinflip::Role::Bob) {
            const auto first = coinflip::honest_step(state, scheme, std::nullopt, rng);
            if (first) send_message(endpoint, *first);
        }
        while (!state.finished()) {
            const coinflip::ProtocolMessage incoming = recv_message(endpoint);
            const auto outgoing = coinflip::honest_step(state, scheme, incoming, rng);
            if (outgoing) send_message(endpoint, *outgoing);
        }
    } catch (const FramingError& e) {
        state.phase = coinflip::Phase::Aborted;
        result.error = std::string("framing: ") + e.what();
    } catch (const TransportError& e) {
        state.phase = coinflip::Phase::Aborted;
        result.error = std::string("transport: ") + e.what();
    }
    result.outcome = state.outcome();
    result.transcript = state.transcript;
    return result;
}

// k sequential sessions over one connection; stops at the first failure.
struct MultiSessionResult {
    std::optional<Bits> coins;
    std::optional<std::string> error;
};

inline MultiSessionResult run_sessions(coinflip::Role role, Endpoint& endpoint,
                                       const coinflip::Scheme& scheme, std::size_t k, Rng& rng) {
    MultiSessionResult out;
    std::optional<std::string> first_error;
    out.coins = coinflip::generate_crs(k, [&](std::size_t) {
        SessionResult session = run_session(role, endpoint, scheme, rng);
        if (session.error && !first_error) first_error = session.error;
        return session.outcome;
    });
    out.error = first_error;
    return out;
}

}  // namespace qcf::shell
