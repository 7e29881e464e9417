#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcf/coinflip.hpp"

namespace qcf::shell {

// Frame layout: one tag byte (0 nonce, 1 commit, 2 challenge, 3 open,
// 4 abort), a 32-bit big-endian payload bit count, then the payload packed
// MSB-first with zero padding. Unknown tags, oversized counts, nonzero
// padding and shape violations are framing errors, never aborts-by-guess.

class FramingError : public std::runtime_error {
public:
    explicit FramingError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::size_t kMaxPayloadBits = 1u << 20;

inline Bits message_payload(const coinflip::ProtocolMessage& msg) {
    using coinflip::MsgTag;
    switch (msg.tag()) {
        case MsgTag::Nonce: return msg.as<coinflip::NonceMsg>()->sigma;
        case MsgTag::Commit: return msg.as<coinflip::CommitMsg>()->value;
        case MsgTag::Challenge: {
            Bits b(1);
            b.set(0, msg.as<coinflip::ChallengeMsg>()->b);
            return b;
        }
        case MsgTag::Open: {
            const auto* open = msg.as<coinflip::OpenMsg>();
            Bits b(1);
            b.set(0, open->bit);
            return b + open->randomness;
        }
        case MsgTag::Abort: return Bits{};
    }
    throw std::logic_error("message_payload: bad tag");
}

inline std::vector<std::uint8_t> encode_frame(const coinflip::ProtocolMessage& msg) {
    std::vector<std::uint8_t> out;
    out.push_back(static_cast<std::uint8_t>(msg.tag()));
    append_bits(out, message_payload(msg));
    return out;
}

inline coinflip::ProtocolMessage message_from_payload(std::uint8_t tag, const Bits& payload) {
    using coinflip::MsgTag;
    using coinflip::ProtocolMessage;
    switch (static_cast<MsgTag>(tag)) {
        case MsgTag::Nonce: return ProtocolMessage::nonce(payload);
        case MsgTag::Commit: return ProtocolMessage::commit(payload);
        case MsgTag::Challenge:
            if (payload.size() != 1) throw FramingError("challenge payload must be one bit");
            return ProtocolMessage::challenge(payload[0]);
        case MsgTag::Open:
            if (payload.size() < 1) throw FramingError("open payload too short");
            return ProtocolMessage::open(payload[0], payload.slice(1, payload.size() - 1));
        case MsgTag::Abort:
            if (!payload.empty()) throw FramingError("abort payload must be empty");
            return ProtocolMessage::abort();
        default:
            throw FramingError("unknown message tag " + std::to_string(tag));
    }
}

// Whole-buffer decode used by tests; transports read incrementally instead.
inline coinflip::ProtocolMessage decode_frame(const std::vector<std::uint8_t>& frame) {
    if (frame.empty()) throw FramingError("empty frame");
    std::size_t pos = 1;
    const auto payload = read_bits(frame, pos, kMaxPayloadBits);
    if (!payload) throw FramingError("bad payload length or padding");
    if (pos != frame.size()) throw FramingError("trailing bytes after frame");
    return message_from_payload(frame[0], *payload);
}

}  // namespace qcf::shell
