#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcf/rng.hpp"

namespace qcf {

// Bit string with wire-order semantics: index 0 is the first bit on the
// wire and the most significant bit of any numeric view. Packing pads the
// final byte with zero bits.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : bits_(n, 0) {}

    static Bits from_string(const std::string& s) {
        Bits out(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') out.bits_[i] = 1;
            else if (s[i] != '0') throw std::invalid_argument("Bits::from_string: expected 0/1");
        }
        return out;
    }

    // Most significant bit first; width up to 64.
    static Bits from_value(std::uint64_t value, std::size_t width) {
        if (width > 64) throw std::invalid_argument("Bits::from_value: width > 64");
        Bits out(width);
        for (std::size_t i = 0; i < width; ++i)
            out.bits_[i] = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1);
        return out;
    }

    static Bits random(std::size_t n, Rng& rng) {
        Bits out(n);
        for (auto& b : out.bits_) b = rng.bit();
        return out;
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    void set(std::size_t i, std::uint8_t v) { bits_[i] = v ? 1 : 0; }
    void push_back(std::uint8_t v) { bits_.push_back(v ? 1 : 0); }

    std::uint64_t to_value() const {
        if (size() > 64) throw std::invalid_argument("Bits::to_value: more than 64 bits");
        std::uint64_t v = 0;
        for (std::uint8_t b : bits_) v = (v << 1) | b;
        return v;
    }

    Bits operator^(const Bits& other) const {
        if (size() != other.size()) throw std::invalid_argument("Bits: xor length mismatch");
        Bits out(size());
        for (std::size_t i = 0; i < size(); ++i) out.bits_[i] = bits_[i] ^ other.bits_[i];
        return out;
    }

    Bits operator+(const Bits& other) const {
        Bits out = *this;
        out.bits_.insert(out.bits_.end(), other.bits_.begin(), other.bits_.end());
        return out;
    }

    Bits slice(std::size_t from, std::size_t len) const {
        if (from + len > size()) throw std::out_of_range("Bits::slice");
        Bits out(len);
        for (std::size_t i = 0; i < len; ++i) out.bits_[i] = bits_[from + i];
        return out;
    }

    bool operator==(const Bits& other) const { return bits_ == other.bits_; }
    bool operator!=(const Bits& other) const { return bits_ != other.bits_; }
    bool operator<(const Bits& other) const { return bits_ < other.bits_; }

    // MSB-first byte packing, zero padding in the last byte.
    std::vector<std::uint8_t> pack() const {
        std::vector<std::uint8_t> out((size() + 7) / 8, 0);
        for (std::size_t i = 0; i < size(); ++i)
            if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
        return out;
    }

    // Rejects short buffers and nonzero padding bits.
    static std::optional<Bits> unpack(const std::vector<std::uint8_t>& bytes, std::size_t bit_count) {
        if (bytes.size() != (bit_count + 7) / 8) return std::nullopt;
        Bits out(bit_count);
        for (std::size_t i = 0; i < bit_count; ++i)
            out.bits_[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
        for (std::size_t i = bit_count; i < bytes.size() * 8; ++i)
            if ((bytes[i / 8] >> (7 - i % 8)) & 1) return std::nullopt;
        return out;
    }

    std::string str() const {
        std::string s(size(), '0');
        for (std::size_t i = 0; i < size(); ++i)
            if (bits_[i]) s[i] = '1';
        return s;
    }

    std::size_t count_ones() const {
        std::size_t c = 0;
        for (std::uint8_t b : bits_) c += b;
        return c;
    }

private:
    std::vector<std::uint8_t> bits_;
};

// --- big-endian byte helpers shared by the wire and file formats ----------

inline void append_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void append_u16be(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

// Cursor-based readers; return nullopt on truncation.
inline std::optional<std::uint32_t> read_u32be(const std::vector<std::uint8_t>& in, std::size_t& pos) {
    if (pos + 4 > in.size()) return std::nullopt;
    std::uint32_t v = (static_cast<std::uint32_t>(in[pos]) << 24) |
                      (static_cast<std::uint32_t>(in[pos + 1]) << 16) |
                      (static_cast<std::uint32_t>(in[pos + 2]) << 8) |
                      static_cast<std::uint32_t>(in[pos + 3]);
    pos += 4;
    return v;
}

inline std::optional<std::uint16_t> read_u16be(const std::vector<std::uint8_t>& in, std::size_t& pos) {
    if (pos + 2 > in.size()) return std::nullopt;
    std::uint16_t v = static_cast<std::uint16_t>((in[pos] << 8) | in[pos + 1]);
    pos += 2;
    return v;
}

// Length-prefixed bitstring: 32-bit big-endian bit count, then MSB-first
// packed bytes with zero padding.
inline void append_bits(std::vector<std::uint8_t>& out, const Bits& bits) {
    append_u32be(out, static_cast<std::uint32_t>(bits.size()));
    const auto packed = bits.pack();
    out.insert(out.end(), packed.begin(), packed.end());
}

inline std::optional<Bits> read_bits(const std::vector<std::uint8_t>& in, std::size_t& pos,
                                     std::size_t max_bits = (1u << 24)) {
    const auto count = read_u32be(in, pos);
    if (!count || *count > max_bits) return std::nullopt;
    const std::size_t byte_count = (*count + 7) / 8;
    if (pos + byte_count > in.size()) return std::nullopt;
    std::vector<std::uint8_t> bytes(in.begin() + static_cast<std::ptrdiff_t>(pos),
                                    in.begin() + static_cast<std::ptrdiff_t>(pos + byte_count));
    pos += byte_count;
    return Bits::unpack(bytes, *count);
}

}  // namespace qcf
