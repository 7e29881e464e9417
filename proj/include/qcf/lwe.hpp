#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "qcf/bits.hpp"
#include "qcf/rng.hpp"

namespace qcf::dualmode {

// Regev-style encryption used as a dual-mode bit commitment. A regular key
// pair (rows close to <a_i, s>) is the unconditionally binding mode with
// trapdoor decryption; fully uniform rows are the unconditionally hiding
// mode. Errors are uniform on [-beta, beta]; m * beta < p / 4 makes
// decryption exact.

inline bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

struct LweParams {
    std::uint32_t k = 4;     // dimension
    std::uint32_t m = 64;    // sample rows
    std::uint32_t p = 257;   // prime modulus
    std::uint32_t beta = 1;  // error bound

    void validate() const {
        if (k < 1 || m < 1) throw std::invalid_argument("LweParams: k and m must be >= 1");
        if (!is_prime_u32(p)) throw std::invalid_argument("LweParams: p must be prime");
        if (4ull * m * beta >= p)
            throw std::invalid_argument("LweParams: need m * beta < p / 4 for exact decryption");
    }

    std::size_t element_bits() const {
        std::size_t bits = 0;
        while ((1ull << bits) < p) ++bits;
        return bits;
    }

    // Slack over the leftover-hash regime; the hiding-mode statistical
    // claims are only asserted where this is comfortably positive.
    double hiding_margin() const {
        return static_cast<double>(m) - (k + 1) * std::log2(static_cast<double>(p));
    }

    std::size_t elements() const { return static_cast<std::size_t>(m) * (k + 1); }
    std::size_t key_bits() const { return elements() * element_bits(); }

    bool operator==(const LweParams& other) const {
        return k == other.k && m == other.m && p == other.p && beta == other.beta;
    }
};

enum class KeyMode : std::uint8_t { Binding = 0, Hiding = 1 };

struct RegevKey {
    LweParams params;
    KeyMode mode = KeyMode::Hiding;
    std::vector<std::uint32_t> rows;    // m * (k+1), row-major: a_i then b_i
    std::vector<std::uint32_t> secret;  // k entries, Binding mode only

    std::uint32_t a(std::size_t row, std::size_t col) const {
        return rows[row * (params.k + 1) + col];
    }
    std::uint32_t b(std::size_t row) const { return rows[row * (params.k + 1) + params.k]; }

    bool operator==(const RegevKey& other) const {
        return params == other.params && mode == other.mode && rows == other.rows &&
               secret == other.secret;
    }
};

inline RegevKey keygen_binding(const LweParams& params, Rng& rng) {
    params.validate();
    RegevKey key;
    key.params = params;
    key.mode = KeyMode::Binding;
    key.secret.resize(params.k);
    for (auto& s : key.secret) s = static_cast<std::uint32_t>(rng.below(params.p));
    key.rows.resize(params.elements());
    for (std::size_t i = 0; i < params.m; ++i) {
        std::uint64_t dot = 0;
        for (std::size_t j = 0; j < params.k; ++j) {
            const auto a = static_cast<std::uint32_t>(rng.below(params.p));
            key.rows[i * (params.k + 1) + j] = a;
            dot += static_cast<std::uint64_t>(a) * key.secret[j];
        }
        const std::int64_t err =
            static_cast<std::int64_t>(rng.below(2 * params.beta + 1)) - params.beta;
        const std::uint64_t b =
            (dot % params.p + params.p + static_cast<std::uint64_t>(err + params.p)) % params.p;
        key.rows[i * (params.k + 1) + params.k] = static_cast<std::uint32_t>(b);
    }
    return key;
}

inline RegevKey keygen_hiding(const LweParams& params, Rng& rng) {
    params.validate();
    RegevKey key;
    key.params = params;
    key.mode = KeyMode::Hiding;
    key.rows.resize(params.elements());
    for (auto& v : key.rows) v = static_cast<std::uint32_t>(rng.below(params.p));
    return key;
}

class InsufficientCoinsError : public std::runtime_error {
public:
    InsufficientCoinsError(std::size_t filled, std::size_t total, std::size_t hint_bits)
        : std::runtime_error("key_from_coins: coin string exhausted"),
          elements_filled_(filled), elements_total_(total), more_bits_hint_(hint_bits) {}
    std::size_t elements_filled() const { return elements_filled_; }
    std::size_t elements_total() const { return elements_total_; }
    // a comfortable amount of further coin-flips to request
    std::size_t more_bits_hint() const { return more_bits_hint_; }

private:
    std::size_t elements_filled_, elements_total_, more_bits_hint_;
};

struct CoinConsumption {
    std::size_t bits_consumed = 0;
    std::size_t chunks_rejected = 0;
};

// Deterministic hiding key from a public coin string: each residue is read
// as consecutive ceil(log2 p)-bit chunks, MSB first, rejecting chunk values
// >= p. Exactly uniform on Z_p when the coins are uniform.
inline RegevKey key_from_coins(const LweParams& params, const Bits& coins,
                               CoinConsumption* consumption = nullptr) {
    params.validate();
    RegevKey key;
    key.params = params;
    key.mode = KeyMode::Hiding;
    key.rows.reserve(params.elements());
    const std::size_t chunk = params.element_bits();
    std::size_t pos = 0, rejected = 0;
    while (key.rows.size() < params.elements()) {
        if (pos + chunk > coins.size()) {
            const std::size_t remaining = params.elements() - key.rows.size();
            throw InsufficientCoinsError(key.rows.size(), params.elements(),
                                         2 * remaining * chunk + chunk);
        }
        const auto value = static_cast<std::uint32_t>(coins.slice(pos, chunk).to_value());
        pos += chunk;
        if (value >= params.p) {
            ++rejected;
            continue;
        }
        key.rows.push_back(value);
    }
    if (consumption) *consumption = CoinConsumption{pos, rejected};
    return key;
}

struct LweCiphertext {
    std::vector<std::uint32_t> u;  // k entries
    std::uint32_t c = 0;

    bool operator==(const LweCiphertext& other) const { return u == other.u && c == other.c; }
};

struct BitOpening {
    std::uint8_t bit = 0;
    std::vector<std::uint32_t> subset;  // sorted row indices
};

inline LweCiphertext commit_with_subset(const RegevKey& key, std::uint8_t bit,
                                        const std::vector<std::uint32_t>& subset) {
    const auto& params = key.params;
    LweCiphertext ct;
    ct.u.assign(params.k, 0);
    std::uint64_t c = (bit & 1) ? params.p / 2 : 0;
    for (auto row : subset) {
        if (row >= params.m) throw std::invalid_argument("commit_with_subset: row out of range");
        for (std::size_t j = 0; j < params.k; ++j)
            ct.u[j] = static_cast<std::uint32_t>((ct.u[j] + key.a(row, j)) % params.p);
        c = (c + key.b(row)) % params.p;
    }
    ct.c = static_cast<std::uint32_t>(c);
    return ct;
}

inline std::pair<LweCiphertext, BitOpening> commit_bit(const RegevKey& key, std::uint8_t bit,
                                                       Rng& rng) {
    BitOpening opening;
    opening.bit = bit & 1;
    for (std::uint32_t i = 0; i < key.params.m; ++i)
        if (rng.bit()) opening.subset.push_back(i);
    return {commit_with_subset(key, opening.bit, opening.subset), std::move(opening)};
}

inline bool verify_bit_opening(const RegevKey& key, const LweCiphertext& ct,
                               const BitOpening& opening) {
    for (auto row : opening.subset)
        if (row >= key.params.m) return false;
    return commit_with_subset(key, opening.bit, opening.subset) == ct;
}

class NoSecretError : public std::logic_error {
public:
    NoSecretError() : std::logic_error("extract: key has no decryption secret") {}
};

// Trapdoor decryption: the noisy offset d = c - <u, s> sits within
// m * beta of either 0 or floor(p/2); ties break toward 1 and cannot occur
// under the validated parameters.
inline std::uint8_t extract(const RegevKey& key, const LweCiphertext& ct) {
    if (key.mode != KeyMode::Binding || key.secret.size() != key.params.k) throw NoSecretError();
    const std::uint32_t p = key.params.p;
    std::uint64_t dot = 0;
    for (std::size_t j = 0; j < key.params.k; ++j)
        dot += static_cast<std::uint64_t>(ct.u[j]) * key.secret[j];
    const std::uint32_t d = static_cast<std::uint32_t>(((ct.c + p) - (dot % p)) % p);
    const std::uint32_t dist0 = std::min(d, p - d);
    const std::uint32_t half = p / 2;
    const std::uint32_t dd = d > half ? d - half : half - d;
    const std::uint32_t dist1 = std::min(dd, p - dd);
    return dist1 <= dist0 ? 1 : 0;
}

// --- key file: u32 little-endian header (k, m, p, beta, mode), residues
// row-major, secret appended in binding mode ---------------------------------

inline void write_u32le(std::ostream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                           static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
    out.write(bytes, 4);
}

inline std::uint32_t read_u32le(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (!in) throw std::runtime_error("key file: truncated");
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
}

inline void write_key(std::ostream& out, const RegevKey& key) {
    write_u32le(out, key.params.k);
    write_u32le(out, key.params.m);
    write_u32le(out, key.params.p);
    write_u32le(out, key.params.beta);
    write_u32le(out, key.mode == KeyMode::Binding ? 0 : 1);
    for (auto v : key.rows) write_u32le(out, v);
    if (key.mode == KeyMode::Binding)
        for (auto v : key.secret) write_u32le(out, v);
}

inline RegevKey read_key(std::istream& in) {
    RegevKey key;
    key.params.k = read_u32le(in);
    key.params.m = read_u32le(in);
    key.params.p = read_u32le(in);
    key.params.beta = read_u32le(in);
    const std::uint32_t mode = read_u32le(in);
    if (mode > 1) throw std::runtime_error("key file: bad mode");
    key.params.validate();
    key.mode = mode == 0 ? KeyMode::Binding : KeyMode::Hiding;
    key.rows.resize(key.params.elements());
    for (auto& v : key.rows) v = read_u32le(in);
    if (key.mode == KeyMode::Binding) {
        key.secret.resize(key.params.k);
        for (auto& v : key.secret) v = read_u32le(in);
    }
    for (auto v : key.rows)
        if (v >= key.params.p) throw std::runtime_error("key file: residue out of range");
    for (auto v : key.secret)
        if (v >= key.params.p) throw std::runtime_error("key file: residue out of range");
    return key;
}

}  // namespace qcf::dualmode
