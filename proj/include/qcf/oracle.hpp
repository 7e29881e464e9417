#pragma once

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcf/bits.hpp"
#include "qcf/chacha.hpp"
#include "qcf/graph.hpp"
#include "qcf/rng.hpp"

namespace qcf::zk {

inline std::string oracle_key(const Bits& omega, const GIInstance& x,
                              const std::vector<Graph>& first_messages) {
    std::string key = omega.str();
    key += '@';
    key += x.key();
    for (const auto& h : first_messages) {
        key += '@';
        key += h.key();
    }
    return key;
}

// Random oracle returning per-round challenge bits, keyed by the reference
// string, the instance and all first messages. Entries are immutable once
// queried or programmed; fresh entries come from one of three sources:
//   HashDerived - deterministic keystream of the key (shared across
//                 processes without state, the CLI default)
//   SeededRng   - an internal seeded stream (Monte Carlo harnesses)
//   FixedTape   - an explicit bit tape (exhaustive enumeration harnesses)
class OracleTable {
public:
    static OracleTable hash_derived() { return OracleTable(Mode::HashDerived, 0, {}); }
    static OracleTable seeded(std::uint64_t seed) { return OracleTable(Mode::SeededRng, seed, {}); }
    static OracleTable fixed_tape(Bits tape) {
        return OracleTable(Mode::FixedTape, 0, std::move(tape));
    }

    Bits challenges(const std::string& key, std::size_t k) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = table_.find(key);
        if (it != table_.end()) {
            if (it->second.size() != k)
                throw std::logic_error("OracleTable: entry queried with a different width");
            return it->second;
        }
        Bits fresh = draw(key, k);
        table_.emplace(key, fresh);
        return fresh;
    }

    // False (and no change) when the entry is already fixed.
    bool program(const std::string& key, const Bits& value) {
        std::lock_guard<std::mutex> lock(mutex_);
        return table_.emplace(key, value).second;
    }

    bool known(const std::string& key) const {
        std::lock_guard<std::mutex> lock(mutex_);
        return table_.count(key) != 0;
    }

private:
    enum class Mode { HashDerived, SeededRng, FixedTape };

    OracleTable(Mode mode, std::uint64_t seed, Bits tape)
        : mode_(mode), rng_(seed), tape_(std::move(tape)) {}

    Bits draw(const std::string& key, std::size_t k) {
        switch (mode_) {
            case Mode::HashDerived: {
                Rng derived(fnv1a64(key.data(), key.size()));
                return Bits::random(k, derived);
            }
            case Mode::SeededRng:
                return Bits::random(k, rng_);
            case Mode::FixedTape: {
                if (tape_pos_ + k > tape_.size())
                    throw std::runtime_error("OracleTable: fixed tape exhausted");
                Bits out = tape_.slice(tape_pos_, k);
                tape_pos_ += k;
                return out;
            }
        }
        throw std::logic_error("OracleTable: bad mode");
    }

    Mode mode_;
    Rng rng_;
    Bits tape_;
    std::size_t tape_pos_ = 0;
    mutable std::mutex mutex_;
    std::map<std::string, Bits> table_;
};

}  // namespace qcf::zk
