#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcf/rng.hpp"
#include "qcf/statevector.hpp"

namespace qcf::qrewind {

// Register layout of the simulation circuit, low qubits first:
//   R  (l+1)  classical choices: bit a at R[0], randomness r above it
//   A1 (l+1)  toy commitment to (a,r)
//   G  (1)    the guess b' = coin XOR a; after the check, b' XOR b
//   A2 (l+1)  the opening, here (a,r) itself
//   B  (1)    the adversary's answer bit
//   V  (k')   adversary work space
//   W  (n~)   adversary auxiliary input
// X is everything except W and starts at |0...0>.
struct RegisterLayout {
    std::size_t l = 1;
    std::size_t v_qubits = 1;
    std::size_t w_qubits = 2;
    std::size_t cap = 16;

    std::size_t r_off() const { return 0; }
    std::size_t r_width() const { return l + 1; }
    std::size_t a1_off() const { return l + 1; }
    std::size_t a1_width() const { return l + 1; }
    std::size_t g_off() const { return 2 * (l + 1); }
    std::size_t a2_off() const { return 2 * (l + 1) + 1; }
    std::size_t a2_width() const { return l + 1; }
    std::size_t b_off() const { return 3 * (l + 1) + 1; }
    std::size_t v_off() const { return b_off() + 1; }
    std::size_t w_off() const { return v_off() + v_qubits; }
    std::size_t total_qubits() const { return w_off() + w_qubits; }
    std::size_t x_qubits() const { return w_off(); }
    std::size_t top_qubits() const { return 1 + v_qubits + w_qubits; }  // (B,V,W)

    static RegisterLayout make(std::size_t l, std::size_t v_qubits, std::size_t w_qubits,
                               std::size_t cap = 16) {
        RegisterLayout layout{l, v_qubits, w_qubits, cap};
        layout.validate();
        return layout;
    }

    void validate() const {
        if (l < 1) throw std::invalid_argument("RegisterLayout: l must be >= 1");
        if (w_qubits < 1) throw std::invalid_argument("RegisterLayout: need an auxiliary qubit");
        if (total_qubits() > cap)
            throw std::invalid_argument("RegisterLayout: exceeds simulator cap");
    }
};

// Perfectly binding commitment at statevector scale: a keyed bijection on
// (l+1)-bit values, so A1 holds com(a,r) exactly and extraction is a table
// lookup. Deliberately not hiding; the adversary may correlate with it.
class ToyCommitment {
public:
    static ToyCommitment keyed(std::size_t width, std::uint64_t key) {
        ToyCommitment t;
        t.width_ = width;
        const std::size_t size = std::size_t{1} << width;
        t.fwd_.resize(size);
        for (std::size_t i = 0; i < size; ++i) t.fwd_[i] = static_cast<std::uint32_t>(i);
        Rng rng(key ^ 0x746f79636f6dULL);
        for (std::size_t i = size; i > 1; --i)
            std::swap(t.fwd_[i - 1], t.fwd_[rng.below(i)]);
        t.inv_.resize(size);
        for (std::size_t i = 0; i < size; ++i) t.inv_[t.fwd_[i]] = static_cast<std::uint32_t>(i);
        return t;
    }

    std::size_t width() const { return width_; }
    std::uint32_t commit(std::uint32_t a_and_r) const { return fwd_.at(a_and_r); }
    std::uint32_t invert(std::uint32_t commitment) const { return inv_.at(commitment); }

private:
    std::size_t width_ = 0;
    std::vector<std::uint32_t> fwd_, inv_;
};

// One unitary block on (B,V,W) per commitment value in A1.
struct AdversaryCircuit {
    std::vector<Matrix> blocks;

    static AdversaryCircuit controlled(const RegisterLayout& layout, std::vector<Matrix> blocks) {
        const std::size_t want = std::size_t{1} << layout.a1_width();
        const std::size_t dim = std::size_t{1} << layout.top_qubits();
        if (blocks.size() != want) throw std::invalid_argument("AdversaryCircuit: need one block per commitment value");
        for (const auto& b : blocks) {
            if (b.dim != dim) throw std::invalid_argument("AdversaryCircuit: block dimension mismatch");
            if (!b.is_unitary()) throw std::invalid_argument("AdversaryCircuit: block is not unitary");
        }
        return AdversaryCircuit{std::move(blocks)};
    }

    static AdversaryCircuit independent(const RegisterLayout& layout, const Matrix& u) {
        return controlled(layout, std::vector<Matrix>(std::size_t{1} << layout.a1_width(), u));
    }

    static AdversaryCircuit identity(const RegisterLayout& layout) {
        return independent(layout, Matrix::identity(std::size_t{1} << layout.top_qubits()));
    }

    // X on B regardless of the commitment.
    static AdversaryCircuit flip_b(const RegisterLayout& layout) {
        return independent(layout, x_on_b(layout));
    }

    // B ^= bit `index` of the commitment value: a classical readout that
    // correlates the answer with a through the (non-hiding) toy scheme.
    static AdversaryCircuit readout(const RegisterLayout& layout, std::size_t index) {
        const std::size_t count = std::size_t{1} << layout.a1_width();
        const Matrix x = x_on_b(layout);
        const Matrix id = Matrix::identity(x.dim);
        std::vector<Matrix> blocks;
        blocks.reserve(count);
        for (std::size_t c = 0; c < count; ++c)
            blocks.push_back(((c >> index) & 1) ? x : id);
        return controlled(layout, std::move(blocks));
    }

    // Same Haar block for every commitment value: the answer cannot depend
    // on a, so the success weight is exactly one half for every input.
    static AdversaryCircuit haar_independent(const RegisterLayout& layout, Rng& rng) {
        return independent(layout, Matrix::haar_random(std::size_t{1} << layout.top_qubits(), rng));
    }

    // Hadamard on B, nothing else: the answer is an unbiased coin
    // independent of the commitment, leaving (a, r) exactly uniform on the
    // success branch.
    static AdversaryCircuit uniform_independent(const RegisterLayout& layout) {
        const std::size_t dim = std::size_t{1} << layout.top_qubits();
        const double inv_sqrt2 = 0.70710678118654752440;
        Matrix m{dim, std::vector<Amp>(dim * dim, Amp{0, 0})};
        for (std::size_t t = 0; t < dim; ++t) {
            m.at(t & ~std::size_t{1}, t) = Amp{inv_sqrt2, 0};
            m.at(t | 1, t) = Amp{(t & 1) ? -inv_sqrt2 : inv_sqrt2, 0};
        }
        return independent(layout, m);
    }

    // Independent Haar block per commitment value: the answer may correlate
    // with a, perturbing the success weight away from one half.
    static AdversaryCircuit haar_controlled(const RegisterLayout& layout, Rng& rng) {
        const std::size_t count = std::size_t{1} << layout.a1_width();
        std::vector<Matrix> blocks;
        blocks.reserve(count);
        for (std::size_t c = 0; c < count; ++c)
            blocks.push_back(Matrix::haar_random(std::size_t{1} << layout.top_qubits(), rng));
        return controlled(layout, std::move(blocks));
    }

private:
    static Matrix x_on_b(const RegisterLayout& layout) {
        const std::size_t dim = std::size_t{1} << layout.top_qubits();
        Matrix m{dim, std::vector<Amp>(dim * dim, Amp{0, 0})};
        for (std::size_t t = 0; t < dim; ++t) m.at(t ^ 1, t) = Amp{1, 0};  // B is the group LSB
        return m;
    }
};

// ---------------------------------------------------------------------------
// The simulation circuit: prepare the uniform transcript superposition, run
// the adversary controlled on the commitment, then fold the comparison of
// guess and answer into G.

inline StateVector initial_state(const RegisterLayout& layout, const StateVector& psi_w) {
    if (psi_w.qubits() != layout.w_qubits)
        throw std::invalid_argument("initial_state: auxiliary input width mismatch");
    StateVector s(layout.total_qubits());
    for (std::size_t w = 0; w < psi_w.dim(); ++w)
        s[static_cast<std::uint64_t>(w) << layout.w_off()] = psi_w[w];
    return s;
}

namespace detail {

inline void check_toy(const RegisterLayout& layout, const ToyCommitment& toy) {
    if (toy.width() != layout.r_width())
        throw std::invalid_argument("toy commitment width must match R");
}

inline void prep(StateVector& s, const RegisterLayout& layout, const ToyCommitment& toy,
                 std::uint8_t coin) {
    for (std::size_t q = 0; q < layout.r_width(); ++q) s.hadamard(layout.r_off() + q);
    s.xor_function(layout.a1_off(), layout.a1_width(), layout.r_off(), layout.r_width(),
                   [&toy](std::uint64_t r) { return static_cast<std::uint64_t>(toy.commit(static_cast<std::uint32_t>(r))); });
    s.xor_function(layout.g_off(), 1, layout.r_off(), layout.r_width(),
                   [coin](std::uint64_t r) { return static_cast<std::uint64_t>((coin ^ r) & 1); });
    s.xor_function(layout.a2_off(), layout.a2_width(), layout.r_off(), layout.r_width(),
                   [](std::uint64_t r) { return r; });
}

inline void prep_dagger(StateVector& s, const RegisterLayout& layout, const ToyCommitment& toy,
                        std::uint8_t coin) {
    s.xor_function(layout.a2_off(), layout.a2_width(), layout.r_off(), layout.r_width(),
                   [](std::uint64_t r) { return r; });
    s.xor_function(layout.g_off(), 1, layout.r_off(), layout.r_width(),
                   [coin](std::uint64_t r) { return static_cast<std::uint64_t>((coin ^ r) & 1); });
    s.xor_function(layout.a1_off(), layout.a1_width(), layout.r_off(), layout.r_width(),
                   [&toy](std::uint64_t r) { return static_cast<std::uint64_t>(toy.commit(static_cast<std::uint32_t>(r))); });
    for (std::size_t q = 0; q < layout.r_width(); ++q) s.hadamard(layout.r_off() + q);
}

inline std::vector<Matrix> adjoint_blocks(const AdversaryCircuit& adv) {
    std::vector<Matrix> out;
    out.reserve(adv.blocks.size());
    for (const auto& b : adv.blocks) out.push_back(b.adjoint());
    return out;
}

}  // namespace detail

// Step (1): the uniform superposition over (a, r) with the commitment, the
// guess coin XOR a and the opening written out; B, V stay zero, W carries psi.
inline StateVector build_superposition(const RegisterLayout& layout, const ToyCommitment& toy,
                                       std::uint8_t coin, const StateVector& psi_w) {
    detail::check_toy(layout, toy);
    StateVector s = initial_state(layout, psi_w);
    detail::prep(s, layout, toy, coin);
    return s;
}

inline StateVector build_superposition(const RegisterLayout& layout, const ToyCommitment& toy,
                                       std::uint8_t coin) {
    return build_superposition(layout, toy, coin, StateVector::basis(layout.w_qubits, 0));
}

// Step (2): the adversary acts on (B,V,W) controlled on the commitment.
inline StateVector apply_adversary(const StateVector& state, const RegisterLayout& layout,
                                   const AdversaryCircuit& adv) {
    StateVector s = state;
    s.apply_controlled_top(layout.b_off(), adv.blocks, layout.a1_off(), layout.a1_width());
    return s;
}

// Step (3): G ^= B, so G holds guess XOR answer and G = 0 marks success.
inline StateVector apply_cnot_check(const StateVector& state, const RegisterLayout& layout) {
    StateVector s = state;
    s.cnot(layout.b_off(), layout.g_off());
    return s;
}

inline StateVector apply_circuit_q(const StateVector& state, const RegisterLayout& layout,
                                   const ToyCommitment& toy, const AdversaryCircuit& adv,
                                   std::uint8_t coin) {
    detail::check_toy(layout, toy);
    StateVector s = state;
    detail::prep(s, layout, toy, coin);
    s.apply_controlled_top(layout.b_off(), adv.blocks, layout.a1_off(), layout.a1_width());
    s.cnot(layout.b_off(), layout.g_off());
    return s;
}

inline StateVector apply_circuit_q_dagger(const StateVector& state, const RegisterLayout& layout,
                                          const ToyCommitment& toy, const AdversaryCircuit& adv,
                                          std::uint8_t coin) {
    detail::check_toy(layout, toy);
    StateVector s = state;
    s.cnot(layout.b_off(), layout.g_off());
    s.apply_controlled_top(layout.b_off(), detail::adjoint_blocks(adv), layout.a1_off(),
                           layout.a1_width());
    detail::prep_dagger(s, layout, toy, coin);
    return s;
}

// ---------------------------------------------------------------------------
// Splitting the output into sqrt(p)|0>_G|good> + sqrt(1-p)|1>_G|bad>.

struct Decomposition {
    double p = 0.0;
    std::optional<StateVector> good;  // normalized G = 0 component, G kept in place
    std::optional<StateVector> bad;   // normalized G = 1 component
};

inline Decomposition decompose_good_bad(const StateVector& state, const RegisterLayout& layout,
                                        double tol = 1e-12) {
    Decomposition d;
    StateVector zero = state;
    d.p = zero.project_field(layout.g_off(), 1, 0);
    if (d.p > tol) {
        zero.normalize();
        d.good = std::move(zero);
    }
    StateVector one = state;
    const double q = one.project_field(layout.g_off(), 1, 1);
    if (q > tol) {
        one.normalize();
        d.bad = std::move(one);
    }
    return d;
}

// One rewinding: undo the circuit, reflect the work registers about zero,
// run the circuit again.
inline StateVector rewind_once(const StateVector& state, const RegisterLayout& layout,
                               const ToyCommitment& toy, const AdversaryCircuit& adv,
                               std::uint8_t coin) {
    StateVector s = apply_circuit_q_dagger(state, layout, toy, adv, coin);
    s.reflect_about_zero(layout.x_qubits());
    return apply_circuit_q(s, layout, toy, adv, coin);
}

// Upper bound on the fidelity loss of the rewinding procedure under a
// perturbation epsilon of the success weight, with success floor p0.
inline double rewind_fidelity_bound(double epsilon, double p0, double log_base = 2.0) {
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("rewind_fidelity_bound: epsilon must be in (0, 1/2)");
    if (!(p0 > 0.0 && p0 < 1.0))
        throw std::invalid_argument("rewind_fidelity_bound: p0 must be in (0, 1)");
    if (!(log_base > 1.0))
        throw std::invalid_argument("rewind_fidelity_bound: log base must exceed 1");
    const double lg = std::log(1.0 / epsilon) / std::log(log_base);
    const double denom = p0 * (1.0 - p0);
    return 16.0 * epsilon * lg * lg / (denom * denom);
}

struct RewindReport {
    double p = 0.0;          // success weight of the first circuit output
    double p_estimate = 0.0; // same mass as seen by the measurement loop
    std::size_t iterations = 0;  // measurement rounds performed
    std::size_t rewinds = 0;
    bool success = false;
    double fidelity = 0.0;   // squared overlap of the final state with good
    double epsilon = 0.0;    // |p - 1/2|
    double p0 = 0.45;
    double epsilon_prime = 0.0;
};

struct RewindRun {
    RewindReport report;
    StateVector final_state;
};

// The full procedure: run the circuit, measure G; on failure rewind and
// measure again, up to max_iters measurement rounds.
inline RewindRun run_rcoin(const RegisterLayout& layout, const ToyCommitment& toy,
                           const AdversaryCircuit& adv, std::uint8_t coin,
                           const StateVector& psi_w, Rng& rng, std::size_t max_iters = 64,
                           double p0 = 0.45) {
    if (max_iters < 1) throw std::invalid_argument("run_rcoin: max_iters must be >= 1");
    StateVector current = apply_circuit_q(initial_state(layout, psi_w), layout, toy, adv, coin);
    const Decomposition first = decompose_good_bad(current, layout);

    RewindReport report;
    report.p = first.p;
    report.p0 = p0;
    report.epsilon = std::abs(first.p - 0.5);
    if (report.epsilon <= 0.0) report.epsilon_prime = 0.0;
    else if (report.epsilon >= 0.5) report.epsilon_prime = std::numeric_limits<double>::infinity();
    else report.epsilon_prime = rewind_fidelity_bound(report.epsilon, p0);

    for (;;) {
        const double p_here = current.probability_of_field(layout.g_off(), 1, 0);
        if (report.iterations == 0) report.p_estimate = p_here;
        ++report.iterations;
        if (rng.uniform() < p_here) {
            current.project_field(layout.g_off(), 1, 0);
            current.normalize();
            report.success = true;
            break;
        }
        current.project_field(layout.g_off(), 1, 1);
        current.normalize();
        if (report.iterations >= max_iters) break;
        ++report.rewinds;
        current = rewind_once(current, layout, toy, adv, coin);
    }
    report.fidelity = first.good ? current.fidelity(*first.good) : 0.0;
    return RewindRun{report, std::move(current)};
}

inline RewindRun run_rcoin(const RegisterLayout& layout, const ToyCommitment& toy,
                           const AdversaryCircuit& adv, std::uint8_t coin, Rng& rng,
                           std::size_t max_iters = 64, double p0 = 0.45) {
    return run_rcoin(layout, toy, adv, coin, random_state(layout.w_qubits, rng), rng, max_iters, p0);
}

// Reads the classical conversation (commitment, answer, opening) out of a
// successful final state by sampling the standard basis.
struct Conversation {
    std::uint32_t commitment = 0;
    std::uint8_t b = 0;
    std::uint32_t opening = 0;  // (a, r) packed, a in bit 0

    std::uint8_t a() const { return static_cast<std::uint8_t>(opening & 1); }
    std::uint32_t r() const { return opening >> 1; }
};

inline Conversation measure_conversation(const StateVector& state, const RegisterLayout& layout,
                                         Rng& rng) {
    const std::uint64_t idx = state.sample_basis(rng);
    Conversation conv;
    conv.commitment = static_cast<std::uint32_t>(
        StateVector::field_of(idx, layout.a1_off(), layout.a1_width()));
    conv.b = static_cast<std::uint8_t>(StateVector::field_of(idx, layout.b_off(), 1));
    conv.opening = static_cast<std::uint32_t>(
        StateVector::field_of(idx, layout.a2_off(), layout.a2_width()));
    return conv;
}

// ---------------------------------------------------------------------------
// Seeded experiment sweeps.

enum class AdversaryFamily { Independent, Controlled };

struct SweepConfig {
    std::size_t trials = 100;
    std::size_t qubits = 12;
    std::uint64_t seed = 1;
    double p0 = 0.45;
    AdversaryFamily family = AdversaryFamily::Controlled;
    bool filter = false;       // keep only trials with p in [filter_lo, filter_hi]
    double filter_lo = 0.45;
    double filter_hi = 0.55;
    std::size_t max_iters = 64;
    std::size_t max_candidates_per_trial = 1000;
};

struct SweepRow {
    std::uint64_t seed = 0;
    std::size_t qubits = 0;
    std::uint8_t coin = 0;
    RewindReport report;
};

inline RegisterLayout layout_for_qubits(std::size_t qubits, std::size_t cap = 16) {
    if (qubits < 10) throw std::invalid_argument("layout_for_qubits: need at least 10 qubits");
    return RegisterLayout::make(1, 1, qubits - 9, cap);
}

inline std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    const RegisterLayout layout = layout_for_qubits(config.qubits);
    Rng master(config.seed);
    std::vector<SweepRow> rows;
    rows.reserve(config.trials);
    std::size_t candidates = 0;
    while (rows.size() < config.trials) {
        if (++candidates > config.max_candidates_per_trial * config.trials)
            throw std::runtime_error("run_sweep: adversary filter accepts too rarely");
        const std::uint64_t trial_seed = master.u64();
        Rng rng(trial_seed);
        const ToyCommitment toy = ToyCommitment::keyed(layout.r_width(), rng.u64());
        const std::uint8_t coin = rng.bit();
        const AdversaryCircuit adv = (config.family == AdversaryFamily::Independent)
                                         ? AdversaryCircuit::haar_independent(layout, rng)
                                         : AdversaryCircuit::haar_controlled(layout, rng);
        const StateVector psi = random_state(layout.w_qubits, rng);
        RewindRun run = run_rcoin(layout, toy, adv, coin, psi, rng, config.max_iters, config.p0);
        if (config.filter &&
            (run.report.p < config.filter_lo || run.report.p > config.filter_hi))
            continue;
        rows.push_back(SweepRow{trial_seed, layout.total_qubits(), coin, run.report});
    }
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "seed,qubits,coin,p,epsilon,p0,epsilon_prime,iterations,fidelity\n";
    char buf[256];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%llu,%zu,%u,%.17g,%.17g,%.17g,%.17g,%zu,%.17g\n",
                      static_cast<unsigned long long>(row.seed), row.qubits,
                      static_cast<unsigned>(row.coin), row.report.p, row.report.epsilon,
                      row.report.p0, row.report.epsilon_prime, row.report.iterations,
                      row.report.fidelity);
        out << buf;
    }
    return out.str();
}

}  // namespace qcf::qrewind
