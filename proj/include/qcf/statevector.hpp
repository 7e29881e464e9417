#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qcf/rng.hpp"

namespace qcf::qrewind {

using Amp = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;

// Small dense complex matrix for adversary blocks (dimension <= 2^8 here).
struct Matrix {
    std::size_t dim = 0;
    std::vector<Amp> a;  // row-major

    static Matrix identity(std::size_t dim) {
        Matrix m{dim, std::vector<Amp>(dim * dim, Amp{0, 0})};
        for (std::size_t i = 0; i < dim; ++i) m.a[i * dim + i] = Amp{1, 0};
        return m;
    }

    Amp& at(std::size_t r, std::size_t c) { return a[r * dim + c]; }
    const Amp& at(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

    Matrix adjoint() const {
        Matrix m{dim, std::vector<Amp>(dim * dim)};
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c)
                m.at(r, c) = std::conj(at(c, r));
        return m;
    }

    Matrix operator*(const Matrix& o) const {
        if (dim != o.dim) throw std::invalid_argument("Matrix: dimension mismatch");
        Matrix m{dim, std::vector<Amp>(dim * dim, Amp{0, 0})};
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t k = 0; k < dim; ++k) {
                const Amp v = at(r, k);
                if (v == Amp{0, 0}) continue;
                for (std::size_t c = 0; c < dim; ++c) m.at(r, c) += v * o.at(k, c);
            }
        return m;
    }

    double deviation_from_unitary() const {
        const Matrix p = adjoint() * (*this);
        double worst = 0.0;
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) {
                const Amp want = (r == c) ? Amp{1, 0} : Amp{0, 0};
                worst = std::max(worst, std::abs(p.at(r, c) - want));
            }
        return worst;
    }

    bool is_unitary(double tol = kNormTolerance) const { return deviation_from_unitary() <= tol; }

    // Haar-distributed unitary: QR of a complex Gaussian matrix with the
    // R diagonal phases normalized (modified Gram-Schmidt).
    static Matrix haar_random(std::size_t dim, Rng& rng) {
        Matrix g{dim, std::vector<Amp>(dim * dim)};
        for (auto& v : g.a) v = Amp{rng.gaussian(), rng.gaussian()};
        // columns of g -> orthonormal columns of q
        Matrix q{dim, std::vector<Amp>(dim * dim, Amp{0, 0})};
        for (std::size_t c = 0; c < dim; ++c) {
            std::vector<Amp> col(dim);
            for (std::size_t r = 0; r < dim; ++r) col[r] = g.at(r, c);
            for (std::size_t prev = 0; prev < c; ++prev) {
                Amp proj{0, 0};
                for (std::size_t r = 0; r < dim; ++r) proj += std::conj(q.at(r, prev)) * col[r];
                for (std::size_t r = 0; r < dim; ++r) col[r] -= proj * q.at(r, prev);
            }
            double norm2 = 0.0;
            for (const auto& v : col) norm2 += std::norm(v);
            const double inv = 1.0 / std::sqrt(norm2);
            // fix the phase so the distribution is Haar rather than QR-biased
            Amp phase = col[c];
            const double mag = std::abs(phase);
            phase = (mag > 1e-300) ? phase / mag : Amp{1, 0};
            for (std::size_t r = 0; r < dim; ++r) q.at(r, c) = col[r] * inv * std::conj(phase);
        }
        return q;
    }
};

// Dense statevector over `qubits` qubits; basis index bit q is qubit q.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(std::size_t qubits)
        : qubits_(qubits), amps_(std::size_t{1} << qubits, Amp{0, 0}) {
        if (qubits > 24) throw std::invalid_argument("StateVector: too many qubits");
    }

    static StateVector basis(std::size_t qubits, std::uint64_t index) {
        StateVector s(qubits);
        s.amps_[index] = Amp{1, 0};
        return s;
    }

    std::size_t qubits() const { return qubits_; }
    std::size_t dim() const { return amps_.size(); }
    Amp& operator[](std::size_t i) { return amps_[i]; }
    const Amp& operator[](std::size_t i) const { return amps_[i]; }

    double norm2() const {
        double s = 0.0;
        for (const auto& v : amps_) s += std::norm(v);
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }

    void normalize() {
        const double n = norm();
        if (n <= 0.0) throw std::runtime_error("StateVector: cannot normalize zero vector");
        const double inv = 1.0 / n;
        for (auto& v : amps_) v *= inv;
    }

    Amp inner(const StateVector& other) const {
        if (dim() != other.dim()) throw std::invalid_argument("StateVector: dimension mismatch");
        Amp s{0, 0};
        for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
        return s;
    }

    double fidelity(const StateVector& other) const { return std::norm(inner(other)); }

    double distance(const StateVector& other) const {
        double s = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i) s += std::norm(amps_[i] - other.amps_[i]);
        return std::sqrt(s);
    }

    void hadamard(std::size_t qubit) {
        const std::uint64_t mask = 1ULL << qubit;
        const double inv_sqrt2 = 0.70710678118654752440;
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if (i & mask) continue;
            const Amp lo = amps_[i], hi = amps_[i | mask];
            amps_[i] = (lo + hi) * inv_sqrt2;
            amps_[i | mask] = (lo - hi) * inv_sqrt2;
        }
    }

    // target ^= f(source): a basis permutation, involutive because the
    // target field never overlaps the source field.
    void xor_function(std::size_t target_off, std::size_t target_width,
                      std::size_t source_off, std::size_t source_width,
                      const std::function<std::uint64_t(std::uint64_t)>& f) {
        const std::uint64_t src_mask = ((1ULL << source_width) - 1) << source_off;
        const std::uint64_t tgt_mask = ((1ULL << target_width) - 1);
        if ((src_mask & (tgt_mask << target_off)) != 0)
            throw std::invalid_argument("xor_function: overlapping fields");
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            const std::uint64_t src = (i & src_mask) >> source_off;
            const std::uint64_t j = i ^ ((f(src) & tgt_mask) << target_off);
            if (j > i) std::swap(amps_[i], amps_[j]);
        }
    }

    void cnot(std::size_t control, std::size_t target) {
        const std::uint64_t cmask = 1ULL << control, tmask = 1ULL << target;
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
        }
    }

    // 2P - I where P projects the `low` lowest qubits onto all-zero.
    void reflect_about_zero(std::size_t low_qubits) {
        const std::uint64_t mask = (low_qubits >= 64) ? ~0ULL : ((1ULL << low_qubits) - 1);
        for (std::uint64_t i = 0; i < amps_.size(); ++i)
            if (i & mask) amps_[i] = -amps_[i];
    }

    // Applies one of `blocks` to the top qubit group [top_off, qubits),
    // selected by the value of the control field in the low part.
    void apply_controlled_top(std::size_t top_off, const std::vector<Matrix>& blocks,
                              std::size_t control_off, std::size_t control_width) {
        const std::size_t top_dim = std::size_t{1} << (qubits_ - top_off);
        const std::uint64_t low_count = 1ULL << top_off;
        const std::uint64_t ctrl_mask = (1ULL << control_width) - 1;
        if (control_off + control_width > top_off)
            throw std::invalid_argument("apply_controlled_top: control overlaps target");
        std::vector<Amp> scratch(top_dim);
        for (std::uint64_t low = 0; low < low_count; ++low) {
            const std::uint64_t ctrl = (low >> control_off) & ctrl_mask;
            const Matrix& u = blocks[ctrl];
            if (u.dim != top_dim) throw std::invalid_argument("apply_controlled_top: block dim");
            for (std::size_t t = 0; t < top_dim; ++t) scratch[t] = amps_[(t << top_off) | low];
            for (std::size_t r = 0; r < top_dim; ++r) {
                Amp acc{0, 0};
                const Amp* row = &u.a[r * top_dim];
                for (std::size_t c = 0; c < top_dim; ++c) acc += row[c] * scratch[c];
                amps_[(r << top_off) | low] = acc;
            }
        }
    }

    double probability_of_field(std::size_t off, std::size_t width, std::uint64_t value) const {
        const std::uint64_t mask = ((1ULL << width) - 1) << off;
        const std::uint64_t want = value << off;
        double p = 0.0;
        for (std::uint64_t i = 0; i < amps_.size(); ++i)
            if ((i & mask) == want) p += std::norm(amps_[i]);
        return p;
    }

    // Projects a bit field onto `value` without renormalizing; returns the
    // squared norm left in the projection.
    double project_field(std::size_t off, std::size_t width, std::uint64_t value) {
        const std::uint64_t mask = ((1ULL << width) - 1) << off;
        const std::uint64_t want = value << off;
        double p = 0.0;
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if ((i & mask) == want) p += std::norm(amps_[i]);
            else amps_[i] = Amp{0, 0};
        }
        return p;
    }

    std::uint64_t sample_basis(Rng& rng) const {
        double u = rng.uniform() * norm2();
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            u -= std::norm(amps_[i]);
            if (u <= 0.0) return i;
        }
        return amps_.size() - 1;
    }

    static std::uint64_t field_of(std::uint64_t index, std::size_t off, std::size_t width) {
        return (index >> off) & ((1ULL << width) - 1);
    }

private:
    std::size_t qubits_ = 0;
    std::vector<Amp> amps_;
};

// Random normalized state on `qubits` qubits (Gaussian components).
inline StateVector random_state(std::size_t qubits, Rng& rng) {
    StateVector s(qubits);
    for (std::size_t i = 0; i < s.dim(); ++i) s[i] = Amp{rng.gaussian(), rng.gaussian()};
    s.normalize();
    return s;
}

}  // namespace qcf::qrewind
