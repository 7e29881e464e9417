#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qcf::stats {

// Pearson chi-square statistic against a uniform expectation.
inline double chi_square_uniform(const std::vector<std::uint64_t>& counts) {
    if (counts.empty()) throw std::invalid_argument("chi_square_uniform: no cells");
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    if (expected <= 0.0) throw std::invalid_argument("chi_square_uniform: empty sample");
    double stat = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

// Two-sample chi-square over shared cells; cells where both samples are
// empty are dropped. Degrees of freedom = kept cells - 1 for equal totals.
inline double chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                    const std::vector<std::uint64_t>& b,
                                    std::size_t* df_out = nullptr) {
    if (a.size() != b.size()) throw std::invalid_argument("chi_square_two_sample: cell mismatch");
    double na = 0, nb = 0;
    for (auto v : a) na += static_cast<double>(v);
    for (auto v : b) nb += static_cast<double>(v);
    if (na <= 0 || nb <= 0) throw std::invalid_argument("chi_square_two_sample: empty sample");
    const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
    double stat = 0.0;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = static_cast<double>(a[i]), bi = static_cast<double>(b[i]);
        if (ai + bi == 0) continue;
        ++kept;
        const double d = ka * ai - kb * bi;
        stat += d * d / (ai + bi);
    }
    if (df_out) *df_out = kept > 0 ? kept - 1 : 0;
    return stat;
}

// Upper quantile of the chi-square distribution via the Wilson-Hilferty
// cube approximation; z is the standard-normal quantile (2.3263 for 99%).
inline double chi_square_critical(std::size_t df, double z = 2.3263478740408408) {
    if (df == 0) throw std::invalid_argument("chi_square_critical: df must be positive");
    const double n = static_cast<double>(df);
    const double t = 1.0 - 2.0 / (9.0 * n) + z * std::sqrt(2.0 / (9.0 * n));
    return n * t * t * t;
}

inline double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("correlation: bad input");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace qcf::stats
