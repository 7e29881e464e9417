#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcf/extcommit.hpp"
#include "qcf/iqzk.hpp"
#include "qcf/qrewind.hpp"
#include "qcf/session.hpp"

namespace qcf::shell {

struct ExperimentSpec {
    std::string name;       // fairness | rewind-sweep | soundness | extraction | equivocation
    std::uint64_t seed = 1;
    std::size_t reps = 0;   // 0 = experiment default
    std::string out_path;   // empty = no file
};

struct ExperimentResult {
    bool passed = false;
    std::string csv;
    std::vector<std::string> notes;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline ExperimentResult fairness_experiment(std::uint64_t seed, std::size_t reps) {
    const auto scheme = commitment::Scheme::naor(16);
    Rng alice_rng(seed), bob_rng(seed ^ 0x62626262ULL);
    std::ostringstream csv;
    csv << "run,coin\n";
    std::size_t ones = 0, failures = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        const auto run = coinflip::run_honest_session(scheme, alice_rng, bob_rng);
        if (run.bob_out.failed || !(run.bob_out == run.alice_out)) ++failures;
        else ones += run.bob_out.coin;
        csv << i << ',' << (run.bob_out.failed ? -1 : static_cast<int>(run.bob_out.coin)) << '\n';
    }
    const double freq = static_cast<double>(ones) / static_cast<double>(reps);
    ExperimentResult result;
    result.csv = csv.str();
    result.passed = failures == 0 && freq >= 0.48 && freq <= 0.52;
    result.notes.push_back("frequency_of_one=" + fmt_double(freq));
    result.notes.push_back("failures=" + std::to_string(failures));
    return result;
}

inline ExperimentResult rewind_sweep_experiment(std::uint64_t seed, std::size_t reps) {
    qrewind::SweepConfig config;
    config.trials = reps;
    config.qubits = 12;
    config.seed = seed;
    config.family = qrewind::AdversaryFamily::Controlled;
    config.filter = true;
    const auto rows = qrewind::run_sweep(config);
    ExperimentResult result;
    result.csv = qrewind::sweep_csv(rows);
    result.passed = true;
    for (const auto& row : rows) {
        const auto& r = row.report;
        if (!r.success) result.passed = false;
        if (r.epsilon > 0 && r.fidelity < 1.0 - r.epsilon_prime) result.passed = false;
        if (r.epsilon == 0 && r.fidelity < 1.0 - 1e-9) result.passed = false;
    }
    result.notes.push_back("trials=" + std::to_string(rows.size()));
    return result;
}

inline ExperimentResult soundness_experiment(std::uint64_t seed, std::size_t reps) {
    const std::size_t k = 8;
    Rng rng(seed);
    const auto x = zk::make_nonisomorphic_instance(6, rng);
    std::size_t accepts = 0;
    auto oracle = zk::OracleTable::seeded(seed ^ 0x6f7261636cULL);
    for (std::size_t i = 0; i < reps; ++i) {
        const Bits omega = Bits::random(k, rng);
        const auto proof = zk::nizk_guess_prove(omega, x, rng);
        if (zk::nizk_verify(omega, x, proof, oracle)) ++accepts;
    }
    const double rate = static_cast<double>(accepts) / static_cast<double>(reps);
    const double base = std::pow(2.0, -static_cast<double>(k));
    const double bound = base + 3.0 * std::sqrt(base / static_cast<double>(reps));
    ExperimentResult result;
    std::ostringstream csv;
    csv << "trials,accepts,rate,bound\n"
        << reps << ',' << accepts << ',' << fmt_double(rate) << ',' << fmt_double(bound) << '\n';
    result.csv = csv.str();
    result.passed = rate <= bound;
    result.notes.push_back("rate=" + fmt_double(rate) + " bound=" + fmt_double(bound));
    return result;
}

inline ExperimentResult extraction_experiment(std::uint64_t seed, std::size_t reps) {
    Rng rng(seed);
    const dualmode::LweParams params{4, 64, 257, 1};
    const auto crs = dualmode::make_binding_crs(params, 5, rng);
    std::ostringstream csv;
    csv << "trial,committed,extracted,flag\n";
    std::size_t bad = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        const std::uint8_t bit = rng.bit();
        const auto [com, opening] = dualmode::ext_commit(crs, bit, rng);
        const auto extracted = dualmode::ext_extract(crs, com);
        const bool ok = extracted.flag == dualmode::ExtractFlag::Ok && extracted.bit == bit &&
                        dualmode::ext_verify(crs, com, opening);
        if (!ok) ++bad;
        csv << i << ',' << static_cast<int>(bit) << ',' << static_cast<int>(extracted.bit) << ','
            << static_cast<int>(extracted.flag) << '\n';
    }
    ExperimentResult result;
    result.csv = csv.str();
    result.passed = bad == 0;
    result.notes.push_back("mismatches=" + std::to_string(bad));
    return result;
}

inline ExperimentResult equivocation_experiment(std::uint64_t seed, std::size_t reps) {
    Rng rng(seed);
    const dualmode::LweParams params{2, 48, 257, 1};
    const auto crs = dualmode::make_hiding_crs(params, 5, rng);
    std::ostringstream csv;
    csv << "trial,open0_ok,open1_ok\n";
    std::size_t bad = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        const auto eq = dualmode::ext_equivocate(crs, rng);
        const bool ok0 = dualmode::ext_verify(crs, eq.commitment, eq.open0);
        const bool ok1 = dualmode::ext_verify(crs, eq.commitment, eq.open1);
        if (!(ok0 && ok1)) ++bad;
        csv << i << ',' << ok0 << ',' << ok1 << '\n';
    }
    ExperimentResult result;
    result.csv = csv.str();
    result.passed = bad == 0;
    result.notes.push_back("failures=" + std::to_string(bad));
    return result;
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentResult result;
    if (spec.name == "fairness")
        result = detail::fairness_experiment(spec.seed, spec.reps ? spec.reps : 10000);
    else if (spec.name == "rewind-sweep")
        result = detail::rewind_sweep_experiment(spec.seed, spec.reps ? spec.reps : 100);
    else if (spec.name == "soundness")
        result = detail::soundness_experiment(spec.seed, spec.reps ? spec.reps : 10000);
    else if (spec.name == "extraction")
        result = detail::extraction_experiment(spec.seed, spec.reps ? spec.reps : 1000);
    else if (spec.name == "equivocation")
        result = detail::equivocation_experiment(spec.seed, spec.reps ? spec.reps : 1000);
    else
        throw std::invalid_argument("unknown experiment: " + spec.name);

    if (!spec.out_path.empty()) {
        std::ofstream out(spec.out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + spec.out_path);
        out << result.csv;
    }
    return result;
}

}  // namespace qcf::shell
