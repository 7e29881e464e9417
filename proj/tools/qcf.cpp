// Command line front end: coin-flip sessions over TCP, rewinding sweeps,
// proof generation and checking, dual-mode key generation and the seeded
// experiment suites.
//
// Exit codes: 0 success, 1 assertion/verification failure, 2 usage error,
// 3 transport failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "qcf/experiment.hpp"
#include "qcf/extcommit.hpp"
#include "qcf/iqzk.hpp"
#include "qcf/session.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssert = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTransport = 3;

std::uint64_t default_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

bool split_host_port(const std::string& spec, std::string& host, std::uint16_t& port) {
    const auto colon = spec.rfind(':');
    if (colon == std::string::npos) return false;
    host = spec.substr(0, colon);
    try {
        const int p = std::stoi(spec.substr(colon + 1));
        if (p < 0 || p > 65535) return false;
        port = static_cast<std::uint16_t>(p);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

int run_coinflip(const std::string& role, const std::string& listen, const std::string& connect,
                 std::size_t n, std::size_t k, std::uint64_t seed) {
    if ((listen.empty()) == (connect.empty())) {
        std::cerr << "coinflip: exactly one of --listen/--connect is required\n";
        return kExitUsage;
    }
    const bool is_alice = role == "alice";
    const auto scheme = qcf::commitment::Scheme::naor(n);
    qcf::Rng rng(seed);
    try {
        std::optional<qcf::shell::TcpEndpoint> endpoint;
        if (!listen.empty()) {
            std::string host;
            std::uint16_t port = 0;
            if (!split_host_port(listen, host, port)) {
                std::cerr << "coinflip: bad --listen address\n";
                return kExitUsage;
            }
            auto listener = qcf::shell::TcpListener::bind_to(host, port);
            std::cout << "LISTENING " << listener.port() << std::endl;
            endpoint = listener.accept_one();
        } else {
            std::string host;
            std::uint16_t port = 0;
            if (!split_host_port(connect, host, port)) {
                std::cerr << "coinflip: bad --connect address\n";
                return kExitUsage;
            }
            endpoint = qcf::shell::TcpEndpoint::connect_to(host, port);
        }
        const auto role_enum = is_alice ? qcf::coinflip::Role::Alice : qcf::coinflip::Role::Bob;
        const auto result = qcf::shell::run_sessions(role_enum, *endpoint, scheme, k, rng);
        if (!result.coins) {
            std::cout << "FAIL" << (result.error ? " " + *result.error : "") << std::endl;
            return result.error ? kExitTransport : kExitAssert;
        }
        std::cout << "coins=" << result.coins->str() << std::endl;
        return kExitOk;
    } catch (const qcf::shell::TransportError& e) {
        std::cerr << "transport error: " << e.what() << "\n";
        return kExitTransport;
    }
}

qcf::zk::GIInstance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file " + path);
    qcf::zk::GIInstance x;
    x.g0 = qcf::zk::graph_from_text(in);
    x.g1 = qcf::zk::graph_from_text(in);
    return x;
}

qcf::zk::Permutation read_witness(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open witness file " + path);
    qcf::zk::Permutation w;
    std::size_t image = 0;
    while (in >> image) w.push_back(static_cast<std::uint16_t>(image));
    return w;
}

std::vector<std::uint8_t> read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

void write_binary(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coin-flipping, rewinding simulation and dual-mode commitments"};
    app.require_subcommand(1);

    // --- coinflip ----------------------------------------------------------
    std::string cf_role = "alice", cf_listen, cf_connect;
    std::size_t cf_n = 16, cf_k = 1;
    std::uint64_t cf_seed = default_seed();
    auto* coinflip = app.add_subcommand("coinflip", "run coin-flip sessions over TCP");
    coinflip->add_option("--role", cf_role)->check(CLI::IsMember({"alice", "bob"}))->required();
    coinflip->add_option("--listen", cf_listen, "host:port to listen on (port 0 = ephemeral)");
    coinflip->add_option("--connect", cf_connect, "host:port to connect to");
    coinflip->add_option("--n", cf_n, "commitment security parameter");
    coinflip->add_option("--k", cf_k, "number of sequential flips");
    coinflip->add_option("--seed", cf_seed, "rng seed");

    // --- qrewind -----------------------------------------------------------
    auto* qrewind = app.add_subcommand("qrewind", "statevector rewinding experiments");
    qrewind->require_subcommand(1);
    std::size_t sw_trials = 100, sw_qubits = 12;
    std::uint64_t sw_seed = 1;
    double sw_p0 = 0.45;
    std::string sw_out, sw_family = "controlled";
    bool sw_filter = false;
    auto* sweep = qrewind->add_subcommand("sweep", "run seeded adversary sweeps, emit CSV");
    sweep->add_option("--trials", sw_trials);
    sweep->add_option("--qubits", sw_qubits)->check(CLI::Range(10, 16));
    sweep->add_option("--seed", sw_seed);
    sweep->add_option("--p0", sw_p0, "success floor used in the fidelity bound");
    sweep->add_option("--out", sw_out, "CSV path (stdout when omitted)");
    sweep->add_option("--family", sw_family)->check(CLI::IsMember({"independent", "controlled"}));
    sweep->add_flag("--filter", sw_filter, "keep only trials with p in [0.45, 0.55]");

    // --- iqzk --------------------------------------------------------------
    auto* iqzk = app.add_subcommand("iqzk", "zero-knowledge proofs over a coin-flipped string");
    iqzk->require_subcommand(1);

    std::string gen_out = "instance.txt", gen_witness_out;
    std::size_t gen_v = 6;
    bool gen_noniso = false;
    std::uint64_t gen_seed = default_seed();
    auto* gen = iqzk->add_subcommand("gen", "generate an instance (and witness) file");
    gen->add_option("--v", gen_v, "vertices")->check(CLI::Range(3, 16));
    gen->add_option("--out", gen_out);
    gen->add_option("--witness-out", gen_witness_out);
    gen->add_flag("--noniso", gen_noniso, "emit a witness-free (non-isomorphic) instance");
    gen->add_option("--seed", gen_seed);

    std::string pv_instance, pv_witness, pv_proof = "proof.bin";
    std::size_t pv_k = 8;
    std::uint64_t pv_seed = default_seed();
    auto* prove = iqzk->add_subcommand("prove", "produce a proof under a fresh reference string");
    prove->add_option("--instance", pv_instance)->required();
    prove->add_option("--witness", pv_witness)->required();
    prove->add_option("--k", pv_k);
    prove->add_option("--seed", pv_seed);
    prove->add_option("--out", pv_proof);

    std::string vf_instance, vf_proof;
    auto* verify = iqzk->add_subcommand("verify", "check a proof file");
    verify->add_option("--instance", vf_instance)->required();
    verify->add_option("--proof", vf_proof)->required();

    std::string sim_instance, sim_out;
    std::size_t sim_k = 8;
    std::uint64_t sim_seed = default_seed();
    auto* simulate = iqzk->add_subcommand(
        "simulate", "produce a witness-free proof by programming the oracle");
    simulate->add_option("--instance", sim_instance)->required();
    simulate->add_option("--k", sim_k);
    simulate->add_option("--seed", sim_seed);
    simulate->add_option("--out", sim_out);

    // --- dualmode ----------------------------------------------------------
    auto* dualmode = app.add_subcommand("dualmode", "dual-mode commitment keys");
    dualmode->require_subcommand(1);
    std::string kg_mode = "binding", kg_params = "4,64,257,1", kg_out = "key.bin";
    std::uint64_t kg_seed = default_seed();
    auto* keygen = dualmode->add_subcommand("keygen", "generate and store a key");
    keygen->add_option("--mode", kg_mode)->check(CLI::IsMember({"binding", "hiding", "coins"}));
    keygen->add_option("--params", kg_params, "k,m,p,beta");
    keygen->add_option("--seed", kg_seed);
    keygen->add_option("--out", kg_out);

    // --- experiment ----------------------------------------------------------
    std::string ex_name, ex_out;
    std::uint64_t ex_seed = 1;
    std::size_t ex_reps = 0;
    auto* experiment = app.add_subcommand("experiment", "seeded experiment suites with bounds");
    experiment->add_option("--name", ex_name)
        ->check(CLI::IsMember({"fairness", "rewind-sweep", "soundness", "extraction",
                               "equivocation"}))
        ->required();
    experiment->add_option("--seed", ex_seed);
    experiment->add_option("--reps", ex_reps, "0 = experiment default");
    experiment->add_option("--out", ex_out, "CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (coinflip->parsed())
            return run_coinflip(cf_role, cf_listen, cf_connect, cf_n, cf_k, cf_seed);

        if (sweep->parsed()) {
            qcf::qrewind::SweepConfig config;
            config.trials = sw_trials;
            config.qubits = sw_qubits;
            config.seed = sw_seed;
            config.p0 = sw_p0;
            config.family = sw_family == "independent" ? qcf::qrewind::AdversaryFamily::Independent
                                                       : qcf::qrewind::AdversaryFamily::Controlled;
            config.filter = sw_filter;
            const auto csv = qcf::qrewind::sweep_csv(qcf::qrewind::run_sweep(config));
            if (sw_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(sw_out, std::ios::binary);
                if (!out) throw std::runtime_error("cannot write " + sw_out);
                out << csv;
            }
            return kExitOk;
        }

        if (gen->parsed()) {
            qcf::Rng rng(gen_seed);
            std::ofstream out(gen_out);
            if (!out) throw std::runtime_error("cannot write " + gen_out);
            if (gen_noniso) {
                const auto x =
                    qcf::zk::make_nonisomorphic_instance(static_cast<std::uint16_t>(gen_v), rng);
                out << qcf::zk::graph_to_text(x.g0) << qcf::zk::graph_to_text(x.g1);
                std::cout << "wrote witness-free instance to " << gen_out << "\n";
            } else {
                const auto wx =
                    qcf::zk::make_isomorphic_instance(static_cast<std::uint16_t>(gen_v), rng);
                out << qcf::zk::graph_to_text(wx.instance.g0) << qcf::zk::graph_to_text(wx.instance.g1);
                const std::string wpath =
                    gen_witness_out.empty() ? gen_out + ".witness" : gen_witness_out;
                std::ofstream wout(wpath);
                if (!wout) throw std::runtime_error("cannot write " + wpath);
                for (auto image : wx.witness) wout << image << ' ';
                wout << '\n';
                std::cout << "wrote instance to " << gen_out << " and witness to " << wpath << "\n";
            }
            return kExitOk;
        }

        if (prove->parsed()) {
            const auto x = read_instance(pv_instance);
            const auto w = read_witness(pv_witness);
            if (!qcf::zk::witness_valid(x, w)) {
                std::cerr << "witness does not map g0 onto g1\n";
                return kExitAssert;
            }
            qcf::Rng rng(pv_seed);
            const qcf::Bits omega = qcf::Bits::random(pv_k, rng);
            auto oracle = qcf::zk::OracleTable::hash_derived();
            const auto proof = qcf::zk::nizk_prove(omega, x, w, oracle, rng);
            write_binary(pv_proof, qcf::zk::proof_to_bytes(omega, proof));
            std::cout << "omega=" << omega.str() << " proof=" << pv_proof << "\n";
            return kExitOk;
        }

        if (verify->parsed()) {
            const auto x = read_instance(vf_instance);
            const auto decoded = qcf::zk::proof_from_bytes(read_binary(vf_proof));
            if (!decoded) {
                std::cerr << "malformed proof file\n";
                return kExitAssert;
            }
            auto oracle = qcf::zk::OracleTable::hash_derived();
            const bool ok = qcf::zk::nizk_verify(decoded->first, x, decoded->second, oracle);
            std::cout << (ok ? "ACCEPT" : "REJECT") << "\n";
            return ok ? kExitOk : kExitAssert;
        }

        if (simulate->parsed()) {
            const auto x = read_instance(sim_instance);
            qcf::Rng rng(sim_seed);
            auto oracle = qcf::zk::OracleTable::hash_derived();
            const auto simulated = qcf::zk::nizk_simulate(x, sim_k, oracle, rng);
            if (!simulated) {
                std::cerr << "oracle entry already fixed\n";
                return kExitAssert;
            }
            const bool ok = qcf::zk::nizk_verify(simulated->first, x, simulated->second, oracle);
            std::cout << "omega=" << simulated->first.str()
                      << " verifies_under_programmed_oracle=" << (ok ? "yes" : "no") << "\n";
            if (!sim_out.empty())
                write_binary(sim_out, qcf::zk::proof_to_bytes(simulated->first, simulated->second));
            return ok ? kExitOk : kExitAssert;
        }

        if (keygen->parsed()) {
            unsigned k = 0, m = 0, p = 0, beta = 0;
            if (std::sscanf(kg_params.c_str(), "%u,%u,%u,%u", &k, &m, &p, &beta) != 4) {
                std::cerr << "--params expects k,m,p,beta\n";
                return kExitUsage;
            }
            const qcf::dualmode::LweParams params{k, m, p, beta};
            params.validate();
            qcf::Rng rng(kg_seed);
            qcf::dualmode::RegevKey key;
            if (kg_mode == "binding") {
                key = qcf::dualmode::keygen_binding(params, rng);
            } else if (kg_mode == "hiding") {
                key = qcf::dualmode::keygen_hiding(params, rng);
            } else {
                // public-coin path: feed a coin string through rejection
                // sampling, asking for more coins until the key completes
                std::size_t bits = 2 * params.key_bits();
                for (;;) {
                    try {
                        qcf::Rng coin_rng(kg_seed ^ 0xc01u);
                        key = qcf::dualmode::key_from_coins(params,
                                                            qcf::Bits::random(bits, coin_rng));
                        break;
                    } catch (const qcf::dualmode::InsufficientCoinsError& e) {
                        bits += e.more_bits_hint();
                    }
                }
            }
            std::ofstream out(kg_out, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + kg_out);
            qcf::dualmode::write_key(out, key);
            std::cout << "mode=" << kg_mode << " k=" << params.k << " m=" << params.m
                      << " p=" << params.p << " beta=" << params.beta
                      << " key_bits=" << params.key_bits() << " file=" << kg_out << "\n";
            return kExitOk;
        }

        if (experiment->parsed()) {
            qcf::shell::ExperimentSpec spec{ex_name, ex_seed, ex_reps, ex_out};
            const auto result = qcf::shell::run_experiment(spec);
            for (const auto& note : result.notes) std::cout << note << "\n";
            std::cout << (result.passed ? "PASS" : "FAIL") << "\n";
            return result.passed ? kExitOk : kExitAssert;
        }
    } catch (const qcf::shell::TransportError& e) {
        std::cerr << "transport error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAssert;
    }
    return kExitUsage;
}
