#include "doctest.h"

#include "harness.hpp"
#include "qcf/iqzk.hpp"

using namespace qcf;
using namespace qcf::zk;

TEST_CASE("intermediate protocol: honest runs accept, refusals abort") {
    Rng rng(1);
    const auto wx = make_isomorphic_instance(6, rng);
    auto oracle = OracleTable::seeded(2);

    for (int trial = 0; trial < 50; ++trial) {
        const auto run = iqzk_fcoin_run(wx.instance, IqzkProver{wx.witness, {}}, 8, oracle, rng);
        CHECK(run.accepted);
        CHECK(run.omega.size() == 8);
    }

    const auto blocked =
        iqzk_fcoin_run(wx.instance, IqzkProver{wx.witness, std::size_t{3}}, 8, oracle, rng);
    CHECK_FALSE(blocked.accepted);
    CHECK_FALSE(blocked.proof.has_value());  // rejected before any proof check
}

TEST_CASE("intermediate protocol: witness-free provers rarely pass") {
    Rng rng(3);
    const auto x = make_nonisomorphic_instance(6, rng);
    auto oracle = OracleTable::seeded(4);
    const std::size_t trials = 2000, k = 8;
    std::size_t accepts = 0;
    for (std::size_t i = 0; i < trials; ++i)
        if (iqzk_fcoin_run(x, IqzkProver{}, k, oracle, rng).accepted) ++accepts;
    const double base = std::pow(2.0, -static_cast<double>(k));
    CHECK(static_cast<double>(accepts) / trials <= base + 3 * std::sqrt(base / trials));
}

TEST_CASE("real protocol: honest runs accept with the expected shape") {
    Rng prover_rng(5), verifier_rng(6);
    const auto scheme = commitment::Scheme::naor(6);
    Rng inst_rng(7);
    const auto wx = make_isomorphic_instance(6, inst_rng);
    auto oracle = OracleTable::seeded(8);
    const std::size_t k = 8;
    for (int trial = 0; trial < 100; ++trial) {
        const auto run = iqzk_run(scheme, wx.instance, IqzkProver{wx.witness, {}}, k,
                                  honest_iqzk_verifier(scheme), oracle, prover_rng, verifier_rng);
        REQUIRE(run.accepted);
        REQUIRE(run.sessions.size() == k);
        Bits coins(k);
        for (std::size_t i = 0; i < k; ++i) {
            const auto& t = run.sessions[i];
            REQUIRE(t.size() == 4);  // nonce, commit, challenge, open
            const auto sigma = t[0].as<coinflip::NonceMsg>()->sigma;
            const auto* open = t[3].as<coinflip::OpenMsg>();
            REQUIRE(commitment::verify_open(
                scheme, commitment::ReceiverNonce{sigma},
                commitment::Commitment{t[1].as<coinflip::CommitMsg>()->value},
                commitment::Opening{open->bit, open->randomness}));
            coins.set(i, open->bit ^ t[2].as<coinflip::ChallengeMsg>()->b);
        }
        // the coins extracted from the transcript are the string the proof
        // verifies under
        CHECK(coins == run.omega);
        REQUIRE(run.proof.has_value());
        auto replay = OracleTable::seeded(8);
        (void)replay;
        CHECK(nizk_verify(run.omega, wx.instance, *run.proof, oracle));
    }
}

TEST_CASE("real protocol: refusing to open rejects without a proof") {
    Rng prover_rng(9), verifier_rng(10);
    const auto scheme = commitment::Scheme::naor(4);
    Rng inst_rng(11);
    const auto wx = make_isomorphic_instance(5, inst_rng);
    auto oracle = OracleTable::seeded(12);
    const auto run = iqzk_run(scheme, wx.instance, IqzkProver{wx.witness, std::size_t{2}}, 8,
                              honest_iqzk_verifier(scheme), oracle, prover_rng, verifier_rng);
    CHECK_FALSE(run.accepted);
    CHECK(run.sessions.size() == 3);
    CHECK(run.sessions.back().back().tag() == coinflip::MsgTag::Abort);
    CHECK_FALSE(run.proof.has_value());
}

TEST_CASE("simulator forces the session coins onto the simulated string") {
    Rng rng(13);
    const auto scheme = commitment::Scheme::naor(4);
    const auto wx = make_isomorphic_instance(5, rng);
    for (const bool fix : {false, true}) {
        auto oracle = OracleTable::seeded(rng.u64());
        const auto verifier =
            fix ? bit_fixing_iqzk_verifier(scheme, 0) : honest_iqzk_verifier(scheme);
        const auto sim = iqzk_simulate(scheme, wx.instance, 8, verifier, oracle, rng);
        REQUIRE(sim.has_value());
        CHECK(sim->accepted);
        REQUIRE(sim->sessions.size() == 8);
        for (std::size_t i = 0; i < 8; ++i) {
            const auto& t = sim->sessions[i];
            const auto* open = t[3].as<coinflip::OpenMsg>();
            const auto b = t[2].as<coinflip::ChallengeMsg>()->b;
            CHECK(((open->bit ^ b) & 1) == sim->omega[i]);
        }
        CHECK(nizk_verify(sim->omega, wx.instance, *sim->proof, oracle));
    }
}

TEST_CASE("composed transcripts: simulated equals real under full enumeration") {
    Rng rng(14);
    harness::IqzkEnumerationConfig config;
    config.scheme = commitment::Scheme::stub(2);
    const auto wx = make_isomorphic_instance(3, rng);
    config.x = wx.instance;
    config.witness = wx.witness;

    for (const bool fix : {false, true}) {
        config.bit_fixing_verifier = fix;
        const auto real = harness::enumerate_real_iqzk(config);
        const auto simulated = harness::enumerate_simulated_iqzk(config);
        INFO("bit_fixing=", fix);
        CHECK(real.total > 0);
        CHECK(harness::same_distribution(real, simulated));
    }
}

TEST_CASE("quantum-forcing demonstration at two coins") {
    Rng rng(15);
    const auto wx = make_isomorphic_instance(4, rng);
    const auto layout = qrewind::RegisterLayout::make(1, 1, 2);
    const auto toy = qrewind::ToyCommitment::keyed(layout.r_width(), rng.u64());
    const auto adv = qrewind::AdversaryCircuit::haar_independent(layout, rng);
    auto oracle = OracleTable::seeded(16);

    const auto sim = iqzk_simulate_quantum(wx.instance, 2, layout, toy, adv, oracle, rng);
    REQUIRE(sim.has_value());
    CHECK(sim->proof_verifies);
    REQUIRE(sim->sessions.size() == 2);
    for (const auto& session : sim->sessions) {
        CHECK(session.report.success);
        CHECK(session.conversation.b == ((session.coin ^ session.conversation.a()) & 1));
        CHECK(toy.commit(session.conversation.opening) == session.conversation.commitment);
    }
}
