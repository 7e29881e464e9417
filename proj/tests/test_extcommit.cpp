#include "doctest.h"

#include "harness.hpp"
#include "qcf/extcommit.hpp"
#include "qcf/stats.hpp"

using namespace qcf;
using namespace qcf::dualmode;

namespace {
const LweParams kBindingParams{4, 64, 257, 1};
const LweParams kHidingParams{2, 48, 257, 1};
}  // namespace

TEST_CASE("response encoding is fixed-width and refuses junk") {
    CHECK(response_bits(4) == 8);
    CHECK(response_bits(5) == 15);
    const zk::Permutation p = {2, 0, 3, 1};
    const Bits encoded = encode_response(p, 4);
    CHECK(encoded.size() == 8);
    const auto back = decode_response(encoded, 4);
    REQUIRE(back.has_value());
    CHECK(*back == p);

    CHECK_FALSE(decode_response(Bits(8), 4).has_value());   // all zeros: not injective
    CHECK_FALSE(decode_response(Bits(7), 4).has_value());   // wrong width
    // out-of-range image at v = 5 (3-bit entries allow values 5..7)
    Bits bad(15);
    bad.set(0, 1);
    bad.set(1, 1);
    bad.set(2, 1);
    CHECK_FALSE(decode_response(bad, 5).has_value());
}

TEST_CASE("commit and open round trips for both bits") {
    Rng rng(1);
    const auto crs = make_binding_crs(kBindingParams, 5, rng);
    const std::size_t zprime = response_bits(5);
    for (std::uint8_t bit = 0; bit <= 1; ++bit) {
        const auto [com, opening] = ext_commit(crs, bit, rng);
        CHECK(com.c0.size() == zprime);
        CHECK(com.c1.size() == zprime);
        CHECK(ext_verify(crs, com, opening));
        CHECK(zk::gi_verify_round(crs.instance,
                                  zk::SigmaConversation{com.a_sigma, opening.bit, opening.z}));

        // swapped slots reopen nothing
        ExtCommitment swapped = com;
        std::swap(swapped.c0, swapped.c1);
        CHECK_FALSE(ext_verify(crs, swapped, opening));

        // a valid reopening with a tampered response must fail the round
        auto tampered = opening;
        std::swap(tampered.z[0], tampered.z[1]);
        CHECK_FALSE(ext_verify(crs, com, tampered));
    }
}

TEST_CASE("extraction recovers the committed bit under a binding setup") {
    Rng rng(2);
    const auto crs = make_binding_crs(kBindingParams, 5, rng);
    std::size_t flags = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::uint8_t bit = rng.bit();
        const auto [com, opening] = ext_commit(crs, bit, rng);
        (void)opening;
        const auto result = ext_extract(crs, com);
        if (result.flag != ExtractFlag::Ok) ++flags;
        CHECK(result.bit == bit);
    }
    CHECK(flags == 0);
}

TEST_CASE("junk commitments are flagged, hiding keys cannot extract") {
    Rng rng(3);
    const auto crs = make_binding_crs(kBindingParams, 5, rng);
    // both slots all-zero strings: no valid reply anywhere
    ExtCommitment junk;
    junk.a_sigma = crs.instance.g0;
    const Bits zeros(response_bits(5));
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        junk.c0.push_back(commit_bit(crs.key, 0, rng).first);
        junk.c1.push_back(commit_bit(crs.key, 0, rng).first);
    }
    CHECK(ext_extract(crs, junk).flag == ExtractFlag::Junk);

    const auto hiding = make_hiding_crs(kHidingParams, 5, rng);
    const auto [com, opening] = ext_commit(hiding, 0, rng);
    (void)opening;
    CHECK_THROWS_AS(ext_extract(hiding, com), NoSecretError);
}

TEST_CASE("no first message answers both challenges on a witness-free instance") {
    Rng rng(4);
    const auto crs = make_binding_crs(kBindingParams, 4, rng);
    for (const auto& rho : harness::all_perms(4)) {
        for (std::uint8_t side = 0; side <= 1; ++side) {
            const zk::Graph h =
                zk::apply_perm(side ? crs.instance.g1 : crs.instance.g0, rho);
            bool other_side = false;
            for (const auto& z : harness::all_perms(4))
                other_side = other_side ||
                             zk::gi_verify_round(crs.instance,
                                                 zk::SigmaConversation{h, static_cast<std::uint8_t>(1 ^ side), z});
            CHECK_FALSE(other_side);
        }
    }
}

TEST_CASE("equivocation opens one commitment to both bits") {
    Rng rng(5);
    const auto crs = make_hiding_crs(kHidingParams, 5, rng);
    for (int trial = 0; trial < 100; ++trial) {
        const auto eq = ext_equivocate(crs, rng);
        CHECK(ext_verify(crs, eq.commitment, eq.open0));
        CHECK(ext_verify(crs, eq.commitment, eq.open1));
        CHECK(eq.open0.bit == 0);
        CHECK(eq.open1.bit == 1);
    }
}

TEST_CASE("equivocation is refused without a hiding key and witness") {
    Rng rng(6);
    const auto binding = make_binding_crs(kBindingParams, 5, rng);
    CHECK_THROWS(ext_equivocate(binding, rng));

    auto hiding = make_hiding_crs(kHidingParams, 5, rng);
    hiding.witness.reset();
    CHECK_THROWS(ext_equivocate(hiding, rng));
}

TEST_CASE("equivocated and honest commitments look alike at toy scale") {
    Rng rng(7);
    // sigma part: enumerate the relabeling tape; the opened conversation of
    // an equivocation is distributed exactly as an honest commitment's
    auto hiding = make_hiding_crs(kHidingParams, 3, rng);
    const auto conv_key = [](const zk::SigmaConversation& conv) {
        std::string key = conv.a_sigma.key() + "/" + std::to_string(conv.challenge) + "/";
        for (auto image : conv.response) key += std::to_string(image) + ",";
        return key;
    };
    for (std::uint8_t bit = 0; bit <= 1; ++bit) {
        harness::Dist honest, equivocated;
        for (const auto& rho : harness::all_perms(3)) {
            honest.add(conv_key(zk::gi_simulate_round_with(hiding.instance, bit, rho)));
            const auto round = zk::gi_prove_round_with(hiding.instance, *hiding.witness, rho);
            equivocated.add(conv_key(round.answer(bit)));
        }
        CHECK(harness::same_distribution(honest, equivocated));
    }

    // ciphertext part: the unopened slot of an honest commitment (zeros)
    // and of an equivocation (a response) have matching c-histograms
    std::vector<std::uint64_t> honest_c(kHidingParams.p, 0), equiv_c(kHidingParams.p, 0);
    const auto crs5 = make_hiding_crs(kHidingParams, 5, rng);
    for (int trial = 0; trial < 4000; ++trial) {
        const auto [com, opening] = ext_commit(crs5, 0, rng);
        (void)opening;
        for (const auto& ct : com.c1) honest_c[ct.c] += 1;
        const auto eq = ext_equivocate(crs5, rng);
        for (const auto& ct : eq.commitment.c1) equiv_c[ct.c] += 1;
    }
    std::size_t df = 0;
    const double stat = stats::chi_square_two_sample(honest_c, equiv_c, &df);
    CHECK(stat < stats::chi_square_critical(df));
}
