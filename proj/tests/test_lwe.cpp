#include "doctest.h"

#include <sstream>

#include "qcf/coinflip.hpp"
#include "qcf/lwe.hpp"
#include "qcf/stats.hpp"

using namespace qcf;
using namespace qcf::dualmode;

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(LweParams{4, 64, 257, 1}.validate());
    CHECK_THROWS(LweParams{4, 64, 256, 1}.validate());   // composite modulus
    CHECK_THROWS(LweParams{4, 64, 97, 1}.validate());    // 4 * 64 >= 97
    CHECK_THROWS(LweParams{0, 8, 97, 1}.validate());
    CHECK(LweParams{4, 64, 257, 1}.element_bits() == 9);
    CHECK(LweParams{2, 8, 97, 1}.element_bits() == 7);
    CHECK(LweParams{4, 64, 257, 1}.key_bits() == 64 * 5 * 9);
}

TEST_CASE("binding keys satisfy the row closeness invariant") {
    const LweParams params{4, 16, 97, 1};
    Rng rng(1);
    const auto key = keygen_binding(params, rng);
    REQUIRE(key.secret.size() == 4);
    for (std::size_t i = 0; i < params.m; ++i) {
        std::uint64_t dot = 0;
        for (std::size_t j = 0; j < params.k; ++j)
            dot += static_cast<std::uint64_t>(key.a(i, j)) * key.secret[j];
        const std::uint32_t err = static_cast<std::uint32_t>(
            ((key.b(i) + params.p) - (dot % params.p)) % params.p);
        const bool close = err <= params.beta || err >= params.p - params.beta;
        CHECK(close);
    }
    Rng rng2(2);
    CHECK_FALSE(keygen_binding(params, rng2) == key);
}

TEST_CASE("decryption is exact over every subset when m * beta < p / 4") {
    const LweParams params{2, 8, 97, 1};
    Rng rng(3);
    const auto key = keygen_binding(params, rng);
    for (std::uint32_t mask = 0; mask < 256; ++mask) {
        std::vector<std::uint32_t> subset;
        for (std::uint32_t i = 0; i < 8; ++i)
            if ((mask >> i) & 1) subset.push_back(i);
        for (std::uint8_t bit = 0; bit <= 1; ++bit)
            CHECK(extract(key, commit_with_subset(key, bit, subset)) == bit);
    }

    // the same sweep at the larger point 16 * 1 < 97 / 4
    const LweParams wide{4, 16, 97, 1};
    const auto wide_key = keygen_binding(wide, rng);
    std::size_t wrong = 0;
    for (std::uint32_t mask = 0; mask < (1u << 16); ++mask) {
        std::vector<std::uint32_t> subset;
        for (std::uint32_t i = 0; i < 16; ++i)
            if ((mask >> i) & 1) subset.push_back(i);
        for (std::uint8_t bit = 0; bit <= 1; ++bit)
            if (extract(wide_key, commit_with_subset(wide_key, bit, subset)) != bit) ++wrong;
    }
    CHECK(wrong == 0);
}

TEST_CASE("decryption ties break toward one") {
    // p = 5 admits a tie: half = 2, so d = 1 is one step from both 0 and 2
    const LweParams params{1, 1, 5, 1};
    params.validate();
    RegevKey key;
    key.params = params;
    key.mode = KeyMode::Binding;
    key.secret = {0};
    key.rows = {0, 0};  // a = 0, b = 0
    CHECK(extract(key, LweCiphertext{{0}, 1}) == 1);  // equidistant, toward 1
    CHECK(extract(key, LweCiphertext{{0}, 0}) == 0);
    CHECK(extract(key, LweCiphertext{{0}, 2}) == 1);
    CHECK(extract(key, LweCiphertext{{0}, 3}) == 1);  // closer to half
    CHECK(extract(key, LweCiphertext{{0}, 4}) == 0);  // closer to zero
}

TEST_CASE("commitments: empty subset edge and deterministic reopening") {
    const LweParams params{4, 16, 97, 1};
    Rng rng(4);
    const auto key = keygen_binding(params, rng);

    const auto empty = commit_with_subset(key, 1, {});
    for (auto u : empty.u) CHECK(u == 0);
    CHECK(empty.c == 97 / 2);

    for (int trial = 0; trial < 200; ++trial) {
        const std::uint8_t bit = rng.bit();
        const auto [ct, opening] = commit_bit(key, bit, rng);
        CHECK(verify_bit_opening(key, ct, opening));
        CHECK(extract(key, ct) == bit);
        auto wrong = opening;
        wrong.bit ^= 1;
        CHECK_FALSE(verify_bit_opening(key, ct, wrong));
    }
}

TEST_CASE("extraction requires the trapdoor") {
    const LweParams params{2, 8, 97, 1};
    Rng rng(5);
    const auto hiding = keygen_hiding(params, rng);
    const auto [ct, opening] = commit_bit(hiding, 1, rng);
    (void)opening;
    CHECK_THROWS_AS(extract(hiding, ct), NoSecretError);
}

TEST_CASE("coin-derived keys are deterministic and element-uniform") {
    const LweParams params{4, 500, 97, 0};
    Rng rng(6);
    const Bits coins = Bits::random(2 * params.key_bits(), rng);
    CoinConsumption info1, info2;
    const auto key1 = key_from_coins(params, coins, &info1);
    const auto key2 = key_from_coins(params, coins, &info2);
    CHECK(key1 == key2);
    CHECK(info1.bits_consumed == info2.bits_consumed);
    CHECK(key1.mode == KeyMode::Hiding);
    CHECK(key1.secret.empty());

    // 2500 elements over 97 cells, one-percent chi-square
    std::vector<std::uint64_t> counts(97, 0);
    for (auto v : key1.rows) ++counts[v];
    CHECK(stats::chi_square_uniform(counts) < stats::chi_square_critical(96));
}

TEST_CASE("coin consumption is chunked rejection sampling, nothing else") {
    const LweParams params{1, 1, 97, 0};  // 2 elements, 7-bit chunks
    // first chunk 1111111 (127, rejected), then 0000011 (3), then 0000100 (4)
    const Bits coins = Bits::from_string("111111100000110000100");
    CoinConsumption info;
    const auto key = key_from_coins(params, coins, &info);
    CHECK(key.rows == std::vector<std::uint32_t>{3, 4});
    CHECK(info.bits_consumed == 21);
    CHECK(info.chunks_rejected == 1);

    // a rejected chunk consumes exactly its seven bits
    const Bits tight = Bits::from_string("00000110000100");
    CoinConsumption tight_info;
    const auto key2 = key_from_coins(params, tight, &tight_info);
    CHECK(key2.rows == std::vector<std::uint32_t>{3, 4});
    CHECK(tight_info.bits_consumed == 14);
    CHECK(tight_info.chunks_rejected == 0);
}

TEST_CASE("coin-flip sessions feed the hiding key end to end") {
    const LweParams params{2, 8, 97, 1};
    const auto scheme = commitment::Scheme::naor(4);
    Rng alice_rng(60), bob_rng(61);
    const auto flip = [&](std::size_t) {
        return coinflip::run_honest_session(scheme, alice_rng, bob_rng).bob_out;
    };
    // ask for more coins until the rejection sampler is satisfied
    std::size_t k = params.key_bits();
    for (;;) {
        const auto coins = coinflip::generate_crs(k, flip);
        REQUIRE(coins.has_value());
        try {
            const auto key = key_from_coins(params, *coins);
            CHECK(key.mode == KeyMode::Hiding);
            CHECK(key.rows.size() == params.elements());
            break;
        } catch (const InsufficientCoinsError& e) {
            k += e.more_bits_hint();
        }
    }
}

TEST_CASE("running out of coins asks for more") {
    const LweParams params{2, 8, 97, 1};
    try {
        key_from_coins(params, Bits(20));
        FAIL("expected InsufficientCoinsError");
    } catch (const InsufficientCoinsError& e) {
        CHECK(e.elements_filled() < e.elements_total());
        CHECK(e.elements_total() == 24);
        CHECK(e.more_bits_hint() > 0);
    }
}

TEST_CASE("hiding-mode commitments to 0 and 1 have matching statistics") {
    const LweParams params{2, 48, 257, 1};  // comfortably past the hash regime
    CHECK(params.hiding_margin() > 16);
    Rng rng(7);
    const auto key = keygen_hiding(params, rng);
    std::vector<std::uint64_t> c0(params.p, 0), c1(params.p, 0);
    for (int trial = 0; trial < 10000; ++trial) {
        c0[commit_bit(key, 0, rng).first.c] += 1;
        c1[commit_bit(key, 1, rng).first.c] += 1;
    }
    std::size_t df = 0;
    const double stat = stats::chi_square_two_sample(c0, c1, &df);
    CHECK(stat < stats::chi_square_critical(df));
}

TEST_CASE("key files round trip, secret only in binding mode") {
    const LweParams params{3, 12, 101, 2};
    Rng rng(8);
    for (const auto& key : {keygen_binding(params, rng), keygen_hiding(params, rng)}) {
        std::stringstream buffer;
        write_key(buffer, key);
        const std::size_t expected =
            4 * (5 + params.elements() + (key.mode == KeyMode::Binding ? params.k : 0));
        CHECK(buffer.str().size() == expected);
        const auto back = read_key(buffer);
        CHECK(back == key);
    }
    std::stringstream truncated;
    truncated << "abc";
    CHECK_THROWS(read_key(truncated));
}
