#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mdsmod/fec.hpp"

using namespace mdsmod;

namespace {

std::vector<std::uint8_t> random_bits(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(bit(rng));
    return out;
}

}  // namespace

TEST_CASE("generator catalogs") {
    const ConvCode k7 = conv_code_k7();
    CHECK(k7.constraint_length == 7);
    CHECK(k7.generators[0] == std::vector<std::uint8_t>{1, 1, 1, 1, 0, 0, 1});
    CHECK(k7.generators[1] == std::vector<std::uint8_t>{1, 0, 1, 1, 0, 1, 1});
    const ConvCode k3 = conv_code_k3();
    CHECK(k3.constraint_length == 3);
    CHECK(k3.generators[0] == std::vector<std::uint8_t>{1, 0, 1});
    CHECK(k3.generators[1] == std::vector<std::uint8_t>{1, 1, 1});
    CHECK_NOTHROW(validate(k7));
    ConvCode bad = k3;
    bad.generators[0][0] = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = k3;
    bad.generators[1].pop_back();
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("impulse responses read off the generators") {
    // single one followed by zeros reproduces the tap patterns
    const std::vector<std::uint8_t> impulse3 = {1, 0, 0};
    CHECK(conv_encode(impulse3, conv_code_k3(), true) ==
          std::vector<std::uint8_t>{1, 1, 0, 1, 1, 1, 0, 0, 0, 0});
    const std::vector<std::uint8_t> impulse7 = {1, 0, 0, 0, 0, 0, 0};
    const auto out = conv_encode(impulse7, conv_code_k7(), true);
    const std::vector<std::uint8_t> head = {1, 1, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1};
    REQUIRE(out.size() == 2 * (7 + 6));
    for (std::size_t i = 0; i < head.size(); ++i) CHECK(out[i] == head[i]);
    for (std::size_t i = head.size(); i < out.size(); ++i) CHECK(out[i] == 0);
}

TEST_CASE("terminated blocks have the advertised length and end state") {
    for (const ConvCode& code : {conv_code_k3(), conv_code_k7()}) {
        const auto data = random_bits(40, 11);
        const auto coded = conv_encode(data, code, true);
        CHECK(coded.size() == 2 * (40 + code.constraint_length - 1));
        CHECK(viterbi_hard(coded, code, true) == data);
        const auto unterminated = conv_encode(data, code, false);
        CHECK(unterminated.size() == 2 * 40);
    }
}

TEST_CASE("hard decoding corrects every single flip") {
    for (const ConvCode& code : {conv_code_k3(), conv_code_k7()}) {
        const auto data = random_bits(24, 3);
        const auto coded = conv_encode(data, code, true);
        for (std::size_t flip = 0; flip < coded.size(); ++flip) {
            auto corrupted = coded;
            corrupted[flip] ^= 1;
            CHECK(viterbi_hard(corrupted, code, true) == data);
        }
    }
}

TEST_CASE("k3 corrects double flips beyond its guaranteed radius apart") {
    // free distance 5 corrects any 2 errors when they sit in separate
    // constraint spans
    const ConvCode code = conv_code_k3();
    const auto data = random_bits(30, 17);
    const auto coded = conv_encode(data, code, true);
    for (std::size_t a = 0; a + 12 < coded.size(); a += 7) {
        auto corrupted = coded;
        corrupted[a] ^= 1;
        corrupted[a + 12] ^= 1;
        CHECK(viterbi_hard(corrupted, code, true) == data);
    }
}

TEST_CASE("soft decoding with constant-magnitude llrs equals hard decoding") {
    const ConvCode code = conv_code_k3();
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> bit(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto data = random_bits(32, 1000 + trial);
        auto coded = conv_encode(data, code, true);
        // flip a couple of positions
        for (int f = 0; f < 3; ++f) coded[(trial * 7 + f * 13) % coded.size()] ^= 1;
        std::vector<double> llrs(coded.size());
        for (std::size_t i = 0; i < coded.size(); ++i) llrs[i] = coded[i] ? -2.5 : 2.5;
        CHECK(viterbi_soft(llrs, code, true) == viterbi_hard(coded, code, true));
    }
}

TEST_CASE("soft decoding uses reliability") {
    // one confident wrong bit loses against several mildly confident ones
    const ConvCode code = conv_code_k3();
    const std::vector<std::uint8_t> data = {1, 0, 1, 1, 0, 0, 1, 0};
    const auto coded = conv_encode(data, code, true);
    std::vector<double> llrs(coded.size());
    for (std::size_t i = 0; i < coded.size(); ++i) llrs[i] = coded[i] ? -1.0 : 1.0;
    llrs[4] = -llrs[4] * 3.0;  // strong but wrong
    CHECK(viterbi_soft(llrs, code, true) == data);
}

TEST_CASE("decoder input validation") {
    const ConvCode code = conv_code_k3();
    CHECK_THROWS_AS(viterbi_hard(std::vector<std::uint8_t>{1, 0, 1}, code, true),
                    std::invalid_argument);
    CHECK_THROWS_AS(viterbi_hard(std::vector<std::uint8_t>{1, 0}, code, true),
                    std::invalid_argument);
    CHECK_THROWS_AS(viterbi_soft(std::vector<double>{0.5}, code, false), std::invalid_argument);
    CHECK_THROWS_AS(conv_encode(std::vector<std::uint8_t>{2}, code, true), std::invalid_argument);
}

TEST_CASE("unterminated decoding works on truncated streams") {
    const ConvCode code = conv_code_k7();
    const auto data = random_bits(64, 5);
    const auto coded = conv_encode(data, code, false);
    const auto decoded = viterbi_hard(coded, code, false);
    REQUIRE(decoded.size() == data.size());
    // the head must match; the tail lacks termination protection
    for (std::size_t i = 0; i + 8 < data.size(); ++i) CHECK(decoded[i] == data[i]);
}
