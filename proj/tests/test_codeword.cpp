#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "delchan/codeword.hpp"
#include "delchan/errors.hpp"

using namespace delchan;

namespace {

Codeword binary_word(std::string s) { return Codeword{Alphabet::binary(), std::move(s)}; }

}  // namespace

TEST_CASE("alphabet validation") {
    CHECK_THROWS_AS(Alphabet{"0"}.validate(), BadAlphabet);
    CHECK_THROWS_AS(Alphabet{"001"}.validate(), BadAlphabet);
    CHECK_THROWS_AS((Alphabet{"01", 5}).validate(), BadAlphabet);
    Alphabet quad{"abcd"};
    quad.validate();
    CHECK(quad.zero() == 'a');
    CHECK(quad.index_of('c') == 2);
    CHECK_THROWS_AS(quad.index_of('z'), BadMessage);
}

TEST_CASE("chunk slices 1-based") {
    CHECK(chunk(binary_word("0011"), 2, 1).symbols == "00");
    CHECK(chunk(binary_word("0011"), 2, 2).symbols == "11");
    CHECK(chunk(binary_word("0101"), 4, 1).symbols == "0101");
    CHECK_THROWS_AS(chunk(binary_word("0101"), 3, 1), NonDividing);
    CHECK_THROWS_AS(chunk(binary_word("0101"), 2, 3), OutOfRange);
    CHECK_THROWS_AS(chunk(binary_word("0101"), 2, 0), OutOfRange);
}

TEST_CASE("chunks reassemble the string") {
    std::string s = "01101001110b";
    Codeword word{Alphabet{"01b"}, s};
    for (std::size_t nu : {1, 2, 3, 4, 6, 12}) {
        std::string glued;
        for (std::size_t i = 1; i <= s.size() / nu; ++i)
            glued += chunk(word, nu, i).symbols;
        CHECK(glued == s);
    }
}

TEST_CASE("pad_to_power") {
    CHECK(pad_to_power(binary_word("101"), 2).symbols == "1010");
    CHECK(pad_to_power(binary_word("0011"), 2).symbols == "0011");
    CHECK(pad_to_power(binary_word("01"), 4).symbols == "0100");
    // idempotent, never shortens
    for (std::size_t kappa : {2, 3, 4}) {
        Codeword word = binary_word("1011001");
        Codeword once = pad_to_power(word, kappa);
        CHECK(once.length() >= word.length());
        CHECK(pad_to_power(once, kappa).symbols == once.symbols);
    }
}

TEST_CASE("identity and repetition encoders") {
    Code identity{CodeKind::identity, 2, Alphabet::binary()};
    CHECK(encode(identity, "10").symbols == "10");
    Code rep{CodeKind::repetition, 2, Alphabet::binary(), 3};
    CHECK(encode(rep, "01").symbols == "000111");
    CHECK_THROWS_AS(encode(rep, "0"), BadMessage);
    CHECK_THROWS_AS(encode(rep, "0x"), BadMessage);
}

TEST_CASE("hadamard positions ordered by lexicographic y") {
    Code had{CodeKind::hadamard, 2, Alphabet::binary()};
    // oracle: enumerate <x,y> mod 2 over y in {00,01,10,11}
    auto inner = [](unsigned x, unsigned y) {
        unsigned acc = 0;
        for (int b = 0; b < 2; ++b) acc ^= ((x >> b) & 1u) & ((y >> b) & 1u);
        return acc;
    };
    std::string expected;
    for (unsigned y = 0; y < 4; ++y) expected.push_back(inner(3, y) ? '1' : '0');
    CHECK(expected == "0110");
    CHECK(encode(had, "11").symbols == "0110");

    Code had6{CodeKind::hadamard, 6, Alphabet::binary()};
    Codeword word = encode(had6, "101101");
    CHECK(word.length() == 64);
    // position of y = 0 always reads 0
    CHECK(word.symbols[0] == '0');
}

TEST_CASE("encode is a function of the message") {
    Code rnd{CodeKind::random_uniform, 4, Alphabet::binary(), 1, 32, 99};
    CHECK(encode(rnd, "0110").symbols == encode(rnd, "0110").symbols);
    CHECK(encode(rnd, "0110").length() == 32);
    Code rnd2 = rnd;
    rnd2.seed = 100;
    CHECK(encode(rnd, "0110").symbols != encode(rnd2, "0110").symbols);
}

TEST_CASE("message samples") {
    Code identity{CodeKind::identity, 3, Alphabet::binary()};
    MessageSample all = message_sample(identity, 100, 1);
    CHECK(all.exhaustive);
    CHECK(all.messages.size() == 8);
    CHECK(all.messages.front() == "000");
    CHECK(all.messages.back() == "111");

    Code wide{CodeKind::random_uniform, 40, Alphabet::binary(), 1, 64, 5};
    MessageSample sampled = message_sample(wide, 16, 1);
    CHECK(!sampled.exhaustive);
    CHECK(sampled.messages.size() == 16);
}
