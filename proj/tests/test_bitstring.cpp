#include "speckle/bitstring.hpp"

#include "doctest.h"
#include "speckle/rng.hpp"

using speckle::BitString;
using speckle::Philox;

TEST_CASE("bit order is MSB-first within bytes") {
    const BitString b = BitString::from_ascii("10110000");
    REQUIRE(b.size() == 8);
    CHECK(b.bytes()[0] == 0xB0);
    CHECK(b.get(0));
    CHECK_FALSE(b.get(1));
    CHECK(b.get(2));
    CHECK(b.get(3));
}

TEST_CASE("push_back keeps trailing pad bits zero") {
    BitString b;
    b.push_back(true);
    b.push_back(true);
    b.push_back(false);
    b.push_back(true);
    CHECK(b.size() == 4);
    CHECK(b.bytes()[0] == 0xD0);  // 1101 0000
    CHECK(b.to_ascii() == "1101");
}

TEST_CASE("ascii round trip") {
    const std::string s = "0100110101101001011101";
    CHECK(BitString::from_ascii(s).to_ascii() == s);
    CHECK_THROWS_AS(BitString::from_ascii("01x"), speckle::InvalidArgument);
}

TEST_CASE("from_bytes wraps whole bytes") {
    const BitString b = BitString::from_bytes({0x80, 0x01});
    CHECK(b.size() == 16);
    CHECK(b.get(0));
    CHECK(b.get(15));
    CHECK(b.count_ones() == 2);
}

TEST_CASE("hamming_raw matches per-bit count on random strings") {
    for (int trial = 0; trial < 20; ++trial) {
        const size_t nbits = 64 + static_cast<size_t>(trial) * 37;  // exercise odd lengths
        BitString a(nbits), b(nbits);
        for (size_t i = 0; i < nbits; ++i) {
            a.set(i, Philox::uniform01(1, 5, trial * 10000 + i) < 0.5);
            b.set(i, Philox::uniform01(2, 5, trial * 10000 + i) < 0.5);
        }
        size_t expected = 0;
        for (size_t i = 0; i < nbits; ++i) expected += a.get(i) != b.get(i);
        CHECK(a.hamming_raw(b) == expected);
    }
}
