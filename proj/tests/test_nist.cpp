#include "speckle/nist.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>

#include "doctest.h"
#include "speckle/rng.hpp"
#include "speckle/stats_math.hpp"

using namespace speckle;
using nist::BitView;

namespace {

BitString bits_of(const std::string& s) { return BitString::from_ascii(s); }

BitString random_bits(uint64_t seed, size_t nbits) {
    std::vector<uint8_t> bytes((nbits + 7) / 8);
    for (size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = static_cast<uint8_t>(Philox::block(seed, streams::kSynthetic, i)[0]);
    BitString b = BitString::from_bytes(std::move(bytes));
    BitString out(nbits);
    for (size_t i = 0; i < nbits; ++i) out.set(i, b.get(i));
    return out;
}

// 128-bit example sequence for the longest-run test.
const char* kLongestRunEps =
    "11001100000101010110110001001100111000000000001001"
    "00110101010001000100111101011010000000110101111100"
    "1100111001101101100010110010";

}  // namespace

// Expected P-values regenerated independently with
// tests/oracle/gen_stat_refs.py; the short-sequence cases match the worked
// examples in the SP800-22 test descriptions.
TEST_CASE("worked examples reproduce reference P-values") {
    const BitString freq_eps = bits_of("1011010101");
    CHECK(nist::frequency(BitView(freq_eps))[0] ==
          doctest::Approx(0.527089257).epsilon(1e-6));

    const BitString bf_eps = bits_of("0110011010");
    CHECK(nist::block_frequency(BitView(bf_eps), 3)[0] ==
          doctest::Approx(0.801251957).epsilon(1e-6));

    const BitString runs_eps = bits_of("1001101011");
    CHECK(nist::runs(BitView(runs_eps))[0] == doctest::Approx(0.147232255).epsilon(1e-6));

    const BitString lr_eps = bits_of(kLongestRunEps);
    REQUIRE(lr_eps.size() == 128);
    CHECK(nist::longest_run_of_ones(BitView(lr_eps))[0] ==
          doctest::Approx(0.180609318).epsilon(1e-6));

    const BitString cs_eps = bits_of("1011010111");
    const auto cs = nist::cumulative_sums(BitView(cs_eps));
    CHECK(cs[0] == doctest::Approx(0.411658619).epsilon(1e-6));
    CHECK(cs[1] == doctest::Approx(0.411658619).epsilon(1e-6));

    const BitString dft_eps = bits_of("1001010011");
    CHECK(nist::dft(BitView(dft_eps))[0] == doctest::Approx(0.468159910).epsilon(1e-6));

    const BitString serial_eps = bits_of("0011011101");
    const auto sp = nist::serial(BitView(serial_eps), 3);
    CHECK(sp[0] == doctest::Approx(0.808792135).epsilon(1e-6));
    CHECK(sp[1] == doctest::Approx(0.670320046).epsilon(1e-6));

    const BitString apen_eps = bits_of("0100110101");
    CHECK(nist::approximate_entropy(BitView(apen_eps), 3)[0] ==
          doctest::Approx(0.261961105).epsilon(1e-6));
}

TEST_CASE("degenerate sequences") {
    BitString all_ones(100);
    for (size_t i = 0; i < 100; ++i) all_ones.set(i, true);
    CHECK(nist::frequency(BitView(all_ones))[0] < 1e-12);

    BitString alternating(100);
    for (size_t i = 0; i < 100; ++i) alternating.set(i, i % 2 == 0);
    CHECK(nist::frequency(BitView(alternating))[0] == doctest::Approx(1.0));
    // Perfect alternation oscillates too fast for the runs test.
    CHECK(nist::runs(BitView(alternating))[0] < 1e-10);
}

TEST_CASE("dft agrees with a direct O(n^2) transform oracle") {
    for (uint64_t seed = 1; seed <= 4; ++seed) {
        const BitString bits = random_bits(seed, 96);
        // Direct DFT of the +-1 sequence.
        const size_t n = bits.size();
        std::vector<double> x(n);
        for (size_t i = 0; i < n; ++i) x[i] = bits.get(i) ? 1.0 : -1.0;
        const double threshold = std::sqrt(std::log(1.0 / 0.05) * static_cast<double>(n));
        size_t below = 0;
        for (size_t j = 0; j < n / 2; ++j) {
            std::complex<double> s{0.0, 0.0};
            for (size_t k = 0; k < n; ++k) {
                const double angle = -2.0 * std::numbers::pi * static_cast<double>(j * k) /
                                     static_cast<double>(n);
                s += x[k] * std::complex<double>(std::cos(angle), std::sin(angle));
            }
            below += std::abs(s) < threshold;
        }
        const double n0 = 0.95 * static_cast<double>(n) / 2.0;
        const double d = (static_cast<double>(below) - n0) /
                         std::sqrt(static_cast<double>(n) * 0.95 * 0.05 / 4.0);
        const double expected = std::erfc(std::fabs(d) / std::sqrt(2.0));
        CHECK(nist::dft(BitView(bits))[0] == doctest::Approx(expected).epsilon(1e-9));
    }
}

namespace {

// Slow map-based reference for psi^2, independent of the rolling-window code.
double psi_sq_reference(const BitString& bits, int m) {
    if (m <= 0) return 0.0;
    const size_t n = bits.size();
    std::map<std::string, uint64_t> counts;
    for (size_t i = 0; i < n; ++i) {
        std::string w;
        for (int k = 0; k < m; ++k) w.push_back(bits.get((i + k) % n) ? '1' : '0');
        ++counts[w];
    }
    double sum = 0.0;
    for (const auto& [w, c] : counts) sum += static_cast<double>(c) * c;
    return std::ldexp(1.0, m) / static_cast<double>(n) * sum - static_cast<double>(n);
}

}  // namespace

TEST_CASE("serial and approximate entropy agree with a map-based oracle") {
    for (uint64_t seed = 10; seed <= 12; ++seed) {
        const BitString bits = random_bits(seed, 512);
        const int m = 5;
        const double pm = psi_sq_reference(bits, m);
        const double pm1 = psi_sq_reference(bits, m - 1);
        const double pm2 = psi_sq_reference(bits, m - 2);
        const auto p = nist::serial(BitView(bits), m);
        CHECK(p[0] == doctest::Approx(igamc(std::ldexp(1.0, m - 2), (pm - pm1) / 2.0))
                          .epsilon(1e-9));
        CHECK(p[1] ==
              doctest::Approx(igamc(std::ldexp(1.0, m - 3), (pm - 2 * pm1 + pm2) / 2.0))
                  .epsilon(1e-9));

        // ApEn via the same reference counting route.
        const auto phi = [&](int mm) {
            std::map<std::string, uint64_t> counts;
            const size_t n = bits.size();
            for (size_t i = 0; i < n; ++i) {
                std::string w;
                for (int k = 0; k < mm; ++k) w.push_back(bits.get((i + k) % n) ? '1' : '0');
                ++counts[w];
            }
            double sum = 0.0;
            for (const auto& [w, c] : counts) {
                const double pr = static_cast<double>(c) / static_cast<double>(n);
                sum += pr * std::log(pr);
            }
            return sum;
        };
        const double chi2 = 2.0 * static_cast<double>(bits.size()) *
                            (std::log(2.0) - (phi(3) - phi(4)));
        CHECK(nist::approximate_entropy(BitView(bits), 3)[0] ==
              doctest::Approx(igamc(4.0, chi2 / 2.0)).epsilon(1e-9));
    }
}

TEST_CASE("insufficient data reports the minimum") {
    const BitString tiny = bits_of("1010");
    try {
        nist::longest_run_of_ones(BitView(tiny));
        FAIL("expected InsufficientData");
    } catch (const InsufficientData& e) {
        CHECK(e.minimum() == 128);
    }
    CHECK_THROWS_AS(nist::serial(BitView(tiny), 5), InsufficientData);
    CHECK_THROWS_AS(nist::run_test("nonsense", BitView(tiny), {}), InvalidArgument);
}

TEST_CASE("run_test dispatch covers all eight tests") {
    const BitString bits = random_bits(3, 8192);
    nist::TestParams params;
    params.block_frequency_m = 128;
    params.serial_m = 5;
    params.apen_m = 4;
    for (const auto& name : nist::test_names()) {
        const auto pvalues = nist::run_test(name, BitView(bits), params);
        CHECK(pvalues.size() == nist::stream_names(name).size());
        for (double p : pvalues) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("counter-rng bits pass every test at 100 kbit") {
    const BitString bits = random_bits(424242, 100000);
    nist::TestParams params;
    params.serial_m = 10;
    params.apen_m = 7;
    for (const auto& name : nist::test_names())
        for (double p : nist::run_test(name, BitView(bits), params)) CHECK(p > 1e-4);
}

TEST_CASE("bitview subview and offsets") {
    const BitString bits = random_bits(5, 200);
    const BitView whole(bits);
    const BitView sub = whole.subview(13, 100);
    for (size_t i = 0; i < 100; ++i) CHECK(sub.get(i) == bits.get(13 + i));
    CHECK(sub.count_ones() ==
          [&] {
              size_t n = 0;
              for (size_t i = 0; i < 100; ++i) n += bits.get(13 + i);
              return n;
          }());
}
