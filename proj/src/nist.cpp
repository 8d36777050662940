#include "speckle/nist.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>

#include "speckle/stats_math.hpp"

namespace speckle::nist {
namespace {

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

void require_bits(BitView bits, size_t minimum, const char* test) {
    if (bits.size() < minimum)
        throw InsufficientData(std::string(test) + ": sequence shorter than minimum of " +
                                   std::to_string(minimum) + " bits",
                               static_cast<long long>(minimum));
}

}  // namespace

size_t BitView::count_ones() const {
    size_t ones = 0;
    size_t i = 0;
    // Byte fast path once aligned.
    while (i < nbits_ && ((offset_ + i) & 7) != 0) ones += get(i++);
    const size_t whole_bytes = (nbits_ - i) / 8;
    const uint8_t* p = bytes_ + ((offset_ + i) >> 3);
    for (size_t b = 0; b < whole_bytes; ++b) ones += std::popcount(p[b]);
    i += whole_bytes * 8;
    while (i < nbits_) ones += get(i++);
    return ones;
}

std::vector<double> frequency(BitView bits) {
    require_bits(bits, 2, "frequency");
    const double n = static_cast<double>(bits.size());
    const double ones = static_cast<double>(bits.count_ones());
    const double s_obs = std::fabs(2.0 * ones - n) / std::sqrt(n);
    return {std::erfc(s_obs / std::sqrt(2.0))};
}

std::vector<double> block_frequency(BitView bits, int block_len) {
    if (block_len < 2) throw InvalidArgument("block_frequency: block length must be >= 2");
    require_bits(bits, static_cast<size_t>(block_len), "block_frequency");
    const size_t nblocks = bits.size() / static_cast<size_t>(block_len);
    CompensatedSum chi2;
    for (size_t b = 0; b < nblocks; ++b) {
        const auto block = bits.subview(b * static_cast<size_t>(block_len),
                                        static_cast<size_t>(block_len));
        const double pi = static_cast<double>(block.count_ones()) / block_len;
        chi2.add((pi - 0.5) * (pi - 0.5));
    }
    const double stat = 4.0 * block_len * chi2.value();
    return {igamc(static_cast<double>(nblocks) / 2.0, stat / 2.0)};
}

std::vector<double> runs(BitView bits) {
    require_bits(bits, 2, "runs");
    const size_t n = bits.size();
    const double pi = static_cast<double>(bits.count_ones()) / static_cast<double>(n);
    if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(static_cast<double>(n))) return {0.0};
    size_t v = 1;
    bool prev = bits.get(0);
    for (size_t i = 1; i < n; ++i) {
        const bool cur = bits.get(i);
        v += cur != prev;
        prev = cur;
    }
    const double num = std::fabs(static_cast<double>(v) - 2.0 * n * pi * (1.0 - pi));
    const double den = 2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi);
    return {std::erfc(num / den)};
}

std::vector<double> longest_run_of_ones(BitView bits) {
    require_bits(bits, 128, "longest_run_of_ones");
    const size_t n = bits.size();
    int block_len, categories;
    const double* pi;
    int offset;  // longest run mapped to category index 0 at this value
    // Tabulated class probabilities for the three SP800-22 regimes.
    static const double pi8[4] = {55.0 / 256, 94.0 / 256, 59.0 / 256, 48.0 / 256};
    static const double pi128[6] = {0.1174035788, 0.242955959, 0.249363483,
                                    0.17517706,   0.102701071, 0.112398847};
    static const double pi10k[7] = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
    if (n < 6272) {
        block_len = 8;
        categories = 4;
        pi = pi8;
        offset = 1;
    } else if (n < 750000) {
        block_len = 128;
        categories = 6;
        pi = pi128;
        offset = 4;
    } else {
        block_len = 10000;
        categories = 7;
        pi = pi10k;
        offset = 10;
    }
    const size_t nblocks = n / static_cast<size_t>(block_len);
    std::vector<uint64_t> nu(static_cast<size_t>(categories), 0);
    for (size_t b = 0; b < nblocks; ++b) {
        int longest = 0, run = 0;
        const size_t start = b * static_cast<size_t>(block_len);
        for (int i = 0; i < block_len; ++i) {
            run = bits.get(start + static_cast<size_t>(i)) ? run + 1 : 0;
            longest = std::max(longest, run);
        }
        const int cat = std::clamp(longest - offset, 0, categories - 1);
        ++nu[static_cast<size_t>(cat)];
    }
    double chi2 = 0.0;
    for (int k = 0; k < categories; ++k) {
        const double expected = static_cast<double>(nblocks) * pi[k];
        const double d = static_cast<double>(nu[static_cast<size_t>(k)]) - expected;
        chi2 += d * d / expected;
    }
    return {igamc((categories - 1) / 2.0, chi2 / 2.0)};
}

namespace {

double cusum_pvalue(size_t n, long long z) {
    const double zn = static_cast<double>(z) / std::sqrt(static_cast<double>(n));
    const double nz = static_cast<double>(n) / static_cast<double>(z);
    double sum1 = 0.0;
    const long long k1_lo = static_cast<long long>(std::ceil((-nz + 1.0) / 4.0));
    const long long k1_hi = static_cast<long long>(std::floor((nz - 1.0) / 4.0));
    for (long long k = k1_lo; k <= k1_hi; ++k)
        sum1 += normal_cdf((4.0 * k + 1.0) * zn) - normal_cdf((4.0 * k - 1.0) * zn);
    double sum2 = 0.0;
    const long long k2_lo = static_cast<long long>(std::ceil((-nz - 3.0) / 4.0));
    for (long long k = k2_lo; k <= k1_hi; ++k)
        sum2 += normal_cdf((4.0 * k + 3.0) * zn) - normal_cdf((4.0 * k + 1.0) * zn);
    return 1.0 - sum1 + sum2;
}

}  // namespace

std::vector<double> cumulative_sums(BitView bits) {
    require_bits(bits, 2, "cumulative_sums");
    const size_t n = bits.size();
    long long s = 0, max_fwd = 0;
    for (size_t i = 0; i < n; ++i) {
        s += bits.get(i) ? 1 : -1;
        max_fwd = std::max(max_fwd, std::llabs(s));
    }
    // Reverse mode walks the sequence backwards; the suffix sums are the
    // partial sums of the reversed sequence.
    long long max_rev = 0;
    s = 0;
    for (size_t i = n; i-- > 0;) {
        s += bits.get(i) ? 1 : -1;
        max_rev = std::max(max_rev, std::llabs(s));
    }
    return {cusum_pvalue(n, max_fwd), cusum_pvalue(n, max_rev)};
}

std::vector<double> dft(BitView bits) {
    require_bits(bits, 10, "dft");
    const size_t n = bits.size();
    double* in = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    fftw_complex* out =
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    if (!in || !out) throw InternalError("dft: fftw_malloc failed");
    for (size_t i = 0; i < n; ++i) in[i] = bits.get(i) ? 1.0 : -1.0;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    if (!plan) {
        fftw_free(in);
        fftw_free(out);
        throw InternalError("dft: fftw plan creation failed");
    }
    fftw_execute(plan);
    const double threshold = std::sqrt(std::log(1.0 / 0.05) * static_cast<double>(n));
    size_t below = 0;
    for (size_t i = 0; i < n / 2; ++i) {
        const double mod = std::hypot(out[i][0], out[i][1]);
        below += mod < threshold;
    }
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    const double n0 = 0.95 * static_cast<double>(n) / 2.0;
    const double d = (static_cast<double>(below) - n0) /
                     std::sqrt(static_cast<double>(n) * 0.95 * 0.05 / 4.0);
    return {std::erfc(std::fabs(d) / std::sqrt(2.0))};
}

namespace {

// Sum of squared cyclic m-window counts, as used by serial / approximate
// entropy. Counts land in `counts` (caller-sized to 1 << m).
void window_counts(BitView bits, int m, std::vector<uint32_t>& counts) {
    std::fill(counts.begin(), counts.end(), 0u);
    const size_t n = bits.size();
    const uint64_t mask = (m >= 64) ? ~0ull : ((1ull << m) - 1);
    uint64_t word = 0;
    for (int i = 0; i < m - 1; ++i) word = (word << 1) | bits.get(static_cast<size_t>(i));
    for (size_t i = static_cast<size_t>(m) - 1; i < n + static_cast<size_t>(m) - 1; ++i) {
        const bool bit = bits.get(i < n ? i : i - n);
        word = ((word << 1) | bit) & mask;
        ++counts[word];
    }
}

double psi_sq(BitView bits, int m, std::vector<uint32_t>& scratch) {
    if (m <= 0) return 0.0;
    scratch.resize(1ull << m);
    window_counts(bits, m, scratch);
    const double n = static_cast<double>(bits.size());
    double sum = 0.0;
    for (uint32_t c : scratch) sum += static_cast<double>(c) * c;
    return std::ldexp(1.0, m) / n * sum - n;
}

}  // namespace

std::vector<double> serial(BitView bits, int m) {
    if (m < 3 || m > 24) throw InvalidArgument("serial: m must be in [3, 24]");
    require_bits(bits, 1ull << m, "serial");
    std::vector<uint32_t> scratch;
    const double p_m = psi_sq(bits, m, scratch);
    const double p_m1 = psi_sq(bits, m - 1, scratch);
    const double p_m2 = psi_sq(bits, m - 2, scratch);
    const double d1 = p_m - p_m1;
    const double d2 = p_m - 2.0 * p_m1 + p_m2;
    return {igamc(std::ldexp(1.0, m - 2), d1 / 2.0), igamc(std::ldexp(1.0, m - 3), d2 / 2.0)};
}

std::vector<double> approximate_entropy(BitView bits, int m) {
    if (m < 1 || m > 24) throw InvalidArgument("approximate_entropy: m must be in [1, 24]");
    require_bits(bits, 1ull << m, "approximate_entropy");
    const double n = static_cast<double>(bits.size());
    std::vector<uint32_t> scratch;
    const auto phi = [&](int mm) {
        scratch.resize(1ull << mm);
        window_counts(bits, mm, scratch);
        double sum = 0.0;
        for (uint32_t c : scratch)
            if (c) {
                const double p = static_cast<double>(c) / n;
                sum += p * std::log(p);
            }
        return sum;
    };
    const double apen = phi(m) - phi(m + 1);
    const double chi2 = 2.0 * n * (std::log(2.0) - apen);
    return {igamc(std::ldexp(1.0, m - 1), chi2 / 2.0)};
}

const std::vector<std::string>& test_names() {
    static const std::vector<std::string> names = {
        "frequency", "block_frequency", "runs",   "longest_run",
        "cusum",     "dft",             "serial", "approximate_entropy"};
    return names;
}

std::vector<std::string> stream_names(const std::string& test) {
    if (test == "cusum") return {"cusum_forward", "cusum_reverse"};
    if (test == "serial") return {"serial_1", "serial_2"};
    return {test};
}

std::vector<double> run_test(const std::string& name, BitView bits, const TestParams& params) {
    if (name == "frequency") return frequency(bits);
    if (name == "block_frequency") return block_frequency(bits, params.block_frequency_m);
    if (name == "runs") return runs(bits);
    if (name == "longest_run") return longest_run_of_ones(bits);
    if (name == "cusum") return cumulative_sums(bits);
    if (name == "dft") return dft(bits);
    if (name == "serial") return serial(bits, params.serial_m);
    if (name == "approximate_entropy") return approximate_entropy(bits, params.apen_m);
    throw InvalidArgument("unknown statistical test '" + name + "'");
}

}  // namespace speckle::nist
