#include "speckle/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

#include "speckle/parallel.hpp"
#include "speckle/stats_math.hpp"

namespace speckle {

NormalizedImage normalize_image(const SpeckleImage& img) {
    NormalizedImage out;
    out.dims = img.dims();
    out.values.resize(img.pixels());
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = img.data()[i] / 255.0;
    return out;
}

double euclidean_distance(const NormalizedImage& a, const NormalizedImage& b) {
    if (a.dims != b.dims)
        throw InvalidArgument("euclidean: image dims differ (" + to_string(a.dims) + " vs " +
                              to_string(b.dims) + ")");
    double sum = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

int GaborParams::kernel_radius() const {
    return static_cast<int>(std::ceil(3.0 * sigma));
}

Dims GaborParams::grid_for(Dims image) const {
    if (wavelength <= 0.0 || sigma <= 0.0 || stride < 1)
        throw InvalidArgument("gabor: wavelength, sigma and stride must be positive");
    const int size = 2 * kernel_radius() + 1;
    if (image.width < size || image.height < size)
        throw InvalidArgument("gabor: image " + to_string(image) + " smaller than kernel support " +
                              std::to_string(size) + "x" + std::to_string(size));
    return {(image.width - size) / stride + 1, (image.height - size) / stride + 1};
}

namespace {

// Complex Gabor kernel with the (complex) mean removed, so the response to a
// constant image is exactly zero and complementing an image negates the
// response.
std::vector<std::complex<double>> build_kernel(const GaborParams& p) {
    const int r = p.kernel_radius();
    const int size = 2 * r + 1;
    const double theta = p.theta_deg * std::numbers::pi / 180.0;
    const double ct = std::cos(theta), st = std::sin(theta);
    std::vector<std::complex<double>> k(static_cast<size_t>(size) * size);
    std::complex<double> sum{0.0, 0.0};
    for (int y = -r; y <= r; ++y) {
        for (int x = -r; x <= r; ++x) {
            const double xr = x * ct + y * st;
            const double yr = -x * st + y * ct;
            const double envelope = std::exp(-(xr * xr + yr * yr) / (2.0 * p.sigma * p.sigma));
            const double carrier = 2.0 * std::numbers::pi * xr / p.wavelength;
            const std::complex<double> v = std::polar(envelope, carrier);
            k[static_cast<size_t>(y + r) * size + (x + r)] = v;
            sum += v;
        }
    }
    const std::complex<double> mean = sum / static_cast<double>(k.size());
    for (auto& v : k) v -= mean;
    return k;
}

}  // namespace

BitString gabor_hash(const SpeckleImage& img, const GaborParams& params) {
    const Dims grid = params.grid_for(img.dims());
    const int r = params.kernel_radius();
    const int size = 2 * r + 1;
    const auto kernel = build_kernel(params);

    BitString bits;
    for (int gy = 0; gy < grid.height; ++gy) {
        for (int gx = 0; gx < grid.width; ++gx) {
            const int x0 = gx * params.stride;
            const int y0 = gy * params.stride;
            double re = 0.0;
            for (int ky = 0; ky < size; ++ky) {
                const uint8_t* row = img.data().data() +
                                     static_cast<size_t>(y0 + ky) * img.width() + x0;
                const std::complex<double>* krow = kernel.data() + static_cast<size_t>(ky) * size;
                for (int kx = 0; kx < size; ++kx)
                    re += krow[kx].real() * (row[kx] / 255.0);
            }
            bits.push_back(re > 0.0);
        }
    }
    return bits;
}

double hamming_distance(const BitString& a, const BitString& b) {
    if (a.size() == 0 || b.size() == 0)
        throw InvalidArgument("hamming: zero-length bitstring");
    if (a.size() != b.size()) throw InvalidArgument("hamming: lengths differ");
    return static_cast<double>(a.hamming_raw(b)) / static_cast<double>(a.size());
}

Histogram make_histogram(std::span<const double> values, int bins) {
    if (values.empty()) throw InvalidArgument("histogram: no values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();

    int nbins = bins;
    if (nbins <= 0) {
        // Freedman-Diaconis; falls back to a single bin for degenerate data.
        const double n = static_cast<double>(sorted.size());
        const auto quantile = [&](double q) {
            const double pos = q * (n - 1.0);
            const size_t i = static_cast<size_t>(pos);
            const double frac = pos - static_cast<double>(i);
            return i + 1 < sorted.size() ? sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
                                         : sorted[i];
        };
        const double iqr = quantile(0.75) - quantile(0.25);
        const double width = 2.0 * iqr / std::cbrt(n);
        nbins = (width > 0.0 && hi > lo)
                    ? static_cast<int>(std::clamp(std::ceil((hi - lo) / width), 1.0, 4096.0))
                    : 1;
    }

    Histogram h;
    h.counts.assign(static_cast<size_t>(nbins), 0);
    h.edges.resize(static_cast<size_t>(nbins) + 1);
    const double span_width = hi > lo ? hi - lo : 1.0;
    for (int i = 0; i <= nbins; ++i)
        h.edges[static_cast<size_t>(i)] = lo + span_width * i / nbins;
    for (double v : sorted) {
        int idx = static_cast<int>((v - lo) / span_width * nbins);
        idx = std::clamp(idx, 0, nbins - 1);
        ++h.counts[static_cast<size_t>(idx)];
    }
    return h;
}

void write_histogram_csv(const Histogram& h, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open histogram CSV for writing");
    out << "bin_start,bin_end,count\n";
    out.precision(12);
    for (size_t i = 0; i < h.counts.size(); ++i)
        out << h.edges[i] << "," << h.edges[i + 1] << "," << h.counts[i] << "\n";
    if (!out) throw IoError(path.string(), "failed writing histogram CSV");
}

DatasetStats stats_from_values(const std::vector<double>& values, size_t n_items, int bins) {
    DatasetStats s;
    s.n_items = n_items;
    s.n_pairs = values.size();
    if (values.empty()) return s;
    CompensatedSum sum;
    for (double v : values) sum.add(v);
    s.mean = sum.value() / static_cast<double>(values.size());
    CompensatedSum var;
    for (double v : values) var.add((v - s.mean) * (v - s.mean));
    s.stddev = std::sqrt(var.value() / static_cast<double>(values.size()));
    s.cv = s.mean != 0.0 ? s.stddev / s.mean : 0.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    s.histogram = make_histogram(values, bins);
    return s;
}

namespace {

// (i, j) for the p-th unordered pair in lexicographic order.
std::pair<size_t, size_t> pair_at(size_t p, size_t n) {
    // Row i starts at offset i*n - i*(i+1)/2 - i ... solve incrementally-free:
    // use the quadratic formula on the triangular layout.
    const double nd = static_cast<double>(n);
    size_t i = static_cast<size_t>(
        std::floor(nd - 0.5 - std::sqrt((nd - 0.5) * (nd - 0.5) - 2.0 * static_cast<double>(p))));
    auto row_start = [n](size_t r) { return r * (2 * n - r - 1) / 2; };
    while (i + 1 < n && row_start(i + 1) <= p) ++i;
    while (i > 0 && row_start(i) > p) --i;
    const size_t j = i + 1 + (p - row_start(i));
    return {i, j};
}

}  // namespace

DatasetStats pairwise_euclidean_stats(std::span<const NormalizedImage> items, int threads,
                                      int bins) {
    if (items.size() < 2) throw InvalidArgument("pairwise stats: need at least 2 items");
    const size_t n = items.size();
    const size_t n_pairs = n * (n - 1) / 2;
    std::vector<double> values(n_pairs);
    parallel_for(n_pairs, threads, [&](size_t p) {
        const auto [i, j] = pair_at(p, n);
        values[p] = euclidean_distance(items[i], items[j]);
    });
    return stats_from_values(values, n, bins);
}

DatasetStats pairwise_hamming_stats(std::span<const BitString> items, int threads) {
    if (items.size() < 2) throw InvalidArgument("pairwise stats: need at least 2 items");
    const size_t len = items[0].size();
    if (len == 0) throw InvalidArgument("pairwise stats: zero-length fingerprints");
    for (const auto& b : items)
        if (b.size() != len) throw InvalidArgument("pairwise stats: fingerprint lengths differ");

    // Exact path: integer distance histogram, merged in index order.
    const size_t n = items.size();
    const size_t n_pairs = n * (n - 1) / 2;
    const int nthreads = resolve_threads(threads);
    std::vector<std::vector<uint64_t>> local(static_cast<size_t>(nthreads),
                                             std::vector<uint64_t>(len + 1, 0));
    parallel_for(static_cast<size_t>(nthreads), nthreads, [&](size_t t) {
        const size_t begin = n_pairs * t / static_cast<size_t>(nthreads);
        const size_t end = n_pairs * (t + 1) / static_cast<size_t>(nthreads);
        auto& counts = local[t];
        for (size_t p = begin; p < end; ++p) {
            const auto [i, j] = pair_at(p, n);
            ++counts[items[i].hamming_raw(items[j])];
        }
    });
    std::vector<uint64_t> counts(len + 1, 0);
    for (const auto& l : local)
        for (size_t k = 0; k <= len; ++k) counts[k] += l[k];

    DatasetStats s;
    s.n_items = n;
    s.n_pairs = n_pairs;
    CompensatedSum mean_sum;
    for (size_t k = 0; k <= len; ++k)
        if (counts[k])
            mean_sum.add(static_cast<double>(counts[k]) * (static_cast<double>(k) / len));
    s.mean = mean_sum.value() / static_cast<double>(n_pairs);
    CompensatedSum var_sum;
    for (size_t k = 0; k <= len; ++k)
        if (counts[k]) {
            const double d = static_cast<double>(k) / len - s.mean;
            var_sum.add(static_cast<double>(counts[k]) * d * d);
        }
    s.stddev = std::sqrt(var_sum.value() / static_cast<double>(n_pairs));
    s.cv = s.mean != 0.0 ? s.stddev / s.mean : 0.0;

    // Histogram over the populated integer-distance range.
    size_t klo = 0, khi = len;
    while (klo < khi && counts[klo] == 0) ++klo;
    while (khi > klo && counts[khi] == 0) --khi;
    s.min = static_cast<double>(klo) / len;
    s.max = static_cast<double>(khi) / len;
    s.histogram.edges.resize(khi - klo + 2);
    s.histogram.counts.resize(khi - klo + 1);
    for (size_t k = klo; k <= khi; ++k) {
        s.histogram.edges[k - klo] = (static_cast<double>(k) - 0.5) / len;
        s.histogram.counts[k - klo] = counts[k];
    }
    s.histogram.edges.back() = (static_cast<double>(khi) + 0.5) / len;
    return s;
}

}  // namespace speckle
