#include "speckle/stats_math.hpp"

#include <algorithm>

#include "speckle/common.hpp"

namespace speckle {
namespace {

constexpr double kMachEps = 1.11022302462515654042e-16;
constexpr double kBig = 4.503599627370496e15;
constexpr double kBigInv = 2.22044604925031308085e-16;
constexpr double kMaxLog = 709.0;

}  // namespace

double igam(double a, double x) {
    if (x <= 0.0 || a <= 0.0) return 0.0;
    if (x > 1.0 && x > a) return 1.0 - igamc(a, x);

    double ax = a * std::log(x) - x - std::lgamma(a);
    if (ax < -kMaxLog) return 0.0;
    ax = std::exp(ax);

    // power series
    double r = a;
    double c = 1.0;
    double ans = 1.0;
    do {
        r += 1.0;
        c *= x / r;
        ans += c;
    } while (c / ans > kMachEps);
    return ans * ax / a;
}

double igamc(double a, double x) {
    if (x <= 0.0 || a <= 0.0) return 1.0;
    if (x < 1.0 || x < a) return 1.0 - igam(a, x);

    double ax = a * std::log(x) - x - std::lgamma(a);
    if (ax < -kMaxLog) return 0.0;
    ax = std::exp(ax);

    // continued fraction
    double y = 1.0 - a;
    double z = x + y + 1.0;
    double c = 0.0;
    double pkm2 = 1.0, qkm2 = x;
    double pkm1 = x + 1.0, qkm1 = z * x;
    double ans = pkm1 / qkm1;
    double t;
    do {
        c += 1.0;
        y += 1.0;
        z += 2.0;
        const double yc = y * c;
        const double pk = pkm1 * z - pkm2 * yc;
        const double qk = qkm1 * z - qkm2 * yc;
        if (qk != 0.0) {
            const double r = pk / qk;
            t = std::fabs((ans - r) / r);
            ans = r;
        } else {
            t = 1.0;
        }
        pkm2 = pkm1;
        pkm1 = pk;
        qkm2 = qkm1;
        qkm1 = qk;
        if (std::fabs(pk) > kBig) {
            pkm2 *= kBigInv;
            pkm1 *= kBigInv;
            qkm2 *= kBigInv;
            qkm1 *= kBigInv;
        }
    } while (t > kMachEps);
    return ans * ax;
}

double chi_square_uniform_pvalue(std::span<const uint64_t> counts) {
    if (counts.empty()) throw InvalidArgument("chi-square: no bins");
    uint64_t total = 0;
    for (uint64_t c : counts) total += c;
    if (total == 0) throw InvalidArgument("chi-square: empty histogram");
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    CompensatedSum chi2;
    for (uint64_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        chi2.add(d * d / expected);
    }
    return chi_square_pvalue(chi2.value(), static_cast<double>(counts.size() - 1));
}

namespace {

template <typename T>
std::optional<double> pearson_impl(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size()) throw InvalidArgument("pearson: length mismatch");
    if (a.size() < 2) throw InvalidArgument("pearson: need at least 2 samples");
    const double n = static_cast<double>(a.size());
    CompensatedSum sa, sb;
    for (size_t i = 0; i < a.size(); ++i) {
        sa.add(static_cast<double>(a[i]));
        sb.add(static_cast<double>(b[i]));
    }
    const double ma = sa.value() / n;
    const double mb = sb.value() / n;
    CompensatedSum sab, saa, sbb;
    for (size_t i = 0; i < a.size(); ++i) {
        const double da = static_cast<double>(a[i]) - ma;
        const double db = static_cast<double>(b[i]) - mb;
        sab.add(da * db);
        saa.add(da * da);
        sbb.add(db * db);
    }
    if (saa.value() <= 0.0 || sbb.value() <= 0.0) return std::nullopt;
    return sab.value() / std::sqrt(saa.value() * sbb.value());
}

}  // namespace

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    return pearson_impl(a, b);
}

std::optional<double> pearson_bytes(std::span<const uint8_t> a, std::span<const uint8_t> b) {
    return pearson_impl(a, b);
}

GaussianFit fit_gaussian(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw InvalidArgument("gaussian fit: need >= 3 matching samples");
    const size_t n = x.size();

    // Moment-based initial guess.
    double a0 = 0.0, wsum = 0.0, csum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        a0 = std::max(a0, y[i]);
        const double w = std::max(y[i], 0.0);
        wsum += w;
        csum += w * x[i];
    }
    if (a0 <= 0.0 || wsum <= 0.0) return {};
    double c0 = csum / wsum;
    double v0 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double w = std::max(y[i], 0.0);
        v0 += w * (x[i] - c0) * (x[i] - c0);
    }
    double w0 = std::sqrt(std::max(v0 / wsum, 1e-30));

    double A = a0, c = c0, w = w0;
    double lambda = 1e-3;
    auto sse = [&](double pa, double pc, double pw) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double d = x[i] - pc;
            const double r = pa * std::exp(-d * d / (2.0 * pw * pw)) - y[i];
            s += r * r;
        }
        return s;
    };
    double err = sse(A, c, w);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        // Normal equations J^T J (3x3) and J^T r.
        double jtj[3][3] = {};
        double jtr[3] = {};
        for (size_t i = 0; i < n; ++i) {
            const double d = x[i] - c;
            const double g = std::exp(-d * d / (2.0 * w * w));
            const double f = A * g;
            const double r = f - y[i];
            const double j[3] = {g, f * d / (w * w), f * d * d / (w * w * w)};
            for (int p = 0; p < 3; ++p) {
                jtr[p] += j[p] * r;
                for (int q = 0; q < 3; ++q) jtj[p][q] += j[p] * j[q];
            }
        }
        for (int p = 0; p < 3; ++p) jtj[p][p] *= 1.0 + lambda;
        // Solve 3x3 by Gaussian elimination with partial pivoting.
        double m[3][4];
        for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) m[p][q] = jtj[p][q];
            m[p][3] = -jtr[p];
        }
        bool singular = false;
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int row = col + 1; row < 3; ++row)
                if (std::fabs(m[row][col]) > std::fabs(m[piv][col])) piv = row;
            if (std::fabs(m[piv][col]) < 1e-30) {
                singular = true;
                break;
            }
            std::swap(m[piv], m[col]);
            for (int row = col + 1; row < 3; ++row) {
                const double f = m[row][col] / m[col][col];
                for (int q = col; q < 4; ++q) m[row][q] -= f * m[col][q];
            }
        }
        if (singular) break;
        double step[3];
        for (int row = 2; row >= 0; --row) {
            double s = m[row][3];
            for (int q = row + 1; q < 3; ++q) s -= m[row][q] * step[q];
            step[row] = s / m[row][row];
        }
        const double An = A + step[0], cn = c + step[1], wn = w + step[2];
        const double errn = (wn > 0.0 && An > 0.0) ? sse(An, cn, wn) : err + 1.0;
        if (errn < err) {
            const double rel = (err - errn) / std::max(err, 1e-30);
            A = An;
            c = cn;
            w = wn;
            err = errn;
            lambda = std::max(lambda * 0.5, 1e-12);
            if (rel < 1e-12) {
                converged = true;
                break;
            }
        } else {
            lambda *= 4.0;
            if (lambda > 1e10) break;
        }
    }

    double ymean = 0.0;
    for (size_t i = 0; i < n; ++i) ymean += y[i];
    ymean /= static_cast<double>(n);
    double sstot = 0.0;
    for (size_t i = 0; i < n; ++i) sstot += (y[i] - ymean) * (y[i] - ymean);

    GaussianFit fit;
    fit.amplitude = A;
    fit.center = c;
    fit.width = std::fabs(w);
    fit.r_squared = sstot > 0.0 ? 1.0 - err / sstot : 0.0;
    fit.converged = converged;
    return fit;
}

double ks_uniform_distance(std::vector<double> sample) {
    if (sample.empty()) throw InvalidArgument("ks: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double dmax = 0.0;
    for (size_t i = 0; i < sample.size(); ++i) {
        const double v = std::clamp(sample[i], 0.0, 1.0);
        dmax = std::max(dmax, std::fabs((static_cast<double>(i + 1)) / n - v));
        dmax = std::max(dmax, std::fabs(v - static_cast<double>(i) / n));
    }
    return dmax;
}

}  // namespace speckle
