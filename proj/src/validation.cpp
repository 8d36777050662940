#include "speckle/validation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "speckle/parallel.hpp"

namespace speckle {

double degrees_of_freedom(double mu, double sigma) {
    if (!(mu > 0.0 && mu < 1.0))
        throw InvalidArgument("degrees_of_freedom: mu must be in (0, 1)");
    if (!(sigma > 0.0)) throw InvalidArgument("degrees_of_freedom: sigma must be > 0");
    return mu * (1.0 - mu) / (sigma * sigma);
}

std::vector<BitString> split_words(const BitString& bits, size_t word_bits) {
    if (word_bits == 0) throw InvalidArgument("split_words: word_bits must be > 0");
    std::vector<BitString> words;
    const size_t n = bits.size() / word_bits;
    words.reserve(n);
    for (size_t w = 0; w < n; ++w) {
        BitString word(word_bits);
        for (size_t i = 0; i < word_bits; ++i) word.set(i, bits.get(w * word_bits + i));
        words.push_back(std::move(word));
    }
    return words;
}

HDFitReport hd_fit(std::span<const BitString> words, int threads) {
    if (words.size() < 2) throw InvalidArgument("hd_fit: need at least 2 words");
    const size_t len = words[0].size();
    if (len == 0) throw InvalidArgument("hd_fit: zero-length words");
    for (const auto& w : words)
        if (w.size() != len) throw InvalidArgument("hd_fit: word lengths differ");

    const size_t n = words.size();
    const uint64_t n_pairs = static_cast<uint64_t>(n) * (n - 1) / 2;
    const int nthreads = resolve_threads(threads);
    std::vector<std::vector<uint64_t>> local(static_cast<size_t>(nthreads),
                                             std::vector<uint64_t>(len + 1, 0));
    // Parallel over rows i; each pair counted once (j > i).
    parallel_for(static_cast<size_t>(nthreads), nthreads, [&](size_t t) {
        auto& counts = local[t];
        for (size_t i = t; i < n; i += static_cast<size_t>(nthreads))
            for (size_t j = i + 1; j < n; ++j) ++counts[words[i].hamming_raw(words[j])];
    });
    std::vector<uint64_t> counts(len + 1, 0);
    for (const auto& l : local)
        for (size_t k = 0; k <= len; ++k) counts[k] += l[k];

    HDFitReport r;
    r.word_bits = len;
    r.n_pairs = n_pairs;
    r.hd_counts = counts;
    CompensatedSum mean_sum;
    for (size_t k = 0; k <= len; ++k)
        if (counts[k]) mean_sum.add(static_cast<double>(counts[k]) * static_cast<double>(k));
    const double mean_raw = mean_sum.value() / static_cast<double>(n_pairs);
    CompensatedSum var_sum;
    for (size_t k = 0; k <= len; ++k)
        if (counts[k]) {
            const double d = static_cast<double>(k) - mean_raw;
            var_sum.add(static_cast<double>(counts[k]) * d * d);
        }
    const double var_raw = var_sum.value() / static_cast<double>(n_pairs);
    r.mu = mean_raw / static_cast<double>(len);
    r.sigma = std::sqrt(var_raw) / static_cast<double>(len);
    r.dof = degrees_of_freedom(r.mu, r.sigma);

    std::vector<double> xs(len + 1), ys(len + 1);
    for (size_t k = 0; k <= len; ++k) {
        xs[k] = static_cast<double>(k) / static_cast<double>(len);
        ys[k] = static_cast<double>(counts[k]);
    }
    r.fit = fit_gaussian(xs, ys);
    return r;
}

std::string HDFitReport::to_json() const {
    nlohmann::json j;
    j["mu"] = mu;
    j["sigma"] = sigma;
    j["n_pairs"] = n_pairs;
    j["dof"] = dof;
    j["word_bits"] = word_bits;
    j["gaussian_fit"] = {{"amplitude", fit.amplitude},
                         {"center", fit.center},
                         {"width", fit.width},
                         {"r_squared", fit.r_squared},
                         {"converged", fit.converged}};
    return j.dump(2);
}

double proportion_threshold(double alpha, size_t num_subsequences) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must be in (0, 1)");
    if (num_subsequences == 0) throw InvalidArgument("need at least one subsequence");
    const double m = static_cast<double>(num_subsequences);
    return (1.0 - alpha) - 3.0 * std::sqrt(alpha * (1.0 - alpha) / m);
}

double pvalue_uniformity(std::span<const double> pvalues) {
    if (pvalues.empty()) throw InvalidArgument("uniformity: no P-values");
    uint64_t bins[10] = {};
    for (double p : pvalues) {
        int idx = static_cast<int>(p * 10.0);
        idx = std::clamp(idx, 0, 9);  // P == 1.0 goes to the top bin
        ++bins[idx];
    }
    const double expected = static_cast<double>(pvalues.size()) / 10.0;
    double chi2 = 0.0;
    for (uint64_t c : bins) {
        const double d = static_cast<double>(c) - expected;
        chi2 += d * d / expected;
    }
    return igamc(9.0 / 2.0, chi2 / 2.0);
}

TestReport run_battery(const BitString& bits, const BatteryParams& params) {
    if (params.subseq_bits == 0) throw InvalidArgument("battery: subseq_bits must be > 0");
    if (bits.size() < 2 * params.subseq_bits)
        throw InsufficientData("battery: sequence must cover at least 2 subsequences",
                               static_cast<long long>(2 * params.subseq_bits));
    const size_t m = bits.size() / params.subseq_bits;
    if (m < 10)
        throw InsufficientData(
            "battery: need at least 10 whole subsequences, have " + std::to_string(m),
            static_cast<long long>(10 * params.subseq_bits));

    const auto& names = nist::test_names();
    // pvalues[test][stream][subseq]
    std::vector<std::vector<std::vector<double>>> pvalues(names.size());
    for (size_t t = 0; t < names.size(); ++t)
        pvalues[t].assign(nist::stream_names(names[t]).size(), std::vector<double>(m, 0.0));

    nist::BitView whole(bits);
    parallel_for(m, params.threads, [&](size_t s) {
        const nist::BitView sub = whole.subview(s * params.subseq_bits, params.subseq_bits);
        for (size_t t = 0; t < names.size(); ++t) {
            const auto values = nist::run_test(names[t], sub, params.test_params);
            for (size_t v = 0; v < values.size(); ++v) pvalues[t][v][s] = values[v];
        }
    });

    TestReport report;
    report.sequence_bits = bits.size();
    report.subseq_bits = params.subseq_bits;
    report.num_subsequences = m;
    report.alpha = params.alpha;
    report.params = params.test_params;
    const double threshold = proportion_threshold(params.alpha, m);

    for (size_t t = 0; t < names.size(); ++t) {
        const auto stream_labels = nist::stream_names(names[t]);
        TestSummary summary;
        summary.test = names[t];
        summary.min_uniformity_pt = 1.0;
        summary.min_proportion = 1.0;
        summary.pass = true;
        for (size_t v = 0; v < stream_labels.size(); ++v) {
            StreamResult sr;
            sr.test = names[t];
            sr.stream = stream_labels[v];
            sr.pvalues = pvalues[t][v];
            sr.uniformity_pt = pvalue_uniformity(sr.pvalues);
            size_t passed = 0;
            for (double p : sr.pvalues) passed += p >= params.alpha;
            sr.proportion = static_cast<double>(passed) / static_cast<double>(m);
            sr.proportion_threshold = threshold;
            sr.pass_uniformity = sr.uniformity_pt >= 1e-4;
            sr.pass_proportion = sr.proportion >= threshold;
            summary.min_uniformity_pt = std::min(summary.min_uniformity_pt, sr.uniformity_pt);
            summary.min_proportion = std::min(summary.min_proportion, sr.proportion);
            summary.pass = summary.pass && sr.pass_uniformity && sr.pass_proportion;
            report.streams.push_back(std::move(sr));
        }
        report.tests.push_back(summary);
    }
    report.overall_pass = std::all_of(report.tests.begin(), report.tests.end(),
                                      [](const TestSummary& s) { return s.pass; });
    return report;
}

std::string TestReport::to_json() const {
    nlohmann::json j;
    j["sequence_bits"] = sequence_bits;
    j["subseq_bits"] = subseq_bits;
    j["num_subsequences"] = num_subsequences;
    j["alpha"] = alpha;
    j["params"] = {{"block_frequency_m", params.block_frequency_m},
                   {"serial_m", params.serial_m},
                   {"apen_m", params.apen_m}};
    j["overall_pass"] = overall_pass;
    j["tests"] = nlohmann::json::array();
    for (const auto& t : tests)
        j["tests"].push_back({{"test", t.test},
                              {"min_uniformity_pt", t.min_uniformity_pt},
                              {"min_proportion", t.min_proportion},
                              {"pass", t.pass}});
    j["streams"] = nlohmann::json::array();
    for (const auto& s : streams)
        j["streams"].push_back({{"test", s.test},
                                {"stream", s.stream},
                                {"uniformity_pt", s.uniformity_pt},
                                {"proportion", s.proportion},
                                {"proportion_threshold", s.proportion_threshold},
                                {"pass_uniformity", s.pass_uniformity},
                                {"pass_proportion", s.pass_proportion}});
    return j.dump(2);
}

void TestReport::write_pvalues_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open P-value CSV for writing");
    out << "test,stream,subsequence,p_value\n";
    out.precision(10);
    for (const auto& s : streams)
        for (size_t i = 0; i < s.pvalues.size(); ++i)
            out << s.test << "," << s.stream << "," << i << "," << s.pvalues[i] << "\n";
    if (!out) throw IoError(path.string(), "failed writing P-value CSV");
}

}  // namespace speckle
