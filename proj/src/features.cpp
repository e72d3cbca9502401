#include "seamsentinel/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "seamsentinel/error.hpp"
#include "seamsentinel/textio.hpp"

namespace seam {

std::string to_string(FeatureScheme scheme) {
    switch (scheme) {
        case FeatureScheme::WpdRms: return "wpd_rms";
        case FeatureScheme::Statistical: return "statistical";
    }
    fail(ErrorKind::Validation, "invalid feature scheme");
}

FeatureScheme feature_scheme_from_string(const std::string& name) {
    if (name == "wpd_rms") return FeatureScheme::WpdRms;
    if (name == "statistical") return FeatureScheme::Statistical;
    fail(ErrorKind::Config, "unknown feature scheme '" + name + "'");
}

void FeatureVector::validate() const {
    if (names.size() != values.size())
        fail(ErrorKind::Validation, "feature names and values differ in length");
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size())
        fail(ErrorKind::Validation, "duplicate feature names");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            fail(ErrorKind::Validation, "non-finite value for feature '" + names[i] + "'");
}

const std::vector<std::string>& statistical_feature_names() {
    static const std::vector<std::string> kNames = {
        "rms",      "variance",     "entropy",  "shape_factor", "crest_factor",
        "kurtosis", "skewness",     "minimum",  "maximum"};
    return kNames;
}

FeatureVector statistical_features(const Window& w, int entropy_bins) {
    const auto& x = w.samples;
    const std::size_t n = x.size();
    if (n == 0) fail(ErrorKind::Validation, "empty window");
    if (entropy_bins < 1) fail(ErrorKind::Validation, "entropy_bins must be >= 1");

    double sum = 0.0;
    double sum_sq = 0.0;
    double sum_abs = 0.0;
    double min_v = x[0];
    double max_v = x[0];
    for (const double v : x) {
        sum += v;
        sum_sq += v * v;
        sum_abs += std::fabs(v);
        min_v = std::min(min_v, v);
        max_v = std::max(max_v, v);
    }
    const double mean = sum / static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double variance = m2 / static_cast<double>(n);
    if (variance == 0.0)
        fail(ErrorKind::Validation, "degenerate window: zero variance at offset " +
                                        format_double(w.source_offset_s) + " s");

    const double rms = std::sqrt(sum_sq / static_cast<double>(n));
    const double mean_abs = sum_abs / static_cast<double>(n);
    const double sigma = std::sqrt(variance);
    const double shape_factor = rms / mean_abs;
    const double crest_factor = std::max(std::fabs(min_v), std::fabs(max_v)) / rms;
    const double skewness = m3 / (static_cast<double>(n) * sigma * sigma * sigma);
    const double kurtosis = m4 / (static_cast<double>(n) * variance * variance) - 3.0;

    // amplitude-histogram entropy; empty bins contribute zero
    const double range = max_v - min_v;
    std::vector<std::size_t> counts(static_cast<std::size_t>(entropy_bins), 0);
    for (const double v : x) {
        auto bin = static_cast<long long>((v - min_v) / range * entropy_bins);
        bin = std::clamp<long long>(bin, 0, entropy_bins - 1);
        ++counts[static_cast<std::size_t>(bin)];
    }
    double entropy = 0.0;
    for (const std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(n);
        entropy -= p * std::log(p);
    }

    FeatureVector fv;
    fv.scheme = FeatureScheme::Statistical;
    fv.names = statistical_feature_names();
    fv.values = {rms,      variance, entropy,  shape_factor, crest_factor,
                 kurtosis, skewness, min_v,    max_v};
    fv.validate();
    return fv;
}

}  // namespace seam
