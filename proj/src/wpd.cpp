#include "seamsentinel/wpd.hpp"

#include <cmath>

#include "seamsentinel/error.hpp"
#include "seamsentinel/textio.hpp"

namespace seam {

namespace {

// Decomposition low-pass coefficients (orthonormal, sum = sqrt(2)).
const std::vector<double>& lowpass_taps(const std::string& name) {
    static const std::vector<double> kHaar = {
        0.70710678118654752440, 0.70710678118654752440};
    static const std::vector<double> kDb2 = {
        -0.12940952255092145, 0.22414386804185735, 0.83651630373746899,
        0.48296291314469025};
    static const std::vector<double> kDb3 = {
        0.035226291882100656, -0.085441273882241486, -0.13501102001039084,
        0.45987750211933132, 0.80689150931333875, 0.33267055295095688};
    static const std::vector<double> kDb4 = {
        -0.010597401784997278, 0.032883011666982945, 0.030841381835986965,
        -0.18703481171888114, -0.027983769416983849, 0.63088076792959036,
        0.71484657055254153, 0.23037781330885523};
    if (name == "haar" || name == "db1") return kHaar;
    if (name == "db2") return kDb2;
    if (name == "db3") return kDb3;
    if (name == "db4") return kDb4;
    fail(ErrorKind::Config,
         "unknown mother filter '" + name + "' (expected haar, db2, db3 or db4)");
}

// One analysis step with periodic extension and downsampling by two.
void analysis_step(const std::vector<double>& x, const FilterPair& f,
                   std::vector<double>& lo, std::vector<double>& hi) {
    const std::size_t n = x.size();
    const std::size_t half = (n + 1) / 2;
    const std::size_t taps = f.lo.size();
    lo.assign(half, 0.0);
    hi.assign(half, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        double a = 0.0;
        double d = 0.0;
        for (std::size_t k = 0; k < taps; ++k) {
            const double v = x[(2 * i + k) % n];
            a += f.lo[k] * v;
            d += f.hi[k] * v;
        }
        lo[i] = a;
        hi[i] = d;
    }
}

}  // namespace

FilterPair wavelet_filter(const std::string& name) {
    FilterPair f;
    f.name = name;
    f.lo = lowpass_taps(name);
    const std::size_t taps = f.lo.size();
    f.hi.resize(taps);
    for (std::size_t k = 0; k < taps; ++k) {
        const double v = f.lo[taps - 1 - k];
        f.hi[k] = (k % 2 == 0) ? v : -v;
    }
    return f;
}

WpdLeaves wpd_decompose(const Window& w, const WpdConfig& cfg) {
    if (cfg.level < 1) fail(ErrorKind::Validation, "decomposition level must be >= 1");
    if (cfg.level > 20) fail(ErrorKind::Validation, "decomposition level too large");
    const std::size_t n = w.samples.size();
    const std::size_t leaf_count = std::size_t{1} << cfg.level;
    if (n < leaf_count)
        fail(ErrorKind::Validation,
             "window too short: " + format_int(static_cast<long long>(n)) +
                 " samples for level " + format_int(cfg.level));
    if (w.sample_rate_hz <= 0) fail(ErrorKind::Validation, "sample_rate_hz must be positive");

    const FilterPair filter = wavelet_filter(cfg.mother_filter);

    std::vector<std::vector<double>> nodes;
    nodes.push_back(w.samples);
    for (int level = 0; level < cfg.level; ++level) {
        std::vector<std::vector<double>> next;
        next.reserve(nodes.size() * 2);
        for (const auto& node : nodes) {
            std::vector<double> lo, hi;
            analysis_step(node, filter, lo, hi);
            next.push_back(std::move(lo));
            next.push_back(std::move(hi));
        }
        nodes = std::move(next);
    }

    // natural order index for frequency position f is its Gray code f^(f>>1)
    WpdLeaves out;
    out.level = cfg.level;
    out.sample_rate_hz = w.sample_rate_hz;
    out.leaves.resize(leaf_count);
    for (std::size_t f = 0; f < leaf_count; ++f)
        out.leaves[f] = std::move(nodes[f ^ (f >> 1)]);
    return out;
}

FeatureVector wpd_features(const Window& w, const WpdConfig& cfg) {
    const WpdLeaves leaves = wpd_decompose(w, cfg);
    FeatureVector fv;
    fv.scheme = FeatureScheme::WpdRms;
    const int leaf_count = static_cast<int>(leaves.leaves.size());
    fv.names.reserve(static_cast<std::size_t>(leaf_count));
    fv.values.reserve(static_cast<std::size_t>(leaf_count));
    for (int k = 0; k < leaf_count; ++k) {
        const auto& leaf = leaves.leaves[static_cast<std::size_t>(k)];
        double energy = 0.0;
        for (const double c : leaf) energy += c * c;
        fv.names.push_back(wpd_feature_name(k, w.sample_rate_hz, cfg.level));
        fv.values.push_back(std::sqrt(energy / static_cast<double>(leaf.size())));
    }
    fv.validate();
    return fv;
}

std::pair<double, double> band_frequency_range(int leaf_index, int sample_rate_hz, int level) {
    if (level < 1) fail(ErrorKind::Validation, "level must be >= 1");
    const int leaf_count = 1 << level;
    if (leaf_index < 0 || leaf_index >= leaf_count)
        fail(ErrorKind::Validation, "leaf index " + format_int(leaf_index) +
                                        " out of range for level " + format_int(level));
    if (sample_rate_hz <= 0) fail(ErrorKind::Validation, "sample_rate_hz must be positive");
    const double band_width =
        static_cast<double>(sample_rate_hz) / static_cast<double>(leaf_count * 2);
    return {leaf_index * band_width, (leaf_index + 1) * band_width};
}

namespace {

std::string format_frequency(double hz) {
    const double rounded = std::round(hz);
    if (std::fabs(hz - rounded) < 1e-9) return format_int(static_cast<long long>(rounded));
    return format_double(hz);
}

}  // namespace

std::string wpd_feature_name(int leaf_index, int sample_rate_hz, int level) {
    const auto [low, high] = band_frequency_range(leaf_index, sample_rate_hz, level);
    return "wpd_band_" + format_int(leaf_index) + "_" + format_frequency(low) + "_" +
           format_frequency(high);
}

std::vector<std::string> wpd_feature_names(int sample_rate_hz, int level) {
    std::vector<std::string> names;
    const int leaf_count = 1 << level;
    names.reserve(static_cast<std::size_t>(leaf_count));
    for (int k = 0; k < leaf_count; ++k)
        names.push_back(wpd_feature_name(k, sample_rate_hz, level));
    return names;
}

}  // namespace seam
