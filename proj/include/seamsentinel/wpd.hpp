#pragma once

#include <string>
#include <utility>
#include <vector>

#include "seamsentinel/features.hpp"
#include "seamsentinel/signal.hpp"

namespace seam {

// Analysis filter pair of an orthogonal wavelet. The high-pass is the
// quadrature mirror of the low-pass: g[k] = (-1)^k h[L-1-k].
struct FilterPair {
    std::string name;
    std::vector<double> lo;
    std::vector<double> hi;
};

FilterPair wavelet_filter(const std::string& name);  // haar, db2, db3, db4

struct WpdConfig {
    int level = 3;
    std::string mother_filter = "db4";
};

// 2^level leaf coefficient sequences in frequency order: leaf k covers
// [k*fs/2^(level+1), (k+1)*fs/2^(level+1)) Hz.
struct WpdLeaves {
    std::vector<std::vector<double>> leaves;
    int level = 0;
    int sample_rate_hz = 0;
};

// Recursive two-channel analysis bank with periodic extension, expanding
// both branches, then reordered from the natural (Paley) tree order to
// frequency order via the Gray-code permutation.
WpdLeaves wpd_decompose(const Window& w, const WpdConfig& cfg = {});

// RMS of each frequency-ordered leaf, named wpd_band_<k>_<lowHz>_<highHz>.
FeatureVector wpd_features(const Window& w, const WpdConfig& cfg = {});

std::pair<double, double> band_frequency_range(int leaf_index, int sample_rate_hz, int level);
std::string wpd_feature_name(int leaf_index, int sample_rate_hz, int level);
std::vector<std::string> wpd_feature_names(int sample_rate_hz, int level);

}  // namespace seam
