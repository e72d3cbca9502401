#pragma once

#include <string>
#include <vector>

#include "seamsentinel/signal.hpp"

namespace seam {

enum class FeatureScheme { WpdRms, Statistical };

std::string to_string(FeatureScheme scheme);
FeatureScheme feature_scheme_from_string(const std::string& name);

struct FeatureVector {
    FeatureScheme scheme = FeatureScheme::Statistical;
    std::vector<std::string> names;
    std::vector<double> values;

    void validate() const;
};

inline constexpr int kDefaultEntropyBins = 64;

// The nine time-domain features: rms, variance, entropy, shape_factor,
// crest_factor, kurtosis, skewness, minimum, maximum. Moments are population
// moments; kurtosis is excess (Gaussian -> 0); entropy is Shannon entropy of
// an equal-width amplitude histogram spanning [min, max].
FeatureVector statistical_features(const Window& w, int entropy_bins = kDefaultEntropyBins);

const std::vector<std::string>& statistical_feature_names();

}  // namespace seam
