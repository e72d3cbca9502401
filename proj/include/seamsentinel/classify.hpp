#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "seamsentinel/features.hpp"
#include "seamsentinel/signal.hpp"

namespace seam {

struct Dataset {
    Scenario scenario = Scenario::Wear;
    FeatureScheme scheme = FeatureScheme::Statistical;
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::optional<std::string> config_hash;  // provenance when persisted

    std::size_t size() const { return rows.size(); }
    std::size_t feature_count() const { return feature_names.size(); }
    std::vector<int> class_ids() const;  // sorted distinct labels
    void append(const FeatureVector& fv, int label);
    void validate(bool require_two_classes = false) const;
};

// Per class c with n_c rows, exactly max(1, floor(n_c * ratio)) rows go to
// validation, chosen by a seeded shuffle; row order is preserved otherwise.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double validation_ratio,
                                             std::uint64_t seed);

struct Standardizer {
    std::vector<std::string> feature_names;
    std::vector<double> mean;
    std::vector<double> stddev;

    std::vector<double> apply_row(const std::vector<double>& row) const;
    FeatureVector apply(const FeatureVector& fv) const;
};

Standardizer fit_standardizer(const Dataset& train);
Dataset apply_standardizer(const Standardizer& st, const Dataset& ds);

struct SvmParams {
    double C = 1.0;
    std::optional<double> gamma;  // empty = "scale": 1/(d * pooled variance)
    double tolerance = 1e-3;      // KKT stopping tolerance
    std::size_t max_iterations = 1000000;
};

struct SvmPairClassifier {
    int class_a = 0;  // y = +1
    int class_b = 0;  // y = -1
    std::vector<double> dual_coef;              // alpha_i * y_i, in [-C, C]
    std::vector<std::uint32_t> sv_pair_index;   // position within the pair subproblem
    std::vector<std::vector<double>> support_vectors;  // standardized space
    double bias = 0.0;
};

struct SvmModel {
    Scenario scenario = Scenario::Wear;
    FeatureScheme scheme = FeatureScheme::Statistical;
    std::vector<std::string> feature_names;
    Standardizer standardizer;
    double C = 1.0;
    double gamma = 1.0;
    std::vector<int> classes;
    std::vector<SvmPairClassifier> pairs;
    std::string model_id;
    std::uint64_t seed = 0;
    std::string config_hash;
};

// Soft-margin RBF SVM trained by sequential minimal optimization, one
// classifier per class pair, majority vote with ties to the lowest class id.
// The dataset must already be standardized with `st`.
SvmModel train_svm(const Dataset& train_standardized, const Standardizer& st,
                   const SvmParams& params = {}, std::uint64_t seed = 0,
                   unsigned threads = 0);

double svm_pair_decision(const SvmModel& model, const SvmPairClassifier& pair,
                         const std::vector<double>& standardized_row);

// Maximal-violating-pair gap recomputed from the stored dual coefficients
// against the training subproblem; <= params.tolerance after training.
double svm_kkt_gap(const SvmModel& model, const SvmPairClassifier& pair,
                   const Dataset& train_standardized);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<std::uint32_t> counts;  // leaf class distribution
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // preorder, root at 0
    std::uint64_t bootstrap_seed = 0;
};

struct ForestModel {
    Scenario scenario = Scenario::Wear;
    FeatureScheme scheme = FeatureScheme::Statistical;
    std::vector<std::string> feature_names;
    Standardizer standardizer;
    std::vector<int> classes;
    std::vector<DecisionTree> trees;
    std::vector<double> feature_importances;  // sums to 1
    std::string model_id;
    std::uint64_t seed = 0;
    std::string config_hash;
};

// Fully grown trees on bootstrap resamples, Gini splits over ceil(sqrt(d))
// features per node; all randomness derives from (seed, tree, node) so any
// schedule builds the identical forest.
ForestModel train_random_forest(const Dataset& train_standardized, const Standardizer& st,
                                int n_trees = 100, std::uint64_t seed = 0,
                                unsigned threads = 0);

const TreeNode& tree_leaf(const DecisionTree& tree, const std::vector<double>& standardized_row);
std::vector<double> forest_vote_distribution(const ForestModel& model,
                                             const std::vector<double>& standardized_row);

using AnyModel = std::variant<SvmModel, ForestModel>;

// Prediction on raw features; the model applies its own standardizer.
// The feature schema must match by name (any order).
int predict(const SvmModel& model, const FeatureVector& fv);
int predict(const ForestModel& model, const FeatureVector& fv);
int predict(const AnyModel& model, const FeatureVector& fv);

struct TrainReport {
    std::string model_id;
    std::optional<double> train_accuracy;
    double validation_accuracy = 0.0;
    std::vector<std::vector<int>> confusion;  // [true class][predicted class]
    std::vector<int> classes;
    std::uint64_t split_seed = 0;
};

TrainReport evaluate(const SvmModel& model, const Dataset& validation);
TrainReport evaluate(const ForestModel& model, const Dataset& validation);
TrainReport evaluate(const AnyModel& model, const Dataset& validation);

// Descending by importance, ties by feature index.
std::vector<std::pair<std::string, double>> feature_importance(const ForestModel& model);

}  // namespace seam
