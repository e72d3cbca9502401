#include <algorithm>
#include <cmath>
#include <numeric>

#include "seamsentinel/classify.hpp"
#include "seamsentinel/error.hpp"
#include "seamsentinel/parallel.hpp"
#include "seamsentinel/rng.hpp"
#include "seamsentinel/textio.hpp"

namespace seam {

namespace {

struct SplitChoice {
    double decrease = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

double gini(const std::vector<std::uint32_t>& counts, double total) {
    double sum_sq = 0.0;
    for (const std::uint32_t c : counts) {
        const double p = static_cast<double>(c) / total;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

struct TreeBuilder {
    const Dataset& data;
    const std::vector<int>& label_index;  // labels mapped to 0..k-1
    std::size_t n_classes;
    std::size_t mtry;
    std::uint64_t tree_seed;
    std::size_t bootstrap_size;
    DecisionTree tree;
    std::vector<double> importance;  // weighted gini decrease per feature
    std::size_t node_counter = 0;

    // Best split over candidate features. Feature order comes from a seeded
    // permutation; evaluation continues past mtry only while no valid split
    // has been found. Ties break to the lowest feature index, then the
    // lowest threshold.
    SplitChoice choose_split(const std::vector<std::uint32_t>& rows,
                             const std::vector<std::uint32_t>& counts, Rng& rng) {
        const std::size_t d = data.feature_count();
        std::vector<std::size_t> perm(d);
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);

        const double n = static_cast<double>(rows.size());
        const double parent_impurity = gini(counts, n);

        SplitChoice best;
        std::vector<std::pair<double, int>> values(rows.size());
        std::vector<std::uint32_t> left_counts(n_classes);

        std::size_t tried = 0;
        for (const std::size_t f : perm) {
            if (tried >= mtry && best.feature >= 0) break;
            ++tried;

            for (std::size_t r = 0; r < rows.size(); ++r)
                values[r] = {data.rows[rows[r]][f], label_index[rows[r]]};
            std::sort(values.begin(), values.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (values.front().first == values.back().first) continue;

            std::fill(left_counts.begin(), left_counts.end(), 0);
            for (std::size_t r = 0; r + 1 < values.size(); ++r) {
                ++left_counts[static_cast<std::size_t>(values[r].second)];
                const double a = values[r].first;
                const double b = values[r + 1].first;
                if (!(a < b)) continue;
                double threshold = a + (b - a) / 2.0;
                if (!(threshold < b)) threshold = a;  // keep the partition intact

                const double nl = static_cast<double>(r + 1);
                const double nr = n - nl;
                double left_sq = 0.0;
                double right_sq = 0.0;
                for (std::size_t c = 0; c < n_classes; ++c) {
                    const double lc = static_cast<double>(left_counts[c]);
                    const double rc = static_cast<double>(counts[c]) - lc;
                    left_sq += lc * lc;
                    right_sq += rc * rc;
                }
                const double weighted = (nl - left_sq / nl + nr - right_sq / nr) / n;
                const double decrease = parent_impurity - weighted;
                if (decrease <= 0.0) continue;

                const int fi = static_cast<int>(f);
                const bool better =
                    decrease > best.decrease ||
                    (decrease == best.decrease &&
                     (fi < best.feature ||
                      (fi == best.feature && threshold < best.threshold)));
                if (best.feature < 0 || better) {
                    best.decrease = decrease;
                    best.feature = fi;
                    best.threshold = threshold;
                }
            }
        }
        return best;
    }

    std::int32_t grow(const std::vector<std::uint32_t>& rows) {
        const std::size_t node_index = node_counter++;
        std::vector<std::uint32_t> counts(n_classes, 0);
        for (const std::uint32_t r : rows)
            ++counts[static_cast<std::size_t>(label_index[r])];

        const auto make_leaf = [&]() {
            TreeNode leaf;
            leaf.counts = counts;
            tree.nodes.push_back(std::move(leaf));
            return static_cast<std::int32_t>(tree.nodes.size() - 1);
        };

        std::size_t present = 0;
        for (const std::uint32_t c : counts)
            if (c > 0) ++present;
        if (present <= 1) return make_leaf();

        Rng node_rng(derive_seed(tree_seed, "node", node_index));
        const SplitChoice split = choose_split(rows, counts, node_rng);
        if (split.feature < 0) return make_leaf();  // indistinguishable rows

        importance[static_cast<std::size_t>(split.feature)] +=
            split.decrease * static_cast<double>(rows.size()) /
            static_cast<double>(bootstrap_size);

        std::vector<std::uint32_t> left_rows, right_rows;
        for (const std::uint32_t r : rows) {
            if (data.rows[r][static_cast<std::size_t>(split.feature)] <= split.threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }

        const auto index = static_cast<std::int32_t>(tree.nodes.size());
        TreeNode node;
        node.feature = split.feature;
        node.threshold = split.threshold;
        tree.nodes.push_back(std::move(node));
        const std::int32_t left = grow(left_rows);
        const std::int32_t right = grow(right_rows);
        tree.nodes[static_cast<std::size_t>(index)].left = left;
        tree.nodes[static_cast<std::size_t>(index)].right = right;
        return index;
    }

    void build() {
        tree.bootstrap_seed = derive_seed(tree_seed, "bootstrap");
        Rng boot(tree.bootstrap_seed);
        std::vector<std::uint32_t> rows(bootstrap_size);
        for (auto& r : rows)
            r = static_cast<std::uint32_t>(boot.below(bootstrap_size));
        importance.assign(data.feature_count(), 0.0);
        grow(rows);
    }
};

}  // namespace

ForestModel train_random_forest(const Dataset& train_standardized, const Standardizer& st,
                                int n_trees, std::uint64_t seed, unsigned threads) {
    train_standardized.validate(true);
    if (train_standardized.feature_names != st.feature_names)
        fail(ErrorKind::Schema, "dataset schema differs from standardizer schema");
    if (n_trees < 1) fail(ErrorKind::Validation, "n_trees must be >= 1");

    ForestModel model;
    model.scenario = train_standardized.scenario;
    model.scheme = train_standardized.scheme;
    model.feature_names = train_standardized.feature_names;
    model.standardizer = st;
    model.classes = train_standardized.class_ids();
    model.seed = seed;
    model.model_id = "forest-" + to_string(model.scenario) + "-" +
                     to_string(model.scheme) + "-seed" +
                     format_int(static_cast<long long>(seed));
    if (train_standardized.config_hash) model.config_hash = *train_standardized.config_hash;

    std::vector<int> label_index(train_standardized.size());
    for (std::size_t i = 0; i < train_standardized.size(); ++i) {
        const auto it = std::lower_bound(model.classes.begin(), model.classes.end(),
                                         train_standardized.labels[i]);
        label_index[i] = static_cast<int>(it - model.classes.begin());
    }

    const std::size_t d = train_standardized.feature_count();
    const auto mtry = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(d))));

    std::vector<TreeBuilder> builders;
    builders.reserve(static_cast<std::size_t>(n_trees));
    for (int t = 0; t < n_trees; ++t)
        builders.push_back(TreeBuilder{train_standardized, label_index,
                                       model.classes.size(), mtry,
                                       derive_seed(seed, "tree", static_cast<std::uint64_t>(t)),
                                       train_standardized.size(),
                                       {},
                                       {},
                                       0});

    parallel_for(builders.size(), threads, [&](std::size_t t) { builders[t].build(); });

    model.feature_importances.assign(d, 0.0);
    model.trees.reserve(builders.size());
    for (auto& b : builders) {
        for (std::size_t f = 0; f < d; ++f) model.feature_importances[f] += b.importance[f];
        model.trees.push_back(std::move(b.tree));
    }
    double total = 0.0;
    for (const double v : model.feature_importances) total += v;
    if (total > 0.0) {
        for (auto& v : model.feature_importances) v /= total;
    } else {
        for (auto& v : model.feature_importances) v = 1.0 / static_cast<double>(d);
    }
    return model;
}

const TreeNode& tree_leaf(const DecisionTree& tree, const std::vector<double>& standardized_row) {
    if (tree.nodes.empty()) fail(ErrorKind::Validation, "empty tree");
    std::size_t node = 0;
    for (;;) {
        const TreeNode& current = tree.nodes[node];
        if (current.feature < 0) return current;
        const double v = standardized_row[static_cast<std::size_t>(current.feature)];
        node = static_cast<std::size_t>(v <= current.threshold ? current.left : current.right);
    }
}

std::vector<double> forest_vote_distribution(const ForestModel& model,
                                             const std::vector<double>& standardized_row) {
    std::vector<double> dist(model.classes.size(), 0.0);
    for (const auto& tree : model.trees) {
        const TreeNode& leaf = tree_leaf(tree, standardized_row);
        double total = 0.0;
        for (const std::uint32_t c : leaf.counts) total += static_cast<double>(c);
        if (total <= 0) continue;
        for (std::size_t c = 0; c < dist.size(); ++c)
            dist[c] += static_cast<double>(leaf.counts[c]) / total;
    }
    return dist;
}

}  // namespace seam
