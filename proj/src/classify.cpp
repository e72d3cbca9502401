#include "seamsentinel/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "seamsentinel/error.hpp"
#include "seamsentinel/rng.hpp"
#include "seamsentinel/textio.hpp"

namespace seam {

std::vector<int> Dataset::class_ids() const {
    std::set<int> distinct(labels.begin(), labels.end());
    return {distinct.begin(), distinct.end()};
}

void Dataset::append(const FeatureVector& fv, int label) {
    if (feature_names.empty() && rows.empty()) {
        feature_names = fv.names;
        scheme = fv.scheme;
    }
    if (fv.names != feature_names)
        fail(ErrorKind::Schema, "feature vector schema differs from dataset schema");
    rows.push_back(fv.values);
    labels.push_back(label);
}

void Dataset::validate(bool require_two_classes) const {
    if (rows.size() != labels.size())
        fail(ErrorKind::Validation, "dataset rows and labels differ in length");
    std::set<std::string> unique(feature_names.begin(), feature_names.end());
    if (unique.size() != feature_names.size())
        fail(ErrorKind::Validation, "duplicate feature names in dataset");
    for (const auto& row : rows)
        if (row.size() != feature_names.size())
            fail(ErrorKind::Validation, "dataset row width differs from schema");
    if (require_two_classes && class_ids().size() < 2)
        fail(ErrorKind::Validation, "dataset must contain at least 2 classes");
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double validation_ratio,
                                             std::uint64_t seed) {
    ds.validate(true);
    if (!(validation_ratio > 0.0 && validation_ratio < 1.0))
        fail(ErrorKind::Validation, "validation_ratio must lie strictly between 0 and 1");

    std::map<int, std::vector<std::size_t>> per_class;
    for (std::size_t i = 0; i < ds.labels.size(); ++i)
        per_class[ds.labels[i]].push_back(i);

    std::vector<bool> to_validation(ds.size(), false);
    for (auto& [class_id, indices] : per_class) {
        if (indices.size() < 2)
            fail(ErrorKind::Validation, "class " + format_int(class_id) +
                                            " has fewer than 2 rows; cannot split");
        const auto take = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::floor(
                   static_cast<double>(indices.size()) * validation_ratio)));
        Rng rng(derive_seed(seed, "split", static_cast<std::uint64_t>(class_id)));
        rng.shuffle(indices);
        for (std::size_t k = 0; k < take; ++k) to_validation[indices[k]] = true;
    }

    Dataset train, validation;
    train.scenario = validation.scenario = ds.scenario;
    train.scheme = validation.scheme = ds.scheme;
    train.feature_names = validation.feature_names = ds.feature_names;
    train.config_hash = validation.config_hash = ds.config_hash;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        Dataset& target = to_validation[i] ? validation : train;
        target.rows.push_back(ds.rows[i]);
        target.labels.push_back(ds.labels[i]);
    }
    return {std::move(train), std::move(validation)};
}

Standardizer fit_standardizer(const Dataset& train) {
    train.validate();
    if (train.rows.empty()) fail(ErrorKind::Validation, "cannot standardize an empty dataset");
    const std::size_t d = train.feature_count();
    const auto n = static_cast<double>(train.size());

    Standardizer st;
    st.feature_names = train.feature_names;
    st.mean.assign(d, 0.0);
    st.stddev.assign(d, 0.0);

    for (std::size_t f = 0; f < d; ++f) {
        double lo = train.rows[0][f];
        double hi = lo;
        double sum = 0.0;
        for (const auto& row : train.rows) {
            sum += row[f];
            lo = std::min(lo, row[f]);
            hi = std::max(hi, row[f]);
        }
        if (lo == hi)
            fail(ErrorKind::Validation,
                 "constant feature '" + train.feature_names[f] + "' cannot be standardized");
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& row : train.rows) {
            const double dlt = row[f] - mean;
            ss += dlt * dlt;
        }
        const double sigma = std::sqrt(ss / n);
        if (!(sigma > 0.0))
            fail(ErrorKind::Validation,
                 "constant feature '" + train.feature_names[f] + "' cannot be standardized");
        st.mean[f] = mean;
        st.stddev[f] = sigma;
    }
    return st;
}

std::vector<double> Standardizer::apply_row(const std::vector<double>& row) const {
    if (row.size() != mean.size())
        fail(ErrorKind::Schema, "row width differs from standardizer");
    std::vector<double> out(row.size());
    for (std::size_t f = 0; f < row.size(); ++f) out[f] = (row[f] - mean[f]) / stddev[f];
    return out;
}

FeatureVector Standardizer::apply(const FeatureVector& fv) const {
    if (fv.names != feature_names)
        fail(ErrorKind::Schema, "feature names differ from standardizer schema");
    FeatureVector out = fv;
    out.values = apply_row(fv.values);
    return out;
}

Dataset apply_standardizer(const Standardizer& st, const Dataset& ds) {
    ds.validate();
    if (ds.feature_names != st.feature_names)
        fail(ErrorKind::Schema, "dataset schema differs from standardizer schema");
    Dataset out = ds;
    for (auto& row : out.rows) row = st.apply_row(row);
    return out;
}

namespace {

// Reorders raw feature values into the model's schema order; reports
// missing/extra names on mismatch.
std::vector<double> row_in_schema_order(const std::vector<std::string>& schema,
                                        const FeatureVector& fv) {
    std::map<std::string, double> by_name;
    for (std::size_t i = 0; i < fv.names.size(); ++i) by_name[fv.names[i]] = fv.values[i];
    if (by_name.size() != fv.names.size())
        fail(ErrorKind::Schema, "duplicate feature names in input");

    std::vector<std::string> missing, extra;
    std::vector<double> out;
    out.reserve(schema.size());
    for (const auto& name : schema) {
        const auto it = by_name.find(name);
        if (it == by_name.end()) {
            missing.push_back(name);
        } else {
            out.push_back(it->second);
            by_name.erase(it);
        }
    }
    for (const auto& [name, _] : by_name) extra.push_back(name);
    if (!missing.empty() || !extra.empty()) {
        std::string msg = "feature schema mismatch";
        if (!missing.empty()) {
            msg += "; missing:";
            for (const auto& m : missing) msg += " " + m;
        }
        if (!extra.empty()) {
            msg += "; extra:";
            for (const auto& e : extra) msg += " " + e;
        }
        fail(ErrorKind::Schema, msg);
    }
    return out;
}

int class_index_of(const std::vector<int>& classes, int label) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label)
        fail(ErrorKind::Schema, "label " + format_int(label) + " unknown to the model");
    return static_cast<int>(it - classes.begin());
}

int predict_standardized(const SvmModel& model, const std::vector<double>& std_row) {
    std::vector<int> votes(model.classes.size(), 0);
    for (const auto& pair : model.pairs) {
        const double decision = svm_pair_decision(model, pair, std_row);
        const int winner = decision >= 0.0 ? pair.class_a : pair.class_b;
        ++votes[static_cast<std::size_t>(class_index_of(model.classes, winner))];
    }
    int best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c)
        if (votes[c] > votes[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    return model.classes[static_cast<std::size_t>(best)];
}

int predict_standardized(const ForestModel& model, const std::vector<double>& std_row) {
    const auto dist = forest_vote_distribution(model, std_row);
    std::size_t best = 0;
    for (std::size_t c = 1; c < dist.size(); ++c)
        if (dist[c] > dist[best]) best = c;
    return model.classes[best];
}

template <typename Model>
TrainReport evaluate_impl(const Model& model, const Dataset& validation) {
    validation.validate();
    if (validation.rows.empty()) fail(ErrorKind::Validation, "empty validation set");
    if (validation.feature_names != model.feature_names) {
        FeatureVector probe;
        probe.scheme = validation.scheme;
        probe.names = validation.feature_names;
        probe.values.assign(validation.feature_names.size(), 0.0);
        row_in_schema_order(model.feature_names, probe);  // throws with details
    }

    const std::size_t k = model.classes.size();
    TrainReport report;
    report.model_id = model.model_id;
    report.classes = model.classes;
    report.confusion.assign(k, std::vector<int>(k, 0));

    std::size_t correct = 0;
    for (std::size_t i = 0; i < validation.size(); ++i) {
        const int truth = validation.labels[i];
        const int truth_idx = class_index_of(model.classes, truth);
        const auto std_row = model.standardizer.apply_row(validation.rows[i]);
        const int predicted = predict_standardized(model, std_row);
        const int pred_idx = class_index_of(model.classes, predicted);
        ++report.confusion[static_cast<std::size_t>(truth_idx)]
                          [static_cast<std::size_t>(pred_idx)];
        if (predicted == truth) ++correct;
    }
    report.validation_accuracy = static_cast<double>(correct) / static_cast<double>(validation.size());
    return report;
}

}  // namespace

int predict(const SvmModel& model, const FeatureVector& fv) {
    const auto raw = row_in_schema_order(model.feature_names, fv);
    return predict_standardized(model, model.standardizer.apply_row(raw));
}

int predict(const ForestModel& model, const FeatureVector& fv) {
    const auto raw = row_in_schema_order(model.feature_names, fv);
    return predict_standardized(model, model.standardizer.apply_row(raw));
}

int predict(const AnyModel& model, const FeatureVector& fv) {
    return std::visit([&](const auto& m) { return predict(m, fv); }, model);
}

TrainReport evaluate(const SvmModel& model, const Dataset& validation) {
    return evaluate_impl(model, validation);
}

TrainReport evaluate(const ForestModel& model, const Dataset& validation) {
    return evaluate_impl(model, validation);
}

TrainReport evaluate(const AnyModel& model, const Dataset& validation) {
    return std::visit([&](const auto& m) { return evaluate(m, validation); }, model);
}

std::vector<std::pair<std::string, double>> feature_importance(const ForestModel& model) {
    std::vector<std::pair<std::string, double>> ranked;
    ranked.reserve(model.feature_names.size());
    for (std::size_t f = 0; f < model.feature_names.size(); ++f)
        ranked.emplace_back(model.feature_names[f], model.feature_importances[f]);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return ranked;
}

}  // namespace seam
