#include <algorithm>
#include <cmath>
#include <limits>

#include "seamsentinel/classify.hpp"
#include "seamsentinel/error.hpp"
#include "seamsentinel/parallel.hpp"
#include "seamsentinel/textio.hpp"

namespace seam {

namespace {

constexpr double kTau = 1e-12;

double rbf_kernel(const std::vector<double>& u, const std::vector<double>& v, double gamma) {
    double d2 = 0.0;
    for (std::size_t f = 0; f < u.size(); ++f) {
        const double d = u[f] - v[f];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

struct PairProblem {
    std::vector<std::size_t> dataset_rows;  // indices into the training dataset
    std::vector<double> y;                  // +1 for class_a, -1 for class_b
};

PairProblem collect_pair(const Dataset& ds, int class_a, int class_b) {
    PairProblem p;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.labels[i] == class_a) {
            p.dataset_rows.push_back(i);
            p.y.push_back(1.0);
        } else if (ds.labels[i] == class_b) {
            p.dataset_rows.push_back(i);
            p.y.push_back(-1.0);
        }
    }
    return p;
}

struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;
};

// Sequential minimal optimization with maximal-violating-pair selection on
// the dual of the soft-margin problem. Stops when the violating-pair gap
// drops to `tolerance`.
SmoResult solve_smo(const Dataset& ds, const PairProblem& p, double C, double gamma,
                    double tolerance, std::size_t max_iterations, int class_a, int class_b) {
    const std::size_t n = p.y.size();
    std::vector<double> kernel(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = ds.rows[p.dataset_rows[i]];
        kernel[i * n + i] = 1.0;  // exp(0)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = rbf_kernel(u, ds.rows[p.dataset_rows[j]], gamma);
            kernel[i * n + j] = k;
            kernel[j * n + i] = k;
        }
    }
    const auto q = [&](std::size_t i, std::size_t j) {
        return p.y[i] * p.y[j] * kernel[i * n + j];
    };

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);

    double gap = std::numeric_limits<double>::infinity();
    double m_final = 0.0;
    double big_m_final = 0.0;

    for (std::size_t iter = 0;; ++iter) {
        // i maximizes -y*grad over I_up, j minimizes it over I_low
        double m = -std::numeric_limits<double>::infinity();
        double big_m = std::numeric_limits<double>::infinity();
        std::ptrdiff_t i = -1, j = -1;
        for (std::size_t t = 0; t < n; ++t) {
            const bool positive = p.y[t] > 0;
            const double v = -p.y[t] * grad[t];
            const bool in_up = positive ? alpha[t] < C : alpha[t] > 0;
            const bool in_low = positive ? alpha[t] > 0 : alpha[t] < C;
            if (in_up && v > m) {
                m = v;
                i = static_cast<std::ptrdiff_t>(t);
            }
            if (in_low && v < big_m) {
                big_m = v;
                j = static_cast<std::ptrdiff_t>(t);
            }
        }
        gap = m - big_m;
        m_final = m;
        big_m_final = big_m;
        if (i < 0 || j < 0 || gap <= tolerance) break;
        if (iter >= max_iterations)
            fail(ErrorKind::Convergence,
                 "svm pair (" + format_int(class_a) + "," + format_int(class_b) +
                     ") did not converge after " + format_int(static_cast<long long>(iter)) +
                     " iterations (gap " + format_double(gap) + ")");

        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        const double old_ai = alpha[ui];
        const double old_aj = alpha[uj];

        if (p.y[ui] != p.y[uj]) {
            double quad = q(ui, ui) + q(uj, uj) + 2.0 * q(ui, uj);
            if (quad <= 0) quad = kTau;
            const double delta = (-grad[ui] - grad[uj]) / quad;
            const double diff = alpha[ui] - alpha[uj];
            alpha[ui] += delta;
            alpha[uj] += delta;
            if (diff > 0) {
                if (alpha[uj] < 0) {
                    alpha[uj] = 0;
                    alpha[ui] = diff;
                }
            } else {
                if (alpha[ui] < 0) {
                    alpha[ui] = 0;
                    alpha[uj] = -diff;
                }
            }
            if (diff > 0) {
                if (alpha[ui] > C) {
                    alpha[ui] = C;
                    alpha[uj] = C - diff;
                }
            } else {
                if (alpha[uj] > C) {
                    alpha[uj] = C;
                    alpha[ui] = C + diff;
                }
            }
        } else {
            double quad = q(ui, ui) + q(uj, uj) - 2.0 * q(ui, uj);
            if (quad <= 0) quad = kTau;
            const double delta = (grad[ui] - grad[uj]) / quad;
            const double sum = alpha[ui] + alpha[uj];
            alpha[ui] -= delta;
            alpha[uj] += delta;
            if (sum > C) {
                if (alpha[ui] > C) {
                    alpha[ui] = C;
                    alpha[uj] = sum - C;
                }
            } else {
                if (alpha[uj] < 0) {
                    alpha[uj] = 0;
                    alpha[ui] = sum;
                }
            }
            if (sum > C) {
                if (alpha[uj] > C) {
                    alpha[uj] = C;
                    alpha[ui] = sum - C;
                }
            } else {
                if (alpha[ui] < 0) {
                    alpha[ui] = 0;
                    alpha[uj] = sum;
                }
            }
        }

        const double dai = alpha[ui] - old_ai;
        const double daj = alpha[uj] - old_aj;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += q(t, ui) * dai + q(t, uj) * daj;
    }

    // bias from free support vectors when available, else the gap midpoint
    SmoResult result;
    result.alpha = std::move(alpha);
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (result.alpha[t] > 0 && result.alpha[t] < C) {
            free_sum += p.y[t] * grad[t];
            ++free_count;
        }
    }
    const double rho =
        free_count > 0 ? free_sum / static_cast<double>(free_count)
                       : -(m_final + big_m_final) / 2.0;
    result.bias = -rho;
    return result;
}

}  // namespace

SvmModel train_svm(const Dataset& train_standardized, const Standardizer& st,
                   const SvmParams& params, std::uint64_t seed, unsigned threads) {
    train_standardized.validate(true);
    if (train_standardized.feature_names != st.feature_names)
        fail(ErrorKind::Schema, "dataset schema differs from standardizer schema");
    if (!(params.C > 0)) fail(ErrorKind::Validation, "C must be positive");
    if (!(params.tolerance > 0)) fail(ErrorKind::Validation, "tolerance must be positive");

    const std::size_t d = train_standardized.feature_count();
    double gamma;
    if (params.gamma) {
        gamma = *params.gamma;
        if (!(gamma > 0)) fail(ErrorKind::Validation, "gamma must be positive");
    } else {
        // "scale": 1 / (d * pooled variance over all feature values)
        double sum = 0.0;
        double sum_sq = 0.0;
        std::size_t count = 0;
        for (const auto& row : train_standardized.rows) {
            for (const double v : row) {
                sum += v;
                sum_sq += v * v;
                ++count;
            }
        }
        const double mean = sum / static_cast<double>(count);
        const double pooled_var = sum_sq / static_cast<double>(count) - mean * mean;
        if (!(pooled_var > 0))
            fail(ErrorKind::Validation, "features have zero pooled variance");
        gamma = 1.0 / (static_cast<double>(d) * pooled_var);
    }

    SvmModel model;
    model.scenario = train_standardized.scenario;
    model.scheme = train_standardized.scheme;
    model.feature_names = train_standardized.feature_names;
    model.standardizer = st;
    model.C = params.C;
    model.gamma = gamma;
    model.classes = train_standardized.class_ids();
    model.seed = seed;
    model.model_id = "svm-" + to_string(model.scenario) + "-" + to_string(model.scheme) +
                     "-seed" + format_int(static_cast<long long>(seed));
    if (train_standardized.config_hash) model.config_hash = *train_standardized.config_hash;

    std::vector<std::pair<int, int>> pair_ids;
    for (std::size_t a = 0; a < model.classes.size(); ++a)
        for (std::size_t b = a + 1; b < model.classes.size(); ++b)
            pair_ids.emplace_back(model.classes[a], model.classes[b]);

    model.pairs.resize(pair_ids.size());
    parallel_for(pair_ids.size(), threads, [&](std::size_t pi) {
        const auto [class_a, class_b] = pair_ids[pi];
        const PairProblem problem = collect_pair(train_standardized, class_a, class_b);
        const SmoResult solved =
            solve_smo(train_standardized, problem, params.C, gamma, params.tolerance,
                      params.max_iterations, class_a, class_b);

        SvmPairClassifier pair;
        pair.class_a = class_a;
        pair.class_b = class_b;
        pair.bias = solved.bias;
        for (std::size_t t = 0; t < problem.y.size(); ++t) {
            if (solved.alpha[t] > 0) {
                pair.dual_coef.push_back(solved.alpha[t] * problem.y[t]);
                pair.sv_pair_index.push_back(static_cast<std::uint32_t>(t));
                pair.support_vectors.push_back(
                    train_standardized.rows[problem.dataset_rows[t]]);
            }
        }
        model.pairs[pi] = std::move(pair);
    });
    return model;
}

double svm_pair_decision(const SvmModel& model, const SvmPairClassifier& pair,
                         const std::vector<double>& standardized_row) {
    double acc = pair.bias;
    for (std::size_t s = 0; s < pair.support_vectors.size(); ++s)
        acc += pair.dual_coef[s] *
               rbf_kernel(pair.support_vectors[s], standardized_row, model.gamma);
    return acc;
}

double svm_kkt_gap(const SvmModel& model, const SvmPairClassifier& pair,
                   const Dataset& train_standardized) {
    const PairProblem problem =
        collect_pair(train_standardized, pair.class_a, pair.class_b);
    const std::size_t n = problem.y.size();

    std::vector<double> alpha(n, 0.0);
    for (std::size_t s = 0; s < pair.sv_pair_index.size(); ++s) {
        const std::size_t t = pair.sv_pair_index[s];
        if (t >= n) fail(ErrorKind::Validation, "support vector index out of range");
        alpha[t] = std::fabs(pair.dual_coef[s]);
    }

    std::vector<double> grad(n, -1.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        const auto& u = train_standardized.rows[problem.dataset_rows[i]];
        for (std::size_t t = 0; t < n; ++t) {
            const double k =
                rbf_kernel(u, train_standardized.rows[problem.dataset_rows[t]], model.gamma);
            grad[t] += problem.y[t] * problem.y[i] * k * alpha[i];
        }
    }

    double m = -std::numeric_limits<double>::infinity();
    double big_m = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        const bool positive = problem.y[t] > 0;
        const double v = -problem.y[t] * grad[t];
        if ((positive ? alpha[t] < model.C : alpha[t] > 0) && v > m) m = v;
        if ((positive ? alpha[t] > 0 : alpha[t] < model.C) && v < big_m) big_m = v;
    }
    return m - big_m;
}

}  // namespace seam
