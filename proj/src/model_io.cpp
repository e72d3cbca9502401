#include "seamsentinel/model_io.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "seamsentinel/error.hpp"
#include "seamsentinel/textio.hpp"

namespace seam {

namespace {

constexpr std::string_view kMagic = "SEAMSENTINEL-MODEL v1";

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_int(values[i]);
    }
    return out;
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ',';
        out += names[i];
    }
    return out;
}

void write_common(std::string& out, const std::string& kind, Scenario scenario,
                  FeatureScheme scheme, const std::string& model_id, std::uint64_t seed,
                  const std::string& config_hash, const std::vector<std::string>& names,
                  const std::vector<int>& classes, const Standardizer& st) {
    out += std::string(kMagic) + "\n";
    out += "kind=" + kind + "\n";
    out += "scenario=" + to_string(scenario) + "\n";
    out += "scheme=" + to_string(scheme) + "\n";
    out += "model_id=" + model_id + "\n";
    out += "seed=" + format_int(static_cast<long long>(seed)) + "\n";
    out += "config_hash=" + config_hash + "\n";
    out += "features=" + join_names(names) + "\n";
    out += "classes=" + join_ints(classes) + "\n";
    out += "standardizer_mean=" + join_doubles(st.mean) + "\n";
    out += "standardizer_std=" + join_doubles(st.stddev) + "\n";
}

// Line cursor over the model file with key=value access.
struct Cursor {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    std::string file;

    std::string_view next(const std::string& what) {
        while (pos < lines.size() && trim(lines[pos]).empty()) ++pos;
        if (pos >= lines.size())
            fail(ErrorKind::Format, file + ": unexpected end of file, expected " + what);
        return trim(lines[pos++]);
    }

    std::string expect_key(const std::string& key) {
        const auto line = next(key);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos || trim(line.substr(0, eq)) != key)
            fail(ErrorKind::Format,
                 file + ": expected '" + key + "=...', got '" + std::string(line) + "'");
        return std::string(trim(line.substr(eq + 1)));
    }
};

std::vector<double> parse_doubles(std::string_view text, const std::string& ctx) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto part : split(text, ',')) out.push_back(parse_double(part, ctx));
    return out;
}

std::vector<int> parse_ints(std::string_view text, const std::string& ctx) {
    std::vector<int> out;
    if (trim(text).empty()) return out;
    for (const auto part : split(text, ','))
        out.push_back(static_cast<int>(parse_int(part, ctx)));
    return out;
}

std::vector<std::string> parse_names(std::string_view text) {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    for (const auto part : split(text, ',')) out.emplace_back(trim(part));
    return out;
}

}  // namespace

void save_model(const AnyModel& model, const std::filesystem::path& path) {
    std::string out;
    if (const auto* svm = std::get_if<SvmModel>(&model)) {
        write_common(out, "svm", svm->scenario, svm->scheme, svm->model_id, svm->seed,
                     svm->config_hash, svm->feature_names, svm->classes, svm->standardizer);
        out += "C=" + format_double(svm->C) + "\n";
        out += "gamma=" + format_double(svm->gamma) + "\n";
        out += "pairs=" + format_int(static_cast<long long>(svm->pairs.size())) + "\n";
        for (const auto& pair : svm->pairs) {
            out += "pair=" + format_int(pair.class_a) + "," + format_int(pair.class_b) + "\n";
            out += "bias=" + format_double(pair.bias) + "\n";
            out += "sv_count=" + format_int(static_cast<long long>(pair.dual_coef.size())) + "\n";
            for (std::size_t s = 0; s < pair.dual_coef.size(); ++s) {
                out += "sv=" + format_double(pair.dual_coef[s]) + ";" +
                       format_int(static_cast<long long>(pair.sv_pair_index[s])) + ";" +
                       join_doubles(pair.support_vectors[s]) + "\n";
            }
        }
    } else {
        const auto& forest = std::get<ForestModel>(model);
        write_common(out, "forest", forest.scenario, forest.scheme, forest.model_id,
                     forest.seed, forest.config_hash, forest.feature_names, forest.classes,
                     forest.standardizer);
        out += "importances=" + join_doubles(forest.feature_importances) + "\n";
        out += "n_trees=" + format_int(static_cast<long long>(forest.trees.size())) + "\n";
        for (std::size_t t = 0; t < forest.trees.size(); ++t) {
            const auto& tree = forest.trees[t];
            out += "tree=" + format_int(static_cast<long long>(t)) + "\n";
            out += "tree_seed=" +
                   format_int(static_cast<long long>(tree.bootstrap_seed)) + "\n";
            out += "node_count=" +
                   format_int(static_cast<long long>(tree.nodes.size())) + "\n";
            for (const auto& node : tree.nodes) {
                out += "node=" + format_int(node.feature) + ";" +
                       format_double(node.threshold) + ";" + format_int(node.left) + ";" +
                       format_int(node.right) + ";";
                for (std::size_t c = 0; c < node.counts.size(); ++c) {
                    if (c) out += ',';
                    out += format_int(static_cast<long long>(node.counts[c]));
                }
                out += "\n";
            }
        }
    }
    out += "end\n";
    write_text_file(path, out);
}

AnyModel load_model(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    Cursor cur;
    cur.lines = split(text, '\n');
    cur.file = path.string();

    const auto magic = cur.next("magic line");
    if (magic != kMagic)
        fail(ErrorKind::Format, cur.file + ": unsupported model file (expected '" +
                                    std::string(kMagic) + "', got '" + std::string(magic) +
                                    "')");

    const std::string kind = cur.expect_key("kind");
    const Scenario scenario = scenario_from_string(cur.expect_key("scenario"));
    const FeatureScheme scheme = feature_scheme_from_string(cur.expect_key("scheme"));
    const std::string model_id = cur.expect_key("model_id");
    const auto seed = static_cast<std::uint64_t>(
        parse_int(cur.expect_key("seed"), cur.file + ": seed"));
    const std::string config_hash = cur.expect_key("config_hash");
    const auto names = parse_names(cur.expect_key("features"));
    const auto classes = parse_ints(cur.expect_key("classes"), cur.file + ": classes");

    Standardizer st;
    st.feature_names = names;
    st.mean = parse_doubles(cur.expect_key("standardizer_mean"), cur.file + ": mean");
    st.stddev = parse_doubles(cur.expect_key("standardizer_std"), cur.file + ": std");
    if (st.mean.size() != names.size() || st.stddev.size() != names.size())
        fail(ErrorKind::Format, cur.file + ": standardizer width differs from feature count");
    for (const double s : st.stddev)
        if (!(s > 0))
            fail(ErrorKind::Format, cur.file + ": standardizer stddev must be positive");
    if (classes.size() < 2)
        fail(ErrorKind::Format, cur.file + ": model must carry at least 2 classes");

    if (kind == "svm") {
        SvmModel model;
        model.scenario = scenario;
        model.scheme = scheme;
        model.model_id = model_id;
        model.seed = seed;
        model.config_hash = config_hash;
        model.feature_names = names;
        model.standardizer = st;
        model.classes = classes;
        model.C = parse_double(cur.expect_key("C"), cur.file + ": C");
        model.gamma = parse_double(cur.expect_key("gamma"), cur.file + ": gamma");
        if (!(model.C > 0) || !(model.gamma > 0))
            fail(ErrorKind::Format, cur.file + ": C and gamma must be positive");
        const auto n_pairs = parse_int(cur.expect_key("pairs"), cur.file + ": pairs");
        for (long long p = 0; p < n_pairs; ++p) {
            SvmPairClassifier pair;
            const auto ids = parse_ints(cur.expect_key("pair"), cur.file + ": pair");
            if (ids.size() != 2)
                fail(ErrorKind::Format, cur.file + ": pair must list two class ids");
            pair.class_a = ids[0];
            pair.class_b = ids[1];
            pair.bias = parse_double(cur.expect_key("bias"), cur.file + ": bias");
            const auto n_sv = parse_int(cur.expect_key("sv_count"), cur.file + ": sv_count");
            for (long long s = 0; s < n_sv; ++s) {
                const auto parts = split(cur.expect_key("sv"), ';');
                if (parts.size() != 3)
                    fail(ErrorKind::Format, cur.file + ": sv line must have 3 fields");
                const double coef = parse_double(parts[0], cur.file + ": sv coef");
                if (std::fabs(coef) > model.C * (1 + 1e-9))
                    fail(ErrorKind::Format, cur.file + ": dual coefficient exceeds C");
                pair.dual_coef.push_back(coef);
                pair.sv_pair_index.push_back(static_cast<std::uint32_t>(
                    parse_int(parts[1], cur.file + ": sv index")));
                auto vec = parse_doubles(parts[2], cur.file + ": sv values");
                if (vec.size() != names.size())
                    fail(ErrorKind::Format, cur.file + ": sv width differs from schema");
                pair.support_vectors.push_back(std::move(vec));
            }
            model.pairs.push_back(std::move(pair));
        }
        if (cur.next("end") != "end") fail(ErrorKind::Format, cur.file + ": missing 'end'");
        return model;
    }
    if (kind == "forest") {
        ForestModel model;
        model.scenario = scenario;
        model.scheme = scheme;
        model.model_id = model_id;
        model.seed = seed;
        model.config_hash = config_hash;
        model.feature_names = names;
        model.standardizer = st;
        model.classes = classes;
        model.feature_importances =
            parse_doubles(cur.expect_key("importances"), cur.file + ": importances");
        if (model.feature_importances.size() != names.size())
            fail(ErrorKind::Format, cur.file + ": importance width differs from schema");
        double total = 0.0;
        for (const double v : model.feature_importances) total += v;
        if (std::fabs(total - 1.0) > 1e-6)
            fail(ErrorKind::Format, cur.file + ": importances must sum to 1");
        const auto n_trees = parse_int(cur.expect_key("n_trees"), cur.file + ": n_trees");
        if (n_trees < 1) fail(ErrorKind::Format, cur.file + ": n_trees must be >= 1");
        for (long long t = 0; t < n_trees; ++t) {
            const auto tree_index = parse_int(cur.expect_key("tree"), cur.file + ": tree");
            if (tree_index != t)
                fail(ErrorKind::Format, cur.file + ": tree index out of order");
            DecisionTree tree;
            tree.bootstrap_seed = static_cast<std::uint64_t>(
                parse_int(cur.expect_key("tree_seed"), cur.file + ": tree_seed"));
            const auto n_nodes =
                parse_int(cur.expect_key("node_count"), cur.file + ": node_count");
            for (long long ni = 0; ni < n_nodes; ++ni) {
                const auto parts = split(cur.expect_key("node"), ';');
                if (parts.size() != 5)
                    fail(ErrorKind::Format, cur.file + ": node line must have 5 fields");
                TreeNode node;
                node.feature =
                    static_cast<int>(parse_int(parts[0], cur.file + ": node feature"));
                node.threshold = parse_double(parts[1], cur.file + ": node threshold");
                node.left =
                    static_cast<std::int32_t>(parse_int(parts[2], cur.file + ": node left"));
                node.right =
                    static_cast<std::int32_t>(parse_int(parts[3], cur.file + ": node right"));
                for (const std::uint32_t c :
                     parse_ints(parts[4], cur.file + ": node counts")) {
                    node.counts.push_back(c);
                }
                if (node.feature >= static_cast<int>(names.size()))
                    fail(ErrorKind::Format, cur.file + ": node feature out of range");
                if (node.feature >= 0 &&
                    (node.left < 0 || node.right < 0 || node.left >= n_nodes ||
                     node.right >= n_nodes))
                    fail(ErrorKind::Format, cur.file + ": node child out of range");
                if (node.feature < 0 && node.counts.size() != classes.size())
                    fail(ErrorKind::Format, cur.file + ": leaf counts width differs");
                tree.nodes.push_back(std::move(node));
            }
            if (tree.nodes.empty())
                fail(ErrorKind::Format, cur.file + ": tree without nodes");
            model.trees.push_back(std::move(tree));
        }
        if (cur.next("end") != "end") fail(ErrorKind::Format, cur.file + ": missing 'end'");
        return model;
    }
    fail(ErrorKind::Format, cur.file + ": unknown model kind '" + kind + "'");
}

const std::string& model_config_hash(const AnyModel& model) {
    return std::visit([](const auto& m) -> const std::string& { return m.config_hash; },
                      model);
}

const std::string& model_id_of(const AnyModel& model) {
    return std::visit([](const auto& m) -> const std::string& { return m.model_id; }, model);
}

}  // namespace seam
