#include "losscal/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "losscal/csv_io.hpp"
#include "losscal/errors.hpp"
#include "losscal/parallel.hpp"
#include "losscal/rng.hpp"

namespace losscal {

double Tree::predict(std::span<const double> x) const {
    std::size_t at = 0;
    while (!nodes[at].is_leaf()) {
        const TreeNode& node = nodes[at];
        at = static_cast<std::size_t>(
            x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                        : node.right);
    }
    return nodes[at].value;
}

EnsembleConfig EnsembleConfig::random_forest(std::size_t n_trees, std::uint64_t seed) {
    EnsembleConfig cfg;
    cfg.n_trees = n_trees;
    cfg.bootstrap = true;
    cfg.random_thresholds = false;
    cfg.variant = EnsembleVariant::RandomForest;
    cfg.seed = seed;
    return cfg;
}

EnsembleConfig EnsembleConfig::extra_trees(std::size_t n_trees, std::uint64_t seed) {
    EnsembleConfig cfg;
    cfg.n_trees = n_trees;
    cfg.bootstrap = false;
    cfg.random_thresholds = true;
    cfg.variant = EnsembleVariant::ExtraTrees;
    cfg.seed = seed;
    return cfg;
}

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double score = -std::numeric_limits<double>::infinity();
};

class TreeBuilder {
public:
    TreeBuilder(const std::vector<std::vector<double>>& features,
                const std::vector<double>& targets, const EnsembleConfig& config,
                std::size_t mtry, Rng& rng)
        : x_(features), y_(targets), cfg_(config), mtry_(mtry), rng_(rng) {}

    Tree build() {
        std::vector<std::size_t> indices;
        const std::size_t n = y_.size();
        indices.reserve(n);
        if (cfg_.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) indices.push_back(rng_.index(n));
        } else {
            indices.resize(n);
            std::iota(indices.begin(), indices.end(), 0);
        }
        Tree tree;
        tree.nodes.push_back(TreeNode{});
        fill(tree, 0, indices, 0);
        return tree;
    }

private:
    // Child slots are reserved before either subtree is filled, so the node
    // budget check sees every allocation made on behalf of pending siblings.
    void fill(Tree& tree, std::size_t id, const std::vector<std::size_t>& indices, int depth) {
        double sum = 0.0;
        for (std::size_t i : indices) sum += y_[i];
        tree.nodes[id].value = sum / static_cast<double>(indices.size());

        if (!may_split(tree, indices, depth)) return;
        const SplitChoice split = pick_split(indices);
        if (split.feature < 0) return;

        std::vector<std::size_t> left, right;
        for (std::size_t i : indices) {
            const auto f = static_cast<std::size_t>(split.feature);
            (x_[i][f] <= split.threshold ? left : right).push_back(i);
        }
        const std::size_t left_id = tree.nodes.size();
        tree.nodes.push_back(TreeNode{});
        const std::size_t right_id = tree.nodes.size();
        tree.nodes.push_back(TreeNode{});
        tree.nodes[id].feature = split.feature;
        tree.nodes[id].threshold = split.threshold;
        tree.nodes[id].left = static_cast<std::int32_t>(left_id);
        tree.nodes[id].right = static_cast<std::int32_t>(right_id);
        fill(tree, left_id, left, depth + 1);
        fill(tree, right_id, right, depth + 1);
    }

    bool may_split(const Tree& tree, const std::vector<std::size_t>& indices, int depth) const {
        if (cfg_.max_depth >= 0 && depth >= cfg_.max_depth) return false;
        if (indices.size() < 2 || indices.size() < 2 * cfg_.min_leaf) return false;
        if (tree.nodes.size() + 2 > cfg_.max_nodes) return false;
        const double first = y_[indices.front()];
        for (std::size_t i : indices) {
            if (y_[i] != first) return true;
        }
        return false;
    }

    std::vector<std::size_t> candidate_features() {
        const std::size_t d = x_.front().size();
        if (mtry_ >= d) {
            std::vector<std::size_t> all(d);
            std::iota(all.begin(), all.end(), 0);
            return all;
        }
        std::vector<std::size_t> pool(d);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t i = 0; i < mtry_; ++i) {
            const std::size_t j = i + rng_.index(d - i);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(mtry_);
        return pool;
    }

    SplitChoice pick_split(const std::vector<std::size_t>& indices) {
        SplitChoice best;
        for (std::size_t f : candidate_features()) {
            if (cfg_.random_thresholds) {
                score_random_threshold(indices, f, best);
            } else {
                score_exhaustive(indices, f, best);
            }
        }
        return best;
    }

    // Candidates are ranked by -(left SSE + right SSE); the parent SSE is a
    // per-node constant, so this orders splits exactly like variance
    // reduction does. Strict improvement keeps the first best on ties.
    void score_random_threshold(const std::vector<std::size_t>& indices, std::size_t f,
                                SplitChoice& best) {
        double lo = x_[indices.front()][f];
        double hi = lo;
        for (std::size_t i : indices) {
            lo = std::min(lo, x_[i][f]);
            hi = std::max(hi, x_[i][f]);
        }
        if (lo == hi) return;
        const double thr = rng_.uniform(lo, hi);

        double sum_l = 0.0, sumsq_l = 0.0, sum_r = 0.0, sumsq_r = 0.0;
        std::size_t n_l = 0, n_r = 0;
        for (std::size_t i : indices) {
            const double yi = y_[i];
            if (x_[i][f] <= thr) {
                sum_l += yi;
                sumsq_l += yi * yi;
                ++n_l;
            } else {
                sum_r += yi;
                sumsq_r += yi * yi;
                ++n_r;
            }
        }
        if (n_l < cfg_.min_leaf || n_r < cfg_.min_leaf) return;
        const double sse = sumsq_l - sum_l * sum_l / static_cast<double>(n_l) +
                           sumsq_r - sum_r * sum_r / static_cast<double>(n_r);
        if (-sse > best.score) {
            best = SplitChoice{static_cast<int>(f), thr, -sse};
        }
    }

    void score_exhaustive(const std::vector<std::size_t>& indices, std::size_t f,
                          SplitChoice& best) {
        const std::size_t n = indices.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double va = x_[indices[a]][f];
            const double vb = x_[indices[b]][f];
            return va < vb || (va == vb && a < b);
        });

        double sum_total = 0.0, sumsq_total = 0.0;
        for (std::size_t p : order) {
            const double yi = y_[indices[p]];
            sum_total += yi;
            sumsq_total += yi * yi;
        }

        double sum_l = 0.0, sumsq_l = 0.0;
        for (std::size_t pos = 0; pos + 1 < n; ++pos) {
            const double yi = y_[indices[order[pos]]];
            sum_l += yi;
            sumsq_l += yi * yi;
            const double v = x_[indices[order[pos]]][f];
            const double v_next = x_[indices[order[pos + 1]]][f];
            if (v == v_next) continue;
            const std::size_t n_l = pos + 1;
            const std::size_t n_r = n - n_l;
            if (n_l < cfg_.min_leaf || n_r < cfg_.min_leaf) continue;
            const double sum_r = sum_total - sum_l;
            const double sumsq_r = sumsq_total - sumsq_l;
            const double sse = sumsq_l - sum_l * sum_l / static_cast<double>(n_l) +
                               sumsq_r - sum_r * sum_r / static_cast<double>(n_r);
            if (-sse > best.score) {
                best = SplitChoice{static_cast<int>(f), (v + v_next) / 2.0, -sse};
            }
        }
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<double>& y_;
    const EnsembleConfig& cfg_;
    std::size_t mtry_;
    Rng& rng_;
};

std::size_t resolve_mtry(const EnsembleConfig& cfg, std::size_t d) {
    if (cfg.max_features > 0) return std::min(cfg.max_features, d);
    if (cfg.variant == EnsembleVariant::RandomForest) return std::max<std::size_t>(1, d / 3);
    return d;
}

std::string variant_tag(EnsembleVariant v) {
    switch (v) {
        case EnsembleVariant::RandomForest: return "rf";
        case EnsembleVariant::ExtraTrees: return "ert";
        case EnsembleVariant::Custom: return "custom";
    }
    return "custom";
}

EnsembleVariant parse_variant_tag(const std::string& tag, const std::string& file) {
    if (tag == "rf") return EnsembleVariant::RandomForest;
    if (tag == "ert") return EnsembleVariant::ExtraTrees;
    if (tag == "custom") return EnsembleVariant::Custom;
    throw IoError(file + ": unknown ensemble variant '" + tag + "'");
}

}  // namespace

TreeEnsemble::TreeEnsemble(std::vector<Tree> trees, std::size_t feature_count,
                           EnsembleVariant variant, std::uint64_t seed)
    : trees_(std::move(trees)), feature_count_(feature_count), variant_(variant), seed_(seed) {
    if (trees_.size() < 2) {
        throw ConfigError("ensemble needs at least 2 trees for the member spread");
    }
    if (feature_count_ == 0) {
        throw ConfigError("ensemble needs at least one feature");
    }
}

TreeEnsemble TreeEnsemble::train(const std::vector<std::vector<double>>& features,
                                 const std::vector<double>& targets,
                                 const EnsembleConfig& config) {
    if (features.empty()) {
        throw ConfigError("training data must be nonempty");
    }
    if (features.size() != targets.size()) {
        std::ostringstream msg;
        msg << features.size() << " feature rows vs " << targets.size() << " targets";
        throw ConfigError(msg.str());
    }
    const std::size_t d = features.front().size();
    if (d == 0) {
        throw ConfigError("training features need dimension >= 1");
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].size() != d) {
            std::ostringstream msg;
            msg << "feature row " << i << " has dimension " << features[i].size()
                << ", expected " << d;
            throw ConfigError(msg.str());
        }
        for (double v : features[i]) {
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "non-finite feature in row " << i;
                throw ConfigError(msg.str());
            }
        }
        if (!std::isfinite(targets[i])) {
            std::ostringstream msg;
            msg << "non-finite target at row " << i;
            throw ConfigError(msg.str());
        }
    }
    if (config.n_trees < 2) {
        throw ConfigError("ensemble needs at least 2 trees for the member spread");
    }
    if (config.min_leaf < 1) {
        throw ConfigError("min_leaf must be >= 1");
    }
    if (config.max_nodes < 1) {
        throw ConfigError("max_nodes must be >= 1");
    }

    const std::size_t mtry = resolve_mtry(config, d);
    std::vector<Tree> trees(config.n_trees);
    parallel_for(config.n_trees, [&](std::size_t t) {
        Rng rng(derive_seed(config.seed, t));
        trees[t] = TreeBuilder(features, targets, config, mtry, rng).build();
    });
    return TreeEnsemble(std::move(trees), d, config.variant, config.seed);
}

TreeEnsemble TreeEnsemble::from_trees(std::vector<Tree> trees, std::size_t feature_count,
                                      EnsembleVariant variant, std::uint64_t seed) {
    return TreeEnsemble(std::move(trees), feature_count, variant, seed);
}

std::vector<double> TreeEnsemble::member_predictions(std::span<const double> x) const {
    if (x.size() != feature_count_) {
        std::ostringstream msg;
        msg << "input has dimension " << x.size() << ", ensemble was trained on "
            << feature_count_;
        throw ConfigError(msg.str());
    }
    std::vector<double> preds(trees_.size());
    for (std::size_t t = 0; t < trees_.size(); ++t) preds[t] = trees_[t].predict(x);
    return preds;
}

std::pair<double, double> TreeEnsemble::predict_mean_std(std::span<const double> x) const {
    const auto preds = member_predictions(x);
    const double count = static_cast<double>(preds.size());
    double sum = 0.0;
    for (double p : preds) sum += p;
    const double mean = sum / count;
    double sq = 0.0;
    for (double p : preds) {
        const double dev = p - mean;
        sq += dev * dev;
    }
    return {mean, std::sqrt(sq / count)};
}

void TreeEnsemble::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << "losscal-ensemble v1\n";
    out << "variant " << variant_tag(variant_) << '\n';
    out << "seed " << seed_ << '\n';
    out << "features " << feature_count_ << '\n';
    out << "trees " << trees_.size() << '\n';
    for (std::size_t t = 0; t < trees_.size(); ++t) {
        out << "tree " << t << " nodes " << trees_[t].nodes.size() << '\n';
        for (const TreeNode& node : trees_[t].nodes) {
            out << "node " << node.feature << ' ' << format_double(node.threshold) << ' '
                << node.left << ' ' << node.right << ' ' << format_double(node.value) << '\n';
        }
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

namespace {

std::istringstream line_stream(std::ifstream& in, const std::string& file,
                               const char* expected) {
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(file + ": truncated dump, expected " + expected);
    }
    return std::istringstream(line);
}

}  // namespace

TreeEnsemble TreeEnsemble::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("no such input: '" + path.string() + "'");
    }
    const std::string file = path.string();

    std::string header;
    std::getline(in, header);
    if (header != "losscal-ensemble v1") {
        throw IoError(file + ": not a v1 ensemble dump (header '" + header + "')");
    }

    std::string key, variant_text;
    std::uint64_t seed = 0;
    std::size_t feature_count = 0, tree_count = 0;
    {
        auto ls = line_stream(in, file, "variant");
        if (!(ls >> key >> variant_text) || key != "variant") {
            throw IoError(file + ": bad variant line");
        }
    }
    {
        auto ls = line_stream(in, file, "seed");
        if (!(ls >> key >> seed) || key != "seed") throw IoError(file + ": bad seed line");
    }
    {
        auto ls = line_stream(in, file, "features");
        if (!(ls >> key >> feature_count) || key != "features") {
            throw IoError(file + ": bad features line");
        }
    }
    {
        auto ls = line_stream(in, file, "trees");
        if (!(ls >> key >> tree_count) || key != "trees") throw IoError(file + ": bad trees line");
    }

    std::vector<Tree> trees;
    trees.reserve(tree_count);
    for (std::size_t t = 0; t < tree_count; ++t) {
        std::size_t idx = 0, node_count = 0;
        std::string tag;
        {
            auto ls = line_stream(in, file, "tree header");
            if (!(ls >> key >> idx >> tag >> node_count) || key != "tree" || tag != "nodes" ||
                idx != t) {
                std::ostringstream msg;
                msg << file << ": bad header for tree " << t;
                throw IoError(msg.str());
            }
        }
        Tree tree;
        tree.nodes.reserve(node_count);
        for (std::size_t k = 0; k < node_count; ++k) {
            auto ls = line_stream(in, file, "node");
            TreeNode node;
            std::string thr_text, value_text;
            if (!(ls >> key >> node.feature >> thr_text >> node.left >> node.right >>
                  value_text) ||
                key != "node") {
                std::ostringstream msg;
                msg << file << ": bad node " << k << " in tree " << t;
                throw IoError(msg.str());
            }
            std::ostringstream ctx;
            ctx << file << ": tree " << t << " node " << k;
            node.threshold = parse_double(thr_text, ctx.str());
            node.value = parse_double(value_text, ctx.str());
            const auto limit = static_cast<std::int32_t>(node_count);
            if (node.is_leaf()) {
                if (node.left != -1 || node.right != -1) {
                    std::ostringstream msg;
                    msg << file << ": leaf " << k << " in tree " << t << " has children";
                    throw IoError(msg.str());
                }
            } else if (node.left < 0 || node.right < 0 || node.left >= limit ||
                       node.right >= limit || node.feature >= static_cast<int>(feature_count)) {
                std::ostringstream msg;
                msg << file << ": node " << k << " in tree " << t << " is out of range";
                throw IoError(msg.str());
            }
            tree.nodes.push_back(node);
        }
        trees.push_back(std::move(tree));
    }
    try {
        return TreeEnsemble(std::move(trees), feature_count,
                            parse_variant_tag(variant_text, file), seed);
    } catch (const ConfigError& e) {
        throw IoError(file + ": " + e.what());
    }
}

}  // namespace losscal
