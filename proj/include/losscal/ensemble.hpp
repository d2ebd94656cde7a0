#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace losscal {

/// One node of an axis-aligned regression tree. Internal nodes route
/// x[feature] <= threshold to `left`, otherwise to `right`; leaves carry the
/// mean target of their training samples in `value` and have feature == -1.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

struct Tree {
    std::vector<TreeNode> nodes;  // node 0 is the root

    double predict(std::span<const double> x) const;
    bool operator==(const Tree&) const = default;
};

enum class EnsembleVariant { RandomForest, ExtraTrees, Custom };

/// Training knobs. The variant only resolves defaults that depend on the
/// data dimension; the boolean/numeric knobs are authoritative, so both
/// variants collapse to the same deterministic fit when bootstrap and
/// threshold randomization are off and every feature is in play.
struct EnsembleConfig {
    std::size_t n_trees = 100;
    int max_depth = -1;  // negative = unlimited
    std::size_t min_leaf = 1;
    std::size_t max_nodes = 1000;  // per tree
    bool bootstrap = true;
    std::size_t max_features = 0;  // per split; 0 = resolve from variant
    bool random_thresholds = false;
    EnsembleVariant variant = EnsembleVariant::Custom;
    std::uint64_t seed = 0;

    /// Bootstrapped trees trying max(1, d/3) features per split.
    static EnsembleConfig random_forest(std::size_t n_trees, std::uint64_t seed);

    /// No bootstrap, all features, one uniformly random threshold per
    /// candidate feature.
    static EnsembleConfig extra_trees(std::size_t n_trees, std::uint64_t seed);
};

class TreeEnsemble {
public:
    static TreeEnsemble train(const std::vector<std::vector<double>>& features,
                              const std::vector<double>& targets, const EnsembleConfig& config);

    /// Wraps pre-built trees (at least two, so the member spread is defined).
    static TreeEnsemble from_trees(std::vector<Tree> trees, std::size_t feature_count,
                                   EnsembleVariant variant, std::uint64_t seed);

    /// Mean and population standard deviation of the member predictions.
    std::pair<double, double> predict_mean_std(std::span<const double> x) const;

    std::vector<double> member_predictions(std::span<const double> x) const;

    std::size_t tree_count() const { return trees_.size(); }
    std::size_t feature_count() const { return feature_count_; }
    EnsembleVariant variant() const { return variant_; }
    std::uint64_t seed() const { return seed_; }
    const Tree& tree(std::size_t t) const { return trees_[t]; }

    /// Plain-text dump; load() restores it bit-exactly.
    void save(const std::filesystem::path& path) const;
    static TreeEnsemble load(const std::filesystem::path& path);

private:
    TreeEnsemble(std::vector<Tree> trees, std::size_t feature_count, EnsembleVariant variant,
                 std::uint64_t seed);

    std::vector<Tree> trees_;
    std::size_t feature_count_;
    EnsembleVariant variant_;
    std::uint64_t seed_;
};

}  // namespace losscal
