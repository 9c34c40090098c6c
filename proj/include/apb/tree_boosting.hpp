#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "apb/dataset.hpp"
#include "apb/stump_search.hpp"
#include "apb/weights.hpp"

namespace apb {

enum class Strategy { adaptive, quickboost, exhaustive };

enum class VariantKind { none, lazy, trim };

// Per-round preprocessing of Adaptive-Pruning Boost's approximate variants:
// lazy(q) draws ceil(q*K) features per round, trim(q) restricts training to
// the minimal weight-ordered prefix holding mass q.  q = 1 reproduces none.
struct Variant {
    VariantKind kind = VariantKind::none;
    double q = 1.0;
};

struct QuickBoostParams {
    int batches = 16;
    double init_mass = 0.25;
};

// Depth-limited binary tree of stumps.  `left` is the h(x) = +1 branch.
struct TreeNode {
    bool is_leaf = true;
    std::int8_t label = +1;  // leaf only: weighted-majority label
    Stump stump;             // internal only
    std::unique_ptr<TreeNode> left, right;
};

std::int8_t predict(const TreeNode& node, const Dataset& d, int example);

struct Round {
    double alpha = 0.0;
    std::unique_ptr<TreeNode> tree;
};

// H_T(x) = sign(sum_t alpha_t h_t(x)) with sign(0) := +1.
struct Ensemble {
    std::vector<Round> rounds;
};

std::int8_t predict(const Ensemble& e, const Dataset& d, int example);

// Unweighted misclassified fraction.
double error_rate(const Ensemble& e, const Dataset& d);

struct RoundMetrics {
    int round = 0;
    long long assess_round = 0;
    long long assess_cum = 0;
    double train_err = 0.0;
    double test_err = -1.0;  // -1 when no test set
    double wall_ms = 0.0;
    std::optional<long long> lb_wo;
    std::optional<long long> lb_exact;  // -1 sentinel when the bound timed out
};

// Grows a tree by per-node stump search, recursing on split_view children
// with node-locally renormalized weights until the depth limit, a pure
// node, or a zero-weight child.  A child with no members or no weight
// becomes a leaf labeled with the stump's predicted sign for that side;
// all other leaves take the weighted-majority label (exact ties fall back
// to the stump side's sign).  Returns the tree and the summed assessments.
std::pair<std::unique_ptr<TreeNode>, long long> train_tree(
    const ExampleView& view, const WeightVector& wv, int depth, Strategy strategy,
    const std::vector<int>* feature_subset = nullptr,
    const QuickBoostParams& qb = QuickBoostParams{});

struct BoostConfig {
    int rounds = 1;
    int depth = 1;
    Strategy strategy = Strategy::adaptive;
    Variant variant;
    std::uint64_t seed = 0;
    QuickBoostParams qb;
};

// Observes each round's root search problem (after variant preprocessing,
// before training) so callers can annotate RoundMetrics with lower bounds
// over exactly the instance the search saw.
using RoundHook = std::function<void(int round, const ExampleView& root_view,
                                     const WeightVector& root_wv,
                                     const std::vector<int>* feature_subset,
                                     RoundMetrics& row)>;

// Discrete AdaBoost.  Each round: variant preprocessing, train_tree,
// eps_t measured on the full weight vector (so alphas are identical across
// strategies and variants' trimming), alpha_t = ln((1-eps)/eps)/2 with
// eps_t clamped to [1/(2n), 1 - 1/(2n)], then adaboost_update.  Lazy draws
// come from a per-round generator seeded by (seed, round), independent of
// strategy.  Throws ArgumentError when rounds < 1.
std::pair<Ensemble, std::vector<RoundMetrics>> adaboost(const Dataset& train,
                                                        const Dataset* test,
                                                        const BoostConfig& cfg,
                                                        const RoundHook& hook = {});

// One round per line: `alpha` then a pre-order encoding where an internal
// node is `(k tau p <plus-branch> <minus-branch>)` and a leaf is `leaf:+1`
// or `leaf:-1`.  Numbers print round-trip exact.
std::string serialize_ensemble(const Ensemble& e);
Ensemble parse_ensemble(const std::string& text);

}  // namespace apb
