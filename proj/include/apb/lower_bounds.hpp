#pragma once

#include <vector>

#include "apb/dataset.hpp"
#include "apb/weights.hpp"

namespace apb {

// Empirical lower bounds on the example assessments any search needs to
// certify the greedy-optimal stump of one node.  Both use E* comparisons
// with an absolute tolerance of 1e-12 to absorb accumulated floating-point
// error, making the bounds conservative by at most that much.

struct WeightOrderLB {
    long long total = 0;                 // n + sum over competitors
    std::vector<long long> per_feature_m;  // per feature; the winner's entry is n
};

// LB for algorithms consuming examples in descending weight order:
// n + sum over k != k* of min{ m : every stump of k has L_m >= E* }.
// E* and k* come from an exhaustive oracle pass.  feature_subset, when
// given, poses the same restricted problem the searches accept.
WeightOrderLB weight_order_lb(const ExampleView& view, const WeightVector& wv,
                              const std::vector<int>* feature_subset = nullptr);

// Minimum cardinality of an example subset M with
// sum_{i in M} w_i * 1{h_j(x_i) != y_i} >= E* * Z_n for every stump j of
// feature k, solved exactly by branch and bound: variables in descending
// weight order, incumbent from a greedy cover, node bound = max over
// constraints of the fractional-knapsack count covering the residual.
// Throws OracleMismatch if any constraint is infeasible (impossible when
// E* is the true optimum) and BoundTimeout when the node budget runs out,
// carrying a still-valid partial estimate.
long long min_prune_set(const ExampleView& view, const WeightVector& wv, int k,
                        double E_star, long long node_budget = 10'000'000);

// Any-order bound: n + sum over k != k* of min_prune_set(k).  The budget is
// shared across features; on exhaustion throws BoundTimeout whose partial
// value remains a valid lower bound (abandoned subtrees contribute their
// optimistic bounds).
long long exact_lb(const ExampleView& view, const WeightVector& wv,
                   long long node_budget = 10'000'000,
                   const std::vector<int>* feature_subset = nullptr);

}  // namespace apb
