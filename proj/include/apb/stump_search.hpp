#pragma once

#include <vector>

#include "apb/assessor.hpp"
#include "apb/dataset.hpp"
#include "apb/weights.hpp"

namespace apb {

// Outcome of one node split plus the instrumentation every strategy shares.
// per_feature_m[k-1] is the number of examples assessed for feature k;
// assessments is their sum; the returned stump's feature is always assessed
// on all node examples so its entry equals the node size.
struct SearchResult {
    Stump stump;
    double error = 0.0;          // exact E_n of the stump on the node
    long long assessments = 0;
    std::vector<long long> per_feature_m;
};

// The weight vector indexes positions of view.members (1-based) and must be
// normalized over the view.  feature_subset, when given, restricts the
// search to those features (1-based, duplicate-free).

// LUCB-style search with exact intervals: assess every feature on the
// half-weight prefix, then repeatedly grow the minimal-ub feature `a` and
// the minimal-lb challenger `b` by gap-sized weight batches, swapping roles
// when b's upper bound drops below a's, until no challenger's lower bound
// lies below ub(a).  The winner is then assessed to completion, so the
// returned stump is exact greedy-optimal.  Challengers tied exactly with
// the winner's error are also assessed to completion so ties break toward
// the smallest feature index, matching the exhaustive scan.
SearchResult adaptive_pruning_stump(const ExampleView& view, const WeightVector& wv,
                                    const std::vector<int>* feature_subset = nullptr);

// Batched pruning baseline: estimate every feature on the init_mass prefix,
// fully assess the most promising one as incumbent, then test the others in
// promise order batch-by-batch (remaining weight split evenly into
// `batches`), pruning as soon as lb >= incumbent error (ties pruned).
SearchResult quick_boost_stump(const ExampleView& view, const WeightVector& wv,
                               int batches = 16, double init_mass = 0.25,
                               const std::vector<int>* feature_subset = nullptr);

// Assesses everything: assessments = n * K.
SearchResult exhaustive_stump(const ExampleView& view, const WeightVector& wv,
                              const std::vector<int>* feature_subset = nullptr);

}  // namespace apb
