#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "apb/errors.hpp"

namespace apb {

// Boosting weights over items 1..n kept in non-increasing order with prefix
// sums.  "Item" is whatever the caller indexes (dataset examples at the top
// level, view positions inside a tree node).  Ties in weight are broken by
// ascending item index everywhere, so every consumer sees the same sequence.
struct WeightVector {
    std::vector<int> order;  // order[r-1] = item at weight rank r
    std::vector<double> w;   // w[i-1] = weight of item i, non-negative
    std::vector<double> Z;   // Z[m] = sum of the m heaviest weights; Z[0] = 0

    int n() const { return static_cast<int>(order.size()); }
    double total() const { return Z.back(); }
    double weight_of_rank(int r) const { return w[static_cast<std::size_t>(order[r - 1]) - 1]; }

    void rebuild_prefix_sums();
};

// Uniform weights 1/n, order = identity.
WeightVector make_uniform_weights(int n);

// Sorts descending with the ascending-index tie-break and builds prefix sums.
WeightVector make_weights(std::vector<double> weights);

// Scales so that total() == 1; order unchanged.  Throws DegenerateWeights
// when the total is zero.
void normalize(WeightVector& wv);

// Minimum m with Z_m >= target, clamped to n when target exceeds Z_n.
int prefix_index(const WeightVector& wv, double target);

// Rebuilds `order` after a two-factor multiplicative update: items flagged
// correct kept their relative order, as did the rest, so one merge restores
// the full descending order.  Returns the number of weight comparisons,
// which is at most n - 1.
std::size_t merge_reorder(WeightVector& wv, const std::vector<std::uint8_t>& correct);

// w_i *= exp(-alpha * y_i * h_i), then normalize and merge_reorder.  The
// update applies exactly one factor per correctness group so the merge
// precondition holds bit-for-bit.
void adaboost_update(WeightVector& wv, const std::vector<std::int8_t>& predictions,
                     const std::vector<std::int8_t>& labels, double alpha);

}  // namespace apb
