#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "apb/errors.hpp"
#include "apb/stump.hpp"

namespace apb {

// One example handed to FeatureAssessor::assess: its value in the assessed
// feature, its boosting weight, and its label.
struct AssessItem {
    double value;
    double weight;
    std::int8_t label;
};

// Half-open threshold interval (lo, hi].  Any tau inside it classifies every
// assessed example identically, so one pair of wrong-weight tallies covers
// all of its stumps.  Boundaries are distinct assessed feature values plus
// +-infinity at the ends.
struct ThresholdInterval {
    double lo;
    double hi;
    double wrong_weight_pos;  // misclassified weight for polarity +1
    double wrong_weight_neg;  // misclassified weight for polarity -1
};

// Incremental per-feature assessment over examples consumed in descending
// weight order.  Maintains the ordered interval list, the minimal wrong
// weight over all (interval, polarity) stumps, and the exact uncertainty
// interval [lb, ub] around the feature's full-data weighted error:
//
//   lb = min_j eps_m^j / Z_n,   ub = lb + (Z_n - Z_m) / Z_n.
//
// Invariant on every interval: wrong_weight_pos + wrong_weight_neg equals
// the total assessed weight (each assessed example is misclassified by
// exactly one polarity for a fixed threshold).
class FeatureAssessor {
public:
    // k: feature index; n: node example count; Zn: node total weight.
    FeatureAssessor(int k, int n, double Zn);

    // Consumes the next contiguous run of weight-ordered examples.
    // first_rank must equal m_seen()+1; anything else is a broken call
    // sequence and throws ContractViolation.  Cost O(|batch| log |batch| +
    // interval count).  Tallies are accumulated one example at a time in
    // rank order, so every derived quantity is bit-identical no matter how
    // the ranks were split into batches.
    void assess(std::span<const AssessItem> batch, int first_rank);

    double lb() const;
    double ub() const;

    // Exact weighted error so far: min_j eps_m^j / Z_m.  Requires m_seen >= 1.
    double error_so_far() const;

    // Minimal-eps stump; ties broken by smaller tau, then polarity +1.
    // tau is the midpoint of the winning interval, with the unbounded end
    // intervals using (min assessed value - 1) and (max assessed value + 1).
    // Requires m_seen >= 1 (throws ContractViolation otherwise).
    Stump best_stump() const;

    int feature() const { return k_; }
    int m_seen() const { return m_seen_; }
    double Zm_seen() const { return Zm_seen_; }
    long long assess_count() const { return assess_count_; }
    const std::vector<ThresholdInterval>& intervals() const { return intervals_; }

private:
    void refresh_best();

    int k_;
    int n_;
    double Zn_;
    int m_seen_ = 0;
    double Zm_seen_ = 0.0;
    long long assess_count_ = 0;
    // Distinct assessed values with per-label weight accumulated in rank
    // order; interval tallies are folded from these on refresh so they never
    // depend on batch boundaries.
    std::vector<double> bounds_;
    std::vector<double> bucket_pos_, bucket_neg_;
    std::vector<ThresholdInterval> intervals_;  // rebuilt by refresh_best
    double best_eps_ = 0.0;
    int best_pos_ = 0;           // interval index of the minimal-eps stump
    std::int8_t best_p_ = +1;
};

}  // namespace apb
