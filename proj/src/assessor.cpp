#include "apb/assessor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace apb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

FeatureAssessor::FeatureAssessor(int k, int n, double Zn) : k_(k), n_(n), Zn_(Zn) {
    // One all-covering interval: lb = 0, ub = 1 before any assessment.
    intervals_.push_back({-kInf, kInf, 0.0, 0.0});
}

void FeatureAssessor::assess(std::span<const AssessItem> batch, int first_rank) {
    if (first_rank != m_seen_ + 1)
        throw ContractViolation("assess batch starts at rank " + std::to_string(first_rank) +
                                ", expected " + std::to_string(m_seen_ + 1));
    if (batch.empty()) return;
    if (m_seen_ + static_cast<int>(batch.size()) > n_)
        throw ContractViolation("assess batch runs past the node size");

    // Widen the bucket key set by the batch's new distinct values.  Keys
    // move but masses stay with their value, so this step is exact.
    std::vector<double> vals(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) vals[i] = batch[i].value;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<double> merged;
    merged.reserve(bounds_.size() + vals.size());
    std::merge(bounds_.begin(), bounds_.end(), vals.begin(), vals.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    if (merged.size() != bounds_.size()) {
        std::vector<double> npos(merged.size(), 0.0), nneg(merged.size(), 0.0);
        std::size_t j = 0;
        for (std::size_t old = 0; old < bounds_.size(); ++old) {
            while (merged[j] != bounds_[old]) ++j;
            npos[j] = bucket_pos_[old];
            nneg[j] = bucket_neg_[old];
        }
        bounds_ = std::move(merged);
        bucket_pos_ = std::move(npos);
        bucket_neg_ = std::move(nneg);
    }

    // One add per example, in rank order: bucket masses (and hence every
    // bound derived from them) never depend on how ranks were batched.
    for (const AssessItem& it : batch) {
        const std::size_t j = static_cast<std::size_t>(
            std::lower_bound(bounds_.begin(), bounds_.end(), it.value) - bounds_.begin());
        (it.label > 0 ? bucket_pos_ : bucket_neg_)[j] += it.weight;
        Zm_seen_ += it.weight;
    }

    m_seen_ += static_cast<int>(batch.size());
    assess_count_ += static_cast<long long>(batch.size());
    refresh_best();
}

void FeatureAssessor::refresh_best() {
    // Interval j holds tau in (bounds_[j-1], bounds_[j]] with infinities at
    // the ends; an assessed value sits at or above hi exactly when its
    // bucket index is >= j.  Polarity +1 misclassifies positives at or
    // below lo plus negatives at or above hi, so interval tallies are one
    // prefix and one suffix fold over the buckets, evaluated in a fixed
    // order.
    const std::size_t D = bounds_.size();
    std::vector<double> pre_pos(D + 1, 0.0), pre_neg(D + 1, 0.0);
    for (std::size_t j = 0; j < D; ++j) {
        pre_pos[j + 1] = pre_pos[j] + bucket_pos_[j];
        pre_neg[j + 1] = pre_neg[j] + bucket_neg_[j];
    }
    std::vector<double> suf_pos(D + 1, 0.0), suf_neg(D + 1, 0.0);
    for (std::size_t j = D; j-- > 0;) {
        suf_pos[j] = suf_pos[j + 1] + bucket_pos_[j];
        suf_neg[j] = suf_neg[j + 1] + bucket_neg_[j];
    }

    intervals_.assign(D + 1, ThresholdInterval{});
    double best = kInf;
    int pos = 0;
    std::int8_t p = +1;
    for (std::size_t j = 0; j <= D; ++j) {
        ThresholdInterval& iv = intervals_[j];
        iv.lo = (j == 0) ? -kInf : bounds_[j - 1];
        iv.hi = (j == D) ? kInf : bounds_[j];
        iv.wrong_weight_pos = pre_pos[j] + suf_neg[j];
        iv.wrong_weight_neg = pre_neg[j] + suf_pos[j];
        if (iv.wrong_weight_pos < best) {
            best = iv.wrong_weight_pos;
            pos = static_cast<int>(j);
            p = +1;
        }
        if (iv.wrong_weight_neg < best) {
            best = iv.wrong_weight_neg;
            pos = static_cast<int>(j);
            p = -1;
        }
    }
    best_eps_ = best;
    best_pos_ = pos;
    best_p_ = p;
}

double FeatureAssessor::lb() const { return best_eps_ / Zn_; }

double FeatureAssessor::ub() const {
    // Snap the unseen mass to exactly zero at full assessment so ub == lb
    // bit-for-bit and a finished feature compares exactly.
    const double unseen = (m_seen_ == n_) ? 0.0 : (Zn_ - Zm_seen_);
    return (best_eps_ + unseen) / Zn_;
}

double FeatureAssessor::error_so_far() const {
    if (m_seen_ < 1) throw ContractViolation("error_so_far on an untouched assessor");
    return best_eps_ / Zm_seen_;
}

Stump FeatureAssessor::best_stump() const {
    if (m_seen_ < 1) throw ContractViolation("best_stump on an untouched assessor");
    const ThresholdInterval& iv = intervals_[static_cast<std::size_t>(best_pos_)];
    double tau;
    if (iv.lo == -kInf) {
        tau = iv.hi - 1.0;  // min assessed value - 1
    } else if (iv.hi == kInf) {
        tau = iv.lo + 1.0;  // max assessed value + 1
        if (tau <= iv.lo) tau = std::nextafter(iv.lo, kInf);
    } else {
        tau = 0.5 * (iv.lo + iv.hi);
        if (tau <= iv.lo || tau > iv.hi) tau = iv.hi;  // midpoint rounded out
    }
    return Stump{best_p_, k_, tau};
}

}  // namespace apb
