#include "apb/weights.hpp"

#include <algorithm>
#include <cmath>

#include "apb/kernels.hpp"

namespace apb {

void WeightVector::rebuild_prefix_sums() {
    const int count = n();
    Z.resize(static_cast<std::size_t>(count) + 1);
    Z[0] = 0.0;
    for (int m = 1; m <= count; ++m)
        Z[static_cast<std::size_t>(m)] = Z[static_cast<std::size_t>(m) - 1] + weight_of_rank(m);
}

WeightVector make_uniform_weights(int n) {
    WeightVector wv;
    wv.order.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) wv.order[static_cast<std::size_t>(i)] = i + 1;
    wv.w.assign(static_cast<std::size_t>(n), 1.0 / n);
    wv.rebuild_prefix_sums();
    return wv;
}

WeightVector make_weights(std::vector<double> weights) {
    WeightVector wv;
    wv.w = std::move(weights);
    wv.order.resize(wv.w.size());
    for (std::size_t i = 0; i < wv.order.size(); ++i) wv.order[i] = static_cast<int>(i) + 1;
    std::stable_sort(wv.order.begin(), wv.order.end(), [&](int a, int b) {
        double wa = wv.w[static_cast<std::size_t>(a) - 1], wb = wv.w[static_cast<std::size_t>(b) - 1];
        if (wa != wb) return wa > wb;
        return a < b;
    });
    wv.rebuild_prefix_sums();
    return wv;
}

void normalize(WeightVector& wv) {
    const double t = wv.total();
    if (t <= 0.0) throw DegenerateWeights("cannot normalize: total weight is zero");
    kernels::scale(wv.w.data(), wv.w.size(), 1.0 / t);
    wv.rebuild_prefix_sums();
}

int prefix_index(const WeightVector& wv, double target) {
    if (target <= 0.0) return 0;
    // First m with Z_m >= target; Z is non-decreasing.
    auto it = std::lower_bound(wv.Z.begin(), wv.Z.end(), target);
    if (it == wv.Z.end()) return wv.n();  // target > Z_n, clamp
    return static_cast<int>(it - wv.Z.begin());
}

std::size_t merge_reorder(WeightVector& wv, const std::vector<std::uint8_t>& correct) {
    const int count = wv.n();
    std::vector<int> a, b;  // correct / incorrect items in prior rank order
    a.reserve(static_cast<std::size_t>(count));
    b.reserve(static_cast<std::size_t>(count));
    for (int r = 1; r <= count; ++r) {
        int item = wv.order[static_cast<std::size_t>(r) - 1];
        (correct[static_cast<std::size_t>(item) - 1] ? a : b).push_back(item);
    }
    std::size_t comparisons = 0;
    std::vector<int> merged;
    merged.reserve(static_cast<std::size_t>(count));
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        ++comparisons;
        double wa = wv.w[static_cast<std::size_t>(a[i]) - 1];
        double wb = wv.w[static_cast<std::size_t>(b[j]) - 1];
        bool take_a = wa > wb || (wa == wb && a[i] < b[j]);
        merged.push_back(take_a ? a[i++] : b[j++]);
    }
    merged.insert(merged.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
    merged.insert(merged.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
    wv.order = std::move(merged);
    wv.rebuild_prefix_sums();
    return comparisons;
}

void adaboost_update(WeightVector& wv, const std::vector<std::int8_t>& predictions,
                     const std::vector<std::int8_t>& labels, double alpha) {
    const std::size_t count = wv.w.size();
    if (predictions.size() != count || labels.size() != count)
        throw ArgumentError("adaboost_update: prediction/label length mismatch");
    std::vector<std::uint8_t> correct(count);
    for (std::size_t i = 0; i < count; ++i) correct[i] = predictions[i] == labels[i];
    // y*h = +1 for correct and -1 for wrong examples, so the update is a
    // two-factor scale; one factor per group keeps relative orders intact.
    const double f_correct = std::exp(-alpha);
    const double f_wrong = std::exp(alpha);
    double total = kernels::two_factor_scale_sum(wv.w.data(), correct.data(), count, f_correct, f_wrong);
    if (total <= 0.0) throw DegenerateWeights("adaboost_update: weights vanished");
    kernels::scale(wv.w.data(), count, 1.0 / total);
    // Merge on the final normalized weights: the tie-break then matches a
    // full sort of exactly these values.
    merge_reorder(wv, correct);
}

}  // namespace apb
