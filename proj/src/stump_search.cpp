#include "apb/stump_search.hpp"

#include <algorithm>
#include <queue>

namespace apb {

namespace {

// Resolves (rank in weight order) -> (value, weight, label) for one node.
struct NodeItems {
    const Dataset* d;
    const std::vector<int>* members;  // view positions -> dataset example ids
    const WeightVector* wv;           // over positions 1..members->size()

    int n() const { return static_cast<int>(members->size()); }

    void batch(int k, int first_rank, int last_rank, std::vector<AssessItem>& out) const {
        out.clear();
        out.reserve(static_cast<std::size_t>(last_rank - first_rank + 1));
        for (int r = first_rank; r <= last_rank; ++r) {
            const int pos = wv->order[static_cast<std::size_t>(r) - 1];
            const int ex = (*members)[static_cast<std::size_t>(pos) - 1];
            out.push_back({d->value(ex, k), wv->w[static_cast<std::size_t>(pos) - 1],
                           d->labels[static_cast<std::size_t>(ex) - 1]});
        }
    }
};

std::vector<int> resolve_features(const Dataset& d, const std::vector<int>* subset) {
    if (!subset) {
        std::vector<int> all(static_cast<std::size_t>(d.K));
        for (int k = 1; k <= d.K; ++k) all[static_cast<std::size_t>(k) - 1] = k;
        return all;
    }
    for (int k : *subset)
        if (k < 1 || k > d.K)
            throw ArgumentError("feature subset entry " + std::to_string(k) + " out of range");
    std::vector<int> sorted = *subset;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ArgumentError("feature subset contains duplicates");
    if (sorted.empty()) throw ArgumentError("feature subset is empty");
    return sorted;
}

SearchResult finish(const Dataset& d, std::vector<FeatureAssessor>& assessors, std::size_t winner) {
    SearchResult res;
    res.stump = assessors[winner].best_stump();
    res.error = assessors[winner].lb();  // exact: winner fully assessed
    res.per_feature_m.assign(static_cast<std::size_t>(d.K), 0);
    for (const FeatureAssessor& a : assessors) {
        res.per_feature_m[static_cast<std::size_t>(a.feature()) - 1] = a.assess_count();
        res.assessments += a.assess_count();
    }
    return res;
}

void check_view(const ExampleView& view) {
    if (!view.base || view.members.empty()) throw ArgumentError("empty example view");
}

}  // namespace

SearchResult adaptive_pruning_stump(const ExampleView& view, const WeightVector& wv,
                                    const std::vector<int>* feature_subset) {
    check_view(view);
    const Dataset& d = *view.base;
    const std::vector<int> features = resolve_features(d, feature_subset);
    const NodeItems items{&d, &view.members, &wv};
    const int n = items.n();
    const double Zn = wv.total();

    std::vector<FeatureAssessor> assessors;
    assessors.reserve(features.size());
    for (int k : features) assessors.emplace_back(k, n, Zn);

    std::vector<AssessItem> batch;
    auto grow = [&](std::size_t f, int to_rank) {
        const int from = assessors[f].m_seen();
        if (to_rank <= from) return;
        items.batch(assessors[f].feature(), from + 1, to_rank, batch);
        assessors[f].assess(batch, from + 1);
    };

    if (features.size() == 1) {
        grow(0, n);
        return finish(d, assessors, 0);
    }

    // Initial prefix: the minimum index with Z_m >= half the node weight.
    const int m0 = prefix_index(wv, 0.5 * Zn);
    for (std::size_t f = 0; f < features.size(); ++f) grow(f, std::max(m0, 1));

    std::size_t a = 0;
    for (std::size_t f = 1; f < features.size(); ++f)
        if (assessors[f].ub() < assessors[a].ub()) a = f;

    // Challenger heap: (lb, slot), lazily refreshed since lb only grows.
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> lbq;
    for (std::size_t f = 0; f < features.size(); ++f) lbq.push({assessors[f].lb(), f});

    auto pick_challenger = [&](std::size_t avoid) {
        std::vector<Entry> parked;
        std::size_t found = avoid;
        while (!lbq.empty()) {
            Entry top = lbq.top();
            if (top.first != assessors[top.second].lb()) {  // stale
                lbq.pop();
                lbq.push({assessors[top.second].lb(), top.second});
                continue;
            }
            if (top.second == avoid) {
                parked.push_back(top);
                lbq.pop();
                continue;
            }
            found = top.second;
            break;
        }
        for (const Entry& e : parked) lbq.push(e);
        return found;
    };

    // Gap-mass batches, but never less than one rank: with sub-ulp gaps the
    // prefix target can round back to Z[m] and stall the race.
    auto next_rank = [&](std::size_t f, double gap) {
        const int from = assessors[f].m_seen();
        const int to = prefix_index(wv, wv.Z[static_cast<std::size_t>(from)] + gap * Zn);
        return std::min(n, std::max(from + 1, to));
    };

    std::size_t b = pick_challenger(a);
    while (assessors[a].ub() > assessors[b].lb()) {
        double gap = assessors[a].ub() - assessors[b].lb();
        grow(a, next_rank(a, gap));
        gap = assessors[a].ub() - assessors[b].lb();
        if (gap > 0.0) {
            grow(b, next_rank(b, gap));
            lbq.push({assessors[b].lb(), b});
        }
        if (assessors[b].ub() < assessors[a].ub()) std::swap(a, b);
        b = pick_challenger(a);
    }

    grow(a, n);  // assess any remaining unseen examples for the winner

    // Canonical winner under exact ties.  A challenger whose lower bound
    // stopped exactly at the winner's error may tie it in full; features
    // are scanned ascending, so fully assessing the smaller-index
    // candidates reproduces the exhaustive scan's tie-break bit for bit.
    for (std::size_t f = 0; f < a; ++f) {
        if (assessors[f].lb() != assessors[a].lb()) continue;
        grow(f, n);
        if (assessors[f].lb() == assessors[a].lb()) {
            a = f;
            break;
        }
    }
    return finish(d, assessors, a);
}

SearchResult quick_boost_stump(const ExampleView& view, const WeightVector& wv, int batches,
                               double init_mass, const std::vector<int>* feature_subset) {
    check_view(view);
    if (batches < 1) throw ArgumentError("batches must be >= 1");
    if (!(init_mass > 0.0 && init_mass < 1.0)) throw ArgumentError("init_mass must lie in (0, 1)");
    const Dataset& d = *view.base;
    const std::vector<int> features = resolve_features(d, feature_subset);
    const NodeItems items{&d, &view.members, &wv};
    const int n = items.n();
    const double Zn = wv.total();

    std::vector<FeatureAssessor> assessors;
    assessors.reserve(features.size());
    for (int k : features) assessors.emplace_back(k, n, Zn);

    std::vector<AssessItem> batch;
    auto grow = [&](std::size_t f, int to_rank) {
        const int from = assessors[f].m_seen();
        if (to_rank <= from) return;
        items.batch(assessors[f].feature(), from + 1, to_rank, batch);
        assessors[f].assess(batch, from + 1);
    };

    const int m0 = std::max(1, prefix_index(wv, init_mass * Zn));
    for (std::size_t f = 0; f < features.size(); ++f) grow(f, m0);

    // Promise order: ascending error estimate on the initial prefix.
    std::vector<std::size_t> order(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) order[f] = f;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return assessors[x].error_so_far() < assessors[y].error_so_far();
    });

    std::size_t incumbent = order[0];
    grow(incumbent, n);
    double incumbent_error = assessors[incumbent].lb();

    if (features.size() > 1) {
        // Remaining weight split evenly; the last boundary is forced to rank
        // n so zero-weight tails are still assessed.
        const double base = wv.Z[static_cast<std::size_t>(m0)];
        const double chunk = (Zn - base) / batches;
        std::vector<int> boundary(static_cast<std::size_t>(batches));
        for (int j = 1; j <= batches; ++j)
            boundary[static_cast<std::size_t>(j) - 1] =
                (j == batches) ? n : std::min(n, prefix_index(wv, base + j * chunk));

        for (std::size_t oi = 1; oi < order.size(); ++oi) {
            const std::size_t f = order[oi];
            bool pruned = false;
            for (int j = 1; j <= batches; ++j) {
                if (assessors[f].lb() >= incumbent_error) {  // ties pruned
                    pruned = true;
                    break;
                }
                grow(f, boundary[static_cast<std::size_t>(j) - 1]);
            }
            if (!pruned && assessors[f].m_seen() == n &&
                assessors[f].lb() < incumbent_error) {
                incumbent = f;
                incumbent_error = assessors[f].lb();
            }
        }
    }
    return finish(d, assessors, incumbent);
}

SearchResult exhaustive_stump(const ExampleView& view, const WeightVector& wv,
                              const std::vector<int>* feature_subset) {
    check_view(view);
    const Dataset& d = *view.base;
    const std::vector<int> features = resolve_features(d, feature_subset);
    const NodeItems items{&d, &view.members, &wv};
    const int n = items.n();
    const double Zn = wv.total();

    std::vector<FeatureAssessor> assessors;
    assessors.reserve(features.size());
    std::vector<AssessItem> batch;
    std::size_t best = 0;
    for (std::size_t f = 0; f < features.size(); ++f) {
        assessors.emplace_back(features[f], n, Zn);
        items.batch(features[f], 1, n, batch);
        assessors[f].assess(batch, 1);
        // Canonical winner: smaller error, ties to the smaller feature index.
        if (f > 0 && assessors[f].lb() < assessors[best].lb()) best = f;
    }
    return finish(d, assessors, best);
}

}  // namespace apb
