#include "apb/lower_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "apb/assessor.hpp"
#include "apb/errors.hpp"
#include "apb/stump_search.hpp"

namespace apb {
namespace {

constexpr double kTol = 1e-12;
constexpr int kInfCount = std::numeric_limits<int>::max() / 2;

std::vector<int> considered_features(const Dataset& d, const std::vector<int>* subset) {
    if (!subset) {
        std::vector<int> all(d.K);
        for (int k = 1; k <= d.K; ++k) all[k - 1] = k;
        return all;
    }
    std::vector<int> out = *subset;
    std::sort(out.begin(), out.end());
    return out;
}

// One stump's mistake set over the node's examples, as weight ranks.
struct Constraint {
    std::vector<int> ranks;     // ascending rank = descending weight
    std::vector<double> prefix;  // prefix[i] = weight of the first i members
};

struct PruneProblem {
    int n = 0;
    double T = 0.0;                 // required mistake weight, E* * Z_n - tol
    std::vector<double> rank_w;     // rank_w[r-1] = weight at rank r
    std::vector<Constraint> cons;
    std::vector<std::vector<int>> member_of;  // rank -> constraint ids
};

// Enumerates every threshold-distinct stump of feature k and its mistake
// set.  Stumps whose mistake weight cannot reach T make the system
// infeasible, which contradicts E* being the exhaustive optimum.
PruneProblem build_prune_problem(const ExampleView& view, const WeightVector& wv, int k,
                                 double E_star) {
    const int n = static_cast<int>(view.members.size());
    PruneProblem P;
    P.n = n;
    P.T = E_star * wv.total() - kTol;
    P.rank_w.resize(n);

    std::vector<double> val(n);
    std::vector<std::int8_t> lab(n);
    for (int r = 1; r <= n; ++r) {
        const int pos = wv.order[r - 1];
        const int member = view.members[pos - 1];
        val[r - 1] = view.base->value(member, k);
        lab[r - 1] = view.base->label(member);
        P.rank_w[r - 1] = wv.w[pos - 1];
    }
    if (P.T <= 0.0) return P;  // zero examples already certify

    std::vector<double> his(val);
    std::sort(his.begin(), his.end());
    his.erase(std::unique(his.begin(), his.end()), his.end());
    his.push_back(std::numeric_limits<double>::infinity());

    std::vector<std::vector<int>> sets;
    for (double hi : his) {
        for (int p : {+1, -1}) {
            std::vector<int> ranks;
            for (int r = 1; r <= n; ++r) {
                const int pred = val[r - 1] >= hi ? p : -p;
                if (pred != lab[r - 1]) ranks.push_back(r);
            }
            sets.push_back(std::move(ranks));
        }
    }
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    for (std::vector<int>& ranks : sets) {
        Constraint c;
        c.prefix.assign(1, 0.0);
        for (int r : ranks) c.prefix.push_back(c.prefix.back() + P.rank_w[r - 1]);
        if (c.prefix.back() < P.T)
            throw OracleMismatch("mistake weight of a stump of feature " +
                                 std::to_string(k) + " cannot reach E*");
        c.ranks = std::move(ranks);
        P.cons.push_back(std::move(c));
    }
    P.member_of.assign(n + 1, {});
    for (std::size_t j = 0; j < P.cons.size(); ++j)
        for (int r : P.cons[j].ranks) P.member_of[r].push_back(static_cast<int>(j));
    return P;
}

// Fewest members of `c` at rank >= r whose weight reaches `need`, walking the
// heaviest first (their prefix is sorted by weight).  kInfCount if impossible.
int knap_count(const Constraint& c, int r, double need) {
    if (need <= 0.0) return 0;
    const auto from = std::lower_bound(c.ranks.begin(), c.ranks.end(), r);
    const std::size_t i0 = static_cast<std::size_t>(from - c.ranks.begin());
    const double base = c.prefix[i0];
    const auto stop = std::lower_bound(c.prefix.begin() + i0, c.prefix.end(), base + need);
    if (stop == c.prefix.end()) return kInfCount;
    return static_cast<int>(stop - (c.prefix.begin() + i0));
}

struct Bnb {
    const PruneProblem& P;
    long long budget = 0;
    long long used = 0;
    bool exhausted = false;
    int incumbent = kInfCount;
    long long abandoned_min = kInfCount;
    std::vector<double> residual;
    int active = 0;

    explicit Bnb(const PruneProblem& p) : P(p) {
        residual.assign(P.cons.size(), P.T);
        active = static_cast<int>(P.cons.size());
    }

    int bound(int r) const {
        int b = 0;
        for (std::size_t j = 0; j < P.cons.size(); ++j) {
            if (residual[j] <= 0.0) continue;
            b = std::max(b, knap_count(P.cons[j], r, residual[j]));
            if (b >= kInfCount) return kInfCount;
        }
        return b;
    }

    // Feasible cover, largest marginal residual reduction first; heavier
    // items win ties through the ascending-rank scan.
    int greedy_cover() {
        std::vector<double> res(P.cons.size(), P.T);
        std::vector<char> taken(P.n + 1, 0);
        int count = 0, unmet = static_cast<int>(P.cons.size());
        while (unmet > 0) {
            int best_r = 0;
            double best_gain = 0.0;
            for (int r = 1; r <= P.n; ++r) {
                if (taken[r]) continue;
                double gain = 0.0;
                for (int j : P.member_of[r])
                    if (res[j] > 0.0) gain += std::min(P.rank_w[r - 1], res[j]);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_r = r;
                }
            }
            if (best_r == 0)
                throw OracleMismatch("greedy cover stalled on a feasible system");
            taken[best_r] = 1;
            ++count;
            for (int j : P.member_of[best_r]) {
                if (res[j] > 0.0) {
                    res[j] -= P.rank_w[best_r - 1];
                    if (res[j] <= 0.0) --unmet;
                }
            }
        }
        return count;
    }

    void dfs(int r, int c) {
        ++used;
        if (exhausted || used > budget) {
            exhausted = true;
            const int b = bound(r);
            if (b < kInfCount)
                abandoned_min = std::min(abandoned_min, static_cast<long long>(c) + b);
            return;
        }
        if (active == 0) {
            incumbent = std::min(incumbent, c);
            return;
        }
        const int b = bound(r);
        if (b >= kInfCount || c + b >= incumbent) return;
        while (r <= P.n) {
            bool contributes = false;
            for (int j : P.member_of[r])
                if (residual[j] > 0.0) {
                    contributes = true;
                    break;
                }
            if (contributes) break;
            ++r;
        }
        if (r > P.n) return;  // active constraints but no helpful item left

        const double w = P.rank_w[r - 1];
        std::vector<int> crossed;
        for (int j : P.member_of[r]) {
            if (residual[j] > 0.0) {
                residual[j] -= w;
                if (residual[j] <= 0.0) {
                    --active;
                    crossed.push_back(j);
                }
            } else {
                residual[j] -= w;
            }
        }
        dfs(r + 1, c + 1);
        for (int j : P.member_of[r]) residual[j] += w;
        active += static_cast<int>(crossed.size());
        dfs(r + 1, c);
    }
};

struct PruneOutcome {
    long long count = 0;   // exact min, or a valid lower bound when exhausted
    long long used = 0;    // budget consumed
    bool exhausted = false;
};

PruneOutcome solve_prune(const PruneProblem& P, long long budget) {
    PruneOutcome out;
    if (P.T <= 0.0) return out;
    Bnb bnb(P);
    bnb.budget = budget;
    bnb.incumbent = bnb.greedy_cover();
    bnb.dfs(1, 0);
    out.used = bnb.used;
    out.exhausted = bnb.exhausted;
    out.count = bnb.exhausted
                    ? std::min<long long>(bnb.incumbent, bnb.abandoned_min)
                    : bnb.incumbent;
    return out;
}

}  // namespace

WeightOrderLB weight_order_lb(const ExampleView& view, const WeightVector& wv,
                              const std::vector<int>* feature_subset) {
    const int n = static_cast<int>(view.members.size());
    const SearchResult best = exhaustive_stump(view, wv, feature_subset);
    const double E_star = best.error;
    const std::vector<int> feats = considered_features(*view.base, feature_subset);

    WeightOrderLB out;
    out.per_feature_m.assign(view.base->K, 0);
    out.total = n;
    out.per_feature_m[best.stump.k - 1] = n;
    for (int k : feats) {
        if (k == best.stump.k) continue;
        FeatureAssessor fa(k, n, wv.total());
        int m = n;
        AssessItem item;
        for (int r = 1; r <= n; ++r) {
            const int pos = wv.order[r - 1];
            const int member = view.members[pos - 1];
            item.value = view.base->value(member, k);
            item.weight = wv.w[pos - 1];
            item.label = view.base->label(member);
            fa.assess({&item, 1}, r);
            if (fa.lb() >= E_star - kTol) {
                m = r;
                break;
            }
        }
        out.per_feature_m[k - 1] = m;
        out.total += m;
    }
    return out;
}

long long min_prune_set(const ExampleView& view, const WeightVector& wv, int k,
                        double E_star, long long node_budget) {
    const PruneProblem P = build_prune_problem(view, wv, k, E_star);
    const PruneOutcome out = solve_prune(P, node_budget);
    if (out.exhausted)
        throw BoundTimeout("node budget exhausted pruning feature " + std::to_string(k),
                           out.count);
    return out.count;
}

long long exact_lb(const ExampleView& view, const WeightVector& wv,
                   long long node_budget, const std::vector<int>* feature_subset) {
    const int n = static_cast<int>(view.members.size());
    const SearchResult best = exhaustive_stump(view, wv, feature_subset);
    const std::vector<int> feats = considered_features(*view.base, feature_subset);

    long long total = n;
    long long budget_left = node_budget;
    bool timed_out = false;
    for (int k : feats) {
        if (k == best.stump.k) continue;
        const PruneProblem P = build_prune_problem(view, wv, k, best.error);
        if (budget_left <= 0 && P.T > 0.0) timed_out = true;
        if (timed_out) {
            // Root relaxation stays a valid per-feature lower bound.
            total += P.T <= 0.0 ? 0 : Bnb(P).bound(1);
            continue;
        }
        const PruneOutcome out = solve_prune(P, budget_left);
        budget_left -= out.used;
        total += out.count;
        if (out.exhausted) timed_out = true;
    }
    if (timed_out)
        throw BoundTimeout("node budget exhausted; partial bound remains valid", total);
    return total;
}

}  // namespace apb
