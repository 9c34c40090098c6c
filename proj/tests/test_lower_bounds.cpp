#include <cmath>
#include <random>
#include <vector>

#include "apb/lower_bounds.hpp"
#include "apb/stump_search.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace apb;

namespace {

constexpr double kTol = 1e-12;

// Mistake sets of every threshold-distinct stump of feature k, as weight
// ranks, derived by direct evaluation.
std::vector<std::vector<int>> mistake_sets(const ExampleView& v, const WeightVector& wv,
                                           int k, int upto_rank) {
    std::vector<double> val;
    std::vector<int> lab;
    for (int r = 1; r <= upto_rank; ++r) {
        const int member = v.members[wv.order[r - 1] - 1];
        val.push_back(v.base->value(member, k));
        lab.push_back(v.base->label(member));
    }
    std::vector<double> his = val;
    std::sort(his.begin(), his.end());
    his.erase(std::unique(his.begin(), his.end()), his.end());
    his.push_back(std::numeric_limits<double>::infinity());
    std::vector<std::vector<int>> sets;
    for (double hi : his) {
        for (int p : {+1, -1}) {
            std::vector<int> s;
            for (int r = 1; r <= upto_rank; ++r) {
                const int pred = val[r - 1] >= hi ? p : -p;
                if (pred != lab[r - 1]) s.push_back(r);
            }
            sets.push_back(std::move(s));
        }
    }
    return sets;
}

// Reference weight-order count for one competitor: smallest m such that
// every stump over the first m examples already carries E* mistake weight.
int scan_all_m(const ExampleView& v, const WeightVector& wv, int k, double E_star) {
    const int n = static_cast<int>(v.members.size());
    const double target = E_star * wv.total() - kTol;
    for (int m = 1; m <= n; ++m) {
        double min_eps = std::numeric_limits<double>::infinity();
        for (const auto& s : mistake_sets(v, wv, k, m)) {
            double eps = 0.0;
            for (int r : s) eps += wv.weight_of_rank(r);
            min_eps = std::min(min_eps, eps);
        }
        if (min_eps >= target) return m;
    }
    return n;
}

// Reference exact count for one competitor: smallest subset cardinality
// meeting every stump's mistake-weight demand, by full enumeration.
int enumerate_min_prune(const ExampleView& v, const WeightVector& wv, int k,
                        double E_star) {
    const int n = static_cast<int>(v.members.size());
    const double target = E_star * wv.total() - kTol;
    if (target <= 0.0) return 0;
    const auto sets = mistake_sets(v, wv, k, n);
    int best = n + 1;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const int c = __builtin_popcount(mask);
        if (c >= best) continue;
        bool ok = true;
        for (const auto& s : sets) {
            double got = 0.0;
            for (int r : s)
                if (mask & (1u << (r - 1))) got += wv.weight_of_rank(r);
            if (got < target) {
                ok = false;
                break;
            }
        }
        if (ok) best = c;
    }
    return best;
}

}  // namespace

TEST_SUITE("lower_bounds") {
    TEST_CASE("hand-checked duplicate-column instance") {
        // Two identical features; weights 0.4/0.3/0.2/0.1; labels +,-,+,-.
        // E* = 0.2 via the stump separating example 3; the duplicate column
        // certifies with only 3 examples because every mistake set fills by
        // rank 3.
        Dataset d = tu::make_dense({+1, -1, +1, -1},
                                   {{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}, {4.0, 4.0}});
        WeightVector wv = make_weights({0.4, 0.3, 0.2, 0.1});
        ExampleView v = ExampleView::full(d);

        const SearchResult best = exhaustive_stump(v, wv);
        CHECK(best.stump.k == 1);  // exact tie broken toward the smaller feature
        CHECK(std::fabs(best.error - 0.2) < 1e-12);

        const WeightOrderLB wo = weight_order_lb(v, wv);
        CHECK(wo.per_feature_m == std::vector<long long>{4, 3});
        CHECK(wo.total == 7);

        CHECK(min_prune_set(v, wv, 2, best.error) == 3);
        CHECK(exact_lb(v, wv) == 7);
    }

    TEST_CASE("perfect winner certifies competitors with one example each") {
        // Feature 1 separates perfectly, so E* = 0 and any single assessed
        // example pushes every competitor stump to the zero bar.
        Dataset d = tu::make_dense({+1, +1, -1},
                                   {{3.0, 0.4}, {2.0, 0.9}, {1.0, 0.6}});
        WeightVector wv = make_uniform_weights(3);
        ExampleView v = ExampleView::full(d);
        const WeightOrderLB wo = weight_order_lb(v, wv);
        CHECK(wo.per_feature_m == std::vector<long long>{3, 1});
        CHECK(wo.total == 4);
        CHECK(exact_lb(v, wv) == 3);  // n + 0: empty subsets suffice
        CHECK(min_prune_set(v, wv, 2, 0.0) == 0);
    }

    TEST_CASE("single feature reduces both bounds to n") {
        std::mt19937_64 rng(71);
        Dataset d = tu::random_dense(rng, 12, 1);
        WeightVector wv = tu::random_weights(rng, 12);
        ExampleView v = ExampleView::full(d);
        CHECK(weight_order_lb(v, wv).total == 12);
        CHECK(exact_lb(v, wv) == 12);
    }

    TEST_CASE("weight-order bound matches the scan-all-m reference") {
        std::mt19937_64 rng(72);
        for (int trial = 0; trial < 60; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 18);
            const int K = 2 + static_cast<int>(rng() % 4);
            Dataset d = (trial % 2) ? tu::random_dense(rng, n, K)
                                    : tu::random_binary(rng, n, K, 0.3);
            WeightVector wv = tu::random_weights(rng, n);
            ExampleView v = ExampleView::full(d);
            const SearchResult best = exhaustive_stump(v, wv);
            const WeightOrderLB wo = weight_order_lb(v, wv);
            long long total = n;
            for (int k = 1; k <= K; ++k) {
                if (k == best.stump.k) {
                    CHECK(wo.per_feature_m[k - 1] == n);
                    continue;
                }
                const int want = scan_all_m(v, wv, k, best.error);
                CHECK(wo.per_feature_m[k - 1] == want);
                total += want;
            }
            CHECK(wo.total == total);
        }
    }

    TEST_CASE("exact bound matches full subset enumeration") {
        std::mt19937_64 rng(73);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 11);  // <= 12 for 2^n scans
            const int K = 2 + static_cast<int>(rng() % 3);
            Dataset d = (trial % 2) ? tu::random_dense(rng, n, K)
                                    : tu::random_binary(rng, n, K, 0.3);
            WeightVector wv = tu::random_weights(rng, n);
            ExampleView v = ExampleView::full(d);
            const SearchResult best = exhaustive_stump(v, wv);
            long long want = n;
            for (int k = 1; k <= K; ++k) {
                if (k == best.stump.k) continue;
                const int ref = enumerate_min_prune(v, wv, k, best.error);
                CHECK(min_prune_set(v, wv, k, best.error) == ref);
                want += ref;
            }
            CHECK(exact_lb(v, wv) == want);
        }
    }

    TEST_CASE("bound chain: n <= exact <= weight-order <= adaptive <= corpus") {
        std::mt19937_64 rng(74);
        for (int trial = 0; trial < 40; ++trial) {
            const int n = 3 + static_cast<int>(rng() % 10);
            const int K = 2 + static_cast<int>(rng() % 4);
            Dataset d = tu::random_binary(rng, n, K, 0.25);
            WeightVector wv = tu::random_weights(rng, n);
            ExampleView v = ExampleView::full(d);
            const long long exact = exact_lb(v, wv);
            const long long wo = weight_order_lb(v, wv).total;
            const long long adaptive = adaptive_pruning_stump(v, wv).assessments;
            CHECK(n <= exact);
            CHECK(exact <= wo);
            CHECK(wo <= adaptive);
            CHECK(adaptive <= static_cast<long long>(n) * K);
        }
    }

    TEST_CASE("feature subsets restrict both bounds") {
        std::mt19937_64 rng(75);
        Dataset d = tu::random_dense(rng, 10, 4);
        WeightVector wv = tu::random_weights(rng, 10);
        ExampleView v = ExampleView::full(d);
        std::vector<int> subset = {2, 4};
        const WeightOrderLB wo = weight_order_lb(v, wv, &subset);
        CHECK(wo.per_feature_m[0] == 0);
        CHECK(wo.per_feature_m[2] == 0);
        const SearchResult best = exhaustive_stump(v, wv, &subset);
        CHECK(wo.per_feature_m[best.stump.k - 1] == 10);
        CHECK(exact_lb(v, wv, 10'000'000, &subset) <= wo.total);
        CHECK(exact_lb(v, wv, 10'000'000, &subset) >= 10);
    }

    TEST_CASE("infeasible demands are reported as oracle mismatches") {
        Dataset d = tu::make_dense({+1, -1, +1, -1},
                                   {{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}, {4.0, 4.0}});
        WeightVector wv = make_weights({0.4, 0.3, 0.2, 0.1});
        ExampleView v = ExampleView::full(d);
        CHECK_THROWS_AS(min_prune_set(v, wv, 2, 0.9), OracleMismatch);
    }

    TEST_CASE("exhausted node budgets yield a timeout with a valid partial") {
        std::mt19937_64 rng(76);
        Dataset d = tu::random_binary(rng, 10, 4, 0.4);
        WeightVector wv = tu::random_weights(rng, 10);
        ExampleView v = ExampleView::full(d);
        const long long truth = exact_lb(v, wv);
        try {
            exact_lb(v, wv, 2);
            // A budget of two nodes can still suffice when E* is zero.
            CHECK(exhaustive_stump(v, wv).error < kTol);
        } catch (const BoundTimeout& e) {
            CHECK(e.partial >= 10);     // never below n
            CHECK(e.partial <= truth);  // still a lower bound on the truth
        }
    }
}
