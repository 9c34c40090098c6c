#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "apb/weights.hpp"
#include "doctest.h"

using namespace apb;

namespace {

// Reference ordering: full sort by (weight desc, item asc).
std::vector<int> full_sort_order(const std::vector<double>& w) {
    std::vector<int> order(w.size());
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (w[a - 1] != w[b - 1]) return w[a - 1] > w[b - 1];
        return a < b;
    });
    return order;
}

}  // namespace

TEST_SUITE("weights") {
    TEST_CASE("make_weights sorts descending with ascending-index ties") {
        WeightVector wv = make_weights({0.3, 0.4, 0.1, 0.2});
        CHECK(wv.order == std::vector<int>{2, 1, 4, 3});
        CHECK(wv.Z[0] == 0.0);
        CHECK(wv.Z[1] == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(wv.Z[4] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(wv.weight_of_rank(1) == 0.4);

        WeightVector tied = make_weights({0.5, 0.2, 0.5, 0.2});
        CHECK(tied.order == std::vector<int>{1, 3, 2, 4});
    }

    TEST_CASE("normalize scales to unit total and rejects zero mass") {
        WeightVector wv = make_weights({2.0, 6.0});
        normalize(wv);
        CHECK(wv.total() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(wv.w[1] == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(wv.order == std::vector<int>{2, 1});

        WeightVector zero = make_weights({0.0, 0.0});
        CHECK_THROWS_AS(normalize(zero), DegenerateWeights);
    }

    TEST_CASE("prefix_index finds the minimal covering prefix") {
        WeightVector wv = make_uniform_weights(4);
        CHECK(prefix_index(wv, 0.0) == 0);
        CHECK(prefix_index(wv, 0.25) == 1);
        CHECK(prefix_index(wv, 0.26) == 2);
        CHECK(prefix_index(wv, 0.5) == 2);
        CHECK(prefix_index(wv, 1.0) == 4);
        CHECK(prefix_index(wv, 2.0) == 4);  // clamped past the total
    }

    TEST_CASE("merge_reorder equals a full sort, including duplicate weights") {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (int trial = 0; trial < 300; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 40);
            std::vector<double> w(n);
            // Coarse grid weights force many exact ties.
            for (double& x : w) x = (1 + rng() % 4) * 0.125;
            WeightVector wv = make_weights(w);
            std::vector<std::uint8_t> correct(n);
            for (auto& c : correct) c = rng() % 2;
            const double fc = 0.5, fw = 2.0;
            for (int i = 0; i < n; ++i) wv.w[i] *= correct[i] ? fc : fw;
            const std::size_t cmps = merge_reorder(wv, correct);
            CHECK(cmps <= static_cast<std::size_t>(n > 0 ? n - 1 : 0));
            CHECK(wv.order == full_sort_order(wv.w));
            CHECK(wv.Z[n] == doctest::Approx(std::accumulate(wv.w.begin(), wv.w.end(), 0.0))
                                 .epsilon(1e-12));
        }
    }

    TEST_CASE("adaboost_update matches the textbook exponential reweighting") {
        std::mt19937_64 rng(22);
        std::uniform_real_distribution<double> U(0.1, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 30);
            std::vector<double> w0(n);
            for (double& x : w0) x = U(rng);
            WeightVector wv = make_weights(w0);
            normalize(wv);
            std::vector<double> before = wv.w;

            std::vector<std::int8_t> h(n), y(n);
            for (int i = 0; i < n; ++i) {
                h[i] = rng() % 2 ? +1 : -1;
                y[i] = rng() % 2 ? +1 : -1;
            }
            const double alpha = 0.37;
            adaboost_update(wv, h, y, alpha);

            std::vector<double> expect(n);
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                expect[i] = before[i] * std::exp(-alpha * y[i] * h[i]);
                total += expect[i];
            }
            for (int i = 0; i < n; ++i)
                CHECK(wv.w[i] == doctest::Approx(expect[i] / total).epsilon(1e-12));
            CHECK(wv.order == full_sort_order(wv.w));
            CHECK(wv.total() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("uniform weights rank items in index order") {
        WeightVector wv = make_uniform_weights(5);
        CHECK(wv.order == std::vector<int>{1, 2, 3, 4, 5});
        CHECK(wv.total() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(wv.weight_of_rank(3) == doctest::Approx(0.2).epsilon(1e-15));
    }
}
