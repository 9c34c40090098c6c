#include <cmath>
#include <random>
#include <vector>

#include "apb/infogain.hpp"
#include "doctest.h"

using namespace apb;

namespace {

// Exact entropy mass -sum_y Z^y lg(Z^y / Z) of one label tally.
double entropy_mass(const std::vector<double>& zy) {
    double Z = 0.0;
    for (double v : zy) Z += v;
    if (Z == 0.0) return 0.0;
    double h = 0.0;
    for (double v : zy)
        if (v > 0.0) h += v * std::log2(Z / v);
    return h;
}

}  // namespace

TEST_SUITE("infogain") {
    TEST_CASE("bernoulli divergence: pinned values and edge cases") {
        CHECK(kl_bernoulli(1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(kl_bernoulli(0.5, 0.25) ==
              doctest::Approx(0.2075187496394219).epsilon(1e-13));
        CHECK(kl_bernoulli(0.3, 0.3) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(kl_bernoulli(0.0, 0.0) == 0.0);
        CHECK(kl_bernoulli(1.0, 1.0) == 0.0);
        CHECK(kl_bernoulli(0.0, 0.7) >= 0.0);
        CHECK_THROWS_AS(kl_bernoulli(0.5, 0.0), DivergenceInfinite);
        CHECK_THROWS_AS(kl_bernoulli(0.5, 1.0), DivergenceInfinite);
        CHECK_THROWS_AS(kl_bernoulli(-0.1, 0.5), ArgumentError);
        CHECK_THROWS_AS(kl_bernoulli(0.5, 1.1), ArgumentError);
    }

    TEST_CASE("leaf interval: pinned value and exact collapse without unseen mass") {
        // Balanced leaf: 0.3 lg 2 + 0.3 lg 2 = 0.6.
        const auto [lo, hi] = leaf_entropy_interval({{0.3, 0.3}}, {{0.0, 0.0}});
        CHECK(lo == doctest::Approx(0.6).epsilon(1e-14));
        CHECK(hi == lo);  // collapses exactly

        const auto [l2, h2] = leaf_entropy_interval({{0.5, 0.0}}, {{0.0, 0.0}});
        CHECK(l2 == 0.0);
        CHECK(h2 == 0.0);
    }

    TEST_CASE("zero seen count with unseen mass clamps to the entropy ceiling") {
        const LeafTally seen{{0.0, 0.4}};
        const UnseenTally unseen{{0.2, 0.1}};
        const auto [lo, hi] = leaf_entropy_interval(seen, unseen);
        CHECK(lo == 0.0);
        CHECK(hi == doctest::Approx((0.4 + 0.3) * 1.0).epsilon(1e-14));  // (Z_u+w) lg 2
    }

    TEST_CASE("interval contains the true entropy mass under any unseen split") {
        std::mt19937_64 rng(81);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (int trial = 0; trial < 1000; ++trial) {
            const int leaves = 1 + static_cast<int>(rng() % 4);
            const int labels = 2 + static_cast<int>(rng() % 2);
            const int n = 4 + static_cast<int>(rng() % 40);
            // Items: (leaf, label, weight); a prefix is "seen".
            std::vector<int> leaf_of(n), label_of(n);
            std::vector<double> w(n);
            for (int i = 0; i < n; ++i) {
                leaf_of[i] = static_cast<int>(rng() % leaves);
                label_of[i] = static_cast<int>(rng() % labels);
                w[i] = 0.05 + U(rng);
            }
            const int seen_n = static_cast<int>(rng() % (n + 1));

            std::vector<LeafTally> seen(leaves);
            std::vector<std::vector<double>> full(leaves,
                                                  std::vector<double>(labels, 0.0));
            UnseenTally unseen;
            unseen.wy.assign(labels, 0.0);
            for (int u = 0; u < leaves; ++u) seen[u].zy.assign(labels, 0.0);
            for (int i = 0; i < n; ++i) {
                full[leaf_of[i]][label_of[i]] += w[i];
                if (i < seen_n)
                    seen[leaf_of[i]].zy[label_of[i]] += w[i];
                else
                    unseen.wy[label_of[i]] += w[i];
            }

            double truth = 0.0;
            for (int u = 0; u < leaves; ++u) truth += entropy_mass(full[u]);
            const auto [lo, hi] = conditional_entropy_interval(seen, unseen);
            CHECK(lo <= truth + 1e-9);
            CHECK(hi >= truth - 1e-9);
            CHECK(lo >= -1e-12);
        }
    }

    TEST_CASE("identity residual stays tiny: pinned case and random sweep") {
        CHECK(check_lemma_kl(1.0, 1.0, 2.0, 1.0) <= 1e-10);
        std::mt19937_64 rng(82);
        std::uniform_real_distribution<double> U(1e-3, 10.0);
        for (int trial = 0; trial < 2000; ++trial) {
            const double a = (rng() % 8 == 0) ? 0.0 : U(rng);
            const double b = (a == 0.0) ? U(rng) : ((rng() % 8 == 0) ? 0.0 : U(rng));
            CHECK(check_lemma_kl(a, b, U(rng), U(rng)) <= 1e-10);
        }
        CHECK_THROWS_AS(check_lemma_kl(-1.0, 1.0, 1.0, 1.0), ArgumentError);
        CHECK_THROWS_AS(check_lemma_kl(0.0, 0.0, 1.0, 1.0), ArgumentError);
        CHECK_THROWS_AS(check_lemma_kl(1.0, 1.0, 0.0, 1.0), ArgumentError);
    }

    TEST_CASE("per-label upper-bound margin is non-negative") {
        std::mt19937_64 rng(83);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (int trial = 0; trial < 5000; ++trial) {
            // Physically consistent tuple: start from a full population and
            // carve out a seen part.
            const double Zr = 0.2 + U(rng);
            const double Zry_frac = U(rng);
            const double Zry = Zry_frac * Zr;
            const double Zu = U(rng) * Zr;
            // Z_u^y must fit inside both Z_u and Z_rho^y, and leave
            // Z_rho^y - Z_u^y <= Z_rho - Z_u.
            const double lo_bound = std::max(0.0, Zry - (Zr - Zu));
            const double hi_bound = std::min(Zu, Zry);
            if (hi_bound <= lo_bound + 1e-9) continue;
            const double Zuy = lo_bound + (hi_bound - lo_bound) * (0.01 + 0.98 * U(rng));
            if (Zuy <= 0.0) continue;
            const double w = (Zr - Zu) * (1.0 + U(rng));  // at least the unseen mass
            CHECK(check_kl_upper_bound(Zuy, Zry, Zu, Zr, w) >= -1e-12);
        }
        CHECK_THROWS_AS(check_kl_upper_bound(0.0, 0.5, 0.5, 1.0, 0.5), ArgumentError);
        CHECK_THROWS_AS(check_kl_upper_bound(0.6, 0.5, 0.5, 1.0, 0.5), ArgumentError);
        CHECK_THROWS_AS(check_kl_upper_bound(0.2, 0.5, 0.5, 1.0, 0.1), ArgumentError);
        // Violating unseen-mass consistency is rejected rather than evaluated.
        CHECK_THROWS_AS(check_kl_upper_bound(0.1, 0.9, 0.5, 1.0, 0.6), ArgumentError);
    }

    TEST_CASE("tally helpers sum their components") {
        CHECK(LeafTally{{0.2, 0.3, 0.1}}.z() == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(UnseenTally{{0.25, 0.5}}.w() == doctest::Approx(0.75).epsilon(1e-15));
        CHECK_THROWS_AS(leaf_entropy_interval({{0.1}}, {{0.1, 0.2}}), ArgumentError);
        CHECK_THROWS_AS(leaf_entropy_interval({{-0.1, 0.2}}, {{0.0, 0.0}}), ArgumentError);
    }
}
