#pragma once

#include <utility>
#include <vector>

#include "apb/errors.hpp"

namespace apb {

// Interval bounds on the conditional-entropy split objective when only a
// weight prefix has been assessed.  All logarithms are base 2.  This is a
// standalone calculator: the error-rate search never consults it.

// Seen weight of one leaf broken down by label; zy[y] = Z_u^y.
struct LeafTally {
    std::vector<double> zy;
    double z() const;
};

// Unseen weight totals across all leaves; wy[y] = w^y with labels known but
// leaf destinations unknown.
struct UnseenTally {
    std::vector<double> wy;
    double w() const;
};

// KL(Bernoulli(p) || Bernoulli(q)) in bits, with 0*lg(0/x) := 0.  Requires
// p in [0,1] and q in (0,1), or q in {0,1} with p == q; otherwise the
// divergence is infinite and DivergenceInfinite is thrown.
double kl_bernoulli(double p, double q);

// Bounds on this leaf's term Z_rho * eps_rho of the conditional entropy:
//   lower = Z_u * eps_u = -sum_y Z_u^y lg(Z_u^y / Z_u)
//   upper = lower + w lg|Y| + sum_y (Z_u^y + w^y) lg((Z_u + w) / Z_u^y)
// where the unseen tally is the global one (every leaf could receive all of
// it).  When some label has Z_u^y = 0 with w^y > 0 the displayed upper term
// diverges and the whole upper bound is clamped to min(displayed bound,
// (Z_u + w) lg|Y|), which is always valid.  With no unseen weight the
// interval collapses to the exact value.  Requires |seen| == |unseen|.
std::pair<double, double> leaf_entropy_interval(const LeafTally& seen, const UnseenTally& unseen);

// Sum of per-leaf intervals: bounds on Z_n * eps_n.
std::pair<double, double> conditional_entropy_interval(const std::vector<LeafTally>& leaves,
                                                       const UnseenTally& unseen);

// Residual of the identity
//   (a+b) lg((a+b)/(alpha+beta))
//     = a lg(a/alpha) + b lg(b/beta) - (a+b) KL(B(a/(a+b)) || B(alpha/(alpha+beta)))
// for a, b >= 0, alpha, beta > 0, a + b > 0.  Well-conditioned inputs give
// residuals below 1e-10.
double check_lemma_kl(double a, double b, double alpha, double beta);

// Margin of the per-label KL bound:
//   lg((Z_u + w)/Z_u^y) - KL(B(Z_u^y/Z_rho^y) || B(Z_u/Z_rho)) >= 0.
// Requires 0 < Z_u^y <= Z_u <= Z_rho, Z_u^y <= Z_rho^y <= Z_rho,
// Z_rho - Z_u <= w, and the physical consistency Z_rho^y - Z_u^y <=
// Z_rho - Z_u (unseen label mass cannot exceed unseen mass; the bound is
// false without it).  Throws ArgumentError on violations.
double check_kl_upper_bound(double Zuy, double Zry, double Zu, double Zr, double w);

}  // namespace apb
