#include "apb/infogain.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace apb {
namespace {

// x * lg(num / den) with the 0 * lg(0 / x) := 0 convention.
double xlg_ratio(double x, double num, double den) {
    if (x == 0.0) return 0.0;
    return x * std::log2(num / den);
}

void require(bool ok, const char* what) {
    if (!ok) throw ArgumentError(std::string("entropy bound precondition failed: ") + what);
}

}  // namespace

double LeafTally::z() const {
    double s = 0.0;
    for (double v : zy) s += v;
    return s;
}

double UnseenTally::w() const {
    double s = 0.0;
    for (double v : wy) s += v;
    return s;
}

double kl_bernoulli(double p, double q) {
    require(p >= 0.0 && p <= 1.0, "p in [0,1]");
    require(q >= 0.0 && q <= 1.0, "q in [0,1]");
    if (q == 0.0 || q == 1.0) {
        if (p == q) return 0.0;
        throw DivergenceInfinite("KL(B(p)||B(q)) with q in {0,1} and p != q");
    }
    return xlg_ratio(p, p, q) + xlg_ratio(1.0 - p, 1.0 - p, 1.0 - q);
}

std::pair<double, double> leaf_entropy_interval(const LeafTally& seen,
                                                const UnseenTally& unseen) {
    const std::size_t labels = seen.zy.size();
    require(labels >= 1, "at least one label");
    require(unseen.wy.size() == labels, "matching label arity");
    for (double v : seen.zy) require(v >= 0.0, "non-negative seen weight");
    for (double v : unseen.wy) require(v >= 0.0, "non-negative unseen weight");

    const double Zu = seen.z();
    const double w = unseen.w();
    const double lgY = std::log2(static_cast<double>(labels));

    double lower = 0.0;  // Z_u * eps_u, the fully-seen entropy mass
    for (double zuy : seen.zy) lower += xlg_ratio(zuy, Zu, zuy);
    if (w == 0.0) return {lower, lower};

    bool divergent = false;
    double upper = lower + w * lgY;
    for (std::size_t y = 0; y < labels; ++y) {
        const double zuy = seen.zy[y];
        const double mass = zuy + unseen.wy[y];
        if (zuy == 0.0) {
            if (mass > 0.0) divergent = true;  // lg((Z_u+w)/0) has no finite value
            continue;
        }
        upper += mass * std::log2((Zu + w) / zuy);
    }
    if (divergent) upper = (Zu + w) * lgY;  // entropy can never exceed lg|Y|
    return {lower, upper};
}

std::pair<double, double> conditional_entropy_interval(const std::vector<LeafTally>& leaves,
                                                       const UnseenTally& unseen) {
    double lo = 0.0, hi = 0.0;
    for (const LeafTally& leaf : leaves) {
        const auto [l, u] = leaf_entropy_interval(leaf, unseen);
        lo += l;
        hi += u;
    }
    return {lo, hi};
}

double check_lemma_kl(double a, double b, double alpha, double beta) {
    require(a >= 0.0 && b >= 0.0, "a, b >= 0");
    require(alpha > 0.0 && beta > 0.0, "alpha, beta > 0");
    require(a + b > 0.0, "a + b > 0");
    const double lhs = (a + b) * std::log2((a + b) / (alpha + beta));
    const double rhs = xlg_ratio(a, a, alpha) + xlg_ratio(b, b, beta) -
                       (a + b) * kl_bernoulli(a / (a + b), alpha / (alpha + beta));
    return std::fabs(lhs - rhs);
}

double check_kl_upper_bound(double Zuy, double Zry, double Zu, double Zr, double w) {
    require(Zuy > 0.0, "Z_u^y > 0");
    require(Zuy <= Zu && Zu <= Zr, "Z_u^y <= Z_u <= Z_rho");
    require(Zuy <= Zry && Zry <= Zr, "Z_u^y <= Z_rho^y <= Z_rho");
    require(Zr - Zu <= w, "Z_rho - Z_u <= w");
    require(Zry - Zuy <= Zr - Zu, "unseen label mass within unseen mass");
    return std::log2((Zu + w) / Zuy) - kl_bernoulli(Zuy / Zry, Zu / Zr);
}

}  // namespace apb
