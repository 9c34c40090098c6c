#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace apb::kernels {

// Flat array loops shared by the weight update and error accounting.  Each
// has a scalar reference implementation and, on x86-64 with AVX2, a vector
// variant selected once at startup.  Element-wise products are bit-identical
// across variants; reductions may differ by summation order, so their
// equivalence tests use a tolerance proportional to n.

// w[i] *= (correct[i] ? f_correct : f_wrong); returns the post-update sum.
double two_factor_scale_sum(double* w, const std::uint8_t* correct, std::size_t n,
                            double f_correct, double f_wrong);

// w[i] *= f.
void scale(double* w, std::size_t n, double f);

// Sum of w[i] where mask[i] != 0.
double masked_sum(const double* w, const std::uint8_t* mask, std::size_t n);

// Number of positions with a[i] != b[i].
std::size_t mismatch_count(const std::int8_t* a, const std::int8_t* b, std::size_t n);

// "avx2" or "scalar".  Overridable with APB_KERNELS=scalar in the
// environment before first use.
const std::string& active_backend();

namespace detail {

double two_factor_scale_sum_scalar(double* w, const std::uint8_t* correct, std::size_t n,
                                   double f_correct, double f_wrong);
void scale_scalar(double* w, std::size_t n, double f);
double masked_sum_scalar(const double* w, const std::uint8_t* mask, std::size_t n);
std::size_t mismatch_count_scalar(const std::int8_t* a, const std::int8_t* b, std::size_t n);

#if defined(APB_HAVE_AVX2)
double two_factor_scale_sum_avx2(double* w, const std::uint8_t* correct, std::size_t n,
                                 double f_correct, double f_wrong);
void scale_avx2(double* w, std::size_t n, double f);
double masked_sum_avx2(const double* w, const std::uint8_t* mask, std::size_t n);
std::size_t mismatch_count_avx2(const std::int8_t* a, const std::int8_t* b, std::size_t n);
#endif

}  // namespace detail

}  // namespace apb::kernels
