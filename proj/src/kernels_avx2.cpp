// AVX2 variants of the flat-array kernels.  Compiled with -mavx2 in a
// separate translation unit; callers reach them only through the runtime
// dispatch, which checks cpu support first.

#include <immintrin.h>

#include "apb/kernels.hpp"

namespace apb::kernels::detail {

double two_factor_scale_sum_avx2(double* w, const std::uint8_t* correct, std::size_t n,
                                 double f_correct, double f_wrong) {
    const __m256d fc = _mm256_set1_pd(f_correct);
    const __m256d fw = _mm256_set1_pd(f_wrong);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // Per-lane factor choice; the products match the scalar path exactly.
        __m256d mask = _mm256_setr_pd(correct[i] ? -1.0 : 0.0, correct[i + 1] ? -1.0 : 0.0,
                                      correct[i + 2] ? -1.0 : 0.0, correct[i + 3] ? -1.0 : 0.0);
        __m256d f = _mm256_blendv_pd(fw, fc, mask);
        __m256d v = _mm256_mul_pd(_mm256_loadu_pd(w + i), f);
        _mm256_storeu_pd(w + i, v);
        acc = _mm256_add_pd(acc, v);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        w[i] *= correct[i] ? f_correct : f_wrong;
        sum += w[i];
    }
    return sum;
}

void scale_avx2(double* w, std::size_t n, double f) {
    const __m256d vf = _mm256_set1_pd(f);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(w + i, _mm256_mul_pd(_mm256_loadu_pd(w + i), vf));
    for (; i < n; ++i) w[i] *= f;
}

double masked_sum_avx2(const double* w, const std::uint8_t* mask, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d keep = _mm256_castsi256_pd(
            _mm256_setr_epi64x(mask[i] ? -1 : 0, mask[i + 1] ? -1 : 0,
                               mask[i + 2] ? -1 : 0, mask[i + 3] ? -1 : 0));
        __m256d v = _mm256_and_pd(_mm256_loadu_pd(w + i), keep);
        acc = _mm256_add_pd(acc, v);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i)
        if (mask[i]) sum += w[i];
    return sum;
}

std::size_t mismatch_count_avx2(const std::int8_t* a, const std::int8_t* b, std::size_t n) {
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i eq = _mm256_cmpeq_epi8(va, vb);
        unsigned bits = static_cast<unsigned>(_mm256_movemask_epi8(eq));
        count += 32u - static_cast<unsigned>(__builtin_popcount(bits));
    }
    for (; i < n; ++i) count += a[i] != b[i];
    return count;
}

}  // namespace apb::kernels::detail
