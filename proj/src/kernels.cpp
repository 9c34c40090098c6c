#include "apb/kernels.hpp"

#include <cstdlib>

namespace apb::kernels {

namespace detail {

double two_factor_scale_sum_scalar(double* w, const std::uint8_t* correct, std::size_t n,
                                   double f_correct, double f_wrong) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] *= correct[i] ? f_correct : f_wrong;
        sum += w[i];
    }
    return sum;
}

void scale_scalar(double* w, std::size_t n, double f) {
    for (std::size_t i = 0; i < n; ++i) w[i] *= f;
}

double masked_sum_scalar(const double* w, const std::uint8_t* mask, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) sum += w[i];
    return sum;
}

std::size_t mismatch_count_scalar(const std::int8_t* a, const std::int8_t* b, std::size_t n) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += a[i] != b[i];
    return count;
}

}  // namespace detail

namespace {

struct Dispatch {
    decltype(&detail::two_factor_scale_sum_scalar) two_factor_scale_sum;
    decltype(&detail::scale_scalar) scale;
    decltype(&detail::masked_sum_scalar) masked_sum;
    decltype(&detail::mismatch_count_scalar) mismatch_count;
    std::string backend;
};

Dispatch select() {
    Dispatch d{detail::two_factor_scale_sum_scalar, detail::scale_scalar,
               detail::masked_sum_scalar, detail::mismatch_count_scalar, "scalar"};
#if defined(APB_HAVE_AVX2)
    const char* env = std::getenv("APB_KERNELS");
    bool force_scalar = env && std::string(env) == "scalar";
    if (!force_scalar && __builtin_cpu_supports("avx2")) {
        d = {detail::two_factor_scale_sum_avx2, detail::scale_avx2, detail::masked_sum_avx2,
             detail::mismatch_count_avx2, "avx2"};
    }
#endif
    return d;
}

const Dispatch& dispatch() {
    static const Dispatch d = select();
    return d;
}

}  // namespace

double two_factor_scale_sum(double* w, const std::uint8_t* correct, std::size_t n,
                            double f_correct, double f_wrong) {
    return dispatch().two_factor_scale_sum(w, correct, n, f_correct, f_wrong);
}

void scale(double* w, std::size_t n, double f) { dispatch().scale(w, n, f); }

double masked_sum(const double* w, const std::uint8_t* mask, std::size_t n) {
    return dispatch().masked_sum(w, mask, n);
}

std::size_t mismatch_count(const std::int8_t* a, const std::int8_t* b, std::size_t n) {
    return dispatch().mismatch_count(a, b, n);
}

const std::string& active_backend() { return dispatch().backend; }

}  // namespace apb::kernels
