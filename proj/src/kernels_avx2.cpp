// AVX2 kernel variants. This translation unit is compiled with -mavx2; the
// dispatcher only routes here after a cpuid check.
#include "coflow/kernels.hpp"

#if defined(COFLOW_HAVE_AVX2)

#include <immintrin.h>

#include <limits>

namespace coflow::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_min_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Inclusive prefix scan of the 4 lanes: [a,b,c,d] -> [a,a+b,a+b+c,a+b+c+d].
inline __m256d inclusive_scan(__m256d v) {
    const __m256d zero = _mm256_setzero_pd();
    __m256d shift1 = _mm256_permute4x64_pd(v, _MM_SHUFFLE(2, 1, 0, 0));
    shift1 = _mm256_blend_pd(shift1, zero, 0x1);
    const __m256d t1 = _mm256_add_pd(v, shift1);
    const __m256d shift2 = _mm256_permute2f128_pd(t1, t1, 0x08);
    return _mm256_add_pd(t1, shift2);
}

}  // namespace

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_sq_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

double max_val_avx2(const double* x, std::size_t n) {
    const double ninf = -std::numeric_limits<double>::infinity();
    __m256d acc = _mm256_set1_pd(ninf);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    double best = n >= 4 ? hmax(acc) : ninf;
    for (; i < n; ++i)
        if (x[i] > best) best = x[i];
    return best;
}

double scaled_prefix_max_avx2(const double* x, const double* s, std::size_t n) {
    __m256d best = _mm256_setzero_pd();
    __m256d carry = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d scan = inclusive_scan(_mm256_loadu_pd(x + i));
        const __m256d prefix = _mm256_add_pd(scan, carry);
        best = _mm256_max_pd(best, _mm256_mul_pd(_mm256_loadu_pd(s + i), prefix));
        carry = _mm256_permute4x64_pd(prefix, _MM_SHUFFLE(3, 3, 3, 3));
    }
    double acc = _mm_cvtsd_f64(_mm256_castpd256_pd128(carry));
    double out = n >= 4 ? hmax(best) : 0.0;
    for (; i < n; ++i) {
        acc += x[i];
        const double z = s[i] * acc;
        if (z > out) out = z;
    }
    return out;
}

double min_prefix_slack_avx2(const double* x, const double* d, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    __m256d worst = _mm256_set1_pd(inf);
    __m256d carry = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d scan = inclusive_scan(_mm256_loadu_pd(x + i));
        const __m256d prefix = _mm256_add_pd(scan, carry);
        worst = _mm256_min_pd(worst, _mm256_sub_pd(_mm256_loadu_pd(d + i), prefix));
        carry = _mm256_permute4x64_pd(prefix, _MM_SHUFFLE(3, 3, 3, 3));
    }
    double acc = _mm_cvtsd_f64(_mm256_castpd256_pd128(carry));
    double out = n >= 4 ? hmin(worst) : inf;
    for (; i < n; ++i) {
        acc += x[i];
        const double slack = d[i] - acc;
        if (slack < out) out = slack;
    }
    return out;
}

}  // namespace coflow::kernels::detail

#endif  // COFLOW_HAVE_AVX2
