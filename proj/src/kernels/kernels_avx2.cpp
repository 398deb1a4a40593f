// AVX2+FMA kernel variants.  This translation unit is compiled with
// -mavx2 -mfma on x86-64 only; callers must check avx2_available() before
// selecting these ops.

#include "purity/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cfloat>
#include <cmath>

namespace purity::kernels {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// log2 of four positive normal doubles.  Exponent and mantissa are split
// bitwise; log of the mantissa uses the atanh series in z = (m-1)/(m+1),
// which converges fast once m is folded into [1/sqrt(2), sqrt(2)).
inline __m256d v_log2(__m256d x) {
    const __m256i man_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    const __m256i magic_i  = _mm256_set1_epi64x(0x4330000000000000LL); // 2^52
    const __m256d magic_d  = _mm256_set1_pd(4503599627370496.0);       // 2^52
    const __m256d sqrt2    = _mm256_set1_pd(1.4142135623730951);
    const __m256d half     = _mm256_set1_pd(0.5);
    const __m256d one      = _mm256_set1_pd(1.0);
    const __m256d log2e2   = _mm256_set1_pd(2.0 * 1.4426950408889634);

    __m256i bits = _mm256_castpd_si256(x);
    // biased exponent as double, via the 2^52 offset trick
    __m256i e_i = _mm256_srli_epi64(bits, 52);
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(e_i, magic_i)), magic_d);
    // mantissa in [1, 2)
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, man_mask), one_bits));
    // fold m > sqrt(2) down one octave
    __m256d big = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, half), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, one));
    e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

    __m256d z = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    __m256d w = _mm256_mul_pd(z, z);
    // q(w) = 1 + w/3 + w^2/5 + ... + w^10/21
    __m256d q = _mm256_set1_pd(1.0 / 21.0);
    q = _mm256_fmadd_pd(q, w, _mm256_set1_pd(1.0 / 19.0));
    q = _mm256_fmadd_pd(q, w, _mm256_set1_pd(1.0 / 17.0));
    q = _mm256_fmadd_pd(q, w, _mm256_set1_pd(1.0 / 15.0));
    q = _mm256_fmadd_pd(q, w, _mm256_set1_pd(1.0 / 13.0));
    q = _mm256_fmadd_pd(q, w, _mm256_set1_pd(1.0 / 11.0));
    q = _mm256_fmadd_pd(q, w, _mm256_set1_pd(1.0 / 9.0));
    q = _mm256_fmadd_pd(q, w, _mm256_set1_pd(1.0 / 7.0));
    q = _mm256_fmadd_pd(q, w, _mm256_set1_pd(1.0 / 5.0));
    q = _mm256_fmadd_pd(q, w, _mm256_set1_pd(1.0 / 3.0));
    q = _mm256_fmadd_pd(q, w, one);
    // log2(x) = e + 2*log2(e)*z*q(w)
    return _mm256_fmadd_pd(_mm256_mul_pd(log2e2, z), q, e);
}

double a_dot(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void a_axpy(double a, const double* x, double* y, std::size_t n) {
    __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double a_sum_neg_xlog2x(const double* x, std::size_t n) {
    const __m256d tiny = _mm256_set1_pd(DBL_MIN);
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d keep = _mm256_cmp_pd(xv, tiny, _CMP_GE_OQ);
        // below-threshold lanes become 1.0, whose x*log2(x) is exactly 0
        __m256d xm = _mm256_blendv_pd(one, xv, keep);
        acc = _mm256_fnmadd_pd(xm, v_log2(xm), acc);
    }
    double out = hsum(acc);
    for (; i < n; ++i) {
        double v = x[i];
        if (v >= DBL_MIN) out -= v * std::log2(v);
    }
    return out;
}

void a_log2_clamped(const double* x, double* out, std::size_t n, double floor) {
    const __m256d fv = _mm256_set1_pd(floor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, v_log2(_mm256_max_pd(_mm256_loadu_pd(x + i), fv)));
    for (; i < n; ++i) out[i] = std::log2(x[i] > floor ? x[i] : floor);
}

void a_axpy_rows(const double* a, const double* x, double* rows,
                 std::size_t m, std::size_t n) {
    for (std::size_t j = 0; j < m; ++j) a_axpy(a[j], x, rows + j * n, n);
}

void a_dot_rows(const double* x, const double* rows, double* out,
                std::size_t m, std::size_t n) {
    for (std::size_t j = 0; j < m; ++j) out[j] = a_dot(x, rows + j * n, n);
}

} // namespace

const Ops& avx2_ops() {
    static const Ops ops{"avx2", a_dot,  a_axpy,     a_sum_neg_xlog2x,
                         a_log2_clamped, a_axpy_rows, a_dot_rows};
    return ops;
}

} // namespace purity::kernels

#else // !(__AVX2__ && __FMA__)

namespace purity::kernels {

// Non-x86 / non-AVX2 build: never selected (avx2_available() is false).
const Ops& avx2_ops() { return scalar_ops(); }

} // namespace purity::kernels

#endif
