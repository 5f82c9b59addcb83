// AVX2 variants of the vector kernels. exp/log use the classic Cephes
// rational approximations (~1-2 ulp over the double range), evaluated
// branch-free on 4 lanes. This translation unit is compiled with
// -mavx2 -mfma; whether it is *used* is decided at runtime via CPUID.

#include "spbm/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>
#include <cstdint>
#include <cstring>

namespace spbm::kernels {
namespace {

constexpr double kExpHi = 709.782712893383996843;  // log(DBL_MAX)
constexpr double kExpLo = -708.396418532264106224; // log(DBL_MIN), normals

constexpr double kLog2E = 1.4426950408889634073599;
constexpr double kExpC1 = 6.93145751953125e-1;
constexpr double kExpC2 = 1.42860682030941723212e-6;

constexpr double kExpP0 = 1.26177193074810590878e-4;
constexpr double kExpP1 = 3.02994407707441961300e-2;
constexpr double kExpP2 = 9.99999999999999999910e-1;
constexpr double kExpQ0 = 3.00198505138664455042e-6;
constexpr double kExpQ1 = 2.52448340349684104192e-3;
constexpr double kExpQ2 = 2.27265548208155028766e-1;
constexpr double kExpQ3 = 2.00000000000000000005e0;

constexpr double kSqrtHalf = 0.70710678118654752440;
constexpr double kLogP0 = 1.01875663804580931796e-4;
constexpr double kLogP1 = 4.97494994976747001425e-1;
constexpr double kLogP2 = 4.70579119878881725854e0;
constexpr double kLogP3 = 1.44989225341610930846e1;
constexpr double kLogP4 = 1.79368678507819816313e1;
constexpr double kLogP5 = 7.70838733755885391666e0;
constexpr double kLogQ0 = 1.12873587189167450590e1;
constexpr double kLogQ1 = 4.52279145837532221105e1;
constexpr double kLogQ2 = 8.29875266912776603211e1;
constexpr double kLogQ3 = 7.11544750618563894466e1;
constexpr double kLogQ4 = 2.31251620126765340583e1;
constexpr double kLn2Lo = 2.121944400546905827679e-4;
constexpr double kLn2Hi = 0.693359375;

constexpr double kDblMin = 2.2250738585072014e-308;

inline __m256d pow2i(__m256d w) {
    // 2^w for integral w in [-538, 513]; biased exponent stays normal.
    __m128i i32 = _mm256_cvtpd_epi32(w);
    __m256i i64 = _mm256_cvtepi32_epi64(i32);
    __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(i64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_castsi256_pd(bits);
}

inline __m256d expd4(__m256d x0) {
    const __m256d hi = _mm256_set1_pd(kExpHi);
    const __m256d lo = _mm256_set1_pd(kExpLo);
    __m256d x = _mm256_min_pd(_mm256_max_pd(x0, lo), hi);

    __m256d w = _mm256_floor_pd(_mm256_fmadd_pd(x, _mm256_set1_pd(kLog2E),
                                                _mm256_set1_pd(0.5)));
    x = _mm256_fnmadd_pd(w, _mm256_set1_pd(kExpC1), x);
    x = _mm256_fnmadd_pd(w, _mm256_set1_pd(kExpC2), x);

    __m256d xx = _mm256_mul_pd(x, x);
    __m256d px = _mm256_fmadd_pd(_mm256_set1_pd(kExpP0), xx, _mm256_set1_pd(kExpP1));
    px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(kExpP2));
    px = _mm256_mul_pd(px, x);
    __m256d qx = _mm256_fmadd_pd(_mm256_set1_pd(kExpQ0), xx, _mm256_set1_pd(kExpQ1));
    qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(kExpQ2));
    qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(kExpQ3));
    __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

    // scale by 2^w in two steps so the factors stay representable
    __m256d w1 = _mm256_round_pd(_mm256_mul_pd(w, _mm256_set1_pd(0.5)),
                                 _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
    __m256d w2 = _mm256_sub_pd(w, w1);
    r = _mm256_mul_pd(_mm256_mul_pd(r, pow2i(w1)), pow2i(w2));

    __m256d inf = _mm256_set1_pd(__builtin_inf());
    r = _mm256_blendv_pd(r, inf, _mm256_cmp_pd(x0, hi, _CMP_GT_OQ));
    r = _mm256_blendv_pd(r, _mm256_setzero_pd(), _mm256_cmp_pd(x0, lo, _CMP_LT_OQ));
    r = _mm256_blendv_pd(r, x0, _mm256_cmp_pd(x0, x0, _CMP_UNORD_Q));
    return r;
}

inline __m256d logd4(__m256d x0) {
    // flush denormal inputs up into the normal range first
    __m256d denorm = _mm256_and_pd(_mm256_cmp_pd(x0, _mm256_set1_pd(kDblMin), _CMP_LT_OQ),
                                   _mm256_cmp_pd(x0, _mm256_setzero_pd(), _CMP_GT_OQ));
    __m256d xs = _mm256_blendv_pd(x0, _mm256_mul_pd(x0, _mm256_set1_pd(0x1p54)), denorm);
    __m256d eoff = _mm256_and_pd(denorm, _mm256_set1_pd(-54.0));

    __m256i bits = _mm256_castpd_si256(xs);
    __m256i ebias = _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7FF));
    __m256i e64 = _mm256_sub_epi64(ebias, _mm256_set1_epi64x(1022));
    __m256i mbits = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
        _mm256_set1_epi64x(0x3FE0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mbits); // in [0.5, 1)

    // int64 lanes -> double (values are tiny, low halves suffice)
    __m256i lo32 = _mm256_permutevar8x32_epi32(e64, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
    __m256d e = _mm256_cvtepi32_pd(_mm256_castsi256_si128(lo32));
    e = _mm256_add_pd(e, eoff);

    __m256d ltsq = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrtHalf), _CMP_LT_OQ);
    e = _mm256_sub_pd(e, _mm256_and_pd(ltsq, _mm256_set1_pd(1.0)));
    __m256d m2 = _mm256_fmadd_pd(m, _mm256_set1_pd(2.0), _mm256_set1_pd(-1.0));
    __m256d m1 = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
    m = _mm256_blendv_pd(m1, m2, ltsq);

    __m256d z = _mm256_mul_pd(m, m);
    __m256d p = _mm256_fmadd_pd(_mm256_set1_pd(kLogP0), m, _mm256_set1_pd(kLogP1));
    p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(kLogP2));
    p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(kLogP3));
    p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(kLogP4));
    p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(kLogP5));
    __m256d q = _mm256_add_pd(m, _mm256_set1_pd(kLogQ0));
    q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(kLogQ1));
    q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(kLogQ2));
    q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(kLogQ3));
    q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(kLogQ4));

    __m256d y = _mm256_mul_pd(_mm256_mul_pd(m, z), _mm256_div_pd(p, q));
    y = _mm256_fnmadd_pd(e, _mm256_set1_pd(kLn2Lo), y);
    y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
    __m256d r = _mm256_add_pd(m, y);
    r = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), r);

    __m256d neginf = _mm256_set1_pd(-__builtin_inf());
    __m256d nan = _mm256_set1_pd(__builtin_nan(""));
    r = _mm256_blendv_pd(r, neginf,
                         _mm256_cmp_pd(x0, _mm256_setzero_pd(), _CMP_EQ_OQ));
    r = _mm256_blendv_pd(r, nan, _mm256_cmp_pd(x0, _mm256_setzero_pd(), _CMP_LT_OQ));
    r = _mm256_blendv_pd(r, x0, _mm256_cmp_pd(x0, _mm256_set1_pd(__builtin_inf()), _CMP_EQ_OQ));
    r = _mm256_blendv_pd(r, x0, _mm256_cmp_pd(x0, x0, _CMP_UNORD_Q));
    return r;
}

inline __m256d load_tail(const double* x, std::size_t rem, double fill) {
    alignas(32) double buf[4] = {fill, fill, fill, fill};
    std::memcpy(buf, x, rem * sizeof(double));
    return _mm256_load_pd(buf);
}

inline void store_tail(double* y, std::size_t rem, __m256d v) {
    alignas(32) double buf[4];
    _mm256_store_pd(buf, v);
    std::memcpy(y, buf, rem * sizeof(double));
}

void exp_avx2(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, expd4(_mm256_loadu_pd(x + i)));
    if (i < n) store_tail(y + i, n - i, expd4(load_tail(x + i, n - i, 0.0)));
}

void log_avx2(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, logd4(_mm256_loadu_pd(x + i)));
    if (i < n) store_tail(y + i, n - i, logd4(load_tail(x + i, n - i, 1.0)));
}

void pow_avx2(const double* x, double* y, std::size_t n, double e) {
    const __m256d ev = _mm256_set1_pd(e);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = logd4(_mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, expd4(_mm256_mul_pd(v, ev)));
    }
    if (i < n) {
        __m256d v = logd4(load_tail(x + i, n - i, 1.0));
        store_tail(y + i, n - i, expd4(_mm256_mul_pd(v, ev)));
    }
}

double pow_sum_avx2(const double* x, std::size_t n, double e) {
    const __m256d ev = _mm256_set1_pd(e);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // zeros pass through log->-inf, exp->0, so they contribute nothing
        __m256d v = expd4(_mm256_mul_pd(logd4(_mm256_loadu_pd(x + i)), ev));
        acc = _mm256_add_pd(acc, v);
    }
    if (i < n) {
        __m256d v = expd4(_mm256_mul_pd(logd4(load_tail(x + i, n - i, 0.0)), ev));
        acc = _mm256_add_pd(acc, v);
    }
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    return (buf[0] + buf[1]) + (buf[2] + buf[3]);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    double s = (buf[0] + buf[1]) + (buf[2] + buf[3]);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

} // namespace

const Ops* avx2() {
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma"))
        return nullptr;
    static const Ops ops{"avx2", exp_avx2, log_avx2, pow_avx2,
                         pow_sum_avx2, dot_avx2};
    return &ops;
}

} // namespace spbm::kernels

#else // no AVX2 at compile time

namespace spbm::kernels {
const Ops* avx2() { return nullptr; }
} // namespace spbm::kernels

#endif
