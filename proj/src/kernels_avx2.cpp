#include "pinner/kernels.hpp"

#if defined(PINNER_HAVE_AVX2_BUILD)

#include <immintrin.h>

#include <cmath>

// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma;
// nothing here may be called before avx2::supported() has been checked.
//
// pow is built from polynomial exp/log in the Cephes style (~1-2 ulp each).
// The composition amplifies error by |y log x| * eps, which stays below ~1e-13
// relative for every magnitude this library feeds it; blocks containing tiny
// (|z|^2 < 1e-290), huge, or non-finite values are computed with the scalar
// reference instead so edge behavior matches exactly.

namespace pinner::kernels::avx2 {

bool supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

const __m256d kSignMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x8000000000000000LL));
const __m256d kMagic = _mm256_set1_pd(6755399441055744.0);  // 1.5 * 2^52

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(kSignMask, x); }

// Round-to-nearest integer as int64 lanes; valid for |x| < 2^51.
inline __m256i to_i64(__m256d x) {
    const __m256d t = _mm256_add_pd(x, kMagic);
    return _mm256_sub_epi64(_mm256_castpd_si256(t), _mm256_castpd_si256(kMagic));
}

// Exact for integer lanes in (-2^51, 2^51).
inline __m256d to_f64(__m256i x) {
    const __m256i t = _mm256_add_epi64(x, _mm256_castpd_si256(kMagic));
    return _mm256_sub_pd(_mm256_castsi256_pd(t), kMagic);
}

// 2^n for integer lanes n in [-1022, 1023] via the exponent field.
inline __m256d pow2i(__m256i n) {
    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n, _mm256_set1_epi64x(1023)), 52);
    return _mm256_castsi256_pd(bits);
}

// exp on 4 lanes. Finite double inputs; overflow -> inf, deep underflow -> 0.
inline __m256d vexp(__m256d x) {
    const __m256d max_x = _mm256_set1_pd(709.782712893383996843);
    const __m256d min_x = _mm256_set1_pd(-745.133219101941108420);
    const __m256d over = _mm256_cmp_pd(x, max_x, _CMP_GT_OQ);
    const __m256d under = _mm256_cmp_pd(x, min_x, _CMP_LT_OQ);
    x = _mm256_min_pd(_mm256_max_pd(x, min_x), max_x);

    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d n = _mm256_round_pd(_mm256_fmadd_pd(x, log2e, _mm256_set1_pd(0.5)),
                                      _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
    // x -= n*ln2, split high/low for an exact reduction.
    x = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125e-1), x);
    x = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212e-6), x);

    const __m256d xx = _mm256_mul_pd(x, x);
    __m256d px = _mm256_set1_pd(1.26177193074810590878e-4);
    px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(3.02994407707441961300e-2));
    px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910e-1));
    px = _mm256_mul_pd(px, x);
    __m256d qx = _mm256_set1_pd(3.00198505138664455042e-6);
    qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.52448340349684104192e-3));
    qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766e-1));
    qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000005e0));
    __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

    // ldexp(r, n) in two steps so n in [-2044, 2046] is safe (incl. subnormal
    // results, which round through the second multiply). n/2 computed in
    // double math (exact for these small integers).
    const __m256i ni = to_i64(n);
    const __m256d n_half_d = _mm256_round_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)),
                                             _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
    const __m256i i1 = to_i64(n_half_d);
    const __m256i i2 = _mm256_sub_epi64(ni, i1);
    r = _mm256_mul_pd(r, pow2i(i1));
    r = _mm256_mul_pd(r, pow2i(i2));

    r = _mm256_blendv_pd(r, _mm256_set1_pd(HUGE_VAL), over);
    r = _mm256_andnot_pd(under, r);  // underflow lanes -> +0.0
    return r;
}

// log on 4 lanes. Inputs must be normal positive doubles (callers guard).
inline __m256d vlog(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i expo = _mm256_srli_epi64(bits, 52);
    __m256d e = to_f64(_mm256_sub_epi64(expo, _mm256_set1_epi64x(1022)));
    const __m256i mant_bits = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
        _mm256_set1_epi64x(0x3FE0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant_bits);  // in [0.5, 1)

    const __m256d sqrth = _mm256_set1_pd(0.70710678118654752440);
    const __m256d low = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
    e = _mm256_add_pd(e, _mm256_and_pd(low, _mm256_set1_pd(-1.0)));
    const __m256d m2 = _mm256_sub_pd(_mm256_add_pd(m, m), _mm256_set1_pd(1.0));
    const __m256d m1 = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
    x = _mm256_blendv_pd(m1, m2, low);

    __m256d p = _mm256_set1_pd(1.01875663804580931796e-4);
    p = _mm256_fmadd_pd(p, x, _mm256_set1_pd(4.97494994976747001425e-1));
    p = _mm256_fmadd_pd(p, x, _mm256_set1_pd(4.70579119878881725854e0));
    p = _mm256_fmadd_pd(p, x, _mm256_set1_pd(1.44989225341610930846e1));
    p = _mm256_fmadd_pd(p, x, _mm256_set1_pd(1.79368678507819816313e1));
    p = _mm256_fmadd_pd(p, x, _mm256_set1_pd(7.70838733755885391666e0));
    __m256d q = _mm256_add_pd(x, _mm256_set1_pd(1.12873587189167450590e1));
    q = _mm256_fmadd_pd(q, x, _mm256_set1_pd(4.52279145837532221105e1));
    q = _mm256_fmadd_pd(q, x, _mm256_set1_pd(8.29875266912776603211e1));
    q = _mm256_fmadd_pd(q, x, _mm256_set1_pd(7.11544750618563894466e1));
    q = _mm256_fmadd_pd(q, x, _mm256_set1_pd(2.31251620126765340583e1));

    const __m256d z = _mm256_mul_pd(x, x);
    __m256d y = _mm256_mul_pd(_mm256_mul_pd(x, z), _mm256_div_pd(p, q));
    y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
    __m256d r = _mm256_add_pd(x, y);
    r = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
    return r;
}

inline __m256d vpow(__m256d x, double e) {
    return vexp(_mm256_mul_pd(vlog(x), _mm256_set1_pd(e)));
}

// |z|^2 for 4 packed complex (two registers) -> one register, natural order.
inline __m256d mag2_of4(const double* z) {
    const __m256d v0 = _mm256_loadu_pd(z);      // re0 im0 re1 im1
    const __m256d v1 = _mm256_loadu_pd(z + 4);  // re2 im2 re3 im3
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    // hadd yields [m0 m2 m1 m3]; restore index order.
    return _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0));
}

// Lanes safe for the vector log path: 1e-290 <= x <= DBL_MAX.
inline bool all_safe(__m256d x) {
    const __m256d ge = _mm256_cmp_pd(x, _mm256_set1_pd(1e-290), _CMP_GE_OQ);
    const __m256d le = _mm256_cmp_pd(x, _mm256_set1_pd(1.7976931348623157e308), _CMP_LE_OQ);
    return _mm256_movemask_pd(_mm256_and_pd(ge, le)) == 0xF;
}

struct VecCompSum {
    __m256d s = _mm256_setzero_pd();
    __m256d c = _mm256_setzero_pd();

    void add(__m256d x) {
        const __m256d t = _mm256_add_pd(s, x);
        const __m256d big_s = _mm256_cmp_pd(vabs(s), vabs(x), _CMP_GE_OQ);
        const __m256d corr_s = _mm256_add_pd(_mm256_sub_pd(s, t), x);
        const __m256d corr_x = _mm256_add_pd(_mm256_sub_pd(x, t), s);
        c = _mm256_add_pd(c, _mm256_blendv_pd(corr_x, corr_s, big_s));
        s = t;
    }

    // Combine lanes with a scalar Neumaier pass, fixed order.
    double value() const {
        alignas(32) double sv[4], cv[4];
        _mm256_store_pd(sv, s);
        _mm256_store_pd(cv, c);
        double acc = 0.0, comp = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (double x : {sv[i], cv[i]}) {
                const double t = acc + x;
                if (std::abs(acc) >= std::abs(x))
                    comp += (acc - t) + x;
                else
                    comp += (x - t) + acc;
                acc = t;
            }
        }
        return acc + comp;
    }
};

}  // namespace

double abs_pow_sum(const Cplx* a, std::size_t n, double p) {
    const double* d = reinterpret_cast<const double*>(a);
    VecCompSum acc;
    std::size_t i = 0;
    if (p == 2.0) {
        for (; i + 4 <= n; i += 4) acc.add(mag2_of4(d + 2 * i));
    } else {
        const double half_p = 0.5 * p;
        alignas(32) double tmp[4];
        for (; i + 4 <= n; i += 4) {
            const __m256d m2 = mag2_of4(d + 2 * i);
            if (all_safe(m2)) {
                acc.add(vpow(m2, half_p));
            } else {
                for (int k = 0; k < 4; ++k) {
                    const double r = std::abs(a[i + k]);
                    tmp[k] = (r == 0.0) ? 0.0 : std::pow(r, p);
                }
                acc.add(_mm256_load_pd(tmp));
            }
        }
    }
    double total = acc.value();
    // Scalar tail, folded in after the vector part (fixed order).
    double comp = 0.0;
    for (; i < n; ++i) {
        const double r = std::abs(a[i]);
        const double x = (p == 2.0) ? (a[i].real() * a[i].real() + a[i].imag() * a[i].imag())
                                    : ((r == 0.0) ? 0.0 : std::pow(r, p));
        const double t = total + x;
        if (std::abs(total) >= std::abs(x))
            comp += (total - t) + x;
        else
            comp += (x - t) + total;
        total = t;
    }
    return total + comp;
}

void signed_power_map(const Cplx* a, std::size_t n, double s, Cplx* out) {
    if (s == 1.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = std::conj(a[i]);
        return;
    }
    const double* d = reinterpret_cast<const double*>(a);
    double* o = reinterpret_cast<double*>(out);
    const double e = 0.5 * (s - 1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d m2 = mag2_of4(d + 2 * i);
        if (!all_safe(m2)) {
            for (int k = 0; k < 4; ++k) out[i + k] = signed_power(a[i + k], s);
            continue;
        }
        const __m256d f = vpow(m2, e);  // |z|^{s-1} per complex
        const __m256d f01 = _mm256_permute4x64_pd(f, _MM_SHUFFLE(1, 1, 0, 0));
        const __m256d f23 = _mm256_permute4x64_pd(f, _MM_SHUFFLE(3, 3, 2, 2));
        const __m256d conj_mask =
            _mm256_castsi256_pd(_mm256_set_epi64x(0x8000000000000000LL, 0, 0x8000000000000000LL, 0));
        const __m256d z01 = _mm256_xor_pd(_mm256_loadu_pd(d + 2 * i), conj_mask);
        const __m256d z23 = _mm256_xor_pd(_mm256_loadu_pd(d + 2 * i + 4), conj_mask);
        _mm256_storeu_pd(o + 2 * i, _mm256_mul_pd(z01, f01));
        _mm256_storeu_pd(o + 2 * i + 4, _mm256_mul_pd(z23, f23));
    }
    for (; i < n; ++i) out[i] = signed_power(a[i], s);
}

void abs_pow_map(const Cplx* a, std::size_t n, double e, double floor, double* out) {
    const double* d = reinterpret_cast<const double*>(a);
    const __m256d vfloor = _mm256_set1_pd(floor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d m = _mm256_max_pd(_mm256_sqrt_pd(mag2_of4(d + 2 * i)), vfloor);
        if (!all_safe(m)) {
            for (int k = 0; k < 4; ++k)
                out[i + k] = std::pow(std::max(std::abs(a[i + k]), floor), e);
            continue;
        }
        _mm256_storeu_pd(out + i, vpow(m, e));
    }
    for (; i < n; ++i) out[i] = std::pow(std::max(std::abs(a[i]), floor), e);
}

Cplx bilinear_dot(const Cplx* a, const Cplx* b, std::size_t n) {
    const double* da = reinterpret_cast<const double*>(a);
    const double* db = reinterpret_cast<const double*>(b);
    VecCompSum acc;  // lanes: [re, im, re, im]
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(da + 2 * i);
        const __m256d vb = _mm256_loadu_pd(db + 2 * i);
        const __m256d b_re = _mm256_movedup_pd(vb);
        const __m256d b_im = _mm256_permute_pd(vb, 0xF);
        const __m256d a_sw = _mm256_permute_pd(va, 0x5);
        const __m256d prod = _mm256_fmaddsub_pd(va, b_re, _mm256_mul_pd(a_sw, b_im));
        acc.add(prod);
    }
    alignas(32) double sv[4], cv[4];
    _mm256_store_pd(sv, acc.s);
    _mm256_store_pd(cv, acc.c);
    double re = 0.0, re_c = 0.0, im = 0.0, im_c = 0.0;
    auto fold = [](double& s, double& c, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    };
    fold(re, re_c, sv[0]);
    fold(re, re_c, cv[0]);
    fold(re, re_c, sv[2]);
    fold(re, re_c, cv[2]);
    fold(im, im_c, sv[1]);
    fold(im, im_c, cv[1]);
    fold(im, im_c, sv[3]);
    fold(im, im_c, cv[3]);
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        fold(re, re_c, ar * br - ai * bi);
        fold(im, im_c, ar * bi + ai * br);
    }
    return Cplx(re + re_c, im + im_c);
}

void caxpy(Cplx alpha, const Cplx* x, std::size_t n, Cplx* y) {
    const double* dx = reinterpret_cast<const double*>(x);
    double* dy = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(dx + 2 * i);
        const __m256d x_sw = _mm256_permute_pd(vx, 0x5);
        const __m256d prod = _mm256_fmaddsub_pd(vx, ar, _mm256_mul_pd(x_sw, ai));
        _mm256_storeu_pd(dy + 2 * i, _mm256_add_pd(_mm256_loadu_pd(dy + 2 * i), prod));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += Cplx(alpha.real() * xr - alpha.imag() * xi,
                     alpha.real() * xi + alpha.imag() * xr);
    }
}

void raxpy(double alpha, const double* x, std::size_t n, double* y) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace pinner::kernels::avx2

#endif  // PINNER_HAVE_AVX2_BUILD
