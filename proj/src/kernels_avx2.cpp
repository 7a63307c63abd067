// AVX2 + FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; nothing here may run before the CPUID check in
// kernels_dispatch.cpp has confirmed support.

#include "qa/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace qa::kernels {
namespace {

inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// [d0, d1] -> [d0, d0, d1, d1]
inline __m256d dup_pairs(const double* d) {
    const __m256d x = _mm256_castpd128_pd256(_mm_loadu_pd(d));
    return _mm256_permute4x64_pd(x, 0b01010000);
}

// (a + ib) * (c + id) for interleaved a+ib, broadcast-per-complex c and d.
inline __m256d cmul_split(__m256d x, __m256d c, __m256d d) {
    return _mm256_fmaddsub_pd(x, c, _mm256_mul_pd(swap_pairs(x), d));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// sin/cos of four lanes. Cody-Waite reduction modulo pi/2 followed by the
// Cephes minimax polynomials on [-pi/4, pi/4]. Accurate to a few ulp for
// |x| below ~1e8.
inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
    const __m256d two_over_pi = _mm256_set1_pd(0.63661977236758134308);
    const __m256d p1 = _mm256_set1_pd(1.57079625129699707031e0);
    const __m256d p2 = _mm256_set1_pd(7.54978941586159635336e-8);
    const __m256d p3 = _mm256_set1_pd(5.39030285815811905290e-15);

    const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(q, p1, x);
    r = _mm256_fnmadd_pd(q, p2, r);
    r = _mm256_fnmadd_pd(q, p3, r);
    const __m256d z = _mm256_mul_pd(r, r);

    __m256d ps = _mm256_set1_pd(1.58962301576546568060e-10);
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-2.50507477628578072866e-8));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(2.75573136213857245213e-6));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.98412698295895385996e-4));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(8.33333333332211858878e-3));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.66666666666666307295e-1));
    const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(ps, z), r, r);

    __m256d pc = _mm256_set1_pd(-1.13585365213876817300e-11);
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.08757008419747316778e-9));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-2.75573141792967388112e-7));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.48015872888517045348e-5));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.38888888888730564116e-3));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(4.16666666666665929218e-2));
    const __m256d cos_r = _mm256_fmadd_pd(_mm256_mul_pd(pc, z), z,
                                          _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

    const __m256i quad = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(q));
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i two = _mm256_set1_epi64x(2);
    const __m256i bit0 = _mm256_and_si256(quad, one);
    const __m256i bit1 = _mm256_and_si256(quad, two);
    const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(bit0, one));
    const __m256d sin_neg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(bit1, two));
    const __m256d cos_neg =
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_xor_si256(bit0, _mm256_srli_epi64(bit1, 1)), one));

    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d s = _mm256_blendv_pd(sin_r, cos_r, swap);
    const __m256d c = _mm256_blendv_pd(cos_r, sin_r, swap);
    s_out = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, sign));
    c_out = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign));
}

void fwht_avx2(double* data, std::size_t n) {
    if (n < 8) {
        scalar_table().fwht(data, n);
        return;
    }
    // Levels with half = 1 and half = 2 stay inside one register.
    for (std::size_t j = 0; j < n; j += 4) {
        __m256d v = _mm256_loadu_pd(data + j);
        __m256d s = swap_pairs(v);
        v = _mm256_blend_pd(_mm256_add_pd(v, s), _mm256_sub_pd(s, v), 0b1010);
        s = _mm256_permute2f128_pd(v, v, 1);
        v = _mm256_blend_pd(_mm256_add_pd(v, s), _mm256_sub_pd(s, v), 0b1100);
        _mm256_storeu_pd(data + j, v);
    }
    for (std::size_t half = 4; half < n; half <<= 1) {
        for (std::size_t base = 0; base < n; base += 2 * half) {
            double* lo = data + base;
            double* hi = lo + half;
            for (std::size_t j = 0; j < half; j += 4) {
                const __m256d a = _mm256_loadu_pd(lo + j);
                const __m256d b = _mm256_loadu_pd(hi + j);
                _mm256_storeu_pd(lo + j, _mm256_add_pd(a, b));
                _mm256_storeu_pd(hi + j, _mm256_sub_pd(a, b));
            }
        }
    }
}

cplx dot_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const auto* ad = reinterpret_cast<const double*>(a);
    const auto* bd = reinterpret_cast<const double*>(b);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d x = _mm256_loadu_pd(ad + 2 * k);
        const __m256d y = _mm256_loadu_pd(bd + 2 * k);
        acc_re = _mm256_fmadd_pd(x, y, acc_re);
        acc_im = _mm256_fmadd_pd(x, swap_pairs(y), acc_im);
    }
    alignas(32) double re[4];
    _mm256_store_pd(re, acc_re);
    double sr = (re[0] + re[2]) - (re[1] + re[3]);
    double si = hsum(acc_im);
    for (; k < n; ++k) {
        sr += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
        si += a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
    }
    return {sr, si};
}

double norm2_avx2(const cplx* a, std::size_t n) {
    const auto* ad = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d x = _mm256_loadu_pd(ad + 2 * k);
        acc = _mm256_fmadd_pd(x, x, acc);
    }
    double s = hsum(acc);
    for (; k < n; ++k) {
        s += std::norm(a[k]);
    }
    return s;
}

void phase_weights_avx2(const double* energy, double t, const cplx* u, cplx* w, std::size_t n) {
    const auto* ud = reinterpret_cast<const double*>(u);
    auto* wd = reinterpret_cast<double*>(w);
    const __m256d tv = _mm256_set1_pd(t);
    const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d s;
        __m256d c;
        sincos4(_mm256_mul_pd(_mm256_loadu_pd(energy + k), tv), s, c);
        const __m256d ms = _mm256_xor_pd(s, _mm256_set1_pd(-0.0));
        const __m256d c_lo = _mm256_permute4x64_pd(c, 0b01010000);
        const __m256d c_hi = _mm256_permute4x64_pd(c, 0b11111010);
        const __m256d s_lo = _mm256_permute4x64_pd(ms, 0b01010000);
        const __m256d s_hi = _mm256_permute4x64_pd(ms, 0b11111010);
        const __m256d u_lo = _mm256_xor_pd(_mm256_loadu_pd(ud + 2 * k), conj_mask);
        const __m256d u_hi = _mm256_xor_pd(_mm256_loadu_pd(ud + 2 * k + 4), conj_mask);
        _mm256_storeu_pd(wd + 2 * k, cmul_split(u_lo, c_lo, s_lo));
        _mm256_storeu_pd(wd + 2 * k + 4, cmul_split(u_hi, c_hi, s_hi));
    }
    if (k < n) {
        scalar_table().phase_weights(energy + k, t, u + k, w + k, n - k);
    }
}

void scale_conj_avx2(const cplx* w, cplx z, cplx* out, std::size_t n) {
    const auto* wd = reinterpret_cast<const double*>(w);
    auto* od = reinterpret_cast<double*>(out);
    const __m256d zr = _mm256_set1_pd(z.real());
    const __m256d zi = _mm256_set1_pd(z.imag());
    const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d x = _mm256_xor_pd(_mm256_loadu_pd(wd + 2 * k), conj_mask);
        _mm256_storeu_pd(od + 2 * k, cmul_split(x, zr, zi));
    }
    if (k < n) {
        scalar_table().scale_conj(w + k, z, out + k, n - k);
    }
}

void diag_rhs_avx2(const double* diag, const cplx* psi, cplx z, const cplx* u, cplx* out,
                   std::size_t n) {
    const auto* pd = reinterpret_cast<const double*>(psi);
    const auto* ud = reinterpret_cast<const double*>(u);
    auto* od = reinterpret_cast<double*>(out);
    const __m256d zr = _mm256_set1_pd(z.real());
    const __m256d zi = _mm256_set1_pd(z.imag());
    const __m256d neg_im = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d d = dup_pairs(diag + k);
        const __m256d p = _mm256_loadu_pd(pd + 2 * k);
        // -i d (a + ib) = [d b, -d a]
        const __m256d rot = _mm256_xor_pd(swap_pairs(p), neg_im);
        const __m256d zu = cmul_split(_mm256_loadu_pd(ud + 2 * k), zr, zi);
        _mm256_storeu_pd(od + 2 * k, _mm256_fmadd_pd(d, rot, zu));
    }
    if (k < n) {
        scalar_table().diag_rhs(diag + k, psi + k, z, u + k, out + k, n - k);
    }
}

void transverse_rhs_avx2(const double* diag, const cplx* psi, double coupling, cplx* out,
                         unsigned n_qubits) {
    if (n_qubits == 0) {
        scalar_table().transverse_rhs(diag, psi, coupling, out, n_qubits);
        return;
    }
    const std::size_t n = std::size_t{1} << n_qubits;
    const auto* pd = reinterpret_cast<const double*>(psi);
    auto* od = reinterpret_cast<double*>(out);
    const __m256d cv = _mm256_set1_pd(coupling);
    const __m256d neg_im = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    const __m256d neg_re = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
    for (std::size_t k = 0; k < n; k += 2) {
        const __m256d p = _mm256_loadu_pd(pd + 2 * k);
        __m256d acc = _mm256_permute2f128_pd(p, p, 1);
        for (unsigned q = 1; q < n_qubits; ++q) {
            acc = _mm256_add_pd(acc, _mm256_loadu_pd(pd + 2 * (k ^ (std::size_t{1} << q))));
        }
        const __m256d d = dup_pairs(diag + k);
        const __m256d rot = _mm256_xor_pd(swap_pairs(p), neg_im);
        const __m256d hop = _mm256_xor_pd(swap_pairs(acc), neg_re);
        _mm256_storeu_pd(od + 2 * k, _mm256_fmadd_pd(d, rot, _mm256_mul_pd(cv, hop)));
    }
}

void lincomb_avx2(cplx* out, const cplx* y, double h, const double* coeff, const cplx* const* ks,
                  std::size_t n_stages, std::size_t n) {
    const auto* yd = reinterpret_cast<const double*>(y);
    auto* od = reinterpret_cast<double*>(out);
    const std::size_t m = 2 * n;
    const __m256d hv = _mm256_set1_pd(h);
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < n_stages; ++j) {
            const auto* kd = reinterpret_cast<const double*>(ks[j]);
            acc = _mm256_fmadd_pd(_mm256_set1_pd(coeff[j]), _mm256_loadu_pd(kd + i), acc);
        }
        _mm256_storeu_pd(od + i, _mm256_fmadd_pd(hv, acc, _mm256_loadu_pd(yd + i)));
    }
    for (; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_stages; ++j) {
            acc += coeff[j] * reinterpret_cast<const double*>(ks[j])[i];
        }
        od[i] = yd[i] + h * acc;
    }
}

double weighted_err2_avx2(const cplx* err, const cplx* y0, const cplx* y1, double atol, double rtol,
                          std::size_t n) {
    const auto* ed = reinterpret_cast<const double*>(err);
    const auto* ad = reinterpret_cast<const double*>(y0);
    const auto* bd = reinterpret_cast<const double*>(y1);
    const __m256d av = _mm256_set1_pd(atol);
    const __m256d rv = _mm256_set1_pd(rtol);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    auto mod2 = [](const double* p) {
        const __m256d x0 = _mm256_loadu_pd(p);
        const __m256d x1 = _mm256_loadu_pd(p + 4);
        return _mm256_hadd_pd(_mm256_mul_pd(x0, x0), _mm256_mul_pd(x1, x1));
    };
    for (; k + 4 <= n; k += 4) {
        const __m256d e2 = mod2(ed + 2 * k);
        const __m256d m = _mm256_sqrt_pd(_mm256_max_pd(mod2(ad + 2 * k), mod2(bd + 2 * k)));
        const __m256d scale = _mm256_fmadd_pd(rv, m, av);
        acc = _mm256_add_pd(acc, _mm256_div_pd(e2, _mm256_mul_pd(scale, scale)));
    }
    double s = hsum(acc);
    if (k < n) {
        s += scalar_table().weighted_err2(err + k, y0 + k, y1 + k, atol, rtol, n - k);
    }
    return s;
}

}  // namespace

const KernelTable& avx2_table_unchecked() {
    static const KernelTable table{
        "avx2",
        fwht_avx2,
        dot_avx2,
        norm2_avx2,
        phase_weights_avx2,
        scale_conj_avx2,
        diag_rhs_avx2,
        transverse_rhs_avx2,
        lincomb_avx2,
        weighted_err2_avx2,
    };
    return table;
}

}  // namespace qa::kernels
