#include <immintrin.h>

#include <cmath>

#include "tflab/kernels.hpp"

namespace tflab::kernels {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
    const __m256d vb = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void stencil_row(const StencilRow& r) {
    const __m256d syz = _mm256_set1_pd(r.syz), cym = _mm256_set1_pd(r.cym), cyp = _mm256_set1_pd(r.cyp),
                  czm = _mm256_set1_pd(r.czm), czp = _mm256_set1_pd(r.czp);
    std::size_t i = 1;
    for (; i + 4 < r.n; i += 4) {
        const __m256d c = _mm256_loadu_pd(r.x + i);
        __m256d ax = _mm256_mul_pd(_mm256_loadu_pd(r.axm + i), _mm256_sub_pd(c, _mm256_loadu_pd(r.x + i - 1)));
        ax = _mm256_fmadd_pd(_mm256_loadu_pd(r.axp + i), _mm256_sub_pd(c, _mm256_loadu_pd(r.x + i + 1)), ax);
        __m256d t = _mm256_mul_pd(cym, _mm256_sub_pd(c, _mm256_loadu_pd(r.s + i)));
        t = _mm256_fmadd_pd(cyp, _mm256_sub_pd(c, _mm256_loadu_pd(r.north + i)), t);
        t = _mm256_fmadd_pd(czm, _mm256_sub_pd(c, _mm256_loadu_pd(r.b + i)), t);
        t = _mm256_fmadd_pd(czp, _mm256_sub_pd(c, _mm256_loadu_pd(r.t + i)), t);
        __m256d v = _mm256_fmadd_pd(_mm256_loadu_pd(r.wx + i), t, _mm256_mul_pd(syz, ax));
        if (r.diag) v = _mm256_fmadd_pd(_mm256_loadu_pd(r.diag + i), c, v);
        _mm256_storeu_pd(r.y + i, v);
    }
    for (; i + 1 < r.n; ++i) {
        const double c = r.x[i];
        double v = r.syz * (r.axm[i] * (c - r.x[i - 1]) + r.axp[i] * (c - r.x[i + 1])) +
                   r.wx[i] * (r.cym * (c - r.s[i]) + r.cyp * (c - r.north[i]) + r.czm * (c - r.b[i]) +
                              r.czp * (c - r.t[i]));
        if (r.diag) v += r.diag[i] * c;
        r.y[i] = v;
    }
}

void tf_density(const double* v, const double* phi, double shift, double coef, double* rho, double* drho,
                std::size_t n) {
    const __m256d vs = _mm256_set1_pd(shift), vc = _mm256_set1_pd(coef), vc15 = _mm256_set1_pd(1.5 * coef);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d w = _mm256_add_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(phi + i)), vs);
        w = _mm256_max_pd(w, zero);
        const __m256d s = _mm256_sqrt_pd(w);
        _mm256_storeu_pd(rho + i, _mm256_mul_pd(vc, _mm256_mul_pd(w, s)));
        _mm256_storeu_pd(drho + i, _mm256_mul_pd(vc15, s));
    }
    for (; i < n; ++i) {
        const double w = v[i] - phi[i] + shift;
        if (w > 0.0) {
            const double s = std::sqrt(w);
            rho[i] = coef * (w * s);
            drho[i] = (1.5 * coef) * s;
        } else {
            rho[i] = 0.0;
            drho[i] = 0.0;
        }
    }
}

double tf_power52_sum(const double* v, const double* phi, double shift, const double* weight, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(shift), zero = _mm256_setzero_pd();
    __m256d acc = zero;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d w = _mm256_add_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(phi + i)), vs);
        w = _mm256_max_pd(w, zero);
        const __m256d p = _mm256_mul_pd(_mm256_mul_pd(w, w), _mm256_sqrt_pd(w));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(weight + i), p, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double w = v[i] - phi[i] + shift;
        if (w > 0.0) s += weight[i] * w * w * std::sqrt(w);
    }
    return s;
}

}  // namespace

const Table* avx2_table() {
    static const Table t{"avx2", dot, axpy, xpby, mul, stencil_row, tf_density, tf_power52_sum};
    return &t;
}

}  // namespace tflab::kernels
