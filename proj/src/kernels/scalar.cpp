#include <cmath>

#include "tflab/kernels.hpp"

namespace tflab::kernels {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void stencil_row(const StencilRow& r) {
    for (std::size_t i = 1; i + 1 < r.n; ++i) {
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
    for (std::size_t i = 0; i < n; ++i) {
        const double w = v[i] - phi[i] + shift;
        if (w > 0.0) {
            const double s = std::sqrt(w);
            rho[i] = coef * w * s;
            drho[i] = 1.5 * coef * s;
        } else {
            rho[i] = 0.0;
            drho[i] = 0.0;
        }
    }
}

double tf_power52_sum(const double* v, const double* phi, double shift, const double* weight, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = v[i] - phi[i] + shift;
        if (w > 0.0) acc += weight[i] * w * w * std::sqrt(w);
    }
    return acc;
}

}  // namespace

const Table& scalar_table() {
    static const Table t{"scalar", dot, axpy, xpby, mul, stencil_row, tf_density, tf_power52_sum};
    return t;
}

}  // namespace tflab::kernels
