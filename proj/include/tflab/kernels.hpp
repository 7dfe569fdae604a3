#pragma once

#include <cstddef>

namespace tflab::kernels {

/// One x-row of the variable-coefficient 7-point operator on a tensor-product grid.
/// Writes y[i] for interior i = 1 .. n-2:
///   y_i = syz (axm_i (x_i - x_{i-1}) + axp_i (x_i - x_{i+1}))
///       + wx_i (cym (x_i - s_i) + cyp (x_i - n_i) + czm (x_i - b_i) + czp (x_i - t_i)) + d_i x_i
struct StencilRow {
    std::size_t n = 0;
    const double* x = nullptr;
    const double* s = nullptr;  // row j-1
    const double* north = nullptr;  // row j+1
    const double* b = nullptr;  // plane k-1
    const double* t = nullptr;  // plane k+1
    const double* axm = nullptr;
    const double* axp = nullptr;
    const double* wx = nullptr;
    const double* diag = nullptr;  // may be null
    double syz = 0.0, cym = 0.0, cyp = 0.0, czm = 0.0, czp = 0.0;
    double* y = nullptr;
};

struct Table {
    const char* name;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // y = x + beta y
    void (*xpby)(const double* x, double beta, double* y, std::size_t n);
    // out = a * b
    void (*mul)(const double* a, const double* b, double* out, std::size_t n);
    void (*stencil_row)(const StencilRow& row);
    // w = v - phi + shift; rho = coef w_+^{3/2}; drho = 1.5 coef w_+^{1/2}
    void (*tf_density)(const double* v, const double* phi, double shift, double coef, double* rho, double* drho,
                       std::size_t n);
    // sum weight_i w_{i,+}^{5/2} with w as above
    double (*tf_power52_sum)(const double* v, const double* phi, double shift, const double* weight, std::size_t n);
};

const Table& scalar_table();
/// Null when the binary was built without AVX2 support.
const Table* avx2_table();
/// AVX2 when the CPU has AVX2+FMA, unless TFLAB_FORCE_SCALAR is set to a non-zero value.
const Table& active();

}  // namespace tflab::kernels
