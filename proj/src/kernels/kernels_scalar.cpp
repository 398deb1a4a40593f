#include "purity/kernels.hpp"

#include <cfloat>
#include <cmath>

namespace purity::kernels {

namespace {

double s_dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void s_axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double s_sum_neg_xlog2x(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i];
        if (v >= DBL_MIN) acc -= v * std::log2(v);
    }
    return acc;
}

void s_log2_clamped(const double* x, double* out, std::size_t n, double floor) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::log2(x[i] > floor ? x[i] : floor);
}

void s_axpy_rows(const double* a, const double* x, double* rows,
                 std::size_t m, std::size_t n) {
    for (std::size_t j = 0; j < m; ++j) {
        double aj = a[j];
        double* r = rows + j * n;
        for (std::size_t i = 0; i < n; ++i) r[i] += aj * x[i];
    }
}

void s_dot_rows(const double* x, const double* rows, double* out,
                std::size_t m, std::size_t n) {
    for (std::size_t j = 0; j < m; ++j) out[j] = s_dot(x, rows + j * n, n);
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", s_dot,  s_axpy,     s_sum_neg_xlog2x,
                         s_log2_clamped,  s_axpy_rows, s_dot_rows};
    return ops;
}

} // namespace purity::kernels
