#pragma once

#include <cstddef>

// Low-level array kernels used by the entropy and optimizer hot loops.
// Two implementations ship: a portable scalar reference and an AVX2+FMA
// variant.  The active one is picked once at startup from CPUID, and can
// be forced with PURITY_KERNELS=scalar|avx2|auto for debugging and for
// the scalar-vs-vector equivalence tests.

namespace purity::kernels {

struct Ops {
    const char* name;

    // sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);

    // y[i] += a*x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);

    // sum_i -x[i]*log2(x[i]) with the convention 0*log2(0) = 0.
    // Entries below DBL_MIN contribute nothing; callers guarantee x[i] >= 0.
    double (*sum_neg_xlog2x)(const double* x, std::size_t n);

    // out[i] = log2(max(x[i], floor)); floor must be positive and normal.
    void (*log2_clamped)(const double* x, double* out, std::size_t n, double floor);

    // rows[j*n .. j*n+n) += a[j]*x[..] for j in [0,m): rank-1 row update.
    void (*axpy_rows)(const double* a, const double* x, double* rows,
                      std::size_t m, std::size_t n);

    // out[j] = dot(x, rows[j*n .. j*n+n)) for j in [0,m).
    void (*dot_rows)(const double* x, const double* rows, double* out,
                     std::size_t m, std::size_t n);
};

// Active implementation (resolved once, thread-safe).
const Ops& ops();

// Specific implementations, mainly for equivalence tests.
const Ops& scalar_ops();
const Ops& avx2_ops();   // valid only if avx2_available()
bool avx2_available();

} // namespace purity::kernels
