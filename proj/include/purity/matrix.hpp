#pragma once

#include <complex>
#include <vector>

namespace purity {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major.
class CMat {
public:
    CMat() = default;
    explicit CMat(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {}

    static CMat identity(int dim) {
        CMat m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }
    cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const cplx& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * dim_ + j];
    }
    std::vector<cplx>& data() { return a_; }
    const std::vector<cplx>& data() const { return a_; }

    // Interleaved re/im view of the storage (2*dim*dim doubles).
    const double* reals() const { return reinterpret_cast<const double*>(a_.data()); }

    CMat& add_scaled(const CMat& other, cplx factor);
    cplx trace() const;
    double frobenius_norm() const;

private:
    int dim_ = 0;
    std::vector<cplx> a_;
};

CMat operator*(const CMat& a, const CMat& b);
CMat adjoint(const CMat& m);

struct EigResult {
    std::vector<double> values; // descending
    CMat vectors;               // columns are the matching eigenvectors
};

// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
// rotations.  Deterministic: identical input bytes give identical output.
EigResult eig_hermitian(const CMat& m);

// Allocation-free repeated eigenvalue solves for optimizer inner loops.
// Both entry points copy `a` (row-major complex, dim x dim) into internal
// storage, so the caller's matrix is untouched.
class JacobiWorkspace {
public:
    // Eigenvalues only, sorted descending, written to evals[0..dim).
    void eigenvalues(const cplx* a, int dim, double* evals);

    // Eigenvalues (descending) plus matching eigenvector columns in
    // vecs (row-major dim x dim).
    void eigensystem(const cplx* a, int dim, double* evals, cplx* vecs);

private:
    std::vector<cplx> work_;
    std::vector<int> order_;
    std::vector<double> dvals_;
    std::vector<cplx> vwork_;
};

// Partial traces of a matrix on a tensor product space of dimension
// dim_a * dim_b, with index (i_a, i_b) flattened as i_a*dim_b + i_b.
CMat trace_out_first(const CMat& m, int dim_a, int dim_b);  // result: dim_b
CMat trace_out_second(const CMat& m, int dim_a, int dim_b); // result: dim_a

} // namespace purity
