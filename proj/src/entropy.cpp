#include "purity/entropy.hpp"

#include <cmath>
#include <string>

#include "purity/errors.hpp"
#include "purity/kernels.hpp"

namespace purity {

double entropy_from_eigenvalues(const std::vector<double>& evals) {
    std::vector<double> clipped(evals.size());
    for (std::size_t i = 0; i < evals.size(); ++i) {
        double v = evals[i];
        double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        if (std::abs(c - v) > 1e-8)
            throw ValidationError("eigenvalue " + std::to_string(v) +
                                  " is outside [0,1] beyond tolerance");
        clipped[i] = c;
    }
    return kernels::ops().sum_neg_xlog2x(clipped.data(), clipped.size());
}

double von_neumann_entropy(const DensityMatrix& rho) {
    return entropy_from_eigenvalues(eig_hermitian(rho.matrix()).values);
}

double shannon_entropy(const ProbabilityDistribution& p) {
    return kernels::ops().sum_neg_xlog2x(p.probs().data(), p.probs().size());
}

double h2(double p) {
    if (p < 0.0 || p > 1.0) {
        if (p < -1e-12 || p > 1.0 + 1e-12)
            throw ValidationError("h2 argument " + std::to_string(p) + " outside [0,1]");
        p = p < 0.0 ? 0.0 : 1.0;
    }
    double a[2] = {p, 1.0 - p};
    return kernels::ops().sum_neg_xlog2x(a, 2);
}

double purity_kappa(const DensityMatrix& rho) {
    return std::log2(static_cast<double>(rho.dim())) - von_neumann_entropy(rho);
}

DensityMatrix dephase(const DensityMatrix& rho) {
    int d = rho.dim();
    CMat m(d);
    for (int i = 0; i < d; ++i) m(i, i) = rho.entry(i, i).real();
    return DensityMatrix(std::move(m));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim())
        throw ValidationError("trace_distance dimension mismatch: " +
                              std::to_string(rho.dim()) + " vs " +
                              std::to_string(sigma.dim()));
    CMat diff = rho.matrix();
    diff.add_scaled(sigma.matrix(), -1.0);
    EigResult eig = eig_hermitian(diff);
    double sum = 0.0;
    for (double v : eig.values) sum += std::abs(v);
    return sum;
}

double fidelity_with_pure(const DensityMatrix& rho, const std::vector<cplx>& phi) {
    if (static_cast<int>(phi.size()) != rho.dim())
        throw ValidationError("fidelity_with_pure dimension mismatch");
    double n2 = 0.0;
    for (const cplx& a : phi) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > 1e-10)
        throw ValidationError("reference vector is not normalized: |phi|^2 = " +
                              std::to_string(n2));
    cplx acc = 0.0;
    int d = rho.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) acc += std::conj(phi[i]) * rho.entry(i, j) * phi[j];
    double f = acc.real();
    return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
}

} // namespace purity
