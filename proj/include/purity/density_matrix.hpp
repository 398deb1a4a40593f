#pragma once

#include <vector>

#include "purity/matrix.hpp"

namespace purity {

// Probability distribution: non-negative entries summing to 1 within 1e-12.
class ProbabilityDistribution {
public:
    ProbabilityDistribution() = default;
    explicit ProbabilityDistribution(std::vector<double> probs); // validates

    int size() const { return static_cast<int>(p_.size()); }
    double operator[](int i) const { return p_[i]; }
    const std::vector<double>& probs() const { return p_; }

private:
    std::vector<double> p_;
};

// Quantum state: Hermitian (within 1e-10), positive semidefinite
// (eigenvalues >= -1e-10), unit trace (within 1e-10).  The stored matrix is
// symmetrized after validation so downstream eigensolves see an exactly
// Hermitian matrix.
class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(CMat m); // validates

    static DensityMatrix maximally_mixed(int dim);
    static DensityMatrix pure(const std::vector<cplx>& amplitudes);
    static DensityMatrix diagonal(const std::vector<double>& probs);

    int dim() const { return m_.dim(); }
    const CMat& matrix() const { return m_; }
    cplx entry(int i, int j) const { return m_(i, j); }

private:
    CMat m_;
};

} // namespace purity
