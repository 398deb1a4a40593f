#include "purity/density_matrix.hpp"

#include <cmath>
#include <string>

#include "purity/errors.hpp"

namespace purity {

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> probs)
    : p_(std::move(probs)) {
    if (p_.empty()) throw ValidationError("probability distribution is empty");
    double sum = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
        if (!(p_[i] >= 0.0))
            throw ValidationError("probability entry " + std::to_string(i) +
                                  " is negative: " + std::to_string(p_[i]));
        sum += p_[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ValidationError("probabilities sum to " + std::to_string(sum) +
                              ", expected 1 within 1e-12");
}

DensityMatrix::DensityMatrix(CMat m) : m_(std::move(m)) {
    int d = m_.dim();
    if (d < 1) throw ValidationError("density matrix must have dimension >= 1");

    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            cplx diff = m_(i, j) - std::conj(m_(j, i));
            if (std::abs(diff) > 1e-10)
                throw ValidationError("matrix is not Hermitian at (" + std::to_string(i) +
                                      "," + std::to_string(j) + "), deviation " +
                                      std::to_string(std::abs(diff)));
        }

    cplx tr = m_.trace();
    if (std::abs(tr - cplx(1.0)) > 1e-10)
        throw ValidationError("trace deviates from 1 by " +
                              std::to_string(std::abs(tr - cplx(1.0))));

    // exact symmetrization so eigensolves downstream see a Hermitian matrix
    for (int i = 0; i < d; ++i) {
        m_(i, i) = cplx(m_(i, i).real(), 0.0);
        for (int j = i + 1; j < d; ++j) {
            cplx avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
            m_(i, j) = avg;
            m_(j, i) = std::conj(avg);
        }
    }

    EigResult eig = eig_hermitian(m_);
    if (eig.values.back() < -1e-10)
        throw ValidationError("matrix is not positive semidefinite: smallest eigenvalue " +
                              std::to_string(eig.values.back()));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    CMat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0 / dim;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const std::vector<cplx>& amplitudes) {
    int d = static_cast<int>(amplitudes.size());
    double n2 = 0.0;
    for (const cplx& a : amplitudes) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > 1e-10)
        throw ValidationError("state vector norm^2 deviates from 1 by " +
                              std::to_string(std::abs(n2 - 1.0)));
    CMat m(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = amplitudes[i] * std::conj(amplitudes[j]);
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& probs) {
    ProbabilityDistribution p(probs); // validates
    CMat m(p.size());
    for (int i = 0; i < p.size(); ++i) m(i, i) = p[i];
    return DensityMatrix(std::move(m));
}

} // namespace purity
