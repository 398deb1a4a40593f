#pragma once

#include <vector>

#include "purity/density_matrix.hpp"

namespace purity {

// All entropies are base-2 (bits / qubits / pbits).

// H(rho) = -sum_i lambda_i log2(lambda_i).  Eigenvalues are clipped to
// [0, 1]; clipping by more than 1e-8 raises ValidationError.
double von_neumann_entropy(const DensityMatrix& rho);

// Entropy of an eigenvalue list (same clipping policy as above).
double entropy_from_eigenvalues(const std::vector<double>& evals);

double shannon_entropy(const ProbabilityDistribution& p);

// Binary entropy; p outside [0,1] by more than 1e-12 raises ValidationError.
double h2(double p);

// kappa(rho) = log2(dim) - H(rho): pure qubits extractable by unitaries alone.
double purity_kappa(const DensityMatrix& rho);

// Erase off-diagonal entries in the computational basis.
DensityMatrix dephase(const DensityMatrix& rho);

// || rho - sigma ||_1 = sum of |eigenvalues| of the difference; in [0, 2].
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// <phi|rho|phi> for a unit vector phi (norm within 1e-10 of 1).
// Satisfies trace_distance(rho, |phi><phi|) <= 2*sqrt(1 - result).
double fidelity_with_pure(const DensityMatrix& rho, const std::vector<cplx>& phi);

} // namespace purity
