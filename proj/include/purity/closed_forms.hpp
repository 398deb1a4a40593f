#pragma once

#include <utility>

#include "purity/cq_ensemble.hpp"

namespace purity {

// Parameter of the uniform-ensemble tradeoff curve.
struct UniformCurveParam {
    double lam; // in (0, inf)
    explicit UniformCurveParam(double lam); // validates
};

// Parametric (R, P) point of the uniform qubit ensemble:
//   R = lam/(e^lam - 1) - 1 + log2(lam*e^lam/(e^lam - 1))
//   P = 1 - h2(1/lam - 1/(e^lam - 1))
// A series expansion takes over below lam = 1e-6, where the direct
// expressions cancel catastrophically.
std::pair<double, double> uniform_curve_point(const UniformCurveParam& param);

// Pure-state quadrature of the uniform Bloch-sphere ensemble: nodes come in
// symmetric families whose average is the maximally mixed state.  Even
// counts use antipodal node sets (regular polyhedra when available),
// odd counts fall back to an equatorial roots-of-unity ring.
CQEnsemble discretize_uniform_sphere(int n_nodes);

// The four-state ensemble |0>, cos t|0> + sin t|1>, |1>, -sin t|0> + cos t|1>,
// uniform prior.
CQEnsemble bb84_ensemble(double theta);

// The channel merging outcomes {0,1} and {2,3} of the ensemble above.
ClassicalChannel bb84_merge_channel();

// Operating point (R=1, P = 1 - h2((1-cos theta)/2)) of the two-outcome
// merge strategy.
std::pair<double, double> bb84_restricted_point(double theta);

} // namespace purity
