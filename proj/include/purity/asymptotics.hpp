#pragma once

#include <cstdint>
#include <vector>

#include "purity/cq_ensemble.hpp"
#include "purity/density_matrix.hpp"

namespace purity {

// Count-typicality spec: sequences y^n with |n_y - n*p_y| <= delta*n for
// every letter y.
struct TypicalSetSpec {
    ProbabilityDistribution dist;
    long long n;
    double delta;

    TypicalSetSpec(ProbabilityDistribution dist_, long long n_, double delta_);
};

struct TypicalEstimate {
    double probability = 0.0;
    double std_error = 0.0; // zero for the exact method
    bool exact = true;
};

// Probability that an i.i.d. length-n draw lands in the typical set. Exact
// (dynamic programming over per-letter count windows) for alphabets up to 8;
// larger alphabets need allow_monte_carlo and return a sampled estimate.
TypicalEstimate typical_probability(const TypicalSetSpec& spec, bool allow_monte_carlo = false,
                                    std::uint64_t seed = 0, long long samples = 100000);

struct TypicalSubspaceStats {
    double rate = 0.0; // (1/n) log2 of the number of typical eigenbasis sequences
    double mass = 0.0; // probability weight the typical subspace carries
};

// Typical-subspace size and mass for rho^{(x)n} at width delta, restricted to
// the eigenvalue support. dim <= 8 and n <= 10^4.
TypicalSubspaceStats typical_subspace_stats(const DensityMatrix& rho, long long n, double delta);

// Per-copy bookkeeping of the block protocol: borrowed message and
// common-randomness registers, catalyst, and the two local purity rates.
struct ResourceLedger {
    long long n = 1;
    double delta = 0.0;
    double rate_M = 0.0;        // I(Y;BE) + delta
    double rate_L = 0.0;        // H(Y|BE) + delta
    double catalyst_rate = 0.0; // I(Y;BE)
    double P_A_rate = 0.0;      // log2|X| - H(BE|Y) - delta_A
    double P_B_rate = 0.0;      // log2 d_B - H(B|Y) - delta_B
    double net_P = 0.0;         // kappa(rho^X) + kappa(rho^B) + I(Y;B)
    double classical_R = 0.0;   // I(Y;BE)
};

ResourceLedger resource_ledger(const CQEnsemble& ens, const ClassicalChannel& w, long long n,
                               double delta);

} // namespace purity
