#pragma once

#include <utility>
#include <vector>

#include "purity/density_matrix.hpp"
#include "purity/entropy.hpp"

namespace purity {

// Classical-quantum source: label x carries probability p(x) and state
// rho_x, all states on a common d_B-dimensional system.
class CQEnsemble {
public:
    CQEnsemble() = default;
    CQEnsemble(ProbabilityDistribution probs, std::vector<DensityMatrix> states);

    int alphabet_size() const { return probs_.size(); }
    int dim_b() const { return states_.empty() ? 0 : states_[0].dim(); }
    const ProbabilityDistribution& probs() const { return probs_; }
    const DensityMatrix& state(int x) const { return states_[x]; }
    const std::vector<DensityMatrix>& states() const { return states_; }

private:
    ProbabilityDistribution probs_;
    std::vector<DensityMatrix> states_;
};

// Row-stochastic matrix W(y|x): rows index x, columns index y.
class ClassicalChannel {
public:
    ClassicalChannel() = default;
    ClassicalChannel(int in_size, int out_size, std::vector<double> entries);

    static ClassicalChannel identity(int size);

    int in_size() const { return in_; }
    int out_size() const { return out_; }
    double operator()(int y, int x) const {
        return w_[static_cast<std::size_t>(x) * out_ + y];
    }
    const std::vector<double>& entries() const { return w_; }
    const double* row(int x) const { return w_.data() + static_cast<std::size_t>(x) * out_; }

private:
    int in_ = 0;
    int out_ = 0;
    std::vector<double> w_; // row-major, w_[x*out + y]
};

// Matrix product: feed x through `first`, then its outcome through `second`.
ClassicalChannel compose(const ClassicalChannel& first, const ClassicalChannel& second);

// Flag mixture: run `w1` with probability t, `w2` otherwise, keeping the two
// output alphabets disjoint (|Y| = |Y1| + |Y2|).  Realizes time-sharing.
ClassicalChannel mix_channels(const ClassicalChannel& w1, const ClassicalChannel& w2, double t);

// Global pure state on X (x) B (x) E purifying the cq joint state.  The
// environment splits as E = E1 (x) E2: E1 holds a copy of the classical
// label (needed so the X register's classical correlations are purified),
// E2 purifies each conditional state, so dim_E = |X| * d_B.
class PurifiedCQ {
public:
    PurifiedCQ(const CQEnsemble& ens); // construction validates the reduction

    int dim_x() const { return dx_; }
    int dim_b() const { return db_; }
    int dim_e() const { return de_; }
    const std::vector<cplx>& amplitudes() const { return amp_; }
    cplx amplitude(int x, int b, int e) const {
        return amp_[(static_cast<std::size_t>(x) * db_ + b) * de_ + e];
    }

    // Conditional B(x)E vector for label x (unit norm; zero if p(x) = 0).
    std::vector<cplx> conditional_be(int x) const;

    // Reduction over E, as a raw matrix on X(x)B (should equal the joint state).
    CMat trace_out_environment() const;

private:
    int dx_ = 0, db_ = 0, de_ = 0;
    std::vector<cplx> amp_;
};

DensityMatrix joint_state(const CQEnsemble& ens);
DensityMatrix average_state(const CQEnsemble& ens);

// I(X;B) of the joint state: H(avg) - sum_x p(x) H(rho_x).
double holevo_information(const CQEnsemble& ens);

// Push the classical register through W: q(y) = sum_x p(x) W(y|x),
// sigma_y = sum_x p(x) W(y|x) rho_x / q(y).  Outcomes with q(y) < 1e-14
// are dropped.
CQEnsemble apply_channel(const CQEnsemble& ens, const ClassicalChannel& w);

// Classical I(X;Y) = H(q) - sum_x p(x) H(W(.|x)).
double channel_mutual_information(const ProbabilityDistribution& p,
                                  const ClassicalChannel& w);

PurifiedCQ purify_cq(const CQEnsemble& ens);

// Evaluates I(Y;BE) through the purification and I(Y;X) classically.
// For cq sources the two coincide.
std::pair<double, double> cross_check_IYBE(const CQEnsemble& ens,
                                           const ClassicalChannel& w);

// Per-outcome B(x)E entropies under w, shared by the cross-check and the
// asymptotic rate ledger.  Outcomes with q(y) < 1e-14 keep a slot with
// entropy 0.
struct PurifiedChannelStats {
    std::vector<double> q;             // outcome probabilities, length |Y|
    std::vector<double> h_be_given_y;  // H(sigma_y^{BE}) per outcome
    double h_be_avg = 0.0;             // H of the y-averaged BE state
};
PurifiedChannelStats purified_channel_stats(const CQEnsemble& ens,
                                            const ClassicalChannel& w);

// Trace-distance-per-member plus L1-distance-on-probs comparison.
bool ensembles_close(const CQEnsemble& a, const CQEnsemble& b, double tol);

} // namespace purity
