#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "purity/cq_ensemble.hpp"
#include "purity/matrix.hpp"

namespace purity {

struct OptimizerOptions {
    int y_size = 0;               // output alphabet; 0 means |X| + 2
    int restarts = 64;            // random multi-starts (seed = master_seed + i)
    std::uint64_t master_seed = 0;
    int max_iterations = 5000;    // ascent iteration cap per start
    double convergence_tol = 1e-9; // stop when objective gain drops below this
};

struct TradeoffPoint {
    double multiplier = 0.0;
    double r = 0.0; // communication coordinate (I(Y;X), or I(Y;X)-I(Y;B) for D curves)
    double p = 0.0; // purity coordinate I(Y;B)
    ClassicalChannel channel;
};

// Operating points plus their upper concave envelope.  The envelope is what
// time-sharing (flag mixtures) makes achievable; mixing with the constant
// channel scales any point toward (0,0), so the origin always joins the
// hull candidates.  Piecewise linear, nondecreasing, constant beyond the
// last vertex.
class TradeoffCurve {
public:
    static TradeoffCurve from_points(std::vector<TradeoffPoint> pts);

    const std::vector<TradeoffPoint>& points() const { return points_; }
    const std::vector<std::pair<double, double>>& envelope() const { return envelope_; }
    double envelope_at(double r) const;

private:
    std::vector<TradeoffPoint> points_;                 // sorted by r
    std::vector<std::pair<double, double>> envelope_;   // hull vertices
};

// Shared evaluation engine for a fixed ensemble and output alphabet size:
// mutual informations and the gradient of a*I(Y;B) - b*I(Y;X) with respect
// to the channel entries.  Channels are flat row-major |X| x |Y| arrays.
class ChannelObjective {
public:
    ChannelObjective(const CQEnsemble& ens, int y_size);

    int nx() const { return nx_; }
    int ny() const { return ny_; }

    struct Value {
        double i_yx;
        double i_yb;
    };
    Value evaluate(const double* w);

    // Fills grad (nx*ny) with d/dW [a*I(Y;B) - b*I(Y;X)] and returns the
    // objective value at w.
    double gradient(const double* w, double a, double b, double* grad);

private:
    int nx_, ny_, d_;
    std::vector<double> p_;         // priors
    std::vector<cplx> rho_;         // stacked conditional states, nx blocks of d*d
    double h_avg_ = 0.0;            // entropy of the ensemble average state
    // scratch
    std::vector<cplx> s_;           // weighted states S_y, ny blocks of d*d
    std::vector<cplx> lmat_;        // log2(S_y) blocks
    std::vector<cplx> vecs_;
    std::vector<double> q_, evals_, lq_, lw_, coeff_, t_;
    JacobiWorkspace ws_;
};

// I(Y;B) - mu*I(Y;X) for the ensemble pushed through w; mu in [0, 1].
double lagrangian_objective(const CQEnsemble& ens, const ClassicalChannel& w, double mu);

// Best channel for the scalarized objective over deterministic-channel
// seeds (enumerated when |Y|^|X| <= 4096) plus seeded random restarts.
// Deterministic for fixed options.
TradeoffPoint optimize_lagrangian(const CQEnsemble& ens, double mu,
                                  const OptimizerOptions& opts);

// One optimizer point per multiplier; envelope over the points plus the
// origin.  Multipliers must lie in [0, 1].
TradeoffCurve compute_P_curve(const CQEnsemble& ens, const std::vector<double>& mu_grid,
                              const OptimizerOptions& opts);

// Same sweep with constraint value I(Y;X) - I(Y;B) and objective
// I(Y;B) - mu*(I(Y;X) - I(Y;B)); multipliers in [0, 50].
TradeoffCurve compute_D_curve(const CQEnsemble& ens, const std::vector<double>& mu_grid,
                              const OptimizerOptions& opts);

std::vector<double> default_p_multiplier_grid(); // 41 points, linear on [0, 1]
std::vector<double> default_d_multiplier_grid(); // 0 plus geometric on [0.05, 50]

// D-curve multipliers matched to a P-curve grid: mu_D = mu_P/(1 - mu_P),
// capped at 50.  Matched grids make the two sweeps select the same
// channels, which is what the consistency relation exercises.
std::vector<double> matched_d_multiplier_grid(const std::vector<double>& p_grid);

struct PDCheck {
    double r;           // sampled communication rate
    double d_value;     // D(R)
    double p_value;     // P(D(R) + R)
    double discrepancy; // |p_value - d_value|
};

// Checks P(D(R) + R) = D(R) at the sampled rates.
std::vector<PDCheck> verify_PD_relation(const CQEnsemble& ens,
                                        const std::vector<double>& r_samples,
                                        const OptimizerOptions& opts);

// kappa(rho^X) + kappa(rho^B) + P(R): total one-shot distillable purity.
double kappa_arrow(const CQEnsemble& ens, double r, const OptimizerOptions& opts);
double kappa_arrow(const CQEnsemble& ens, double r, const TradeoffCurve& p_curve);

// Exhaustive grid search over row-stochastic matrices with entries on a
// grid_step lattice: max I(Y;B) subject to I(Y;X) <= R.  Refuses instances
// with more than 10^7 candidate channels.
double brute_force_oracle(const CQEnsemble& ens, double r, int y_size, double grid_step);

// One enumeration pass serving many thresholds at once.
std::vector<double> brute_force_oracle_sweep(const CQEnsemble& ens,
                                             const std::vector<double>& r_list,
                                             int y_size, double grid_step);

} // namespace purity
