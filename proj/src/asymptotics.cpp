#include "purity/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "purity/entropy.hpp"
#include "purity/errors.hpp"
#include "purity/matrix.hpp"

namespace purity {

namespace {

constexpr int kExactAlphabetLimit = 8;
constexpr long long kBlockLimit = 10000;
constexpr double kSupportCutoff = 1e-12;
const double kNegInf = -std::numeric_limits<double>::infinity();

struct Window {
    long long lo, hi;
};

// integer count window for |c - n*p| <= delta*n, with a boundary fudge so
// exact-rational endpoints (e.g. n*p = 50) are not lost to rounding
Window count_window(double p, long long n, double delta) {
    double mean = static_cast<double>(n) * p;
    double half = static_cast<double>(n) * delta;
    double fudge = 1e-9 * std::max(1.0, mean + half);
    long long lo = static_cast<long long>(std::ceil(mean - half - fudge));
    long long hi = static_cast<long long>(std::floor(mean + half + fudge));
    return {std::max(lo, 0LL), std::min(hi, n)};
}

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// ln of sum over count vectors (c_1..c_k) with c_i in win[i], sum c_i = n, of
// n! * prod_i exp(term(i, c_i)); term(i,c) = c ln p_i - ln c! gives the
// multinomial box probability, term(i,c) = -ln c! the sequence count.
template <typename Term>
double box_sum_ln(const std::vector<Window>& win, long long n, Term term) {
    std::vector<double> cur(static_cast<std::size_t>(n) + 1, kNegInf), nxt;
    cur[0] = 0.0;
    for (std::size_t i = 0; i < win.size(); ++i) {
        if (win[i].lo > win[i].hi) return kNegInf;
        nxt.assign(cur.size(), kNegInf);
        for (long long t = 0; t <= n; ++t) {
            if (cur[t] == kNegInf) continue;
            long long hi = std::min(win[i].hi, n - t);
            for (long long c = win[i].lo; c <= hi; ++c)
                nxt[t + c] = log_add(nxt[t + c], cur[t] + term(i, c));
        }
        cur.swap(nxt);
    }
    if (cur[n] == kNegInf) return kNegInf;
    return cur[n] + std::lgamma(static_cast<double>(n) + 1.0);
}

double binomial_window_probability(double p0, double p1, long long n, const Window& w0,
                                   const Window& w1) {
    long long lo = std::max(w0.lo, n - w1.hi);
    long long hi = std::min(w0.hi, n - w1.lo);
    if (lo > hi) return 0.0;
    double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    double lp0 = std::log(p0), lp1 = std::log(p1);
    double sum = 0.0;
    for (long long c = lo; c <= hi; ++c) {
        double ln = lgn - std::lgamma(static_cast<double>(c) + 1.0) -
                    std::lgamma(static_cast<double>(n - c) + 1.0) + c * lp0 + (n - c) * lp1;
        sum += std::exp(ln);
    }
    return std::min(sum, 1.0);
}

} // namespace

TypicalSetSpec::TypicalSetSpec(ProbabilityDistribution dist_, long long n_, double delta_)
    : dist(std::move(dist_)), n(n_), delta(delta_) {
    if (n < 1) throw ValidationError("block length must be >= 1");
    if (!(delta > 0.0)) throw ValidationError("typicality width delta must be > 0");
}

TypicalEstimate typical_probability(const TypicalSetSpec& spec, bool allow_monte_carlo,
                                    std::uint64_t seed, long long samples) {
    const std::vector<double>& p = spec.dist.probs();
    int k = static_cast<int>(p.size());
    std::vector<Window> win(k);
    for (int i = 0; i < k; ++i) win[i] = count_window(p[i], spec.n, spec.delta);

    if (k <= kExactAlphabetLimit) {
        TypicalEstimate est;
        est.exact = true;
        if (k == 1) {
            est.probability = (win[0].lo <= spec.n && spec.n <= win[0].hi) ? 1.0 : 0.0;
        } else if (k == 2 && p[0] > 0.0 && p[1] > 0.0) {
            est.probability = binomial_window_probability(p[0], p[1], spec.n, win[0], win[1]);
        } else {
            double ln = box_sum_ln(win, spec.n, [&](std::size_t i, long long c) {
                double t = -std::lgamma(static_cast<double>(c) + 1.0);
                if (c > 0) t += static_cast<double>(c) * std::log(p[i]); // p=0 rows only admit c=0
                return t;
            });
            est.probability = ln == kNegInf ? 0.0 : std::min(std::exp(ln), 1.0);
        }
        return est;
    }

    if (!allow_monte_carlo)
        throw GuardError("alphabet size " + std::to_string(k) +
                         " exceeds the exact-method limit of 8; enable the Monte Carlo estimator");
    if (samples < 1) throw ValidationError("Monte Carlo sample count must be >= 1");

    std::mt19937_64 gen(seed);
    long long hits = 0;
    std::vector<long long> counts(k);
    for (long long s = 0; s < samples; ++s) {
        long long left = spec.n;
        double rem = 1.0;
        bool ok = true;
        for (int i = 0; i < k && ok; ++i) {
            long long c;
            if (i == k - 1 || rem <= 0.0) {
                c = i == k - 1 ? left : 0;
            } else {
                double cond = std::clamp(p[i] / rem, 0.0, 1.0);
                c = std::binomial_distribution<long long>(left, cond)(gen);
            }
            counts[i] = c;
            left -= c;
            rem -= p[i];
            if (c < win[i].lo || c > win[i].hi) ok = false;
        }
        if (ok && left == 0) ++hits;
    }
    TypicalEstimate est;
    est.exact = false;
    est.probability = static_cast<double>(hits) / static_cast<double>(samples);
    est.std_error =
        std::sqrt(std::max(est.probability * (1.0 - est.probability), 0.0) /
                  static_cast<double>(samples));
    return est;
}

TypicalSubspaceStats typical_subspace_stats(const DensityMatrix& rho, long long n, double delta) {
    if (rho.dim() > kExactAlphabetLimit)
        throw GuardError("typical-subspace dimension limit is 8, got " +
                         std::to_string(rho.dim()));
    if (n < 1) throw ValidationError("block length must be >= 1");
    if (n > kBlockLimit)
        throw GuardError("typical-subspace block length limit is 10000, got " +
                         std::to_string(n));
    if (!(delta > 0.0)) throw ValidationError("typicality width delta must be > 0");

    std::vector<double> eig = eig_hermitian(rho.matrix()).values;
    std::vector<double> support;
    for (double v : eig)
        if (v >= kSupportCutoff) support.push_back(std::min(v, 1.0));
    double sum = 0.0;
    for (double v : support) sum += v;
    for (double& v : support) v /= sum;

    TypicalSubspaceStats stats;
    stats.mass =
        typical_probability(TypicalSetSpec(ProbabilityDistribution(support), n, delta))
            .probability;

    std::vector<Window> win(support.size());
    for (std::size_t i = 0; i < support.size(); ++i)
        win[i] = count_window(support[i], n, delta);
    double ln_count = box_sum_ln(win, n, [](std::size_t, long long c) {
        return -std::lgamma(static_cast<double>(c) + 1.0);
    });
    stats.rate = ln_count == kNegInf ? kNegInf
                                     : ln_count / std::log(2.0) / static_cast<double>(n);
    return stats;
}

ResourceLedger resource_ledger(const CQEnsemble& ens, const ClassicalChannel& w, long long n,
                               double delta) {
    if (n < 1) throw ValidationError("block length must be >= 1");
    if (!(delta >= 0.0)) throw ValidationError("delta must be >= 0");
    if (w.in_size() != ens.alphabet_size())
        throw ValidationError("channel input alphabet does not match the ensemble");

    PurifiedChannelStats stats = purified_channel_stats(ens, w);
    double h_be_cond = 0.0, h_be_flat = 0.0;
    for (std::size_t y = 0; y < stats.q.size(); ++y) {
        h_be_cond += stats.q[y] * stats.h_be_given_y[y];
        h_be_flat += stats.h_be_given_y[y];
    }
    double i_ybe = stats.h_be_avg - h_be_cond;
    double hq = shannon_entropy(ProbabilityDistribution(stats.q));
    double h_y_given_be = hq - i_ybe;

    CQEnsemble yb = apply_channel(ens, w);
    double h_b_cond = 0.0, h_b_flat = 0.0;
    for (int y = 0; y < yb.alphabet_size(); ++y) {
        double h = von_neumann_entropy(yb.state(y));
        h_b_cond += yb.probs().probs()[y] * h;
        h_b_flat += h;
    }
    double i_yb = holevo_information(yb);

    double log_dx = std::log2(static_cast<double>(ens.alphabet_size()));
    double log_db = std::log2(static_cast<double>(ens.dim_b()));
    double ny = static_cast<double>(w.out_size());
    double delta_a = (ny * log_dx - h_be_flat + 1.0) * delta;
    double delta_b = (ny * log_db - h_b_flat + 1.0) * delta;

    double kx = purity_kappa(DensityMatrix::diagonal(ens.probs().probs()));
    double kb = purity_kappa(average_state(ens));

    auto clamp0 = [](double v) { return std::max(v, 0.0); };
    ResourceLedger led;
    led.n = n;
    led.delta = delta;
    led.rate_M = clamp0(i_ybe + delta);
    led.rate_L = clamp0(h_y_given_be + delta);
    led.catalyst_rate = clamp0(i_ybe);
    led.P_A_rate = clamp0(log_dx - h_be_cond - delta_a);
    led.P_B_rate = clamp0(log_db - h_b_cond - delta_b);
    led.net_P = clamp0(kx + kb + i_yb);
    led.classical_R = clamp0(i_ybe);
    return led;
}

} // namespace purity
