#include "purity/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "purity/errors.hpp"
#include "purity/kernels.hpp"
#include "purity/rng.hpp"

namespace purity {

namespace {

constexpr double kEigFloor = 1e-12;  // floor inside log2 of state eigenvalues
constexpr double kProbFloor = 1e-12; // floor inside log2 of probabilities

// Euclidean projection of a row onto the probability simplex.
void project_simplex(double* w, int n, std::vector<double>& u) {
    u.assign(w, w + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, tau = 0.0;
    for (int j = 0; j < n; ++j) {
        css += u[j];
        double t = (css - 1.0) / (j + 1);
        if (u[j] - t > 0.0) tau = t;
    }
    for (int i = 0; i < n; ++i) w[i] = std::max(w[i] - tau, 0.0);
}

} // namespace

ChannelObjective::ChannelObjective(const CQEnsemble& ens, int y_size)
    : nx_(ens.alphabet_size()), ny_(y_size), d_(ens.dim_b()), p_(ens.probs().probs()) {
    if (ny_ < 1) throw ValidationError("output alphabet size must be >= 1");
    rho_.resize(static_cast<std::size_t>(nx_) * d_ * d_);
    for (int x = 0; x < nx_; ++x)
        std::copy(ens.state(x).matrix().data().begin(), ens.state(x).matrix().data().end(),
                  rho_.begin() + static_cast<std::size_t>(x) * d_ * d_);
    h_avg_ = von_neumann_entropy(average_state(ens));
}

ChannelObjective::Value ChannelObjective::evaluate(const double* w) {
    const auto& ops = kernels::ops();
    const std::size_t dd = static_cast<std::size_t>(d_) * d_;
    const std::size_t len = 2 * dd; // interleaved doubles per state block

    q_.assign(ny_, 0.0);
    s_.assign(static_cast<std::size_t>(ny_) * dd, cplx{});
    coeff_.resize(ny_);
    double* sview = reinterpret_cast<double*>(s_.data());
    double h_rows = 0.0;
    for (int x = 0; x < nx_; ++x) {
        double px = p_[x];
        if (px <= 0.0) continue;
        const double* row = w + static_cast<std::size_t>(x) * ny_;
        ops.axpy(px, row, q_.data(), ny_);
        h_rows += px * ops.sum_neg_xlog2x(row, ny_);
        for (int y = 0; y < ny_; ++y) coeff_[y] = px * row[y];
        ops.axpy_rows(coeff_.data(),
                      reinterpret_cast<const double*>(rho_.data() + static_cast<std::size_t>(x) * dd),
                      sview, ny_, len);
    }

    evals_.resize(d_);
    double s_ent = 0.0;
    for (int y = 0; y < ny_; ++y) {
        ws_.eigenvalues(s_.data() + static_cast<std::size_t>(y) * dd, d_, evals_.data());
        s_ent += ops.sum_neg_xlog2x(evals_.data(), d_);
    }
    double hq = ops.sum_neg_xlog2x(q_.data(), ny_);
    // sum_y q_y H(sigma_y) = s_ent - H(q), hence I(Y;B) = h_avg - s_ent + H(q)
    return {hq - h_rows, h_avg_ - s_ent + hq};
}

double ChannelObjective::gradient(const double* w, double a, double b, double* grad) {
    const auto& ops = kernels::ops();
    const std::size_t dd = static_cast<std::size_t>(d_) * d_;
    const std::size_t len = 2 * dd;
    const std::size_t n = static_cast<std::size_t>(nx_) * ny_;

    Value v = evaluate(w); // fills q_ and s_

    lq_.resize(ny_);
    ops.log2_clamped(q_.data(), lq_.data(), ny_, kProbFloor);
    lw_.resize(n);
    ops.log2_clamped(w, lw_.data(), n, kProbFloor);

    // L_y = log2(S_y) through the eigensystem, eigenvalues floored
    lmat_.assign(static_cast<std::size_t>(ny_) * dd, cplx{});
    vecs_.resize(dd);
    evals_.resize(d_);
    for (int y = 0; y < ny_; ++y) {
        ws_.eigensystem(s_.data() + static_cast<std::size_t>(y) * dd, d_, evals_.data(),
                        vecs_.data());
        cplx* lm = lmat_.data() + static_cast<std::size_t>(y) * dd;
        for (int k = 0; k < d_; ++k) {
            double lv = std::log2(std::max(evals_[k], kEigFloor));
            for (int i = 0; i < d_; ++i) {
                cplx vi = vecs_[static_cast<std::size_t>(i) * d_ + k];
                if (vi == cplx{}) continue;
                for (int j = 0; j < d_; ++j)
                    lm[static_cast<std::size_t>(i) * d_ + j] +=
                        lv * vi * std::conj(vecs_[static_cast<std::size_t>(j) * d_ + k]);
            }
        }
    }

    // t_[x*ny + y] = Tr(rho_x L_y): real dot of interleaved views
    t_.resize(n);
    for (int x = 0; x < nx_; ++x)
        ops.dot_rows(reinterpret_cast<const double*>(rho_.data() + static_cast<std::size_t>(x) * dd),
                     reinterpret_cast<const double*>(lmat_.data()),
                     t_.data() + static_cast<std::size_t>(x) * ny_, ny_, len);

    for (int x = 0; x < nx_; ++x) {
        double px = p_[x];
        for (int y = 0; y < ny_; ++y) {
            std::size_t i = static_cast<std::size_t>(x) * ny_ + y;
            grad[i] = px * (a * (t_[i] - lq_[y]) - b * (lw_[i] - lq_[y]));
        }
    }
    return a * v.i_yb - b * v.i_yx;
}

double lagrangian_objective(const CQEnsemble& ens, const ClassicalChannel& w, double mu) {
    if (!(mu >= 0.0 && mu <= 1.0))
        throw ValidationError("multiplier must lie in [0,1], got " + std::to_string(mu));
    if (w.in_size() != ens.alphabet_size())
        throw ValidationError("channel input alphabet does not match the ensemble");
    ChannelObjective obj(ens, w.out_size());
    ChannelObjective::Value v = obj.evaluate(w.entries().data());
    return v.i_yb - mu * v.i_yx;
}

namespace {

struct AscentScratch {
    std::vector<double> grad, trial, urow;
};

// Projected gradient ascent of a*I(Y;B) - b*I(Y;X) from w0 (modified in
// place); returns the final objective value.
double ascend(ChannelObjective& obj, std::vector<double>& w, double a, double b,
              const OptimizerOptions& opts, AscentScratch& sc) {
    const auto& ops = kernels::ops();
    int nx = obj.nx(), ny = obj.ny();
    std::size_t n = static_cast<std::size_t>(nx) * ny;
    sc.grad.resize(n);
    sc.trial.resize(n);

    for (int x = 0; x < nx; ++x)
        project_simplex(w.data() + static_cast<std::size_t>(x) * ny, ny, sc.urow);
    ChannelObjective::Value v = obj.evaluate(w.data());
    double f = a * v.i_yb - b * v.i_yx;

    double step = 0.25;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        obj.gradient(w.data(), a, b, sc.grad.data());
        double s = step;
        bool accepted = false;
        double f2 = f;
        for (int bt = 0; bt < 50; ++bt) {
            std::copy(w.begin(), w.end(), sc.trial.begin());
            ops.axpy(s, sc.grad.data(), sc.trial.data(), n);
            for (int x = 0; x < nx; ++x)
                project_simplex(sc.trial.data() + static_cast<std::size_t>(x) * ny, ny, sc.urow);
            ChannelObjective::Value v2 = obj.evaluate(sc.trial.data());
            f2 = a * v2.i_yb - b * v2.i_yx;
            if (f2 > f) {
                accepted = true;
                break;
            }
            s *= 0.5;
            if (s < 1e-18) break;
        }
        if (!accepted) break;
        double gain = f2 - f;
        w.swap(sc.trial);
        f = f2;
        step = std::min(s * 2.0, 64.0);
        if (gain < opts.convergence_tol) break;
    }
    return f;
}

void validate_options(const OptimizerOptions& opts) {
    if (opts.y_size < 0) throw ValidationError("y_size must be positive (or 0 for default)");
    if (opts.restarts < 1) throw ValidationError("restarts must be >= 1");
    if (opts.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
    if (!(opts.convergence_tol > 0.0)) throw ValidationError("convergence_tol must be > 0");
}

TradeoffPoint optimize_scalarized(const CQEnsemble& ens, double a, double b,
                                  double multiplier_label, bool d_form,
                                  const OptimizerOptions& opts) {
    validate_options(opts);
    int nx = ens.alphabet_size();
    int ny = opts.y_size > 0 ? opts.y_size : nx + 2;
    ChannelObjective obj(ens, ny);
    std::size_t n = static_cast<std::size_t>(nx) * ny;

    AscentScratch sc;
    double best_f = -std::numeric_limits<double>::infinity();
    double best_r = std::numeric_limits<double>::infinity();
    std::vector<double> best_w;
    std::vector<double> w;

    // ties on the objective prefer the cheaper channel (smaller constraint
    // value), then the lexicographically smaller entry sequence
    auto consider = [&](std::vector<double>&& w0) {
        w = std::move(w0);
        double f = ascend(obj, w, a, b, opts, sc);
        ChannelObjective::Value v = obj.evaluate(w.data());
        double r = d_form ? v.i_yx - v.i_yb : v.i_yx;
        bool better = f > best_f;
        if (f == best_f)
            better = r < best_r ||
                     (r == best_r && std::lexicographical_compare(w.begin(), w.end(),
                                                                  best_w.begin(), best_w.end()));
        if (better) {
            best_f = f;
            best_r = r;
            best_w = w;
        }
    };

    // deterministic channels as seeds. The objective is invariant under
    // relabeling outputs, so deterministic maps matter only through the
    // partition of inputs they induce: enumerate one representative per
    // partition of X into at most ny blocks (restricted growth strings)
    // when that count is small, otherwise fall back to two stock maps.
    double partition_count;
    {
        // completions c[m] after a prefix occupying m blocks:
        // c_i[m] = m*c_{i+1}[m] + (m < ny)*c_{i+1}[m+1], c_nx[.] = 1
        std::vector<double> c(static_cast<std::size_t>(nx) + 2, 1.0);
        for (int i = nx - 1; i >= 1; --i) {
            std::vector<double> next(c.size(), 0.0);
            for (int m = 1; m <= i; ++m)
                next[m] = m * c[m] + (m < ny ? c[m + 1] : 0.0);
            c = std::move(next);
        }
        partition_count = nx > 0 ? c[1] : 0.0;
    }
    if (partition_count <= 4096.0) {
        std::vector<int> blocks(nx, 0);
        while (true) {
            std::vector<double> w0(n, 0.0);
            for (int x = 0; x < nx; ++x) w0[static_cast<std::size_t>(x) * ny + blocks[x]] = 1.0;
            consider(std::move(w0));
            int i = nx - 1;
            for (; i >= 1; --i) {
                int prefix_max = 0;
                for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, blocks[j]);
                if (blocks[i] <= prefix_max && blocks[i] + 1 < ny) break;
            }
            if (i < 1) break;
            ++blocks[i];
            for (int j = i + 1; j < nx; ++j) blocks[j] = 0;
        }
    } else {
        std::vector<double> spread(n, 0.0);
        for (int x = 0; x < nx; ++x) spread[static_cast<std::size_t>(x) * ny + (x % ny)] = 1.0;
        consider(std::move(spread));
        std::vector<double> constant(n, 0.0);
        for (int x = 0; x < nx; ++x) constant[static_cast<std::size_t>(x) * ny] = 1.0;
        consider(std::move(constant));
    }

    for (int i = 0; i < opts.restarts; ++i) {
        Rng rng(opts.master_seed + static_cast<std::uint64_t>(i));
        std::vector<double> w0(n);
        for (int x = 0; x < nx; ++x) {
            double sum = 0.0;
            for (int y = 0; y < ny; ++y) {
                double e = -std::log(rng.uniform()); // flat Dirichlet row
                w0[static_cast<std::size_t>(x) * ny + y] = e;
                sum += e;
            }
            for (int y = 0; y < ny; ++y) w0[static_cast<std::size_t>(x) * ny + y] /= sum;
        }
        consider(std::move(w0));
    }

    // exact row normalization before handing the winner back
    for (int x = 0; x < nx; ++x) {
        double sum = 0.0;
        for (int y = 0; y < ny; ++y) sum += best_w[static_cast<std::size_t>(x) * ny + y];
        for (int y = 0; y < ny; ++y) best_w[static_cast<std::size_t>(x) * ny + y] /= sum;
    }
    ChannelObjective::Value v = obj.evaluate(best_w.data());

    TradeoffPoint pt;
    pt.multiplier = multiplier_label;
    pt.p = std::max(v.i_yb, 0.0);
    pt.r = d_form ? std::max(v.i_yx - v.i_yb, 0.0) : std::max(v.i_yx, 0.0);
    pt.channel = ClassicalChannel(nx, ny, std::move(best_w));
    return pt;
}

TradeoffCurve compute_curve(const CQEnsemble& ens, const std::vector<double>& mu_grid,
                            const OptimizerOptions& opts, bool d_form) {
    if (mu_grid.empty()) throw ValidationError("multiplier grid is empty");
    double mu_max = d_form ? 50.0 : 1.0;
    std::vector<TradeoffPoint> pts;
    pts.reserve(mu_grid.size());
    for (double mu : mu_grid) {
        if (!(mu >= 0.0 && mu <= mu_max))
            throw ValidationError("multiplier " + std::to_string(mu) + " outside [0," +
                                  std::to_string(mu_max) + "]");
        double a = d_form ? 1.0 + mu : 1.0;
        pts.push_back(optimize_scalarized(ens, a, mu, mu, d_form, opts));
    }
    return TradeoffCurve::from_points(std::move(pts));
}

} // namespace

TradeoffPoint optimize_lagrangian(const CQEnsemble& ens, double mu,
                                  const OptimizerOptions& opts) {
    if (!(mu >= 0.0 && mu <= 1.0))
        throw ValidationError("multiplier must lie in [0,1], got " + std::to_string(mu));
    return optimize_scalarized(ens, 1.0, mu, mu, /*d_form=*/false, opts);
}

TradeoffCurve compute_P_curve(const CQEnsemble& ens, const std::vector<double>& mu_grid,
                              const OptimizerOptions& opts) {
    return compute_curve(ens, mu_grid, opts, /*d_form=*/false);
}

TradeoffCurve compute_D_curve(const CQEnsemble& ens, const std::vector<double>& mu_grid,
                              const OptimizerOptions& opts) {
    return compute_curve(ens, mu_grid, opts, /*d_form=*/true);
}

TradeoffCurve TradeoffCurve::from_points(std::vector<TradeoffPoint> pts) {
    TradeoffCurve curve;
    std::sort(pts.begin(), pts.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
        if (a.r != b.r) return a.r < b.r;
        if (a.p != b.p) return a.p < b.p;
        return a.multiplier < b.multiplier;
    });
    curve.points_ = std::move(pts);

    std::vector<std::pair<double, double>> cand;
    cand.emplace_back(0.0, 0.0);
    for (const TradeoffPoint& pt : curve.points_) cand.emplace_back(pt.r, pt.p);
    std::sort(cand.begin(), cand.end());
    // per distinct r keep only the highest p
    std::vector<std::pair<double, double>> uniq;
    for (const auto& c : cand) {
        if (!uniq.empty() && uniq.back().first == c.first)
            uniq.back().second = std::max(uniq.back().second, c.second);
        else
            uniq.push_back(c);
    }

    // upper concave hull: drop any vertex on or below the chord of its
    // neighbours
    std::vector<std::pair<double, double>>& hull = curve.envelope_;
    for (const auto& c : uniq) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            double cross = (b.first - a.first) * (c.second - a.second) -
                           (b.second - a.second) * (c.first - a.first);
            if (cross >= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(c);
    }
    // monotone clamp: once the hull peaks, later (lower) vertices are
    // dominated by waiting at the peak
    std::size_t peak = 0;
    for (std::size_t i = 1; i < hull.size(); ++i)
        if (hull[i].second > hull[peak].second) peak = i;
    hull.resize(peak + 1);
    return curve;
}

double TradeoffCurve::envelope_at(double r) const {
    if (!(r >= 0.0)) throw ValidationError("envelope queried at negative rate");
    if (envelope_.empty()) return 0.0;
    if (r <= envelope_.front().first) return envelope_.front().second;
    if (r >= envelope_.back().first) return envelope_.back().second;
    auto it = std::upper_bound(envelope_.begin(), envelope_.end(),
                               std::make_pair(r, std::numeric_limits<double>::infinity()));
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    double t = (r - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

std::vector<double> default_p_multiplier_grid() {
    std::vector<double> g(41);
    for (int i = 0; i <= 40; ++i) g[i] = static_cast<double>(i) / 40.0;
    return g;
}

std::vector<double> default_d_multiplier_grid() {
    std::vector<double> g;
    g.push_back(0.0);
    const int count = 40;
    double lo = 0.05, hi = 50.0;
    for (int i = 0; i < count; ++i)
        g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    return g;
}

std::vector<double> matched_d_multiplier_grid(const std::vector<double>& p_grid) {
    std::vector<double> g;
    g.reserve(p_grid.size());
    for (double mu : p_grid) {
        double md = mu >= 1.0 ? 50.0 : mu / (1.0 - mu);
        g.push_back(std::min(md, 50.0));
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

std::vector<PDCheck> verify_PD_relation(const CQEnsemble& ens,
                                        const std::vector<double>& r_samples,
                                        const OptimizerOptions& opts) {
    std::vector<double> p_grid = default_p_multiplier_grid();
    TradeoffCurve pc = compute_P_curve(ens, p_grid, opts);
    TradeoffCurve dc = compute_D_curve(ens, matched_d_multiplier_grid(p_grid), opts);
    std::vector<PDCheck> out;
    out.reserve(r_samples.size());
    for (double r : r_samples) {
        if (!(r >= 0.0)) throw ValidationError("rate sample must be >= 0");
        PDCheck c;
        c.r = r;
        c.d_value = dc.envelope_at(r);
        c.p_value = pc.envelope_at(c.d_value + r);
        c.discrepancy = std::abs(c.p_value - c.d_value);
        out.push_back(c);
    }
    return out;
}

double kappa_arrow(const CQEnsemble& ens, double r, const TradeoffCurve& p_curve) {
    if (!(r >= 0.0)) throw ValidationError("communication rate must be >= 0");
    double kx = purity_kappa(DensityMatrix::diagonal(ens.probs().probs()));
    double kb = purity_kappa(average_state(ens));
    return kx + kb + p_curve.envelope_at(r);
}

double kappa_arrow(const CQEnsemble& ens, double r, const OptimizerOptions& opts) {
    return kappa_arrow(ens, r, compute_P_curve(ens, default_p_multiplier_grid(), opts));
}

std::vector<double> brute_force_oracle_sweep(const CQEnsemble& ens,
                                             const std::vector<double>& r_list,
                                             int y_size, double grid_step) {
    if (y_size < 1) throw ValidationError("oracle y_size must be >= 1");
    if (!(grid_step > 0.0 && grid_step <= 1.0))
        throw ValidationError("oracle grid_step must lie in (0, 1]");
    for (double r : r_list)
        if (!(r >= 0.0)) throw ValidationError("oracle rate must be >= 0");
    int nx = ens.alphabet_size();
    long long steps = std::llround(1.0 / grid_step);
    if (steps < 1) steps = 1;

    // candidate count: C(steps + y - 1, y - 1)^nx
    long double per_row = 1.0L;
    for (int i = 1; i <= y_size - 1; ++i)
        per_row = per_row * static_cast<long double>(steps + i) / i;
    long double total = 1.0L;
    for (int x = 0; x < nx; ++x) {
        total *= per_row;
        if (total > 1e18L) break;
    }
    if (total > 1e7L) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3Le", total);
        throw GuardError(std::string("oracle grid enumeration would visit ") + buf +
                         " candidate channels, over the 1e7 budget");
    }

    // all compositions of `steps` into y_size parts, as probability rows
    std::vector<std::vector<double>> rows;
    std::vector<long long> counts(y_size, 0);
    auto emit = [&]() {
        std::vector<double> row(y_size);
        for (int y = 0; y < y_size; ++y)
            row[y] = static_cast<double>(counts[y]) / static_cast<double>(steps);
        rows.push_back(std::move(row));
    };
    auto rec = [&](auto&& self, int pos, long long left) -> void {
        if (pos == y_size - 1) {
            counts[pos] = left;
            emit();
            return;
        }
        for (long long c = 0; c <= left; ++c) {
            counts[pos] = c;
            self(self, pos + 1, left - c);
        }
    };
    rec(rec, 0, steps);

    ChannelObjective obj(ens, y_size);
    std::size_t n_rows = rows.size();
    std::vector<std::size_t> idx(nx, 0);
    std::vector<double> w(static_cast<std::size_t>(nx) * y_size);
    std::vector<double> best(r_list.size(), 0.0);
    bool done = false;
    while (!done) {
        for (int x = 0; x < nx; ++x)
            std::copy(rows[idx[x]].begin(), rows[idx[x]].end(),
                      w.begin() + static_cast<std::size_t>(x) * y_size);
        ChannelObjective::Value v = obj.evaluate(w.data());
        for (std::size_t k = 0; k < r_list.size(); ++k)
            if (v.i_yx <= r_list[k] + 1e-12 && v.i_yb > best[k]) best[k] = v.i_yb;
        int pos = 0;
        while (pos < nx && ++idx[pos] == n_rows) idx[pos++] = 0;
        done = pos == nx;
    }
    return best;
}

double brute_force_oracle(const CQEnsemble& ens, double r, int y_size, double grid_step) {
    return brute_force_oracle_sweep(ens, {r}, y_size, grid_step)[0];
}

} // namespace purity
