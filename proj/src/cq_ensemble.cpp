#include "purity/cq_ensemble.hpp"

#include <cmath>
#include <string>

#include "purity/errors.hpp"
#include "purity/kernels.hpp"

namespace purity {

namespace {
constexpr double kDropCutoff = 1e-14;
}

CQEnsemble::CQEnsemble(ProbabilityDistribution probs, std::vector<DensityMatrix> states)
    : probs_(std::move(probs)), states_(std::move(states)) {
    if (probs_.size() < 1) throw ValidationError("ensemble alphabet must be non-empty");
    if (static_cast<int>(states_.size()) != probs_.size())
        throw ValidationError("ensemble has " + std::to_string(states_.size()) +
                              " states for " + std::to_string(probs_.size()) + " labels");
    for (const DensityMatrix& s : states_)
        if (s.dim() != states_[0].dim())
            throw ValidationError("ensemble states have mixed dimensions");
}

ClassicalChannel::ClassicalChannel(int in_size, int out_size, std::vector<double> entries)
    : in_(in_size), out_(out_size), w_(std::move(entries)) {
    if (in_ < 1 || out_ < 1) throw ValidationError("channel must have |X| >= 1 and |Y| >= 1");
    if (w_.size() != static_cast<std::size_t>(in_) * out_)
        throw ValidationError("channel entry count does not match dimensions");
    for (int x = 0; x < in_; ++x) {
        double sum = 0.0;
        for (int y = 0; y < out_; ++y) {
            double v = w_[static_cast<std::size_t>(x) * out_ + y];
            if (!(v >= 0.0))
                throw ValidationError("channel entry W(" + std::to_string(y) + "|" +
                                      std::to_string(x) + ") is negative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ValidationError("channel row " + std::to_string(x) + " sums to " +
                                  std::to_string(sum) + ", expected 1 within 1e-12");
    }
}

ClassicalChannel ClassicalChannel::identity(int size) {
    std::vector<double> w(static_cast<std::size_t>(size) * size, 0.0);
    for (int i = 0; i < size; ++i) w[static_cast<std::size_t>(i) * size + i] = 1.0;
    return ClassicalChannel(size, size, std::move(w));
}

ClassicalChannel compose(const ClassicalChannel& first, const ClassicalChannel& second) {
    if (second.in_size() != first.out_size())
        throw ValidationError("compose: inner alphabet mismatch (" +
                              std::to_string(first.out_size()) + " vs " +
                              std::to_string(second.in_size()) + ")");
    int in = first.in_size(), mid = first.out_size(), out = second.out_size();
    std::vector<double> w(static_cast<std::size_t>(in) * out, 0.0);
    for (int x = 0; x < in; ++x)
        for (int m = 0; m < mid; ++m) {
            double f = first(m, x);
            if (f == 0.0) continue;
            for (int y = 0; y < out; ++y)
                w[static_cast<std::size_t>(x) * out + y] += f * second(y, m);
        }
    return ClassicalChannel(in, out, std::move(w));
}

ClassicalChannel mix_channels(const ClassicalChannel& w1, const ClassicalChannel& w2,
                              double t) {
    if (w1.in_size() != w2.in_size())
        throw ValidationError("mix_channels: input alphabets differ");
    if (t < 0.0 || t > 1.0) throw ValidationError("mix_channels: weight outside [0,1]");
    int in = w1.in_size(), o1 = w1.out_size(), o2 = w2.out_size();
    std::vector<double> w(static_cast<std::size_t>(in) * (o1 + o2), 0.0);
    for (int x = 0; x < in; ++x) {
        for (int y = 0; y < o1; ++y)
            w[static_cast<std::size_t>(x) * (o1 + o2) + y] = t * w1(y, x);
        for (int y = 0; y < o2; ++y)
            w[static_cast<std::size_t>(x) * (o1 + o2) + o1 + y] = (1.0 - t) * w2(y, x);
    }
    return ClassicalChannel(in, o1 + o2, std::move(w));
}

DensityMatrix joint_state(const CQEnsemble& ens) {
    int nx = ens.alphabet_size(), db = ens.dim_b();
    CMat m(nx * db);
    for (int x = 0; x < nx; ++x) {
        double p = ens.probs()[x];
        for (int i = 0; i < db; ++i)
            for (int j = 0; j < db; ++j)
                m(x * db + i, x * db + j) = p * ens.state(x).entry(i, j);
    }
    return DensityMatrix(std::move(m));
}

DensityMatrix average_state(const CQEnsemble& ens) {
    CMat m(ens.dim_b());
    for (int x = 0; x < ens.alphabet_size(); ++x)
        m.add_scaled(ens.state(x).matrix(), ens.probs()[x]);
    return DensityMatrix(std::move(m));
}

double holevo_information(const CQEnsemble& ens) {
    double h_avg = von_neumann_entropy(average_state(ens));
    double h_cond = 0.0;
    for (int x = 0; x < ens.alphabet_size(); ++x) {
        double p = ens.probs()[x];
        if (p > 0.0) h_cond += p * von_neumann_entropy(ens.state(x));
    }
    return h_avg - h_cond;
}

CQEnsemble apply_channel(const CQEnsemble& ens, const ClassicalChannel& w) {
    if (w.in_size() != ens.alphabet_size())
        throw ValidationError("apply_channel: channel expects " +
                              std::to_string(w.in_size()) + " inputs, ensemble has " +
                              std::to_string(ens.alphabet_size()));
    int nx = ens.alphabet_size(), ny = w.out_size(), db = ens.dim_b();
    std::vector<double> q(ny, 0.0);
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) q[y] += ens.probs()[x] * w(y, x);

    std::vector<double> kept_probs;
    std::vector<DensityMatrix> kept_states;
    for (int y = 0; y < ny; ++y) {
        if (q[y] < kDropCutoff) continue;
        CMat m(db);
        for (int x = 0; x < nx; ++x) {
            double c = ens.probs()[x] * w(y, x);
            if (c > 0.0) m.add_scaled(ens.state(x).matrix(), c / q[y]);
        }
        kept_probs.push_back(q[y]);
        kept_states.push_back(DensityMatrix(std::move(m)));
    }
    // renormalize the kept outcome mass (drops remove at most ~|Y|*1e-14)
    double total = 0.0;
    for (double v : kept_probs) total += v;
    for (double& v : kept_probs) v /= total;
    return CQEnsemble(ProbabilityDistribution(std::move(kept_probs)), std::move(kept_states));
}

double channel_mutual_information(const ProbabilityDistribution& p,
                                  const ClassicalChannel& w) {
    if (w.in_size() != p.size())
        throw ValidationError("channel_mutual_information: size mismatch");
    int nx = p.size(), ny = w.out_size();
    std::vector<double> q(ny, 0.0);
    const auto& ops = kernels::ops();
    double h_cond = 0.0;
    for (int x = 0; x < nx; ++x) {
        ops.axpy(p[x], w.row(x), q.data(), ny);
        if (p[x] > 0.0) h_cond += p[x] * ops.sum_neg_xlog2x(w.row(x), ny);
    }
    return ops.sum_neg_xlog2x(q.data(), ny) - h_cond;
}

PurifiedCQ::PurifiedCQ(const CQEnsemble& ens)
    : dx_(ens.alphabet_size()), db_(ens.dim_b()), de_(dx_ * db_) {
    amp_.assign(static_cast<std::size_t>(dx_) * db_ * de_, cplx{});
    for (int x = 0; x < dx_; ++x) {
        double p = ens.probs()[x];
        if (p <= 0.0) continue;
        EigResult eig = eig_hermitian(ens.state(x).matrix());
        for (int j = 0; j < db_; ++j) {
            double lam = eig.values[j];
            if (lam <= 0.0) continue; // descending order: rest contribute nothing
            double c = std::sqrt(p) * std::sqrt(lam);
            int e = x * db_ + j; // E1 copies the label, E2 indexes the eigenbranch
            for (int b = 0; b < db_; ++b)
                amp_[(static_cast<std::size_t>(x) * db_ + b) * de_ + e] = c * eig.vectors(b, j);
        }
    }

    double n2 = 0.0;
    for (const cplx& a : amp_) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > 1e-9)
        throw ValidationError("purification norm^2 deviates from 1 by " +
                              std::to_string(std::abs(n2 - 1.0)));
}

std::vector<cplx> PurifiedCQ::conditional_be(int x) const {
    double p = 0.0;
    std::vector<cplx> v(static_cast<std::size_t>(db_) * de_);
    for (int b = 0; b < db_; ++b)
        for (int e = 0; e < de_; ++e) {
            cplx a = amplitude(x, b, e);
            v[static_cast<std::size_t>(b) * de_ + e] = a;
            p += std::norm(a);
        }
    if (p < kDropCutoff) return std::vector<cplx>(v.size(), cplx{});
    double inv = 1.0 / std::sqrt(p);
    for (cplx& a : v) a *= inv;
    return v;
}

CMat PurifiedCQ::trace_out_environment() const {
    int dxb = dx_ * db_;
    CMat out(dxb);
    for (int r = 0; r < dxb; ++r)
        for (int c = 0; c < dxb; ++c) {
            cplx acc = 0.0;
            const cplx* ar = amp_.data() + static_cast<std::size_t>(r) * de_;
            const cplx* ac = amp_.data() + static_cast<std::size_t>(c) * de_;
            for (int e = 0; e < de_; ++e) acc += ar[e] * std::conj(ac[e]);
            out(r, c) = acc;
        }
    return out;
}

PurifiedCQ purify_cq(const CQEnsemble& ens) {
    PurifiedCQ psi(ens);
    CMat reduced = psi.trace_out_environment();
    DensityMatrix joint = joint_state(ens);
    double dist = trace_distance(DensityMatrix(std::move(reduced)), joint);
    if (dist > 1e-9)
        throw ValidationError("purification reduction misses the joint state by " +
                              std::to_string(dist));
    return psi;
}

PurifiedChannelStats purified_channel_stats(const CQEnsemble& ens,
                                            const ClassicalChannel& w) {
    if (w.in_size() != ens.alphabet_size())
        throw ValidationError("purified_channel_stats: channel/ensemble size mismatch");
    PurifiedCQ psi(ens);
    int nx = ens.alphabet_size(), ny = w.out_size();
    int dbe = psi.dim_b() * psi.dim_e();

    std::vector<std::vector<cplx>> vx(nx);
    for (int x = 0; x < nx; ++x) vx[x] = psi.conditional_be(x);

    PurifiedChannelStats st;
    st.q.assign(ny, 0.0);
    st.h_be_given_y.assign(ny, 0.0);
    CMat avg(dbe);
    for (int y = 0; y < ny; ++y) {
        CMat m(dbe);
        double qy = 0.0;
        for (int x = 0; x < nx; ++x) {
            double c = ens.probs()[x] * w(y, x);
            if (c <= 0.0) continue;
            qy += c;
            const std::vector<cplx>& v = vx[x];
            for (int r = 0; r < dbe; ++r) {
                if (v[r] == cplx{}) continue;
                for (int s = 0; s < dbe; ++s) m(r, s) += c * v[r] * std::conj(v[s]);
            }
        }
        st.q[y] = qy;
        avg.add_scaled(m, 1.0);
        if (qy >= kDropCutoff) {
            for (cplx& e : m.data()) e /= qy;
            st.h_be_given_y[y] = entropy_from_eigenvalues(eig_hermitian(m).values);
        }
    }
    st.h_be_avg = entropy_from_eigenvalues(eig_hermitian(avg).values);
    return st;
}

std::pair<double, double> cross_check_IYBE(const CQEnsemble& ens,
                                           const ClassicalChannel& w) {
    PurifiedChannelStats st = purified_channel_stats(ens, w);
    double i_ybe = st.h_be_avg;
    for (int y = 0; y < static_cast<int>(st.q.size()); ++y)
        i_ybe -= st.q[y] * st.h_be_given_y[y];
    double i_yx = channel_mutual_information(ens.probs(), w);
    return {i_ybe, i_yx};
}

bool ensembles_close(const CQEnsemble& a, const CQEnsemble& b, double tol) {
    if (a.alphabet_size() != b.alphabet_size() || a.dim_b() != b.dim_b()) return false;
    double l1 = 0.0;
    for (int x = 0; x < a.alphabet_size(); ++x) {
        l1 += std::abs(a.probs()[x] - b.probs()[x]);
        if (trace_distance(a.state(x), b.state(x)) > tol) return false;
    }
    return l1 <= tol;
}

} // namespace purity
