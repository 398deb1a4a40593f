#include "purity/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace purity {

CMat& CMat::add_scaled(const CMat& other, cplx factor) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += factor * other.a_[i];
    return *this;
}

cplx CMat::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double CMat::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

CMat operator*(const CMat& a, const CMat& b) {
    int d = a.dim();
    CMat out(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (int j = 0; j < d; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

CMat adjoint(const CMat& m) {
    int d = m.dim();
    CMat out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = std::conj(m(j, i));
    return out;
}

namespace {

// Cyclic complex Jacobi on a Hermitian matrix held in `a` (row-major,
// destroyed).  If `v` is non-null it accumulates the rotations so that the
// original matrix equals V diag(a) V^dagger on return.
void jacobi_inplace(cplx* a, int d, cplx* v) {
    auto at = [&](int i, int j) -> cplx& { return a[static_cast<std::size_t>(i) * d + j]; };
    if (v != nullptr) {
        std::fill(v, v + static_cast<std::size_t>(d) * d, cplx{});
        for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i) * d + i] = 1.0;
    }
    if (d < 2) return;

    constexpr int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off2 = 0.0;
        double diag2 = 0.0;
        for (int i = 0; i < d; ++i) {
            diag2 += std::norm(at(i, i));
            for (int j = i + 1; j < d; ++j) off2 += std::norm(at(i, j));
        }
        double frob2 = diag2 + 2.0 * off2;
        if (off2 <= 1e-30 * frob2 || off2 == 0.0) break;

        for (int p = 0; p < d - 1; ++p) {
            for (int q = p + 1; q < d; ++q) {
                cplx apq = at(p, q);
                double b = std::abs(apq);
                double app = at(p, p).real();
                double aqq = at(q, q).real();
                if (b <= 1e-18 * (std::abs(app) + std::abs(aqq)) || b < 1e-300) continue;

                cplx phi = apq / b;
                double tau = (aqq - app) / (2.0 * b);
                double t;
                if (std::abs(tau) > 1e15) {
                    t = -1.0 / (2.0 * tau);
                } else if (tau >= 0.0) {
                    t = -1.0 / (tau + std::sqrt(tau * tau + 1.0));
                } else {
                    t = 1.0 / (-tau + std::sqrt(tau * tau + 1.0));
                }
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;

                // u = [[c, -s], [s*conj(phi), c*conj(phi)]] acting on (p, q)
                cplx u00 = c, u01 = -s;
                cplx u10 = s * std::conj(phi), u11 = c * std::conj(phi);

                // rows: A <- u^dagger A
                for (int j = 0; j < d; ++j) {
                    cplx rp = at(p, j), rq = at(q, j);
                    at(p, j) = std::conj(u00) * rp + std::conj(u10) * rq;
                    at(q, j) = std::conj(u01) * rp + std::conj(u11) * rq;
                }
                // columns: A <- A u
                for (int i = 0; i < d; ++i) {
                    cplx cp = at(i, p), cq = at(i, q);
                    at(i, p) = cp * u00 + cq * u10;
                    at(i, q) = cp * u01 + cq * u11;
                }
                // clean up rounding residue in the zeroed pair
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                at(p, p) = cplx(at(p, p).real(), 0.0);
                at(q, q) = cplx(at(q, q).real(), 0.0);

                if (v != nullptr) {
                    for (int i = 0; i < d; ++i) {
                        cplx vp = v[static_cast<std::size_t>(i) * d + p];
                        cplx vq = v[static_cast<std::size_t>(i) * d + q];
                        v[static_cast<std::size_t>(i) * d + p] = vp * u00 + vq * u10;
                        v[static_cast<std::size_t>(i) * d + q] = vp * u01 + vq * u11;
                    }
                }
            }
        }
    }
}

// Descending value order with index as the deterministic tie-break.
void sorted_order(const double* dvals, int d, std::vector<int>& order) {
    order.resize(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return dvals[i] > dvals[j]; });
}

} // namespace

EigResult eig_hermitian(const CMat& m) {
    int d = m.dim();
    EigResult r;
    r.values.resize(d);
    r.vectors = CMat(d);
    if (d == 0) return r;

    std::vector<cplx> a = m.data();
    std::vector<cplx> v(static_cast<std::size_t>(d) * d);
    jacobi_inplace(a.data(), d, v.data());

    std::vector<double> dvals(d);
    for (int i = 0; i < d; ++i) dvals[i] = a[static_cast<std::size_t>(i) * d + i].real();
    std::vector<int> order;
    sorted_order(dvals.data(), d, order);
    for (int k = 0; k < d; ++k) {
        r.values[k] = dvals[order[k]];
        for (int i = 0; i < d; ++i) r.vectors(i, k) = v[static_cast<std::size_t>(i) * d + order[k]];
    }
    return r;
}

void JacobiWorkspace::eigenvalues(const cplx* a, int dim, double* evals) {
    work_.assign(a, a + static_cast<std::size_t>(dim) * dim);
    jacobi_inplace(work_.data(), dim, nullptr);
    dvals_.resize(dim);
    for (int i = 0; i < dim; ++i) dvals_[i] = work_[static_cast<std::size_t>(i) * dim + i].real();
    sorted_order(dvals_.data(), dim, order_);
    for (int k = 0; k < dim; ++k) evals[k] = dvals_[order_[k]];
}

void JacobiWorkspace::eigensystem(const cplx* a, int dim, double* evals, cplx* vecs) {
    work_.assign(a, a + static_cast<std::size_t>(dim) * dim);
    vwork_.resize(static_cast<std::size_t>(dim) * dim);
    jacobi_inplace(work_.data(), dim, vwork_.data());
    dvals_.resize(dim);
    for (int i = 0; i < dim; ++i) dvals_[i] = work_[static_cast<std::size_t>(i) * dim + i].real();
    sorted_order(dvals_.data(), dim, order_);
    for (int k = 0; k < dim; ++k) {
        evals[k] = dvals_[order_[k]];
        for (int i = 0; i < dim; ++i)
            vecs[static_cast<std::size_t>(i) * dim + k] =
                vwork_[static_cast<std::size_t>(i) * dim + order_[k]];
    }
}

CMat trace_out_first(const CMat& m, int dim_a, int dim_b) {
    CMat out(dim_b);
    for (int a = 0; a < dim_a; ++a)
        for (int i = 0; i < dim_b; ++i)
            for (int j = 0; j < dim_b; ++j)
                out(i, j) += m(a * dim_b + i, a * dim_b + j);
    return out;
}

CMat trace_out_second(const CMat& m, int dim_a, int dim_b) {
    CMat out(dim_a);
    for (int i = 0; i < dim_a; ++i)
        for (int j = 0; j < dim_a; ++j)
            for (int b = 0; b < dim_b; ++b)
                out(i, j) += m(i * dim_b + b, j * dim_b + b);
    return out;
}

} // namespace purity
