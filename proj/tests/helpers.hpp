#pragma once

#include <cmath>
#include <vector>

#include "purity/cq_ensemble.hpp"
#include "purity/density_matrix.hpp"
#include "purity/matrix.hpp"
#include "purity/rng.hpp"

namespace testutil {

using purity::cplx;
using purity::CMat;

inline std::vector<purity::cplx> random_pure(purity::Rng& rng, int d) {
    std::vector<cplx> v(d);
    double norm2 = 0.0;
    for (auto& a : v) {
        a = rng.gaussian_cplx();
        norm2 += std::norm(a);
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : v) a *= inv;
    return v;
}

inline purity::DensityMatrix random_density(purity::Rng& rng, int d) {
    CMat g(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.gaussian_cplx();
    CMat m = g * purity::adjoint(g);
    double tr = m.trace().real();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) /= tr;
    return purity::DensityMatrix(std::move(m));
}

// Gram-Schmidt on Gaussian columns
inline CMat random_unitary(purity::Rng& rng, int d) {
    std::vector<std::vector<cplx>> cols(d);
    for (int c = 0; c < d; ++c) {
        std::vector<cplx> v(d);
        for (auto& a : v) a = rng.gaussian_cplx();
        for (int prev = 0; prev < c; ++prev) {
            cplx ip{0.0, 0.0};
            for (int i = 0; i < d; ++i) ip += std::conj(cols[prev][i]) * v[i];
            for (int i = 0; i < d; ++i) v[i] -= ip * cols[prev][i];
        }
        double norm2 = 0.0;
        for (auto& a : v) norm2 += std::norm(a);
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& a : v) a *= inv;
        cols[c] = std::move(v);
    }
    CMat u(d);
    for (int i = 0; i < d; ++i)
        for (int c = 0; c < d; ++c) u(i, c) = cols[c][i];
    return u;
}

inline CMat kron(const CMat& a, const CMat& b) {
    int da = a.dim(), db = b.dim();
    CMat out(da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            for (int k = 0; k < db; ++k)
                for (int l = 0; l < db; ++l) out(i * db + k, j * db + l) = a(i, j) * b(k, l);
    return out;
}

inline std::vector<double> random_simplex(purity::Rng& rng, int n) {
    std::vector<double> p(n);
    double sum = 0.0;
    for (auto& v : p) {
        v = -std::log(rng.uniform());
        sum += v;
    }
    for (auto& v : p) v /= sum;
    return p;
}

inline purity::CQEnsemble random_ensemble(purity::Rng& rng, int nx, int d) {
    std::vector<purity::DensityMatrix> states;
    states.reserve(nx);
    for (int x = 0; x < nx; ++x) states.push_back(random_density(rng, d));
    return purity::CQEnsemble(purity::ProbabilityDistribution(random_simplex(rng, nx)),
                              std::move(states));
}

inline purity::ClassicalChannel random_channel(purity::Rng& rng, int nx, int ny) {
    std::vector<double> w(static_cast<std::size_t>(nx) * ny);
    for (int x = 0; x < nx; ++x) {
        auto row = random_simplex(rng, ny);
        for (int y = 0; y < ny; ++y) w[static_cast<std::size_t>(x) * ny + y] = row[y];
    }
    return purity::ClassicalChannel(nx, ny, std::move(w));
}

inline double max_abs_diff(const CMat& a, const CMat& b) {
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

} // namespace testutil
