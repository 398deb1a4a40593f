#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "purity/errors.hpp"
#include "purity/matrix.hpp"
#include "purity/rng.hpp"

using namespace purity;
using testutil::kron;

namespace {

CMat random_hermitian(Rng& rng, int d) {
    CMat g(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.gaussian_cplx();
    CMat h = g;
    CMat ga = adjoint(g);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) h(i, j) = 0.5 * (g(i, j) + ga(i, j));
    return h;
}

} // namespace

TEST_CASE("jacobi eigendecomposition reconstructs the matrix") {
    Rng rng(21);
    for (int d : {1, 2, 3, 4, 5, 6, 7, 8, 16}) {
        for (int rep = 0; rep < 4; ++rep) {
            CMat a = random_hermitian(rng, d);
            EigResult e = eig_hermitian(a);
            REQUIRE(static_cast<int>(e.values.size()) == d);

            double norm = std::max(a.frobenius_norm(), 1.0);

            // A V = V diag(values)
            for (int c = 0; c < d; ++c) {
                for (int i = 0; i < d; ++i) {
                    cplx av{0.0, 0.0};
                    for (int k = 0; k < d; ++k) av += a(i, k) * e.vectors(k, c);
                    cplx vl = e.values[c] * e.vectors(i, c);
                    CHECK(std::abs(av - vl) < 1e-12 * norm);
                }
            }

            // V unitary
            for (int c1 = 0; c1 < d; ++c1) {
                for (int c2 = 0; c2 < d; ++c2) {
                    cplx ip{0.0, 0.0};
                    for (int i = 0; i < d; ++i) ip += std::conj(e.vectors(i, c1)) * e.vectors(i, c2);
                    CHECK(std::abs(ip - (c1 == c2 ? 1.0 : 0.0)) < 1e-12);
                }
            }

            // descending order
            for (int i = 0; i + 1 < d; ++i) CHECK(e.values[i] >= e.values[i + 1] - 1e-14);

            // trace preserved
            double sum = 0.0;
            for (double v : e.values) sum += v;
            CHECK(sum == doctest::Approx(a.trace().real()).epsilon(1e-12));
        }
    }
}

TEST_CASE("jacobi handles diagonal and near-diagonal input") {
    CMat d(4);
    d(0, 0) = 0.1;
    d(1, 1) = 0.4;
    d(2, 2) = 0.3;
    d(3, 3) = 0.2;
    EigResult e = eig_hermitian(d);
    CHECK(e.values[0] == doctest::Approx(0.4));
    CHECK(e.values[1] == doctest::Approx(0.3));
    CHECK(e.values[2] == doctest::Approx(0.2));
    CHECK(e.values[3] == doctest::Approx(0.1));

    CMat one(1);
    one(0, 0) = 2.5;
    EigResult e1 = eig_hermitian(one);
    CHECK(e1.values[0] == doctest::Approx(2.5));
    CHECK(std::abs(e1.vectors(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("jacobi workspace matches one-shot interface and is reusable") {
    Rng rng(8);
    JacobiWorkspace ws;
    for (int d : {2, 3, 5, 8}) {
        CMat a = random_hermitian(rng, d);
        EigResult e = eig_hermitian(a);

        std::vector<double> vals(d);
        ws.eigenvalues(a.data().data(), d, vals.data());
        for (int i = 0; i < d; ++i) CHECK(vals[i] == doctest::Approx(e.values[i]).epsilon(1e-12));

        std::vector<double> vals2(d);
        std::vector<cplx> vecs(static_cast<std::size_t>(d) * d);
        ws.eigensystem(a.data().data(), d, vals2.data(), vecs.data());
        double norm = std::max(a.frobenius_norm(), 1.0);
        for (int c = 0; c < d; ++c) {
            for (int i = 0; i < d; ++i) {
                cplx av{0.0, 0.0};
                for (int k = 0; k < d; ++k) av += a(i, k) * vecs[static_cast<std::size_t>(k) * d + c];
                CHECK(std::abs(av - vals2[c] * vecs[static_cast<std::size_t>(i) * d + c]) <
                      1e-12 * norm);
            }
        }
        // input untouched
        CHECK(a.frobenius_norm() == doctest::Approx(eig_hermitian(a).values.size() ? a.frobenius_norm() : 0.0));
    }
}

TEST_CASE("partial traces on a kronecker product recover the factors") {
    Rng rng(31);
    for (auto [da, db] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {4, 3}}) {
        CMat a = random_hermitian(rng, da);
        CMat b = random_hermitian(rng, db);
        double tra = a.trace().real();
        double trb = b.trace().real();
        CMat ab = kron(a, b);

        CMat ta = trace_out_second(ab, da, db); // should equal tr(b) * a
        CMat tb = trace_out_first(ab, da, db);  // should equal tr(a) * b
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < da; ++j) CHECK(std::abs(ta(i, j) - trb * a(i, j)) < 1e-12);
        for (int i = 0; i < db; ++i)
            for (int j = 0; j < db; ++j) CHECK(std::abs(tb(i, j) - tra * b(i, j)) < 1e-12);
    }
}

TEST_CASE("matrix product and adjoint basics") {
    CMat x(2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    CMat z(2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    CMat xz = x * z;
    CHECK(std::abs(xz(0, 0)) < 1e-15);
    CHECK(std::abs(xz(0, 1) - cplx(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(xz(1, 0) - cplx(1.0, 0.0)) < 1e-15);

    CMat y(2);
    y(0, 1) = cplx(0.0, -1.0);
    y(1, 0) = cplx(0.0, 1.0);
    CMat ya = adjoint(y);
    CHECK(std::abs(ya(0, 1) - y(0, 1)) < 1e-15);
    CHECK(std::abs(ya(1, 0) - y(1, 0)) < 1e-15);

    CMat id = CMat::identity(3);
    CHECK(id.trace().real() == doctest::Approx(3.0));
    CHECK(id.frobenius_norm() == doctest::Approx(std::sqrt(3.0)));

    CMat acc(2);
    acc.add_scaled(id.dim() == 3 ? x : x, cplx(2.0, 0.0));
    CHECK(std::abs(acc(0, 1) - cplx(2.0, 0.0)) < 1e-15);
}

TEST_CASE("probability distribution validation") {
    CHECK_NOTHROW(ProbabilityDistribution({0.5, 0.5}));
    CHECK_NOTHROW(ProbabilityDistribution({1.0}));
    CHECK_THROWS_AS(ProbabilityDistribution({0.5, 0.4}), ValidationError);
    CHECK_THROWS_AS(ProbabilityDistribution({-0.1, 1.1}), ValidationError);
    CHECK_THROWS_AS(ProbabilityDistribution(std::vector<double>{}), ValidationError);
}

TEST_CASE("density matrix validation and factories") {
    CMat ok(2);
    ok(0, 0) = 0.5;
    ok(1, 1) = 0.5;
    CHECK_NOTHROW(DensityMatrix(ok));

    CMat nonherm(2);
    nonherm(0, 0) = 0.5;
    nonherm(1, 1) = 0.5;
    nonherm(0, 1) = cplx(0.3, 0.0);
    nonherm(1, 0) = cplx(0.0, 0.3);
    CHECK_THROWS_AS(DensityMatrix{nonherm}, ValidationError);

    CMat badtrace(2);
    badtrace(0, 0) = 0.7;
    badtrace(1, 1) = 0.5;
    CHECK_THROWS_AS(DensityMatrix{badtrace}, ValidationError);

    CMat negeig(2);
    negeig(0, 0) = 1.2;
    negeig(1, 1) = -0.2;
    CHECK_THROWS_AS(DensityMatrix{negeig}, ValidationError);

    DensityMatrix mm = DensityMatrix::maximally_mixed(4);
    for (int i = 0; i < 4; ++i) CHECK(mm.entry(i, i).real() == doctest::Approx(0.25));

    DensityMatrix p = DensityMatrix::pure({cplx(1.0 / std::sqrt(2.0), 0.0),
                                           cplx(0.0, 1.0 / std::sqrt(2.0))});
    CHECK(p.entry(0, 0).real() == doctest::Approx(0.5));
    CHECK(p.entry(1, 1).real() == doctest::Approx(0.5));
    CHECK(p.entry(0, 1).imag() == doctest::Approx(-0.5));
    CHECK_THROWS_AS(DensityMatrix::pure({cplx(1.0, 0.0), cplx(0.5, 0.0)}), ValidationError);

    DensityMatrix dg = DensityMatrix::diagonal({0.9, 0.1});
    CHECK(dg.entry(0, 0).real() == doctest::Approx(0.9));
    CHECK_THROWS_AS(DensityMatrix::diagonal({0.9, 0.2}), ValidationError);
}
