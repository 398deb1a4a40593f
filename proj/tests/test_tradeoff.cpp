#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "purity/closed_forms.hpp"
#include "purity/cq_ensemble.hpp"
#include "purity/entropy.hpp"
#include "purity/errors.hpp"
#include "purity/io.hpp"
#include "purity/tradeoff.hpp"

using namespace purity;
using testutil::random_ensemble;

namespace {

const double kTheta = 0.39269908169872414; // pi/8

CQEnsemble orthogonal_pair() {
    return CQEnsemble(ProbabilityDistribution({0.5, 0.5}),
                      {DensityMatrix::pure({cplx(1.0, 0.0), cplx(0.0, 0.0)}),
                       DensityMatrix::pure({cplx(0.0, 0.0), cplx(1.0, 0.0)})});
}

CQEnsemble random_two_state_qubit(Rng& rng) {
    return CQEnsemble(ProbabilityDistribution(testutil::random_simplex(rng, 2)),
                      {testutil::random_density(rng, 2), testutil::random_density(rng, 2)});
}

OptimizerOptions fast_opts(int y_size = 0, int restarts = 16) {
    OptimizerOptions o;
    o.y_size = y_size;
    o.restarts = restarts;
    return o;
}

} // namespace

TEST_CASE("scalarized objective on reference channels") {
    CQEnsemble bb84 = bb84_ensemble(kTheta);
    CHECK(lagrangian_objective(bb84, ClassicalChannel::identity(4), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lagrangian_objective(bb84, bb84_merge_channel(), 0.5) ==
          doctest::Approx(0.266673371349065).epsilon(1e-12));

    ClassicalChannel constant(4, 1, std::vector<double>(4, 1.0));
    CHECK(std::abs(lagrangian_objective(bb84, constant, 1.0)) < 1e-12);

    Rng rng(4242);
    for (int t = 0; t < 40; ++t) {
        CQEnsemble ens = random_ensemble(rng, 2 + static_cast<int>(rng.below(3)), 2);
        ClassicalChannel w =
            testutil::random_channel(rng, ens.alphabet_size(), 2 + static_cast<int>(rng.below(3)));
        CHECK(lagrangian_objective(ens, w, 1.0) <= 1e-12); // I(Y;B) <= I(Y;X)
    }

    CHECK_THROWS_AS(lagrangian_objective(bb84, ClassicalChannel::identity(3), 0.0),
                    ValidationError);
    CHECK_THROWS_AS(lagrangian_objective(bb84, ClassicalChannel::identity(4), 1.5),
                    ValidationError);
    CHECK_THROWS_AS(lagrangian_objective(bb84, ClassicalChannel::identity(4), -0.1),
                    ValidationError);
}

TEST_CASE("analytic gradient matches finite differences") {
    Rng rng(1313);
    CQEnsemble ens = random_ensemble(rng, 3, 2);
    ChannelObjective obj(ens, 4);
    int nx = obj.nx(), ny = obj.ny();

    // strictly interior random channel
    std::vector<double> w(static_cast<std::size_t>(nx) * ny);
    for (int x = 0; x < nx; ++x) {
        auto row = testutil::random_simplex(rng, ny);
        for (int y = 0; y < ny; ++y)
            w[static_cast<std::size_t>(x) * ny + y] = 0.9 * row[y] + 0.1 / ny;
    }

    for (auto [a, b] : std::vector<std::pair<double, double>>{{1.0, 0.0}, {1.0, 0.7}, {1.4, 0.4}}) {
        std::vector<double> grad(w.size());
        double f0 = obj.gradient(w.data(), a, b, grad.data());

        ChannelObjective::Value v = obj.evaluate(w.data());
        CHECK(f0 == doctest::Approx(a * v.i_yb - b * v.i_yx).epsilon(1e-10));

        const double eps = 1e-6;
        for (std::size_t k = 0; k < w.size(); k += 3) { // probe a subset
            std::vector<double> wp = w, wm = w;
            wp[k] += eps;
            wm[k] -= eps;
            ChannelObjective::Value vp = obj.evaluate(wp.data());
            ChannelObjective::Value vm = obj.evaluate(wm.data());
            double fd = (a * vp.i_yb - b * vp.i_yx - (a * vm.i_yb - b * vm.i_yx)) / (2.0 * eps);
            CHECK(grad[k] == doctest::Approx(fd).epsilon(5e-5));
        }
    }
}

TEST_CASE("optimizer lands on the reference operating points") {
    CQEnsemble bb84 = bb84_ensemble(kTheta);
    OptimizerOptions opts = fast_opts(6, 24);

    TradeoffPoint full = optimize_lagrangian(bb84, 0.0, opts);
    CHECK(full.r == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(full.p == doctest::Approx(1.0).epsilon(1e-6));

    TradeoffPoint zero = optimize_lagrangian(bb84, 1.0, opts);
    CHECK(std::abs(zero.r) < 1e-9);
    CHECK(std::abs(zero.p) < 1e-9);

    TradeoffPoint ortho = optimize_lagrangian(orthogonal_pair(), 0.3, fast_opts(4, 16));
    CHECK(ortho.r == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(ortho.p == doctest::Approx(1.0).epsilon(1e-7));

    CHECK_THROWS_AS(optimize_lagrangian(bb84, 1.2, opts), ValidationError);
    OptimizerOptions bad = opts;
    bad.restarts = 0;
    CHECK_THROWS_AS(optimize_lagrangian(bb84, 0.5, bad), ValidationError);
}

TEST_CASE("returned points satisfy the converse bounds") {
    Rng rng(555);
    for (int t = 0; t < 6; ++t) {
        CQEnsemble ens = random_two_state_qubit(rng);
        double chi = holevo_information(ens);
        for (double mu : {0.0, 0.25, 0.6, 1.0}) {
            TradeoffPoint pt = optimize_lagrangian(ens, mu, fast_opts(4, 8));
            CHECK(pt.p >= -1e-12);
            CHECK(pt.p <= pt.r + 1e-9);
            CHECK(pt.p <= std::min(chi, 1.0) + 1e-9);
        }
    }
}

TEST_CASE("orthogonal ensemble envelope is min(R, 1)") {
    TradeoffCurve curve =
        compute_P_curve(orthogonal_pair(), default_p_multiplier_grid(), fast_opts(4, 24));
    for (double r : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0, 1.5, 3.0})
        CHECK(curve.envelope_at(r) == doctest::Approx(std::min(r, 1.0)).epsilon(1e-3).scale(1));
}

TEST_CASE("envelope structure invariants") {
    CQEnsemble bb84 = bb84_ensemble(kTheta);
    TradeoffCurve curve = compute_P_curve(bb84, default_p_multiplier_grid(), fast_opts(6, 24));

    const auto& env = curve.envelope();
    REQUIRE(!env.empty());
    CHECK(env.front().first == doctest::Approx(0.0).scale(1));
    CHECK(env.front().second == doctest::Approx(0.0).scale(1));
    CHECK(curve.envelope_at(0.0) == doctest::Approx(0.0).scale(1).epsilon(1e-12));

    for (std::size_t i = 1; i < env.size(); ++i) {
        CHECK(env[i].first > env[i - 1].first);
        CHECK(env[i].second >= env[i - 1].second - 1e-12); // nondecreasing
    }
    // concavity: slopes nonincreasing
    for (std::size_t i = 2; i < env.size(); ++i) {
        double s1 = (env[i - 1].second - env[i - 2].second) / (env[i - 1].first - env[i - 2].first);
        double s2 = (env[i].second - env[i - 1].second) / (env[i].first - env[i - 1].first);
        CHECK(s2 <= s1 + 1e-9);
    }
    // beyond the last vertex the envelope stays flat
    CHECK(curve.envelope_at(env.back().first + 5.0) == doctest::Approx(env.back().second));

    // reference operating points
    CHECK(curve.envelope_at(2.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(curve.envelope_at(1.0) >= 1.0 - h2((1.0 - std::cos(kTheta)) / 2.0) - 1e-3);
}

TEST_CASE("time sharing is realized by flag mixtures") {
    Rng rng(777);
    CQEnsemble ens = random_two_state_qubit(rng);
    for (int t = 0; t < 10; ++t) {
        ClassicalChannel w1 = testutil::random_channel(rng, 2, 3);
        ClassicalChannel w2 = testutil::random_channel(rng, 2, 2);
        double lam = rng.uniform();

        CQEnsemble out1 = apply_channel(ens, w1);
        CQEnsemble out2 = apply_channel(ens, w2);
        double p1 = holevo_information(out1), p2 = holevo_information(out2);
        double r1 = channel_mutual_information(ens.probs(), w1);
        double r2 = channel_mutual_information(ens.probs(), w2);

        ClassicalChannel mix = mix_channels(w1, w2, lam);
        double pm = holevo_information(apply_channel(ens, mix));
        double rm = channel_mutual_information(ens.probs(), mix);
        CHECK(pm == doctest::Approx(lam * p1 + (1.0 - lam) * p2).epsilon(1e-9).scale(1));
        CHECK(rm == doctest::Approx(lam * r1 + (1.0 - lam) * r2).epsilon(1e-9).scale(1));
    }
}

TEST_CASE("flat-rate curve saturates at the extractable information") {
    CQEnsemble bb84 = bb84_ensemble(kTheta);
    TradeoffCurve d = compute_D_curve(bb84, default_d_multiplier_grid(), fast_opts(6, 16));
    CHECK(d.envelope_at(100.0) == doctest::Approx(1.0).epsilon(1e-4));

    TradeoffCurve d2 = compute_D_curve(orthogonal_pair(), default_d_multiplier_grid(), fast_opts(4, 16));
    CHECK(d2.envelope_at(0.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("multiplier grids") {
    auto pg = default_p_multiplier_grid();
    REQUIRE(pg.size() == 41);
    CHECK(pg.front() == doctest::Approx(0.0).scale(1));
    CHECK(pg.back() == doctest::Approx(1.0));
    CHECK(pg[20] == doctest::Approx(0.5));

    auto dg = default_d_multiplier_grid();
    REQUIRE(dg.size() == 41);
    CHECK(dg.front() == doctest::Approx(0.0).scale(1));
    CHECK(dg[1] == doctest::Approx(0.05));
    CHECK(dg.back() == doctest::Approx(50.0));
    for (std::size_t i = 1; i < dg.size(); ++i) CHECK(dg[i] > dg[i - 1]);

    auto md = matched_d_multiplier_grid(pg);
    for (double m : md) {
        CHECK(m >= 0.0);
        CHECK(m <= 50.0);
    }
    CHECK(std::is_sorted(md.begin(), md.end()));

    CHECK_THROWS_AS(compute_P_curve(orthogonal_pair(), {0.5, 1.2}, fast_opts(4, 4)),
                    ValidationError);
    CHECK_THROWS_AS(compute_D_curve(orthogonal_pair(), {-0.5}, fast_opts(4, 4)), ValidationError);
    CHECK_THROWS_AS(compute_P_curve(orthogonal_pair(), {}, fast_opts(4, 4)), ValidationError);
}

TEST_CASE("consistency between the two constrained curves") {
    std::vector<PDCheck> checks =
        verify_PD_relation(orthogonal_pair(), {0.0, 0.25, 0.5}, fast_opts(4, 16));
    REQUIRE(checks.size() == 3);
    for (const auto& c : checks) CHECK(c.discrepancy <= 2e-3);
    // D(0) = 1 for orthogonal states: identity channel is free
    CHECK(checks[0].d_value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(checks[0].p_value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("assembled distillable purity") {
    CQEnsemble bb84 = bb84_ensemble(kTheta);
    OptimizerOptions opts = fast_opts(6, 24);
    // H(X) = 2 = log2(4) and rho^B = I/2: local terms vanish
    CHECK(kappa_arrow(bb84, 2.0, opts) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(kappa_arrow(bb84, 0.0, opts) == doctest::Approx(0.0).scale(1).epsilon(1e-9));

    CQEnsemble lone(ProbabilityDistribution({1.0}),
                    {DensityMatrix::pure({cplx(1.0, 0.0), cplx(0.0, 0.0)})});
    for (double r : {0.0, 1.0, 5.0})
        CHECK(kappa_arrow(lone, r, fast_opts(3, 4)) == doctest::Approx(1.0).epsilon(1e-9));

    // biased orthogonal pair: kappa(rho^X) = 1 - h2(0.3) > 0, rho^B mixed
    CQEnsemble biased(ProbabilityDistribution({0.3, 0.7}),
                      {DensityMatrix::pure({cplx(1.0, 0.0), cplx(0.0, 0.0)}),
                       DensityMatrix::pure({cplx(0.0, 0.0), cplx(1.0, 0.0)})});
    TradeoffCurve curve = compute_P_curve(biased, default_p_multiplier_grid(), fast_opts(4, 16));
    double kx = 1.0 - h2(0.3);
    double kb = 1.0 - von_neumann_entropy(average_state(biased));
    CHECK(kappa_arrow(biased, 0.5, curve) ==
          doctest::Approx(kx + kb + curve.envelope_at(0.5)).epsilon(1e-12));
}

TEST_CASE("grid oracle reference values and guard") {
    CQEnsemble ortho = orthogonal_pair();
    CHECK(brute_force_oracle(ortho, 1.0, 2, 0.01) == doctest::Approx(1.0).epsilon(1e-2).scale(1));
    CHECK(brute_force_oracle(ortho, 0.0, 2, 0.01) == doctest::Approx(0.0).scale(1).epsilon(1e-9));

    // 101 compositions per row, two rows -> ~10^4 candidates; fine.
    // 4 rows of a 6-letter alphabet at step 0.01 blows past the guard.
    CHECK_THROWS_AS(brute_force_oracle(bb84_ensemble(kTheta), 1.0, 6, 0.01), GuardError);

    std::vector<double> rs = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> vals = brute_force_oracle_sweep(ortho, rs, 2, 0.02);
    REQUIRE(vals.size() == rs.size());
    for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] >= vals[i - 1] - 1e-12);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        CHECK(vals[i] <= rs[i] + 1e-9);
        CHECK(vals[i] >= std::min(rs[i], 1.0) - 0.03);
    }
}

TEST_CASE("optimizer clears the oracle floor on random instances") {
    Rng rng(2024);
    for (int t = 0; t < 3; ++t) {
        CQEnsemble ens = random_two_state_qubit(rng);
        TradeoffCurve curve = compute_P_curve(ens, default_p_multiplier_grid(), fast_opts(2, 12));
        for (double r : {0.2, 0.6, 1.0}) {
            double oracle = brute_force_oracle(ens, r, 2, 0.05);
            CHECK(curve.envelope_at(r) >= oracle - 0.05 - 1e-9);
        }
    }
}

TEST_CASE("curves are deterministic for a fixed seed") {
    CQEnsemble bb84 = bb84_ensemble(kTheta);
    OptimizerOptions opts = fast_opts(6, 8);
    opts.master_seed = 31337;

    TradeoffCurve c1 = compute_P_curve(bb84, {0.0, 0.3, 0.7, 1.0}, opts);
    TradeoffCurve c2 = compute_P_curve(bb84, {0.0, 0.3, 0.7, 1.0}, opts);
    REQUIRE(c1.points().size() == c2.points().size());
    for (std::size_t i = 0; i < c1.points().size(); ++i) {
        const TradeoffPoint& a = c1.points()[i];
        const TradeoffPoint& b = c2.points()[i];
        CHECK(format_double(a.r) == format_double(b.r));
        CHECK(format_double(a.p) == format_double(b.p));
        REQUIRE(a.channel.entries().size() == b.channel.entries().size());
        for (std::size_t k = 0; k < a.channel.entries().size(); ++k)
            CHECK(format_double(a.channel.entries()[k]) == format_double(b.channel.entries()[k]));
    }

    OptimizerOptions other = opts;
    other.master_seed = 99;
    TradeoffCurve c3 = compute_P_curve(bb84, {0.0, 0.3, 0.7, 1.0}, other);
    REQUIRE(c3.points().size() == c1.points().size()); // same grid, possibly same answers
}

TEST_CASE("restricted strategy point sits on the envelope at unit rate") {
    CQEnsemble bb84 = bb84_ensemble(kTheta);
    TradeoffCurve curve = compute_P_curve(bb84, default_p_multiplier_grid(), fast_opts(6, 32));
    auto [r, p] = bb84_restricted_point(kTheta);
    CHECK(r == doctest::Approx(1.0));
    CHECK(std::abs(curve.envelope_at(1.0) - p) <= 1e-3);
}
