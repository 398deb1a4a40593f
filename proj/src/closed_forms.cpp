#include "purity/closed_forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "purity/errors.hpp"

namespace purity {

namespace {

constexpr double kLog2E = std::numbers::log2e;

DensityMatrix pure_qubit(double bx, double by, double bz) {
    // normalize the Bloch vector, then build the state as an amplitude
    // outer product so it is pure to machine precision
    double r = std::sqrt(bx * bx + by * by + bz * bz);
    bx /= r;
    by /= r;
    bz /= r;
    double theta = std::acos(std::clamp(bz, -1.0, 1.0));
    double phi = std::atan2(by, bx);
    cplx a0 = std::cos(theta / 2.0);
    cplx a1 = std::polar(std::sin(theta / 2.0), phi);
    return DensityMatrix::pure({a0, a1});
}

void append_antipodal(std::vector<std::array<double, 3>>& nodes, double x, double y,
                      double z) {
    nodes.push_back({x, y, z});
    nodes.push_back({-x, -y, -z});
}

// 12 icosahedron vertices: cyclic permutations of (0, ±1, ±g), g the golden
// ratio.  Antipodally symmetric with exactly isotropic second moments.
void add_icosahedron(std::vector<std::array<double, 3>>& nodes) {
    double g = (1.0 + std::sqrt(5.0)) / 2.0;
    double s = 1.0 / std::sqrt(1.0 + g * g);
    for (int sign = -1; sign <= 1; sign += 2) {
        append_antipodal(nodes, 0.0, s * sign, s * g);
        append_antipodal(nodes, s * sign, s * g, 0.0);
        append_antipodal(nodes, s * g, 0.0, s * sign);
    }
}

// 20 dodecahedron vertices: the cube corners plus cyclic permutations of
// (0, ±1/g, ±g), normalized.
void add_dodecahedron(std::vector<std::array<double, 3>>& nodes) {
    double g = (1.0 + std::sqrt(5.0)) / 2.0;
    double c = 1.0 / std::sqrt(3.0);
    for (int sx = -1; sx <= 1; sx += 2)
        for (int sy = -1; sy <= 1; sy += 2) append_antipodal(nodes, c * sx, c * sy, c);
    double ig = 1.0 / g;
    double s = 1.0 / std::sqrt(ig * ig + g * g);
    for (int sign = -1; sign <= 1; sign += 2) {
        append_antipodal(nodes, 0.0, s * ig * sign, s * g);
        append_antipodal(nodes, s * ig * sign, s * g, 0.0);
        append_antipodal(nodes, s * g, 0.0, s * ig * sign);
    }
}

void add_octahedron(std::vector<std::array<double, 3>>& nodes) {
    append_antipodal(nodes, 1.0, 0.0, 0.0);
    append_antipodal(nodes, 0.0, 1.0, 0.0);
    append_antipodal(nodes, 0.0, 0.0, 1.0);
}

void add_cube(std::vector<std::array<double, 3>>& nodes) {
    double c = 1.0 / std::sqrt(3.0);
    for (int sx = -1; sx <= 1; sx += 2)
        for (int sy = -1; sy <= 1; sy += 2) append_antipodal(nodes, c * sx, c * sy, c);
}

// Golden-angle spiral points restricted to the upper hemisphere, paired
// with their antipodes, for even counts with no regular polyhedron.
void add_fibonacci_pairs(std::vector<std::array<double, 3>>& nodes, int pairs) {
    double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < pairs; ++k) {
        double z = (k + 0.5) / pairs; // in (0, 1): strictly upper hemisphere
        double r = std::sqrt(1.0 - z * z);
        double a = golden_angle * k;
        append_antipodal(nodes, r * std::cos(a), r * std::sin(a), z);
    }
}

} // namespace

UniformCurveParam::UniformCurveParam(double l) : lam(l) {
    if (!(lam > 0.0) || !std::isfinite(lam))
        throw ValidationError("uniform curve parameter must be positive and finite, got " +
                              std::to_string(lam));
}

std::pair<double, double> uniform_curve_point(const UniformCurveParam& param) {
    double lam = param.lam;
    if (lam < 1e-6) {
        // second-order expansions around lam = 0
        double r = lam * (kLog2E - 1.0) / 2.0 + lam * lam * (1.0 / 12.0 - kLog2E / 24.0);
        double e = lam / 12.0; // h2(1/2 - e) = 1 - 2e^2/ln2 + O(e^4)
        double p = 2.0 * e * e * kLog2E;
        return {r, p};
    }
    if (lam > 500.0) {
        // e^lam overflows; 1/(e^lam - 1) is far below machine epsilon
        double r = std::log2(lam) - 1.0;
        double p = 1.0 - h2(1.0 / lam);
        return {r, p};
    }
    double em1 = std::expm1(lam);
    double r = lam / em1 - 1.0 + std::log2(lam) + lam * kLog2E - std::log2(em1);
    double arg = 1.0 / lam - 1.0 / em1;
    double p = 1.0 - h2(arg);
    return {r < 0.0 ? 0.0 : r, p};
}

CQEnsemble discretize_uniform_sphere(int n_nodes) {
    if (n_nodes < 2)
        throw ValidationError("sphere discretization needs at least 2 nodes, got " +
                              std::to_string(n_nodes));
    std::vector<std::array<double, 3>> nodes;
    nodes.reserve(n_nodes);
    if (n_nodes % 2 == 0) {
        switch (n_nodes) {
            case 2: append_antipodal(nodes, 0.0, 0.0, 1.0); break;
            case 6: add_octahedron(nodes); break;
            case 8: add_cube(nodes); break;
            case 12: add_icosahedron(nodes); break;
            case 20: add_dodecahedron(nodes); break;
            case 32:
                add_icosahedron(nodes);
                add_dodecahedron(nodes);
                break;
            default: add_fibonacci_pairs(nodes, n_nodes / 2); break;
        }
    } else {
        // equatorial ring: n-th roots of unity in the xy plane average to 0
        for (int k = 0; k < n_nodes; ++k) {
            double a = 2.0 * std::numbers::pi * k / n_nodes;
            nodes.push_back({std::cos(a), std::sin(a), 0.0});
        }
    }

    std::vector<double> probs(nodes.size(), 1.0 / static_cast<double>(nodes.size()));
    std::vector<DensityMatrix> states;
    states.reserve(nodes.size());
    for (const auto& v : nodes) states.push_back(pure_qubit(v[0], v[1], v[2]));
    return CQEnsemble(ProbabilityDistribution(std::move(probs)), std::move(states));
}

namespace {
void check_theta(double theta) {
    if (!(theta >= 0.0) || !(theta <= std::numbers::pi / 2.0))
        throw ValidationError("theta must lie in [0, pi/2], got " + std::to_string(theta));
}
} // namespace

CQEnsemble bb84_ensemble(double theta) {
    check_theta(theta);
    double c = std::cos(theta), s = std::sin(theta);
    std::vector<DensityMatrix> states;
    states.push_back(DensityMatrix::pure({1.0, 0.0}));
    states.push_back(DensityMatrix::pure({c, s}));
    states.push_back(DensityMatrix::pure({0.0, 1.0}));
    states.push_back(DensityMatrix::pure({-s, c}));
    return CQEnsemble(ProbabilityDistribution({0.25, 0.25, 0.25, 0.25}), std::move(states));
}

ClassicalChannel bb84_merge_channel() {
    return ClassicalChannel(4, 2,
                            {1.0, 0.0,   // |0>          -> a
                             1.0, 0.0,   // cos,sin      -> a
                             0.0, 1.0,   // |1>          -> b
                             0.0, 1.0}); // -sin,cos     -> b
}

std::pair<double, double> bb84_restricted_point(double theta) {
    check_theta(theta);
    return {1.0, 1.0 - h2((1.0 - std::cos(theta)) / 2.0)};
}

} // namespace purity
