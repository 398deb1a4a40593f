#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "purity/matrix.hpp"

namespace purity {

// Seeded random stream with explicit bit-to-double conversion, so results
// are identical across standard libraries (std::uniform_real_distribution
// is not pinned down by the standard).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // uniform on (0,1)
    double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    cplx gaussian_cplx() { return {gaussian(), gaussian()}; }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace purity
