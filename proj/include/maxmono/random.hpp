#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "maxmono/hvector.hpp"

namespace maxmono {

/// Seeded generator for certificates and test data.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard.
/// The standard distributions are not, so uniforms are taken from the top 53
/// bits and normals via Box-Muller. Same seed, same numbers, any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    Vector<double> normal_vector(Eigen::Index n) {
        Vector<double> v(n);
        for (Eigen::Index j = 0; j < n; ++j) v[j] = normal();
        return v;
    }

    /// Standard Gaussian coefficients; not normalized.
    HVector gaussian(Eigen::Index n, double weight) { return HVector(normal_vector(n), weight); }

    /// Gaussian direction scaled to unit weighted norm.
    HVector unit(Eigen::Index n, double weight) {
        Vector<double> v = normal_vector(n);
        while (v.norm() == 0.0) v = normal_vector(n);
        v /= std::sqrt(weight) * v.norm();
        return HVector(std::move(v), weight);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace maxmono
