#ifndef HRC_GENERATOR_HPP
#define HRC_GENERATOR_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "hrc/common.hpp"

namespace hrc {

// Driver of the scalar backward equation that defines the risk evaluation.
// All presets depend on z only and vanish at z = 0:
//   zero             g(t,z) = 0
//   scaled-l1        g(t,z) = kappa * sum_i |z_i|        (Lipschitz, pos.hom.)
//   scaled-quadratic g(t,z) = kappa/2 * sum_i z_i^2      (convex, not pos.hom.,
//                                                         not globally Lipschitz)
struct Generator {
    enum class Kind { Zero, ScaledL1, ScaledQuadratic };

    Kind kind = Kind::Zero;
    double kappa = 0.0;

    double operator()(double /*t*/, const Vec& z) const {
        switch (kind) {
            case Kind::Zero:
                return 0.0;
            case Kind::ScaledL1: {
                double s = 0.0;
                for (int i = 0; i < z.size(); ++i) s += std::abs(z[i]);
                return kappa * s;
            }
            case Kind::ScaledQuadratic: {
                double s = 0.0;
                for (int i = 0; i < z.size(); ++i) s += z[i] * z[i];
                return 0.5 * kappa * s;
            }
        }
        return 0.0;
    }

    bool convex() const { return true; }
    bool positively_homogeneous() const { return kind != Kind::ScaledQuadratic; }
    bool globally_lipschitz() const { return kind != Kind::ScaledQuadratic; }

    // Lipschitz constant w.r.t. the l1 norm where one exists.
    double lipschitz_l1() const {
        return kind == Kind::ScaledL1 ? kappa : 0.0;
    }

    std::string name() const {
        switch (kind) {
            case Kind::Zero: return "zero";
            case Kind::ScaledL1: return "scaled-l1";
            case Kind::ScaledQuadratic: return "scaled-quadratic";
        }
        return "?";
    }

    static Generator zero() { return {Kind::Zero, 0.0}; }
    static Generator scaled_l1(double kappa) { return {Kind::ScaledL1, kappa}; }
    static Generator scaled_quadratic(double kappa) { return {Kind::ScaledQuadratic, kappa}; }

    static Generator parse(const std::string& preset, double kappa) {
        if (kappa < 0.0) throw std::invalid_argument("generator: kappa must be nonnegative");
        if (preset == "zero") return zero();
        if (preset == "scaled-l1") return scaled_l1(kappa);
        if (preset == "scaled-quadratic") return scaled_quadratic(kappa);
        throw std::invalid_argument("generator: unknown preset '" + preset + "'");
    }
};

inline double eval_generator(const Generator& gen, double t, const Vec& z, int expected_dim) {
    if (z.size() != expected_dim)
        throw std::invalid_argument("eval_generator: z has dimension " +
                                    std::to_string(z.size()) + ", expected " +
                                    std::to_string(expected_dim));
    return gen(t, z);
}

}  // namespace hrc

#endif  // HRC_GENERATOR_HPP
