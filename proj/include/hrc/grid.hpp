#ifndef HRC_GRID_HPP
#define HRC_GRID_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrc/problem.hpp"

namespace hrc {

class CflError : public std::runtime_error {
public:
    CflError(double requested, double bound, double suggested, int suggested_steps)
        : std::runtime_error("time step " + std::to_string(requested) +
                             " violates the stability bound " + std::to_string(bound) +
                             "; suggested dt = " + std::to_string(suggested) + " (" +
                             std::to_string(suggested_steps) + " steps)"),
          requested_dt(requested),
          bound_dt(bound),
          suggested_dt(suggested),
          suggested_steps(suggested_steps) {}

    double requested_dt, bound_dt, suggested_dt;
    int suggested_steps;
};

// Uniform space-time lattice over the truncated domain. Construction enforces
// the explicit-scheme stability bound
//     dt <= h^2 / (2 d a_max + h f_max d)
// with a_max, f_max sampled over grid x controls x a coarse time set.
struct LatticeGrid {
    Vec lo, hi;
    std::vector<int> nodes_per_axis;
    int dim = 0;
    int n_t = 0;
    double dt = 0.0;
    double horizon = 0.0;
    double a_max = 0.0, f_max = 0.0, cfl_bound = 0.0;

    int node_count() const {
        int n = 1;
        for (int c : nodes_per_axis) n *= c;
        return n;
    }

    double h(int axis) const {
        int n = nodes_per_axis[static_cast<std::size_t>(axis)];
        return n > 1 ? (hi[axis] - lo[axis]) / static_cast<double>(n - 1) : (hi[axis] - lo[axis]);
    }

    double h_min() const {
        double m = h(0);
        for (int i = 1; i < dim; ++i) m = std::min(m, h(i));
        return m;
    }

    // Flat index: axis 0 slowest.
    int flat_index(const int* idx) const {
        int f = 0;
        for (int i = 0; i < dim; ++i) f = f * nodes_per_axis[static_cast<std::size_t>(i)] + idx[i];
        return f;
    }

    void unflatten(int flat, int* idx) const {
        for (int i = dim - 1; i >= 0; --i) {
            int n = nodes_per_axis[static_cast<std::size_t>(i)];
            idx[i] = flat % n;
            flat /= n;
        }
    }

    Vec node_coords(int flat) const {
        int idx[2] = {0, 0};
        unflatten(flat, idx);
        Vec x(dim);
        for (int i = 0; i < dim; ++i) x[i] = lo[i] + h(i) * static_cast<double>(idx[i]);
        return x;
    }

    int nearest_node(const Vec& x) const {
        int idx[2] = {0, 0};
        for (int i = 0; i < dim; ++i) {
            long j = std::lround((x[i] - lo[i]) / h(i));
            j = std::max(0l, std::min<long>(j, nodes_per_axis[static_cast<std::size_t>(i)] - 1));
            idx[i] = static_cast<int>(j);
        }
        return flat_index(idx);
    }

    double time_at(int k) const { return dt * static_cast<double>(k); }

    // Multilinear interpolation of one value slice at an arbitrary point
    // (clamped to the box).
    double interpolate(std::span<const double> slice, const Vec& x) const {
        int base[2] = {0, 0};
        double frac[2] = {0.0, 0.0};
        for (int i = 0; i < dim; ++i) {
            double u = (x[i] - lo[i]) / h(i);
            int n = nodes_per_axis[static_cast<std::size_t>(i)];
            double c = std::max(0.0, std::min(u, static_cast<double>(n - 1)));
            int j = std::min(static_cast<int>(c), n - 2 >= 0 ? n - 2 : 0);
            base[i] = j;
            frac[i] = n > 1 ? c - static_cast<double>(j) : 0.0;
        }
        if (dim == 1) {
            int i0 = base[0];
            int i1 = std::min(i0 + 1, nodes_per_axis[0] - 1);
            return (1.0 - frac[0]) * slice[static_cast<std::size_t>(i0)] +
                   frac[0] * slice[static_cast<std::size_t>(i1)];
        }
        int n1 = nodes_per_axis[1];
        auto at = [&](int i, int j) { return slice[static_cast<std::size_t>(i * n1 + j)]; };
        int i0 = base[0], j0 = base[1];
        int i1 = std::min(i0 + 1, nodes_per_axis[0] - 1);
        int j1 = std::min(j0 + 1, n1 - 1);
        double fx = frac[0], fy = frac[1];
        return (1 - fx) * (1 - fy) * at(i0, j0) + (1 - fx) * fy * at(i0, j1) +
               fx * (1 - fy) * at(i1, j0) + fx * fy * at(i1, j1);
    }

    static LatticeGrid build(const ProblemSpec& spec, const std::vector<int>& nodes_per_axis,
                             double dt_request = 0.0) {
        if (static_cast<int>(nodes_per_axis.size()) != spec.dim)
            throw std::invalid_argument("lattice: nodes_per_axis must match dim");
        for (int n : nodes_per_axis)
            if (n < 2) throw std::invalid_argument("lattice: need at least 2 nodes per axis");

        LatticeGrid g;
        g.lo = spec.domain_lower;
        g.hi = spec.domain_upper;
        g.nodes_per_axis = nodes_per_axis;
        g.dim = spec.dim;
        g.horizon = spec.horizon;

        // Sampled coefficient maxima. The catalog is affine in (x,v,w) and
        // autonomous, so grid nodes x control points x {0,T/2,T} hit the
        // extremes.
        double a_max = 0.0, f_max = 0.0;
        const int nodes = g.node_count();
        for (double t : {0.0, 0.5 * spec.horizon, spec.horizon})
            for (int n = 0; n < nodes; ++n) {
                Vec x = g.node_coords(n);
                for (const auto& v : spec.leader_controls.points)
                    for (const auto& w : spec.follower_controls.points) {
                        Mat s = spec.diffusion(t, x, v, w);
                        Mat a = s * s.transpose();
                        a_max = std::max(a_max, a.cwiseAbs().maxCoeff());
                        f_max = std::max(f_max, spec.drift(t, x, v, w).cwiseAbs().maxCoeff());
                    }
            }
        g.a_max = a_max;
        g.f_max = f_max;

        const double h = g.h_min();
        const double d = static_cast<double>(g.dim);
        const double denom = 2.0 * d * a_max + h * f_max * d;
        g.cfl_bound = denom > 0.0 ? h * h / denom : std::numeric_limits<double>::infinity();

        if (dt_request > 0.0) {
            if (dt_request > g.cfl_bound * (1.0 + 1e-12)) {
                int steps = static_cast<int>(std::ceil(spec.horizon / g.cfl_bound));
                throw CflError(dt_request, g.cfl_bound, spec.horizon / steps, steps);
            }
            g.n_t = static_cast<int>(std::llround(spec.horizon / dt_request));
            if (g.n_t < 1 ||
                std::abs(g.n_t * dt_request - spec.horizon) > 1e-9 * std::max(1.0, spec.horizon))
                throw std::invalid_argument("lattice: dt must divide the horizon");
            g.dt = dt_request;
        } else {
            // Auto step sits below the bound with margin for the generator's
            // extra gradient coupling.
            double target = std::isfinite(g.cfl_bound) ? 0.9 * g.cfl_bound : spec.horizon / 64.0;
            g.n_t = std::max(1, static_cast<int>(std::ceil(spec.horizon / target)));
            g.dt = spec.horizon / g.n_t;
            while (g.dt > g.cfl_bound && g.n_t < (1 << 28)) {
                ++g.n_t;
                g.dt = spec.horizon / g.n_t;
            }
        }
        return g;
    }
};

}  // namespace hrc

#endif  // HRC_GRID_HPP
