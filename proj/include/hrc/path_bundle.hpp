#ifndef HRC_PATH_BUNDLE_HPP
#define HRC_PATH_BUNDLE_HPP

#include <cstdint>
#include <vector>

#include "hrc/common.hpp"

namespace hrc {

// Monte-Carlo ensemble on a uniform time grid: states, driving noise
// increments and the controls applied at each step. Immutable once built.
struct PathBundle {
    int n_paths = 0;
    int n_steps = 0;
    int dim = 0;
    int leader_dim = 0;
    int follower_dim = 0;
    double t0 = 0.0;
    double dt = 0.0;
    std::uint64_t seed = 0;

    std::vector<double> states;            // [p][k][i], k = 0..n_steps
    std::vector<double> increments;        // [p][k][i], k = 0..n_steps-1
    std::vector<double> leader_applied;    // [p][k][i]
    std::vector<double> follower_applied;  // [p][k][i]

    double time_at(int k) const { return t0 + dt * static_cast<double>(k); }

    const double* state_ptr(int p, int k) const {
        return states.data() +
               (static_cast<std::size_t>(p) * (n_steps + 1) + static_cast<std::size_t>(k)) * dim;
    }
    double* state_ptr(int p, int k) {
        return states.data() +
               (static_cast<std::size_t>(p) * (n_steps + 1) + static_cast<std::size_t>(k)) * dim;
    }
    const double* increment_ptr(int p, int k) const {
        return increments.data() +
               (static_cast<std::size_t>(p) * n_steps + static_cast<std::size_t>(k)) * dim;
    }
    double* increment_ptr(int p, int k) {
        return increments.data() +
               (static_cast<std::size_t>(p) * n_steps + static_cast<std::size_t>(k)) * dim;
    }

    Vec state(int p, int k) const {
        return Eigen::Map<const Eigen::VectorXd>(state_ptr(p, k), dim);
    }
    Vec increment(int p, int k) const {
        return Eigen::Map<const Eigen::VectorXd>(increment_ptr(p, k), dim);
    }
    Vec leader_control(int p, int k) const {
        return Eigen::Map<const Eigen::VectorXd>(
            leader_applied.data() +
                (static_cast<std::size_t>(p) * n_steps + static_cast<std::size_t>(k)) * leader_dim,
            leader_dim);
    }
    Vec follower_control(int p, int k) const {
        return Eigen::Map<const Eigen::VectorXd>(
            follower_applied.data() +
                (static_cast<std::size_t>(p) * n_steps + static_cast<std::size_t>(k)) *
                    follower_dim,
            follower_dim);
    }

    // Same ensemble truncated to the first k steps; used for nested
    // evaluations over sub-horizons.
    PathBundle prefix(int k) const {
        PathBundle b;
        b.n_paths = n_paths;
        b.n_steps = k;
        b.dim = dim;
        b.leader_dim = leader_dim;
        b.follower_dim = follower_dim;
        b.t0 = t0;
        b.dt = dt;
        b.seed = seed;
        b.states.resize(static_cast<std::size_t>(n_paths) * (k + 1) * dim);
        b.increments.resize(static_cast<std::size_t>(n_paths) * k * dim);
        b.leader_applied.resize(static_cast<std::size_t>(n_paths) * k * leader_dim);
        b.follower_applied.resize(static_cast<std::size_t>(n_paths) * k * follower_dim);
        for (int p = 0; p < n_paths; ++p) {
            for (int s = 0; s <= k; ++s)
                for (int i = 0; i < dim; ++i) b.state_ptr(p, s)[i] = state_ptr(p, s)[i];
            for (int s = 0; s < k; ++s) {
                for (int i = 0; i < dim; ++i) b.increment_ptr(p, s)[i] = increment_ptr(p, s)[i];
                for (int i = 0; i < leader_dim; ++i)
                    b.leader_applied[(static_cast<std::size_t>(p) * k + s) * leader_dim + i] =
                        leader_applied[(static_cast<std::size_t>(p) * n_steps + s) * leader_dim + i];
                for (int i = 0; i < follower_dim; ++i)
                    b.follower_applied[(static_cast<std::size_t>(p) * k + s) * follower_dim + i] =
                        follower_applied[(static_cast<std::size_t>(p) * n_steps + s) * follower_dim +
                                         i];
            }
        }
        return b;
    }
};

}  // namespace hrc

#endif  // HRC_PATH_BUNDLE_HPP
