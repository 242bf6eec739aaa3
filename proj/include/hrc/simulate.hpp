#ifndef HRC_SIMULATE_HPP
#define HRC_SIMULATE_HPP

#include <cmath>
#include <stdexcept>

#include "hrc/parallel.hpp"
#include "hrc/path_bundle.hpp"
#include "hrc/policy.hpp"
#include "hrc/problem.hpp"
#include "hrc/rng.hpp"

namespace hrc {

namespace detail {

inline int checked_step_count(double horizon, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("simulate: dt must be positive");
    auto n = static_cast<long long>(std::llround(horizon / dt));
    if (n < 1 || std::abs(static_cast<double>(n) * dt - horizon) > 1e-9 * std::max(1.0, horizon))
        throw std::invalid_argument("simulate: dt must divide the horizon");
    return static_cast<int>(n);
}

}  // namespace detail

// Explicit Euler simulation of the controlled state under Markov feedback.
// Each path draws from its own (seed, path) substream, so the result is
// deterministic for any worker count.
inline PathBundle simulate(const ProblemSpec& spec, const FeedbackPolicy& leader,
                           const FeedbackPolicy& follower, int n_paths, double dt,
                           std::uint64_t seed, int threads = 0) {
    if (n_paths < 1) throw std::invalid_argument("simulate: n_paths must be >= 1");
    if (leader.dim() != spec.leader_dim() || follower.dim() != spec.follower_dim())
        throw std::invalid_argument("simulate: policy control dimension mismatch");
    const int n_steps = detail::checked_step_count(spec.horizon, dt);
    const int d = spec.dim;

    PathBundle b;
    b.n_paths = n_paths;
    b.n_steps = n_steps;
    b.dim = d;
    b.leader_dim = spec.leader_dim();
    b.follower_dim = spec.follower_dim();
    b.t0 = 0.0;
    b.dt = dt;
    b.seed = seed;
    b.states.resize(static_cast<std::size_t>(n_paths) * (n_steps + 1) * d);
    b.increments.resize(static_cast<std::size_t>(n_paths) * n_steps * d);
    b.leader_applied.resize(static_cast<std::size_t>(n_paths) * n_steps * b.leader_dim);
    b.follower_applied.resize(static_cast<std::size_t>(n_paths) * n_steps * b.follower_dim);

    const double sqrt_dt = std::sqrt(dt);
    parallel_for_blocks(
        static_cast<std::size_t>(n_paths), 1024, threads,
        [&](std::size_t, std::size_t begin, std::size_t end) {
            Vec x(d), db(d);
            for (std::size_t p = begin; p < end; ++p) {
                PathRng rng(seed, p);
                x = spec.initial_state;
                auto pi = static_cast<int>(p);
                for (int i = 0; i < d; ++i) b.state_ptr(pi, 0)[i] = x[i];
                for (int k = 0; k < n_steps; ++k) {
                    const double t = b.time_at(k);
                    const Vec& v = leader(t, x);
                    const Vec& w = follower(t, x);
                    for (int i = 0; i < b.leader_dim; ++i)
                        b.leader_applied[(p * n_steps + k) * b.leader_dim + i] = v[i];
                    for (int i = 0; i < b.follower_dim; ++i)
                        b.follower_applied[(p * n_steps + k) * b.follower_dim + i] = w[i];
                    for (int i = 0; i < d; ++i) db[i] = sqrt_dt * rng.normal();
                    for (int i = 0; i < d; ++i) b.increment_ptr(pi, k)[i] = db[i];
                    Vec f = spec.drift(t, x, v, w);
                    Mat s = spec.diffusion(t, x, v, w);
                    x += f * dt + s * db;
                    for (int i = 0; i < d; ++i) b.state_ptr(pi, k + 1)[i] = x[i];
                }
            }
        });
    return b;
}

// Accumulated cost along each path: left-endpoint quadrature of the running
// cost plus the terminal cost at the final state.
inline std::vector<double> accumulate_cost(const PathBundle& b, const ProblemSpec& spec,
                                           Player player) {
    if (b.dim != spec.dim) throw std::invalid_argument("accumulate_cost: state dimension mismatch");
    const int udim = player == Player::Leader ? b.leader_dim : b.follower_dim;
    if (udim != (player == Player::Leader ? spec.leader_dim() : spec.follower_dim()))
        throw std::invalid_argument("accumulate_cost: control dimension mismatch");
    const CostPreset& cost = spec.cost(player);
    const TerminalPreset& terminal = spec.terminal(player);

    std::vector<double> out(static_cast<std::size_t>(b.n_paths));
    for (int p = 0; p < b.n_paths; ++p) {
        double acc = 0.0;
        for (int k = 0; k < b.n_steps; ++k) {
            Vec x = b.state(p, k);
            Vec u = player == Player::Leader ? b.leader_control(p, k) : b.follower_control(p, k);
            acc += cost(b.time_at(k), x, u) * b.dt;
        }
        acc += terminal(b.state(p, b.n_steps));
        out[static_cast<std::size_t>(p)] = acc;
    }
    return out;
}

// Unit-test fixture: pure noise paths (zero drift, identity diffusion,
// started at the origin).
inline PathBundle brownian_only(int dim, double horizon, double dt, int n_paths,
                                std::uint64_t seed, int threads = 0) {
    if (dim < 1) throw std::invalid_argument("brownian_only: dim must be >= 1");
    if (n_paths < 1) throw std::invalid_argument("brownian_only: n_paths must be >= 1");
    const int n_steps = detail::checked_step_count(horizon, dt);

    PathBundle b;
    b.n_paths = n_paths;
    b.n_steps = n_steps;
    b.dim = dim;
    b.leader_dim = 0;
    b.follower_dim = 0;
    b.t0 = 0.0;
    b.dt = dt;
    b.seed = seed;
    b.states.resize(static_cast<std::size_t>(n_paths) * (n_steps + 1) * dim);
    b.increments.resize(static_cast<std::size_t>(n_paths) * n_steps * dim);

    const double sqrt_dt = std::sqrt(dt);
    parallel_for_blocks(static_cast<std::size_t>(n_paths), 4096, threads,
                        [&](std::size_t, std::size_t begin, std::size_t end) {
                            for (std::size_t p = begin; p < end; ++p) {
                                PathRng rng(seed, p);
                                auto pi = static_cast<int>(p);
                                for (int i = 0; i < dim; ++i) b.state_ptr(pi, 0)[i] = 0.0;
                                for (int k = 0; k < n_steps; ++k)
                                    for (int i = 0; i < dim; ++i) {
                                        double db = sqrt_dt * rng.normal();
                                        b.increment_ptr(pi, k)[i] = db;
                                        b.state_ptr(pi, k + 1)[i] =
                                            b.state_ptr(pi, k)[i] + db;
                                    }
                            }
                        });
    return b;
}

}  // namespace hrc

#endif  // HRC_SIMULATE_HPP
