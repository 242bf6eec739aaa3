#ifndef HRC_RISK_VALUE_HPP
#define HRC_RISK_VALUE_HPP

#include "hrc/bsde.hpp"
#include "hrc/simulate.hpp"

namespace hrc {

struct RiskValueResult {
    double value = 0.0;
    double standard_error = 0.0;
    int n_paths = 0;
    double dt = 0.0;
};

// Risk evaluation of a player's accumulated cost under the given pair of
// feedback strategies, via the cost-augmented terminal transformation: the
// whole accumulated cost becomes the terminal value of a driver-only
// backward equation, and the initial value of that equation is the risk
// value at (0, x0).
inline RiskValueResult risk_value_detailed(const ProblemSpec& spec, const FeedbackPolicy& leader,
                                           const FeedbackPolicy& follower, Player player,
                                           int n_paths, double dt, std::uint64_t seed,
                                           const RegressionBasis& basis, int threads = 0) {
    PathBundle bundle = simulate(spec, leader, follower, n_paths, dt, seed, threads);
    std::vector<double> xi = accumulate_cost(bundle, spec, player);
    BsdeSolution sol = solve_bsde(bundle, spec.generator(player), xi, basis, threads);
    RiskValueResult r;
    r.value = sol.y0;
    r.standard_error = sol.y0_standard_error;
    r.n_paths = n_paths;
    r.dt = dt;
    return r;
}

inline double risk_value(const ProblemSpec& spec, const FeedbackPolicy& leader,
                         const FeedbackPolicy& follower, Player player, int n_paths, double dt,
                         std::uint64_t seed, const RegressionBasis& basis, int threads = 0) {
    return risk_value_detailed(spec, leader, follower, player, n_paths, dt, seed, basis, threads)
        .value;
}

}  // namespace hrc

#endif  // HRC_RISK_VALUE_HPP
