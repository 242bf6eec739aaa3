#ifndef HRC_CROSS_VALIDATE_HPP
#define HRC_CROSS_VALIDATE_HPP

#include <memory>

#include "hrc/bsde.hpp"
#include "hrc/hjb.hpp"
#include "hrc/policy.hpp"
#include "hrc/simulate.hpp"

namespace hrc {

struct CrossValReport {
    double grid_value_leader = 0.0, mc_value_leader = 0.0, gap_leader = 0.0, se_leader = 0.0;
    double grid_value_follower = 0.0, mc_value_follower = 0.0, gap_follower = 0.0,
           se_follower = 0.0;
    int n_paths = 0;
    double dt_mc = 0.0;

    json to_json() const {
        json j;
        j["leader"] = {{"grid_value", grid_value_leader},
                       {"mc_value", mc_value_leader},
                       {"gap", gap_leader},
                       {"mc_standard_error", se_leader}};
        j["follower"] = {{"grid_value", grid_value_follower},
                         {"mc_value", mc_value_follower},
                         {"gap", gap_follower},
                         {"mc_standard_error", se_follower}};
        j["n_paths"] = n_paths;
        j["dt_mc"] = dt_mc;
        return j;
    }
};

inline std::shared_ptr<const TabulatedPolicy> make_tabulated_policy(
    const ProblemSpec& spec, const HierarchicalSolution& sol) {
    auto t = std::make_shared<TabulatedPolicy>();
    t->grid = sol.grid;
    t->policy = sol.policy;
    t->leader_set = spec.leader_controls;
    t->follower_set = spec.follower_controls;
    return t;
}

// Probabilistic check of the grid solution: simulate under the tabulated
// optimal controls, evaluate both players' risk values along the paths, and
// compare with the interpolated initial-slice grid values.
inline CrossValReport cross_validate(const ProblemSpec& spec, const HierarchicalSolution& sol,
                                     int n_paths, double dt_mc, std::uint64_t seed,
                                     const RegressionBasis& basis, int threads = 0) {
    for (int i = 0; i < spec.dim; ++i) {
        double width = spec.domain_upper[i] - spec.domain_lower[i];
        if (spec.initial_state[i] < spec.domain_lower[i] + 0.1 * width ||
            spec.initial_state[i] > spec.domain_upper[i] - 0.1 * width)
            throw std::invalid_argument(
                "cross_validate: initial state must sit at least 10% of the box width away "
                "from the boundary");
    }

    auto table = make_tabulated_policy(spec, sol);
    FeedbackPolicy leader = FeedbackPolicy::tabulated(table, Player::Leader);
    FeedbackPolicy follower = FeedbackPolicy::tabulated(table, Player::Follower);

    PathBundle bundle = simulate(spec, leader, follower, n_paths, dt_mc, seed, threads);

    CrossValReport rep;
    rep.n_paths = n_paths;
    rep.dt_mc = dt_mc;

    {
        std::vector<double> xi1 = accumulate_cost(bundle, spec, Player::Leader);
        BsdeSolution b1 = solve_bsde(bundle, spec.leader_generator, xi1, basis, threads);
        rep.mc_value_leader = b1.y0;
        rep.se_leader = b1.y0_standard_error;
    }
    {
        std::vector<double> xi2 = accumulate_cost(bundle, spec, Player::Follower);
        BsdeSolution b2 = solve_bsde(bundle, spec.follower_generator, xi2, basis, threads);
        rep.mc_value_follower = b2.y0;
        rep.se_follower = b2.y0_standard_error;
    }

    rep.grid_value_leader = sol.grid.interpolate(sol.leader_value.slice(0), spec.initial_state);
    rep.grid_value_follower =
        sol.grid.interpolate(sol.follower_value.slice(0), spec.initial_state);
    rep.gap_leader = std::abs(rep.grid_value_leader - rep.mc_value_leader);
    rep.gap_follower = std::abs(rep.grid_value_follower - rep.mc_value_follower);
    return rep;
}

}  // namespace hrc

#endif  // HRC_CROSS_VALIDATE_HPP
