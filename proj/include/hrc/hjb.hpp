#ifndef HRC_HJB_HPP
#define HRC_HJB_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hrc/fields.hpp"
#include "hrc/grid.hpp"
#include "hrc/parallel.hpp"
#include "hrc/problem.hpp"

namespace hrc {

// Finite differences of one value slice at one node. Interior nodes use
// central second differences and both one-sided first differences (the drift
// sign selects between them); boundary nodes fall back to the single
// available one-sided difference with zero curvature.
struct Stencil {
    int dim = 0;
    double d_fwd[2] = {0.0, 0.0};
    double d_bwd[2] = {0.0, 0.0};
    double d2[2] = {0.0, 0.0};
    double cross = 0.0;
};

inline Stencil make_stencil(std::span<const double> slice, const LatticeGrid& g, int node) {
    Stencil st;
    st.dim = g.dim;
    int idx[2] = {0, 0};
    g.unflatten(node, idx);
    int stride[2] = {1, 1};
    if (g.dim == 2) stride[0] = g.nodes_per_axis[1];
    const double center = slice[static_cast<std::size_t>(node)];
    bool interior[2] = {false, false};
    for (int i = 0; i < g.dim; ++i) {
        const double hi = g.h(i);
        const int n_i = g.nodes_per_axis[static_cast<std::size_t>(i)];
        if (idx[i] == 0) {
            double fwd = (slice[static_cast<std::size_t>(node + stride[i])] - center) / hi;
            st.d_fwd[i] = fwd;
            st.d_bwd[i] = fwd;
        } else if (idx[i] == n_i - 1) {
            double bwd = (center - slice[static_cast<std::size_t>(node - stride[i])]) / hi;
            st.d_fwd[i] = bwd;
            st.d_bwd[i] = bwd;
        } else {
            double up = slice[static_cast<std::size_t>(node + stride[i])];
            double dn = slice[static_cast<std::size_t>(node - stride[i])];
            st.d_fwd[i] = (up - center) / hi;
            st.d_bwd[i] = (center - dn) / hi;
            st.d2[i] = (up - 2.0 * center + dn) / (hi * hi);
            interior[i] = true;
        }
    }
    if (g.dim == 2 && interior[0] && interior[1]) {
        st.cross = (slice[static_cast<std::size_t>(node + stride[0] + stride[1])] -
                    slice[static_cast<std::size_t>(node + stride[0] - stride[1])] -
                    slice[static_cast<std::size_t>(node - stride[0] + stride[1])] +
                    slice[static_cast<std::size_t>(node - stride[0] - stride[1])]) /
                   (4.0 * g.h(0) * g.h(1));
    }
    return st;
}

namespace detail {

// cost + (1/2) tr{a D2} + f . D(upwind) + g(t, D(upwind) . sigma), all
// evaluated from the next-time slice's stencil.
inline double player_expression(const Stencil& st, const ProblemSpec& spec, Player pl, double t,
                                const Vec& x, const Vec& v, const Vec& w) {
    const Vec& u = pl == Player::Leader ? v : w;
    const Vec f = spec.drift(t, x, v, w);
    const Mat s = spec.diffusion(t, x, v, w);
    double grad[2];
    for (int i = 0; i < st.dim; ++i) grad[i] = f[i] >= 0.0 ? st.d_fwd[i] : st.d_bwd[i];
    double adv = 0.0;
    for (int i = 0; i < st.dim; ++i) adv += f[i] * grad[i];
    double diff;
    if (st.dim == 1) {
        diff = 0.5 * (s(0, 0) * s(0, 0)) * st.d2[0];
    } else {
        const double a00 = s(0, 0) * s(0, 0) + s(0, 1) * s(0, 1);
        const double a11 = s(1, 0) * s(1, 0) + s(1, 1) * s(1, 1);
        const double a01 = s(0, 0) * s(1, 0) + s(0, 1) * s(1, 1);
        diff = 0.5 * (a00 * st.d2[0] + a11 * st.d2[1] + 2.0 * a01 * st.cross);
    }
    Vec z(st.dim);
    for (int j = 0; j < st.dim; ++j) {
        double zj = 0.0;
        for (int i = 0; i < st.dim; ++i) zj += grad[i] * s(i, j);
        z[j] = zj;
    }
    return spec.cost(pl)(t, x, u) + (adv + diff) + spec.generator(pl)(t, z);
}

}  // namespace detail

// Second-order operator value (no cost, no driver term) at one node.
inline double apply_operator(std::span<const double> slice, const LatticeGrid& g,
                             const ProblemSpec& spec, int node, double t, const Vec& v,
                             const Vec& w) {
    Stencil st = make_stencil(slice, g, node);
    const Vec x = g.node_coords(node);
    const Vec f = spec.drift(t, x, v, w);
    const Mat s = spec.diffusion(t, x, v, w);
    const Mat a = s * s.transpose();
    double grad[2];
    for (int i = 0; i < st.dim; ++i) grad[i] = f[i] >= 0.0 ? st.d_fwd[i] : st.d_bwd[i];
    double adv = 0.0;
    for (int i = 0; i < st.dim; ++i) adv += f[i] * grad[i];
    double diff;
    if (st.dim == 1)
        diff = 0.5 * a(0, 0) * st.d2[0];
    else
        diff = 0.5 * (a(0, 0) * st.d2[0] + a(1, 1) * st.d2[1] + (a(0, 1) + a(1, 0)) * st.cross);
    return adv + diff;
}

struct FollowerArgmin {
    double value = 0.0;
    int w_index = 0;
    int ties = 1;  // number of control indices attaining the minimum
};

namespace detail {

inline FollowerArgmin follower_argmin_core(const Stencil& st2, const ProblemSpec& spec, double t,
                                           const Vec& x, const Vec& v) {
    FollowerArgmin best;
    best.value = std::numeric_limits<double>::infinity();
    const ControlSet& ws = spec.follower_controls;
    for (int wi = 0; wi < ws.size(); ++wi) {
        double val = player_expression(st2, spec, Player::Follower, t, x, v, ws.point(wi));
        if (val < best.value) {
            best.value = val;
            best.w_index = wi;
            best.ties = 1;
        } else if (val == best.value) {
            ++best.ties;
        }
    }
    return best;
}

}  // namespace detail

// Inner minimization over the follower's controls at one node, for a given
// leader control; ties resolve to the lexicographically first point.
inline FollowerArgmin follower_hamiltonian(std::span<const double> follower_slice,
                                           const LatticeGrid& g, const ProblemSpec& spec, double t,
                                           int node, const Vec& v) {
    Stencil st2 = make_stencil(follower_slice, g, node);
    return detail::follower_argmin_core(st2, spec, t, g.node_coords(node), v);
}

struct LeaderStepResult {
    double h1 = 0.0;  // leader expression at (v*, S(v*))
    double h2 = 0.0;  // follower expression at (v*, S(v*))
    int v_index = 0, w_index = 0;
    int v_ties = 1, w_ties = 1;
};

namespace detail {

inline LeaderStepResult leader_step_core(const Stencil& st1, const Stencil& st2,
                                         const ProblemSpec& spec, double t, const Vec& x) {
    LeaderStepResult best;
    best.h1 = std::numeric_limits<double>::infinity();
    const ControlSet& vs = spec.leader_controls;
    const ControlSet& ws = spec.follower_controls;
    for (int vi = 0; vi < vs.size(); ++vi) {
        const Vec& v = vs.point(vi);
        FollowerArgmin fa = follower_argmin_core(st2, spec, t, x, v);
        double val1 =
            player_expression(st1, spec, Player::Leader, t, x, v, ws.point(fa.w_index));
        if (val1 < best.h1) {
            best.h1 = val1;
            best.h2 = fa.value;
            best.v_index = vi;
            best.w_index = fa.w_index;
            best.v_ties = 1;
            best.w_ties = fa.ties;
        } else if (val1 == best.h1) {
            ++best.v_ties;
        }
    }
    return best;
}

}  // namespace detail

// Outer minimization over the leader's controls with the follower response
// folded in through the inner argmin on the follower slice.
inline LeaderStepResult leader_step(std::span<const double> leader_slice,
                                    std::span<const double> follower_slice, const LatticeGrid& g,
                                    const ProblemSpec& spec, double t, int node) {
    Stencil st1 = make_stencil(leader_slice, g, node);
    Stencil st2 = make_stencil(follower_slice, g, node);
    return detail::leader_step_core(st1, st2, spec, t, g.node_coords(node));
}

namespace detail {

// One explicit backward step of the coupled recursion at target time t:
// out_i[n] = next_i[n] + dt_step * H_i(next slices at n). Shared by the main
// sweep and the replay used for recursion residuals, so a matched-step replay
// reproduces stored slices bit for bit.
inline void hierarchical_slice_update(const ProblemSpec& spec, const LatticeGrid& g, double t,
                                      double dt_step, std::span<const double> next1,
                                      std::span<const double> next2, std::span<double> out1,
                                      std::span<double> out2, std::int32_t* v_idx,
                                      std::int32_t* w_idx, std::uint8_t* v_tie,
                                      std::uint8_t* w_tie, int threads) {
    const int nodes = g.node_count();
    parallel_for_blocks(
        static_cast<std::size_t>(nodes), 256, threads,
        [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t n = lo; n < hi; ++n) {
                const int node = static_cast<int>(n);
                Stencil st1 = make_stencil(next1, g, node);
                Stencil st2 = make_stencil(next2, g, node);
                LeaderStepResult r = leader_step_core(st1, st2, spec, t, g.node_coords(node));
                out1[n] = next1[n] + dt_step * r.h1;
                out2[n] = next2[n] + dt_step * r.h2;
                if (v_idx) v_idx[n] = r.v_index;
                if (w_idx) w_idx[n] = r.w_index;
                if (v_tie) v_tie[n] = r.v_ties > 1 ? 1 : 0;
                if (w_tie) w_tie[n] = r.w_ties > 1 ? 1 : 0;
            }
        });
}

inline SliceStats slice_stats(std::span<const double> s1, std::span<const double> s2,
                              const std::uint8_t* v_tie, const std::uint8_t* w_tie) {
    SliceStats st;
    st.phi1_min = st.phi1_max = s1[0];
    st.phi2_min = st.phi2_max = s2[0];
    for (std::size_t n = 0; n < s1.size(); ++n) {
        st.phi1_min = std::min(st.phi1_min, s1[n]);
        st.phi1_max = std::max(st.phi1_max, s1[n]);
        st.phi2_min = std::min(st.phi2_min, s2[n]);
        st.phi2_max = std::max(st.phi2_max, s2[n]);
        if (v_tie && v_tie[n]) ++st.v_ties;
        if (w_tie && w_tie[n]) ++st.w_ties;
    }
    return st;
}

}  // namespace detail

// Coupled backward sweep: both value fields advance together, the follower's
// field under the leader's realized play (v*, S(v*)).
inline HierarchicalSolution backward_sweep_hierarchical(const ProblemSpec& spec,
                                                        const LatticeGrid& grid,
                                                        int threads = 0) {
    const int nodes = grid.node_count();
    const int n_t = grid.n_t;
    HierarchicalSolution sol;
    sol.grid = grid;
    sol.leader_value = ValueField(n_t, nodes);
    sol.follower_value = ValueField(n_t, nodes);
    sol.policy = PolicyField(n_t, nodes);
    sol.report.dt = grid.dt;
    sol.report.cfl_bound = grid.cfl_bound;
    sol.report.a_max = grid.a_max;
    sol.report.f_max = grid.f_max;
    sol.report.h_min = grid.h_min();
    sol.report.n_t = n_t;
    sol.report.nodes = nodes;
    sol.report.slices.resize(static_cast<std::size_t>(n_t));

    for (int node = 0; node < nodes; ++node) {
        Vec x = grid.node_coords(node);
        sol.leader_value.at(n_t, node) = spec.leader_terminal(x);
        sol.follower_value.at(n_t, node) = spec.follower_terminal(x);
    }

    std::vector<std::uint8_t> v_tie(static_cast<std::size_t>(nodes)),
        w_tie(static_cast<std::size_t>(nodes));
    for (int k = n_t - 1; k >= 0; --k) {
        const double t = grid.time_at(k);
        detail::hierarchical_slice_update(
            spec, grid, t, grid.dt, sol.leader_value.slice(k + 1), sol.follower_value.slice(k + 1),
            sol.leader_value.slice(k), sol.follower_value.slice(k),
            sol.policy.v_index.data() + sol.policy.idx(k, 0),
            sol.policy.w_index.data() + sol.policy.idx(k, 0), v_tie.data(), w_tie.data(), threads);
        sol.report.slices[static_cast<std::size_t>(k)] = detail::slice_stats(
            sol.leader_value.slice(k), sol.follower_value.slice(k), v_tie.data(), w_tie.data());
    }
    return sol;
}

// Leader control supplied to a follower-only sweep: a fixed point or a
// grid-matched tabulated field.
struct LeaderPlan {
    const Vec* constant = nullptr;
    const PolicyField* field = nullptr;
    const ControlSet* set = nullptr;

    const Vec& at(int k, int node) const {
        if (constant) return *constant;
        return set->point(field->v_at(k, node));
    }
};

// Follower best-response sweep for a given leader strategy. The returned
// policy stores the follower's argmin; its v_index mirrors the supplied
// leader field when one is given and is zero for a constant leader.
inline FollowerSolution backward_sweep_follower(const ProblemSpec& spec, const LatticeGrid& grid,
                                                const LeaderPlan& plan, int threads = 0) {
    if (!plan.constant && (!plan.field || !plan.set))
        throw std::invalid_argument("backward_sweep_follower: empty leader plan");
    if (plan.field && (plan.field->n_t != grid.n_t || plan.field->nodes != grid.node_count()))
        throw std::invalid_argument("backward_sweep_follower: leader field does not match grid");

    const int nodes = grid.node_count();
    const int n_t = grid.n_t;
    FollowerSolution sol;
    sol.grid = grid;
    sol.value = ValueField(n_t, nodes);
    sol.policy = PolicyField(n_t, nodes);
    sol.report.dt = grid.dt;
    sol.report.cfl_bound = grid.cfl_bound;
    sol.report.a_max = grid.a_max;
    sol.report.f_max = grid.f_max;
    sol.report.h_min = grid.h_min();
    sol.report.n_t = n_t;
    sol.report.nodes = nodes;
    sol.report.slices.resize(static_cast<std::size_t>(n_t));

    for (int node = 0; node < nodes; ++node)
        sol.value.at(n_t, node) = spec.follower_terminal(grid.node_coords(node));

    std::vector<std::uint8_t> w_tie(static_cast<std::size_t>(nodes));
    for (int k = n_t - 1; k >= 0; --k) {
        const double t = grid.time_at(k);
        auto next = sol.value.slice(k + 1);
        auto out = sol.value.slice(k);
        parallel_for_blocks(
            static_cast<std::size_t>(nodes), 256, threads,
            [&](std::size_t, std::size_t lo, std::size_t hi) {
                for (std::size_t n = lo; n < hi; ++n) {
                    const int node = static_cast<int>(n);
                    Stencil st2 = make_stencil(next, grid, node);
                    const Vec& v = plan.at(k, node);
                    FollowerArgmin fa =
                        detail::follower_argmin_core(st2, spec, t, grid.node_coords(node), v);
                    out[n] = next[n] + grid.dt * fa.value;
                    sol.policy.w_index[sol.policy.idx(k, node)] = fa.w_index;
                    if (plan.field)
                        sol.policy.v_index[sol.policy.idx(k, node)] = plan.field->v_at(k, node);
                    w_tie[n] = fa.ties > 1 ? 1 : 0;
                }
            });
        auto st = detail::slice_stats(out, out, nullptr, w_tie.data());
        st.phi1_min = st.phi1_max = 0.0;
        sol.report.slices[static_cast<std::size_t>(k)] = st;
    }
    return sol;
}

// Recursion self-consistency residual: replays the last r_steps of the
// coupled sweep from the stored slice at t_r and compares the recomputed
// initial value with the stored one at the node nearest the initial state.
// A matched-step replay (substeps = 1) is an algebraic identity and returns
// exactly zero; substeps = 2 re-discretizes the inner horizon at dt/2.
inline double dpp_residual(const ProblemSpec& spec, const HierarchicalSolution& sol, Player player,
                           int r_steps, int substeps = 1, int threads = 0) {
    const LatticeGrid& g = sol.grid;
    if (r_steps < 1 || r_steps > g.n_t)
        throw std::invalid_argument("dpp_residual: r_steps out of range");
    if (substeps < 1) throw std::invalid_argument("dpp_residual: substeps must be >= 1");

    const int nodes = g.node_count();
    auto s1 = sol.leader_value.slice(r_steps);
    auto s2 = sol.follower_value.slice(r_steps);
    std::vector<double> cur1(s1.begin(), s1.end()), cur2(s2.begin(), s2.end());
    std::vector<double> nxt1(static_cast<std::size_t>(nodes)), nxt2(static_cast<std::size_t>(nodes));

    const double dt_sub = g.dt / static_cast<double>(substeps);
    const long long total = static_cast<long long>(r_steps) * substeps;
    for (long long j = total - 1; j >= 0; --j) {
        const double t = dt_sub * static_cast<double>(j);
        detail::hierarchical_slice_update(spec, g, t, dt_sub, cur1, cur2, nxt1, nxt2, nullptr,
                                          nullptr, nullptr, nullptr, threads);
        cur1.swap(nxt1);
        cur2.swap(nxt2);
    }

    const int node0 = g.nearest_node(spec.initial_state);
    const double stored = player == Player::Leader ? sol.leader_value.at(0, node0)
                                                   : sol.follower_value.at(0, node0);
    const double recomputed =
        player == Player::Leader ? cur1[static_cast<std::size_t>(node0)]
                                 : cur2[static_cast<std::size_t>(node0)];
    return std::abs(recomputed - stored);
}

}  // namespace hrc

#endif  // HRC_HJB_HPP
