#ifndef HRC_FIELDS_HPP
#define HRC_FIELDS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "hrc/grid.hpp"

namespace hrc {

// Tabulated scalar field over the lattice, one slice per time step
// (n_t + 1 slices; slice n_t is the terminal condition).
struct ValueField {
    int n_t = 0;
    int nodes = 0;
    std::vector<double> data;

    ValueField() = default;
    ValueField(int n_t_, int nodes_)
        : n_t(n_t_), nodes(nodes_),
          data(static_cast<std::size_t>(n_t_ + 1) * static_cast<std::size_t>(nodes_), 0.0) {}

    double& at(int k, int node) {
        return data[static_cast<std::size_t>(k) * static_cast<std::size_t>(nodes) +
                    static_cast<std::size_t>(node)];
    }
    double at(int k, int node) const {
        return data[static_cast<std::size_t>(k) * static_cast<std::size_t>(nodes) +
                    static_cast<std::size_t>(node)];
    }
    std::span<const double> slice(int k) const {
        return {data.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(nodes),
                static_cast<std::size_t>(nodes)};
    }
    std::span<double> slice(int k) {
        return {data.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(nodes),
                static_cast<std::size_t>(nodes)};
    }
};

// Control-set indices chosen at each (step, node), one slice per decision
// step (k = 0..n_t-1).
struct PolicyField {
    int n_t = 0;
    int nodes = 0;
    std::vector<std::int32_t> v_index, w_index;

    PolicyField() = default;
    PolicyField(int n_t_, int nodes_)
        : n_t(n_t_), nodes(nodes_),
          v_index(static_cast<std::size_t>(n_t_) * static_cast<std::size_t>(nodes_), 0),
          w_index(static_cast<std::size_t>(n_t_) * static_cast<std::size_t>(nodes_), 0) {}

    std::size_t idx(int k, int node) const {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(nodes) +
               static_cast<std::size_t>(node);
    }
    std::int32_t v_at(int k, int node) const { return v_index[idx(k, node)]; }
    std::int32_t w_at(int k, int node) const { return w_index[idx(k, node)]; }
};

struct SliceStats {
    double phi1_min = 0.0, phi1_max = 0.0;
    double phi2_min = 0.0, phi2_max = 0.0;
    int v_ties = 0, w_ties = 0;
};

struct SweepReport {
    double dt = 0.0, cfl_bound = 0.0, a_max = 0.0, f_max = 0.0, h_min = 0.0;
    int n_t = 0, nodes = 0;
    std::vector<SliceStats> slices;  // index k = 0..n_t-1

    json to_json() const {
        json j;
        j["dt"] = dt;
        j["cfl_bound"] = cfl_bound;
        j["a_max"] = a_max;
        j["f_max"] = f_max;
        j["h_min"] = h_min;
        j["time_steps"] = n_t;
        j["nodes"] = nodes;
        int v_ties = 0, w_ties = 0;
        json arr = json::array();
        for (std::size_t k = 0; k < slices.size(); ++k) {
            const auto& s = slices[k];
            v_ties += s.v_ties;
            w_ties += s.w_ties;
            arr.push_back({{"k", k},
                           {"phi1_min", s.phi1_min},
                           {"phi1_max", s.phi1_max},
                           {"phi2_min", s.phi2_min},
                           {"phi2_max", s.phi2_max},
                           {"v_ties", s.v_ties},
                           {"w_ties", s.w_ties}});
        }
        j["total_v_ties"] = v_ties;
        j["total_w_ties"] = w_ties;
        j["slices"] = arr;
        return j;
    }
};

// Answer to the two-level control problem on one lattice: both value fields,
// the selected controls, and sweep diagnostics.
struct HierarchicalSolution {
    LatticeGrid grid;
    ValueField leader_value, follower_value;
    PolicyField policy;
    SweepReport report;
};

struct FollowerSolution {
    LatticeGrid grid;
    ValueField value;
    PolicyField policy;  // v_index mirrors the supplied leader controls
    SweepReport report;
};

}  // namespace hrc

#endif  // HRC_FIELDS_HPP
