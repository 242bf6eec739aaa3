#ifndef HRC_IO_HPP
#define HRC_IO_HPP

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hrc/bsde.hpp"
#include "hrc/common.hpp"
#include "hrc/fields.hpp"
#include "hrc/path_bundle.hpp"
#include "hrc/problem.hpp"

namespace hrc {

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Path dump: one row per (path, step); the terminal row repeats the last
// applied controls so every row carries the full column set.
inline std::string paths_csv(const PathBundle& b) {
    std::ostringstream os;
    os << "path,step,t";
    for (int i = 0; i < b.dim; ++i) os << ",x_" << i + 1;
    for (int i = 0; i < b.leader_dim; ++i) os << ",v_" << i + 1;
    for (int i = 0; i < b.follower_dim; ++i) os << ",w_" << i + 1;
    os << "\n";
    for (int p = 0; p < b.n_paths; ++p)
        for (int k = 0; k <= b.n_steps; ++k) {
            const int kc = std::min(k, b.n_steps - 1);  // controls row index
            os << p << "," << k << "," << format_g17(b.time_at(k));
            for (int i = 0; i < b.dim; ++i) os << "," << format_g17(b.state_ptr(p, k)[i]);
            for (int i = 0; i < b.leader_dim; ++i)
                os << ","
                   << format_g17(b.leader_applied[(static_cast<std::size_t>(p) * b.n_steps + kc) *
                                                      b.leader_dim +
                                                  i]);
            for (int i = 0; i < b.follower_dim; ++i)
                os << ","
                   << format_g17(
                          b.follower_applied[(static_cast<std::size_t>(p) * b.n_steps + kc) *
                                                 b.follower_dim +
                                             i]);
            os << "\n";
        }
    return os.str();
}

// Value/policy table over decision slices k = 0..n_t-1 (the terminal slice
// is the sampled terminal cost and is recoverable from the problem file).
inline std::string solution_csv(const HierarchicalSolution& sol, const ProblemSpec& spec) {
    const LatticeGrid& g = sol.grid;
    std::ostringstream os;
    os << "k,t";
    for (int i = 0; i < g.dim; ++i) os << ",x_" << i + 1;
    os << ",phi1,phi2";
    for (int i = 0; i < spec.leader_dim(); ++i) os << ",v_star_" << i + 1;
    for (int i = 0; i < spec.follower_dim(); ++i) os << ",w_star_" << i + 1;
    os << "\n";
    const int nodes = g.node_count();
    for (int k = 0; k < g.n_t; ++k)
        for (int node = 0; node < nodes; ++node) {
            Vec x = g.node_coords(node);
            os << k << "," << format_g17(g.time_at(k));
            for (int i = 0; i < g.dim; ++i) os << "," << format_g17(x[i]);
            os << "," << format_g17(sol.leader_value.at(k, node)) << ","
               << format_g17(sol.follower_value.at(k, node));
            const Vec& v = spec.leader_controls.point(sol.policy.v_at(k, node));
            const Vec& w = spec.follower_controls.point(sol.policy.w_at(k, node));
            for (int i = 0; i < v.size(); ++i) os << "," << format_g17(v[i]);
            for (int i = 0; i < w.size(); ++i) os << "," << format_g17(w[i]);
            os << "\n";
        }
    return os.str();
}

// Backward-solution dump over decision steps (the terminal slice is the
// supplied terminal data).
inline std::string bsde_csv(const PathBundle& b, const BsdeSolution& sol) {
    std::ostringstream os;
    os << "path,step,t,y";
    for (int j = 0; j < sol.dim; ++j) os << ",z_" << j + 1;
    os << "\n";
    for (int p = 0; p < sol.n_paths; ++p)
        for (int k = 0; k < sol.n_steps; ++k) {
            os << p << "," << k << "," << format_g17(b.time_at(k)) << ","
               << format_g17(sol.y_at(p, k));
            for (int j = 0; j < sol.dim; ++j) os << "," << format_g17(sol.z_at(p, k, j));
            os << "\n";
        }
    return os.str();
}

inline json bsde_diagnostics_json(const BsdeSolution& sol) {
    json j;
    j["y0"] = sol.y0;
    j["y0_standard_error"] = sol.y0_standard_error;
    j["steps"] = json::array();
    for (std::size_t k = 0; k < sol.diagnostics.size(); ++k) {
        const auto& d = sol.diagnostics[k];
        j["steps"].push_back({{"step", k},
                              {"condition", d.condition},
                              {"residual_rms", d.residual_rms},
                              {"dropped_columns", d.dropped_columns}});
    }
    return j;
}

// Records what ran and what it produced; re-running with the recorded inputs
// reproduces the CSV artifacts byte for byte (the manifest itself carries
// wall-clock data and is not byte-stable).
class Manifest {
public:
    Manifest(std::string command, json resolved_config, json options)
        : start_(std::chrono::steady_clock::now()) {
        doc_["command"] = std::move(command);
        doc_["version"] = kVersion;
        doc_["resolved_config"] = std::move(resolved_config);
        doc_["options"] = std::move(options);
        doc_["outputs"] = json::array();
        auto now = std::chrono::system_clock::now();
        doc_["started_unix_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
    }

    void add_output(const std::string& path, const std::string& content) {
        doc_["outputs"].push_back({{"file", std::filesystem::path(path).filename().string()},
                                   {"bytes", content.size()},
                                   {"fnv1a64", hex64(fnv1a64(content.data(), content.size()))}});
    }

    void write(const std::string& path) {
        auto elapsed = std::chrono::steady_clock::now() - start_;
        doc_["wall_clock_seconds"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() / 1000.0;
        write_text_file(path, doc_.dump(2) + "\n");
    }

private:
    json doc_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace hrc

#endif  // HRC_IO_HPP
