#ifndef HRC_PROBLEM_HPP
#define HRC_PROBLEM_HPP

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hrc/common.hpp"
#include "hrc/controls.hpp"
#include "hrc/generator.hpp"
#include "hrc/presets.hpp"

namespace hrc {

using json = nlohmann::json;

// Carries every issue found in a configuration, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::ostringstream os;
        os << "invalid problem configuration (" << v.size() << " issue"
           << (v.size() == 1 ? "" : "s") << "):";
        for (const auto& s : v) os << "\n  - " << s;
        return os.str();
    }
    std::vector<std::string> issues_;
};

struct ProblemSpec {
    double horizon = 0.0;
    int dim = 0;
    DriftPreset drift;
    DiffusionPreset diffusion;
    CostPreset leader_cost, follower_cost;
    TerminalPreset leader_terminal, follower_terminal;
    Generator leader_generator, follower_generator;
    ControlSet leader_controls, follower_controls;
    Vec domain_lower, domain_upper;
    double ellipticity_floor = 0.0;
    Vec initial_state;
    json resolved_config;

    int leader_dim() const { return leader_controls.dim(); }
    int follower_dim() const { return follower_controls.dim(); }

    const CostPreset& cost(Player p) const {
        return p == Player::Leader ? leader_cost : follower_cost;
    }
    const TerminalPreset& terminal(Player p) const {
        return p == Player::Leader ? leader_terminal : follower_terminal;
    }
    const Generator& generator(Player p) const {
        return p == Player::Leader ? leader_generator : follower_generator;
    }
    const ControlSet& controls(Player p) const {
        return p == Player::Leader ? leader_controls : follower_controls;
    }

    bool in_domain(const Vec& x) const {
        for (int i = 0; i < dim; ++i)
            if (x[i] < domain_lower[i] || x[i] > domain_upper[i]) return false;
        return true;
    }
};

namespace detail {

class FieldReader {
public:
    FieldReader(const json& obj, std::string scope, std::vector<std::string>& issues)
        : obj_(obj), scope_(std::move(scope)), issues_(issues) {}

    void check_keys(const std::set<std::string>& allowed) {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!allowed.count(it.key()))
                issue("unknown key '" + it.key() + "'");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    double number(const std::string& key, bool required, double fallback = 0.0) {
        if (!obj_.contains(key)) {
            if (required) issue("missing required field '" + key + "'");
            return fallback;
        }
        if (!obj_[key].is_number()) {
            issue("field '" + key + "' must be a number");
            return fallback;
        }
        return obj_[key].get<double>();
    }

    int integer(const std::string& key, bool required, int fallback = 0) {
        if (!obj_.contains(key)) {
            if (required) issue("missing required field '" + key + "'");
            return fallback;
        }
        if (!obj_[key].is_number_integer()) {
            issue("field '" + key + "' must be an integer");
            return fallback;
        }
        return obj_[key].get<int>();
    }

    std::string text(const std::string& key, bool required, std::string fallback = "") {
        if (!obj_.contains(key)) {
            if (required) issue("missing required field '" + key + "'");
            return fallback;
        }
        if (!obj_[key].is_string()) {
            issue("field '" + key + "' must be a string");
            return fallback;
        }
        return obj_[key].get<std::string>();
    }

    Vec vector(const std::string& key, int expected, bool required) {
        Vec out = Vec::Zero(expected);
        if (!obj_.contains(key)) {
            if (required) issue("missing required field '" + key + "'");
            return out;
        }
        const json& a = obj_[key];
        if (!a.is_array() || static_cast<int>(a.size()) != expected) {
            issue("field '" + key + "' must be an array of length " + std::to_string(expected));
            return out;
        }
        for (int i = 0; i < expected; ++i) {
            if (!a[static_cast<std::size_t>(i)].is_number()) {
                issue("field '" + key + "' must contain numbers");
                return Vec::Zero(expected);
            }
            out[i] = a[static_cast<std::size_t>(i)].get<double>();
        }
        return out;
    }

    Mat matrix(const std::string& key, int rows, int cols, bool required) {
        Mat out = Mat::Zero(rows, cols);
        if (!obj_.contains(key)) {
            if (required) issue("missing required field '" + key + "'");
            return out;
        }
        const json& a = obj_[key];
        bool ok = a.is_array() && static_cast<int>(a.size()) == rows;
        if (ok)
            for (const auto& row : a)
                ok = ok && row.is_array() && static_cast<int>(row.size()) == cols;
        if (!ok) {
            issue("field '" + key + "' must be a " + std::to_string(rows) + "x" +
                  std::to_string(cols) + " matrix");
            return out;
        }
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                const json& cell = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
                if (!cell.is_number()) {
                    issue("field '" + key + "' must contain numbers");
                    return Mat::Zero(rows, cols);
                }
                out(r, c) = cell.get<double>();
            }
        return out;
    }

    std::vector<Mat> matrix_list(const std::string& key, int count, int rows, int cols) {
        std::vector<Mat> out;
        if (!obj_.contains(key)) return out;
        const json& a = obj_[key];
        if (!a.is_array() || static_cast<int>(a.size()) != count) {
            issue("field '" + key + "' must be a list of " + std::to_string(count) + " matrices");
            return out;
        }
        for (int k = 0; k < count; ++k) {
            json sub = json::object();
            sub["m"] = a[static_cast<std::size_t>(k)];
            FieldReader r(sub, scope_ + "." + key + "[" + std::to_string(k) + "]", issues_);
            out.push_back(r.matrix("m", rows, cols, true));
        }
        return out;
    }

    void issue(const std::string& msg) { issues_.push_back(scope_ + ": " + msg); }

private:
    const json& obj_;
    std::string scope_;
    std::vector<std::string>& issues_;
};

inline ControlSet parse_controls(const json& cfg, const std::string& scope,
                                 std::vector<std::string>& issues) {
    if (!cfg.is_object()) {
        issues.push_back(scope + ": must be an object");
        return ControlSet::uniform_grid(Vec::Zero(1), Vec::Zero(1), {1});
    }
    FieldReader r(cfg, scope, issues);
    r.check_keys({"lower", "upper", "points"});
    int m = cfg.contains("lower") && cfg["lower"].is_array()
                ? static_cast<int>(cfg["lower"].size())
                : 1;
    if (m < 1) {
        issues.push_back(scope + ": empty control set");
        m = 1;
    }
    Vec lo = r.vector("lower", m, true);
    Vec hi = r.vector("upper", m, true);
    std::vector<int> counts(static_cast<std::size_t>(m), 1);
    if (cfg.contains("points")) {
        if (!cfg["points"].is_array() || static_cast<int>(cfg["points"].size()) != m) {
            r.issue("field 'points' must be an array of length " + std::to_string(m));
        } else {
            for (int i = 0; i < m; ++i) {
                const auto& cell = cfg["points"][static_cast<std::size_t>(i)];
                if (!cell.is_number_integer() || cell.get<int>() < 1)
                    r.issue("field 'points' entries must be integers >= 1");
                else
                    counts[static_cast<std::size_t>(i)] = cell.get<int>();
            }
        }
    } else {
        r.issue("missing required field 'points'");
    }
    for (int i = 0; i < m; ++i)
        if (hi[i] < lo[i]) r.issue("upper bound below lower bound on axis " + std::to_string(i));
    try {
        return ControlSet::uniform_grid(lo, hi, counts);
    } catch (const std::exception& e) {
        issues.push_back(scope + ": " + e.what());
        return ControlSet::uniform_grid(Vec::Zero(m), Vec::Zero(m),
                                        std::vector<int>(static_cast<std::size_t>(m), 1));
    }
}

inline Generator parse_generator(const json& cfg, const std::string& scope,
                                 std::vector<std::string>& issues) {
    if (!cfg.is_object()) {
        issues.push_back(scope + ": must be an object");
        return Generator::zero();
    }
    FieldReader r(cfg, scope, issues);
    r.check_keys({"preset", "kappa"});
    std::string preset = r.text("preset", true, "zero");
    double kappa = r.number("kappa", preset != "zero", 0.0);
    try {
        return Generator::parse(preset, kappa);
    } catch (const std::exception& e) {
        issues.push_back(scope + ": " + e.what());
        return Generator::zero();
    }
}

}  // namespace detail

// Builds a validated problem instance from a configuration record; every
// violated field contributes one entry to the thrown error's issue list.
inline ProblemSpec build_problem(const json& config) {
    std::vector<std::string> issues;
    if (!config.is_object()) throw ConfigError({"top level: must be a JSON object"});

    static const std::set<std::string> top_keys = {
        "horizon",          "dim",
        "drift",            "diffusion",
        "leader_cost",      "follower_cost",
        "leader_terminal",  "follower_terminal",
        "leader_generator", "follower_generator",
        "leader_controls",  "follower_controls",
        "domain_box",       "ellipticity_floor",
        "initial_state"};

    detail::FieldReader top(config, "top level", issues);
    top.check_keys(top_keys);
    for (const auto& key : top_keys)
        if (!config.contains(key)) issues.push_back("top level: missing required field '" + key + "'");
    if (!issues.empty()) throw ConfigError(issues);

    ProblemSpec spec;
    spec.horizon = top.number("horizon", true);
    if (spec.horizon <= 0.0) issues.push_back("horizon: must be positive");
    spec.dim = top.integer("dim", true, 1);
    if (spec.dim != 1 && spec.dim != 2) issues.push_back("dim: must be 1 or 2");
    const int d = (spec.dim == 1 || spec.dim == 2) ? spec.dim : 1;

    spec.leader_controls = detail::parse_controls(config["leader_controls"], "leader_controls", issues);
    spec.follower_controls =
        detail::parse_controls(config["follower_controls"], "follower_controls", issues);
    const int mv = spec.leader_controls.dim();
    const int mw = spec.follower_controls.dim();

    {
        detail::FieldReader r(config["drift"], "drift", issues);
        r.check_keys({"family", "a", "bv", "bw", "b"});
        std::string fam = r.text("family", true);
        if (fam != "affine-drift" && !fam.empty())
            r.issue("unknown family '" + fam + "' (expected 'affine-drift')");
        spec.drift.a = r.matrix("a", d, d, false);
        spec.drift.bv = r.matrix("bv", d, mv, false);
        spec.drift.bw = r.matrix("bw", d, mw, false);
        spec.drift.b = r.vector("b", d, false);
    }
    {
        detail::FieldReader r(config["diffusion"], "diffusion", issues);
        std::string fam = r.text("family", true);
        if (fam == "constant-diffusion") {
            r.check_keys({"family", "s0"});
            spec.diffusion.affine = false;
            spec.diffusion.s0 = r.matrix("s0", d, d, true);
        } else if (fam == "affine-diffusion") {
            r.check_keys({"family", "s0", "sx", "sv", "sw"});
            spec.diffusion.affine = true;
            spec.diffusion.s0 = r.matrix("s0", d, d, false);
            spec.diffusion.sx = r.matrix_list("sx", d, d, d);
            spec.diffusion.sv = r.matrix_list("sv", mv, d, d);
            spec.diffusion.sw = r.matrix_list("sw", mw, d, d);
        } else {
            r.issue("unknown family '" + fam +
                    "' (expected 'constant-diffusion' or 'affine-diffusion')");
        }
    }
    auto parse_cost = [&](const char* key, int udim) {
        CostPreset c;
        detail::FieldReader r(config[key], key, issues);
        r.check_keys({"family", "q_xx", "q_x", "r_uu", "r_u", "c0"});
        std::string fam = r.text("family", true);
        if (fam != "quadratic-cost" && !fam.empty())
            r.issue("unknown family '" + fam + "' (expected 'quadratic-cost')");
        c.q_xx = r.matrix("q_xx", d, d, false);
        c.q_x = r.vector("q_x", d, false);
        c.r_uu = r.matrix("r_uu", udim, udim, false);
        c.r_u = r.vector("r_u", udim, false);
        c.c0 = r.number("c0", false, 0.0);
        return c;
    };
    spec.leader_cost = parse_cost("leader_cost", mv);
    spec.follower_cost = parse_cost("follower_cost", mw);

    auto parse_terminal = [&](const char* key) {
        TerminalPreset t;
        detail::FieldReader r(config[key], key, issues);
        std::string fam = r.text("family", true);
        if (fam == "linear-terminal") {
            r.check_keys({"family", "p_x", "b"});
            t.quadratic = false;
            t.p_xx = Mat::Zero(d, d);
            t.p_x = r.vector("p_x", d, false);
            t.b = r.number("b", false, 0.0);
        } else if (fam == "quadratic-terminal") {
            r.check_keys({"family", "p_xx", "p_x", "b"});
            t.quadratic = true;
            t.p_xx = r.matrix("p_xx", d, d, false);
            t.p_x = r.vector("p_x", d, false);
            t.b = r.number("b", false, 0.0);
        } else {
            r.issue("unknown family '" + fam +
                    "' (expected 'linear-terminal' or 'quadratic-terminal')");
        }
        return t;
    };
    spec.leader_terminal = parse_terminal("leader_terminal");
    spec.follower_terminal = parse_terminal("follower_terminal");

    spec.leader_generator =
        detail::parse_generator(config["leader_generator"], "leader_generator", issues);
    spec.follower_generator =
        detail::parse_generator(config["follower_generator"], "follower_generator", issues);

    {
        detail::FieldReader r(config["domain_box"], "domain_box", issues);
        r.check_keys({"lower", "upper"});
        spec.domain_lower = r.vector("lower", d, true);
        spec.domain_upper = r.vector("upper", d, true);
        for (int i = 0; i < d; ++i)
            if (spec.domain_upper[i] <= spec.domain_lower[i])
                r.issue("box must have positive volume on axis " + std::to_string(i));
    }
    spec.ellipticity_floor = top.number("ellipticity_floor", true);
    if (spec.ellipticity_floor <= 0.0) issues.push_back("ellipticity_floor: must be positive");

    {
        detail::FieldReader r(config, "initial_state", issues);
        spec.initial_state = r.vector("initial_state", d, true);
    }
    if (issues.empty() && !spec.in_domain(spec.initial_state))
        issues.push_back("initial_state: outside domain_box");

    if (!issues.empty()) throw ConfigError(issues);
    spec.resolved_config = config;
    return spec;
}

inline ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file: " + path);
    json config;
    try {
        config = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("parse error in ") + path + ": " + e.what()});
    }
    return build_problem(config);
}

}  // namespace hrc

#endif  // HRC_PROBLEM_HPP
