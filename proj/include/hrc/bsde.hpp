#ifndef HRC_BSDE_HPP
#define HRC_BSDE_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "hrc/generator.hpp"
#include "hrc/regression.hpp"

namespace hrc {

struct BsdeStepDiag {
    double condition = 0.0;
    double residual_rms = 0.0;
    int dropped_columns = 0;
};

// Adapted solution fields of the scalar backward equation along a path
// ensemble, plus per-step regression diagnostics.
struct BsdeSolution {
    int n_paths = 0;
    int n_steps = 0;
    int dim = 0;
    std::vector<double> y;  // [p][k], k = 0..n_steps
    std::vector<double> z;  // [p][k][j], k = 0..n_steps-1
    double y0 = 0.0;
    double y0_standard_error = 0.0;
    std::vector<BsdeStepDiag> diagnostics;  // k = 0..n_steps-1

    double y_at(int p, int k) const {
        return y[static_cast<std::size_t>(p) * (n_steps + 1) + static_cast<std::size_t>(k)];
    }
    double z_at(int p, int k, int j) const {
        return z[(static_cast<std::size_t>(p) * n_steps + static_cast<std::size_t>(k)) * dim +
                 static_cast<std::size_t>(j)];
    }
    std::vector<double> y_slice(int k) const {
        std::vector<double> out(static_cast<std::size_t>(n_paths));
        for (int p = 0; p < n_paths; ++p) out[static_cast<std::size_t>(p)] = y_at(p, k);
        return out;
    }
};

// Backward regression sweep. Per step k (explicit in the driver):
//   m_k  = CondExp[ Y_{k+1} | X_k ]
//   Z_k  = CondExp[ (Y_{k+1} - m_k) dB_k | X_k ] / dt
//   Y_k  = m_k + g(t_k, Z_k) dt
// The martingale-increment form of Z (centering by m_k) equals the plain
// covariation estimator in the population but keeps constant shifts and
// positive scalings of the terminal value exact on a finite sample, which
// the translation and homogeneity guarantees rely on.
inline BsdeSolution solve_bsde(const PathBundle& bundle, const Generator& gen,
                               std::span<const double> terminal, const RegressionBasis& basis,
                               int threads = 0) {
    const int n = bundle.n_paths;
    const int n_steps = bundle.n_steps;
    const int d = bundle.dim;
    if (static_cast<int>(terminal.size()) != n)
        throw std::invalid_argument("solve_bsde: terminal length must equal n_paths");
    if (n < 10 * basis.size(d))
        throw std::invalid_argument("solve_bsde: need n_paths >= 10 x basis size");

    BsdeSolution sol;
    sol.n_paths = n;
    sol.n_steps = n_steps;
    sol.dim = d;
    sol.y.resize(static_cast<std::size_t>(n) * (n_steps + 1));
    sol.z.assign(static_cast<std::size_t>(n) * n_steps * d, 0.0);
    sol.diagnostics.resize(static_cast<std::size_t>(n_steps));

    // Sampling error of the initial value. A fitted step with an intercept
    // preserves the cross-path mean, so the initial value inherits the raw
    // terminal spread; this is exact for a vanishing driver and conservative
    // otherwise.
    {
        double s = 0.0, s2 = 0.0;
        for (int p = 0; p < n; ++p) {
            double v = terminal[static_cast<std::size_t>(p)];
            s += v;
            s2 += v * v;
        }
        double mean = s / n;
        double var = std::max(0.0, s2 / n - mean * mean);
        sol.y0_standard_error = std::sqrt(var / n);
    }

    Eigen::VectorXd y_next(n);
    for (int p = 0; p < n; ++p) {
        y_next[p] = terminal[static_cast<std::size_t>(p)];
        sol.y[static_cast<std::size_t>(p) * (n_steps + 1) + n_steps] = y_next[p];
    }

    Eigen::VectorXd centered(n), rhs(n);
    bool step0_constant = false;
    for (int k = n_steps - 1; k >= 0; --k) {
        const double t = bundle.time_at(k);
        StepRegressor reg(bundle, k, basis, threads);
        Eigen::VectorXd m = reg.project(y_next);
        centered = y_next - m;

        // One projection per noise coordinate.
        Eigen::MatrixXd z_hat(n, d);
        for (int j = 0; j < d; ++j) {
            for (int p = 0; p < n; ++p)
                rhs[p] = centered[p] * bundle.increment_ptr(p, k)[j];
            z_hat.col(j) = reg.project(rhs) / bundle.dt;
        }

        double res2 = 0.0;
        Vec zv(d);
        for (int p = 0; p < n; ++p) {
            for (int j = 0; j < d; ++j) {
                double zz = z_hat(p, j);
                sol.z[(static_cast<std::size_t>(p) * n_steps + k) * d + j] = zz;
                zv[j] = zz;
            }
            double val = m[p] + gen(t, zv) * bundle.dt;
            sol.y[static_cast<std::size_t>(p) * (n_steps + 1) + k] = val;
            res2 += centered[p] * centered[p];
        }
        auto& diag = sol.diagnostics[static_cast<std::size_t>(k)];
        diag.condition = reg.condition();
        diag.residual_rms = std::sqrt(res2 / static_cast<double>(n));
        diag.dropped_columns = reg.dropped_columns();

        if (k == 0) step0_constant = reg.constant_only();
        for (int p = 0; p < n; ++p)
            y_next[p] = sol.y[static_cast<std::size_t>(p) * (n_steps + 1) + k];
    }

    if (step0_constant) {
        sol.y0 = sol.y_at(0, 0);
    } else {
        double s = 0.0;
        for (int p = 0; p < n; ++p) s += sol.y_at(p, 0);
        sol.y0 = s / n;
    }
    return sol;
}

// Sampled conditional risk evaluation at step k, as a function of the state
// there (the terminal slice is returned unchanged).
inline std::vector<double> conditional_g_expectation(const PathBundle& bundle,
                                                     const Generator& gen,
                                                     std::span<const double> terminal,
                                                     const RegressionBasis& basis, int k,
                                                     int threads = 0) {
    if (k < 0 || k > bundle.n_steps)
        throw std::invalid_argument("conditional_g_expectation: step out of range");
    if (k == bundle.n_steps) return {terminal.begin(), terminal.end()};
    BsdeSolution sol = solve_bsde(bundle, gen, terminal, basis, threads);
    return sol.y_slice(k);
}

inline double risk_measure(const PathBundle& bundle, const Generator& gen,
                           std::span<const double> terminal, const RegressionBasis& basis,
                           int threads = 0) {
    return solve_bsde(bundle, gen, terminal, basis, threads).y0;
}

struct ComparisonReport {
    double y_a0 = 0.0, y_b0 = 0.0;
    double tolerance = 0.0;
    bool ordered = false;
};

// Ordering of two solves on the same ensemble under ordered terminals and
// ordered drivers. Preconditions are validated (componentwise terminals,
// sampled z lattice for the drivers) before solving.
inline ComparisonReport comparison_check(const PathBundle& bundle, const Generator& gen_a,
                                         const Generator& gen_b, std::span<const double> terminal_a,
                                         std::span<const double> terminal_b,
                                         const RegressionBasis& basis, int threads = 0) {
    if (terminal_a.size() != terminal_b.size())
        throw std::invalid_argument("comparison_check: terminal length mismatch");
    for (std::size_t p = 0; p < terminal_a.size(); ++p)
        if (terminal_a[p] < terminal_b[p])
            throw std::invalid_argument("comparison_check: terminal_a < terminal_b at path " +
                                        std::to_string(p));
    const int d = bundle.dim;
    const double t_end = bundle.time_at(bundle.n_steps);
    for (double t : {bundle.t0, 0.5 * (bundle.t0 + t_end), t_end}) {
        // z lattice {-3,-2,...,3}^d
        const int levels = 7;
        int total = 1;
        for (int i = 0; i < d; ++i) total *= levels;
        for (int c = 0; c < total; ++c) {
            Vec z(d);
            int rem = c;
            for (int i = 0; i < d; ++i) {
                z[i] = static_cast<double>(rem % levels - 3);
                rem /= levels;
            }
            if (gen_a(t, z) < gen_b(t, z) - 1e-12) {
                std::string zs = "(";
                for (int i = 0; i < d; ++i) zs += (i ? ", " : "") + std::to_string(z[i]);
                throw std::invalid_argument("comparison_check: gen_a < gen_b at t = " +
                                            std::to_string(t) + ", z = " + zs + ")");
            }
        }
    }

    BsdeSolution a = solve_bsde(bundle, gen_a, terminal_a, basis, threads);
    BsdeSolution b = solve_bsde(bundle, gen_b, terminal_b, basis, threads);
    ComparisonReport rep;
    rep.y_a0 = a.y0;
    rep.y_b0 = b.y0;
    rep.tolerance = 1e-8 + 3.0 * (a.y0_standard_error + b.y0_standard_error);
    rep.ordered = a.y0 >= b.y0 - rep.tolerance;
    return rep;
}

}  // namespace hrc

#endif  // HRC_BSDE_HPP
