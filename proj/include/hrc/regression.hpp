#ifndef HRC_REGRESSION_HPP
#define HRC_REGRESSION_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrc/parallel.hpp"
#include "hrc/path_bundle.hpp"

namespace hrc {

// Polynomial regression basis in the state coordinates (total degree).
struct RegressionBasis {
    int degree = 2;

    int size(int dim) const {
        if (dim == 1) return degree + 1;
        return (degree + 1) * (degree + 2) / 2;  // dim == 2
    }
};

class RegressionRankError : public std::runtime_error {
public:
    RegressionRankError(int step, double condition)
        : std::runtime_error("regression at step " + std::to_string(step) +
                             " is rank-deficient (condition " + std::to_string(condition) + ")"),
          step(step),
          condition(condition) {}
    int step;
    double condition;
};

namespace detail {

inline std::vector<std::array<int, 2>> monomial_exponents(int dim, int degree) {
    std::vector<std::array<int, 2>> exps;
    if (dim == 1) {
        for (int p = 0; p <= degree; ++p) exps.push_back({p, 0});
    } else {
        for (int total = 0; total <= degree; ++total)
            for (int p = total; p >= 0; --p) exps.push_back({p, total - p});
    }
    return exps;
}

}  // namespace detail

// Cross-sectional least-squares projection at one time step: conditional
// expectations are approximated by the fitted polynomial in the state,
// evaluated back at the sample points. Columns are standardized and
// degenerate ones dropped (a deterministic start state leaves only the
// intercept). All partial sums run over fixed-size path blocks combined in
// index order, so results do not depend on the worker count.
class StepRegressor {
public:
    static constexpr double kConditionLimit = 1e12;

    StepRegressor(const PathBundle& bundle, int step, const RegressionBasis& basis,
                  int threads = 0)
        : n_(bundle.n_paths), dim_(bundle.dim), threads_(threads) {
        const auto exps = detail::monomial_exponents(dim_, basis.degree);
        const int b_full = static_cast<int>(exps.size());
        if (b_full > 16)
            throw std::invalid_argument("regression basis too large (at most 16 monomials)");
        const std::size_t n = static_cast<std::size_t>(n_);
        const std::size_t grain = 16384;
        const std::size_t nb = block_count(n, grain);

        // Coordinate standardization stats.
        Eigen::MatrixXd coord_sums = Eigen::MatrixXd::Zero(static_cast<int>(nb), 2 * dim_);
        parallel_for_blocks(n, grain, threads_, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
            for (std::size_t p = lo; p < hi; ++p) {
                const double* x = bundle.state_ptr(static_cast<int>(p), step);
                for (int i = 0; i < dim_; ++i) {
                    coord_sums(static_cast<int>(blk), 2 * i) += x[i];
                    coord_sums(static_cast<int>(blk), 2 * i + 1) += x[i] * x[i];
                }
            }
        });
        mean_ = Eigen::VectorXd::Zero(dim_);
        scale_ = Eigen::VectorXd::Ones(dim_);
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0, s2 = 0.0;
            for (std::size_t blk = 0; blk < nb; ++blk) {
                s += coord_sums(static_cast<int>(blk), 2 * i);
                s2 += coord_sums(static_cast<int>(blk), 2 * i + 1);
            }
            double m = s / static_cast<double>(n_);
            double var = std::max(0.0, s2 / static_cast<double>(n_) - m * m);
            mean_[i] = m;
            double sd = std::sqrt(var);
            scale_[i] = sd > 1e-12 * (1.0 + std::abs(m)) ? sd : 1.0;
        }

        // Column moments on the standardized monomials.
        Eigen::MatrixXd col_sums = Eigen::MatrixXd::Zero(static_cast<int>(nb), 2 * b_full);
        parallel_for_blocks(n, grain, threads_, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
            double phi[16];
            for (std::size_t p = lo; p < hi; ++p) {
                eval_columns(bundle.state_ptr(static_cast<int>(p), step), exps, phi);
                for (int j = 0; j < b_full; ++j) {
                    col_sums(static_cast<int>(blk), 2 * j) += phi[j];
                    col_sums(static_cast<int>(blk), 2 * j + 1) += phi[j] * phi[j];
                }
            }
        });
        active_.clear();
        active_.push_back(0);  // intercept always kept
        for (int j = 1; j < b_full; ++j) {
            double s = 0.0, s2 = 0.0;
            for (std::size_t blk = 0; blk < nb; ++blk) {
                s += col_sums(static_cast<int>(blk), 2 * j);
                s2 += col_sums(static_cast<int>(blk), 2 * j + 1);
            }
            double m = s / static_cast<double>(n_);
            double var = std::max(0.0, s2 / static_cast<double>(n_) - m * m);
            if (var > 1e-24 * (1.0 + m * m)) active_.push_back(j);
        }
        dropped_ = b_full - static_cast<int>(active_.size());

        // Fill the active design matrix.
        const int ba = static_cast<int>(active_.size());
        phi_.resize(n_, ba);
        parallel_for_blocks(n, grain, threads_, [&](std::size_t, std::size_t lo, std::size_t hi) {
            double phi[16];
            for (std::size_t p = lo; p < hi; ++p) {
                eval_columns(bundle.state_ptr(static_cast<int>(p), step), exps, phi);
                for (int j = 0; j < ba; ++j)
                    phi_(static_cast<int>(p), j) = phi[active_[static_cast<std::size_t>(j)]];
            }
        });

        // Gram matrix via fixed-order block combination.
        std::vector<Eigen::MatrixXd> partial(nb, Eigen::MatrixXd::Zero(ba, ba));
        parallel_for_blocks(n, grain, threads_, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
            partial[blk].noalias() =
                phi_.middleRows(static_cast<int>(lo), static_cast<int>(hi - lo)).transpose() *
                phi_.middleRows(static_cast<int>(lo), static_cast<int>(hi - lo));
        });
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(ba, ba);
        for (std::size_t blk = 0; blk < nb; ++blk) gram += partial[blk];

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        const double lam_min = es.eigenvalues().minCoeff();
        const double lam_max = es.eigenvalues().maxCoeff();
        condition_ = lam_min > 0.0 ? std::sqrt(lam_max / lam_min)
                                   : std::numeric_limits<double>::infinity();
        if (!(condition_ <= kConditionLimit)) throw RegressionRankError(step, condition_);
        ldlt_.compute(gram);
    }

    // Fitted conditional expectation of y evaluated at every sample point.
    Eigen::VectorXd project(const Eigen::VectorXd& y) const {
        const std::size_t n = static_cast<std::size_t>(n_);
        const std::size_t grain = 16384;
        const std::size_t nb = block_count(n, grain);
        const int ba = static_cast<int>(active_.size());
        Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(ba, static_cast<int>(nb));
        parallel_for_blocks(n, grain, threads_, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
            partial.col(static_cast<int>(blk)).noalias() =
                phi_.middleRows(static_cast<int>(lo), static_cast<int>(hi - lo)).transpose() *
                y.segment(static_cast<int>(lo), static_cast<int>(hi - lo));
        });
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ba);
        for (std::size_t blk = 0; blk < nb; ++blk) rhs += partial.col(static_cast<int>(blk));
        Eigen::VectorXd beta = ldlt_.solve(rhs);
        return phi_ * beta;
    }

    double condition() const { return condition_; }
    int dropped_columns() const { return dropped_; }
    bool constant_only() const { return active_.size() == 1; }
    int active_columns() const { return static_cast<int>(active_.size()); }

private:
    void eval_columns(const double* x, const std::vector<std::array<int, 2>>& exps,
                      double* out) const {
        double xs[2] = {0.0, 0.0};
        for (int i = 0; i < dim_; ++i) xs[i] = (x[i] - mean_[i]) / scale_[i];
        for (std::size_t j = 0; j < exps.size(); ++j) {
            double v = 1.0;
            for (int e = 0; e < exps[j][0]; ++e) v *= xs[0];
            for (int e = 0; e < exps[j][1]; ++e) v *= xs[1];
            out[j] = v;
        }
    }

    int n_, dim_, threads_;
    Eigen::VectorXd mean_, scale_;
    std::vector<int> active_;
    int dropped_ = 0;
    Eigen::MatrixXd phi_;
    Eigen::LDLT<Eigen::MatrixXd> ldlt_;
    double condition_ = 0.0;
};

}  // namespace hrc

#endif  // HRC_REGRESSION_HPP
