#ifndef HRC_CONTROLS_HPP
#define HRC_CONTROLS_HPP

#include <stdexcept>
#include <vector>

#include "hrc/common.hpp"

namespace hrc {

// Finite discretization of a compact control box. Points are enumerated in
// lexicographic order (axis 0 varies slowest), which fixes argmin
// tie-breaking everywhere downstream.
struct ControlSet {
    Vec lower, upper;
    std::vector<int> points_per_axis;
    std::vector<Vec> points;

    int dim() const { return static_cast<int>(lower.size()); }
    int size() const { return static_cast<int>(points.size()); }
    const Vec& point(int i) const { return points[static_cast<std::size_t>(i)]; }

    bool contains(const Vec& u, double tol = 0.0) const {
        if (u.size() != lower.size()) return false;
        for (int i = 0; i < u.size(); ++i)
            if (u[i] < lower[i] - tol || u[i] > upper[i] + tol) return false;
        return true;
    }

    static ControlSet uniform_grid(Vec lo, Vec hi, std::vector<int> counts) {
        ControlSet s;
        const int m = static_cast<int>(lo.size());
        if (m == 0) throw std::invalid_argument("control set: empty bounds");
        if (hi.size() != m || static_cast<int>(counts.size()) != m)
            throw std::invalid_argument("control set: bounds/points shape mismatch");
        for (int i = 0; i < m; ++i) {
            if (counts[static_cast<std::size_t>(i)] < 1)
                throw std::invalid_argument("control set: points per axis must be >= 1");
            if (hi[i] < lo[i])
                throw std::invalid_argument("control set: upper bound below lower bound");
        }
        s.lower = lo;
        s.upper = hi;
        s.points_per_axis = counts;

        // Per-axis levels; a single point collapses to the axis midpoint.
        std::vector<std::vector<double>> levels(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            int k = counts[static_cast<std::size_t>(i)];
            auto& lv = levels[static_cast<std::size_t>(i)];
            if (k == 1) {
                lv.push_back(0.5 * (lo[i] + hi[i]));
            } else {
                for (int j = 0; j < k; ++j)
                    lv.push_back(lo[i] + (hi[i] - lo[i]) * static_cast<double>(j) /
                                             static_cast<double>(k - 1));
            }
        }

        std::size_t total = 1;
        for (int i = 0; i < m; ++i) total *= levels[static_cast<std::size_t>(i)].size();
        s.points.reserve(total);
        std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
        for (std::size_t n = 0; n < total; ++n) {
            Vec p(m);
            for (int i = 0; i < m; ++i) p[i] = levels[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
            s.points.push_back(p);
            for (int i = m - 1; i >= 0; --i) {
                auto ii = static_cast<std::size_t>(i);
                if (++idx[ii] < levels[ii].size()) break;
                idx[ii] = 0;
            }
        }
        return s;
    }
};

}  // namespace hrc

#endif  // HRC_CONTROLS_HPP
