#ifndef HRC_POLICY_HPP
#define HRC_POLICY_HPP

#include <memory>
#include <stdexcept>

#include "hrc/controls.hpp"
#include "hrc/fields.hpp"

namespace hrc {

// Solved policy tables wrapped for simulation: nearest-node lookup in space,
// enclosing decision slice in time. Lookups return control-set points only.
struct TabulatedPolicy {
    LatticeGrid grid;
    PolicyField policy;
    ControlSet leader_set, follower_set;

    int slice_at(double t) const {
        int k = static_cast<int>((t + 1e-12) / grid.dt);
        return std::max(0, std::min(k, grid.n_t - 1));
    }

    const Vec& control_at(Player side, double t, const Vec& x) const {
        int k = slice_at(t);
        int node = grid.nearest_node(x);
        if (side == Player::Leader) return leader_set.point(policy.v_at(k, node));
        return follower_set.point(policy.w_at(k, node));
    }
};

// Markov feedback control: either a fixed point or a tabulated field.
class FeedbackPolicy {
public:
    static FeedbackPolicy constant(Vec point) {
        FeedbackPolicy p;
        p.point_ = std::move(point);
        return p;
    }

    static FeedbackPolicy tabulated(std::shared_ptr<const TabulatedPolicy> table, Player side) {
        if (!table) throw std::invalid_argument("feedback policy: null table");
        FeedbackPolicy p;
        p.table_ = std::move(table);
        p.side_ = side;
        return p;
    }

    const Vec& operator()(double t, const Vec& x) const {
        if (table_) return table_->control_at(side_, t, x);
        return point_;
    }

    int dim() const {
        if (table_)
            return side_ == Player::Leader ? table_->leader_set.dim() : table_->follower_set.dim();
        return static_cast<int>(point_.size());
    }

    bool is_tabulated() const { return table_ != nullptr; }

private:
    Vec point_;
    std::shared_ptr<const TabulatedPolicy> table_;
    Player side_ = Player::Leader;
};

}  // namespace hrc

#endif  // HRC_POLICY_HPP
