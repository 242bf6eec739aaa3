#ifndef HRC_PRESETS_HPP
#define HRC_PRESETS_HPP

#include <string>
#include <vector>

#include "hrc/common.hpp"

namespace hrc {

// Closed parametric catalog for dynamics and costs. Problem files stay
// declarative: every coefficient is data, never user code.

// f(t,x,(v,w)) = a x + bv v + bw w + b
struct DriftPreset {
    Mat a, bv, bw;
    Vec b;

    Vec operator()(double /*t*/, const Vec& x, const Vec& v, const Vec& w) const {
        Vec out = b;
        out.noalias() += a * x;
        if (v.size() > 0) out.noalias() += bv * v;
        if (w.size() > 0) out.noalias() += bw * w;
        return out;
    }
};

// constant:  sigma(t,x,(v,w)) = s0
// affine:    sigma(t,x,(v,w)) = s0 + sum_k x_k sx[k] + sum_k v_k sv[k] + sum_k w_k sw[k]
struct DiffusionPreset {
    bool affine = false;
    Mat s0;
    std::vector<Mat> sx, sv, sw;

    Mat operator()(double /*t*/, const Vec& x, const Vec& v, const Vec& w) const {
        if (!affine) return s0;
        Mat out = s0;
        for (std::size_t k = 0; k < sx.size(); ++k) out += x[static_cast<int>(k)] * sx[k];
        for (std::size_t k = 0; k < sv.size(); ++k) out += v[static_cast<int>(k)] * sv[k];
        for (std::size_t k = 0; k < sw.size(); ++k) out += w[static_cast<int>(k)] * sw[k];
        return out;
    }

    std::string family() const { return affine ? "affine-diffusion" : "constant-diffusion"; }
};

// c(t,x,u) = x'Q x + q'x + u'R u + r'u + c0   (u = the owning player's control)
struct CostPreset {
    Mat q_xx, r_uu;
    Vec q_x, r_u;
    double c0 = 0.0;

    double operator()(double /*t*/, const Vec& x, const Vec& u) const {
        double val = c0;
        val += x.dot(q_xx * x) + q_x.dot(x);
        if (u.size() > 0) val += u.dot(r_uu * u) + r_u.dot(u);
        return val;
    }
};

// linear:    Psi(x) = p'x + b
// quadratic: Psi(x) = x'P x + p'x + b
struct TerminalPreset {
    bool quadratic = false;
    Mat p_xx;
    Vec p_x;
    double b = 0.0;

    double operator()(const Vec& x) const {
        double val = b + p_x.dot(x);
        if (quadratic) val += x.dot(p_xx * x);
        return val;
    }

    std::string family() const { return quadratic ? "quadratic-terminal" : "linear-terminal"; }
};

}  // namespace hrc

#endif  // HRC_PRESETS_HPP
