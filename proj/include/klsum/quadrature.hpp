#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "klsum/error.hpp"

namespace klsum {

using cplx = std::complex<double>;

struct QuadResult {
    cplx value{0.0, 0.0};
    double error = 0.0;     // sum of |K15 - G7| over accepted panels
    long evaluations = 0;   // integrand evaluations performed
};

namespace detail {

// Gauss-Kronrod 7/15 rule on [-1, 1].  Nodes listed by ascending |x|; the
// even indices (0, 2, 4, 6) carry the embedded 7-point Gauss rule.
inline constexpr double gk15_node[8] = {
    0.0,
    0.2077849550078984676007,
    0.4058451513773971669066,
    0.5860872354676911302941,
    0.7415311855993944398639,
    0.8648644233597690727897,
    0.9491079123427585245262,
    0.9914553711208126392069,
};
inline constexpr double gk15_weight[8] = {
    0.2094821410847278280130,
    0.2044329400752988924142,
    0.1903505780647854099133,
    0.1690047266392679028266,
    0.1406532597155259187452,
    0.1047900103222501838399,
    0.0630920926299785532907,
    0.0229353220105292249637,
};
inline constexpr double g7_weight[4] = {
    0.4179591836734693877551,
    0.3818300505051189449504,
    0.2797053914892766679015,
    0.1294849661688696932706,
};

template <typename F>
inline void gk15_panel(F& f, double lo, double hi, cplx& k15, double& gk_diff) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const cplx fc = f(c);
    cplx k = gk15_weight[0] * fc;
    cplx g = g7_weight[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * gk15_node[i];
        const cplx pair = cplx(f(c - dx)) + cplx(f(c + dx));
        k += gk15_weight[i] * pair;
        if ((i & 1) == 0) g += g7_weight[i >> 1] * pair;
    }
    k15 = h * k;
    gk_diff = std::abs(h * (k - g));
}

} // namespace detail

// Adaptive Gauss-Kronrod 7/15 integration of a complex-valued integrand over
// [a, b].  Panels are accepted when |K15 - G7| falls below the local share of
// abs_tol or below rel_tol relative to the panel value; otherwise they are
// bisected, depth-first left to right (deterministic accumulation order).
template <typename F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                     double rel_tol = 1e-12, int max_depth = 18) {
    QuadResult out;
    if (a == b) return out;
    if (!(b > a)) throw Error(errc::config_invalid, "integrate: reversed interval");
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0))
        throw Error(errc::config_invalid, "integrate: negative tolerance");

    struct Panel {
        double lo, hi;
        int depth;
    };
    const double span = b - a;
    std::vector<Panel> todo;
    todo.push_back({a, b, 0});
    while (!todo.empty()) {
        const Panel p = todo.back();
        todo.pop_back();
        cplx k15;
        double diff;
        detail::gk15_panel(f, p.lo, p.hi, k15, diff);
        out.evaluations += 15;
        const double local =
            std::max(abs_tol * (p.hi - p.lo) / span, rel_tol * std::abs(k15));
        if (diff <= local || p.depth >= max_depth || (p.hi - p.lo) < 1e-15 * span) {
            out.value += k15;
            out.error += diff;
        } else {
            const double mid = 0.5 * (p.lo + p.hi);
            todo.push_back({mid, p.hi, p.depth + 1});
            todo.push_back({p.lo, mid, p.depth + 1});
        }
    }
    return out;
}

} // namespace klsum
