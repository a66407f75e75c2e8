#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "klsum/arith.hpp"
#include "klsum/characters.hpp"
#include "klsum/cutoff.hpp"
#include "klsum/error.hpp"
#include "klsum/quadrature.hpp"
#include "klsum/special.hpp"

namespace klsum {

// Admissible spectral-gap exponent used when reporting bound constants.
struct SpectralConstant {
    double theta = 7.0 / 64.0;
    SpectralConstant() = default;
    explicit SpectralConstant(double th) : theta(th) {
        if (!(theta >= 0.0 && theta <= 7.0 / 64.0))
            throw Error(errc::config_invalid, "SpectralConstant: theta outside [0, 7/64]");
    }
};

// Archimedean test-function bundle: frequencies m, n, the level unit q1, the
// length parameter X, and a smooth cutoff.  Enforces sqrt(mn) <= X, which
// keeps the support of the transformed function g inside (0, 4*pi].
struct TransformSpec {
    u64 m = 1, n = 1, q1 = 1;
    double X = 1.0;
    SmoothCutoff cutoff;

    TransformSpec(u64 m_, u64 n_, u64 q1_, double x_, const SmoothCutoff& f)
        : m(m_), n(n_), q1(q1_), X(x_), cutoff(f) {
        if (m == 0 || n == 0 || q1 == 0)
            throw Error(errc::config_invalid, "TransformSpec: m, n, q1 must be positive");
        if (!(X >= 1.0))
            throw Error(errc::config_invalid, "TransformSpec: X must be at least 1");
        if (xi() > 1.0)
            throw Error(errc::linnik_range, "TransformSpec: sqrt(mn) exceeds X");
    }

    double sqrt_mn() const { return std::sqrt(double(m) * double(n)); }
    double xi() const { return sqrt_mn() / X; }
};

// g(x) = (4 pi sqrt(mn) q1 / x)^{1/2} * cutoff(4 pi sqrt(mn) / (x X)),
// compactly supported in (4 pi Xi / b, 4 pi Xi / a) for a cutoff on (a, b),
// where Xi = sqrt(mn)/X.  Satisfies c^{1/2} cutoff(c/(q1 X)) =
// g(4 pi sqrt(mn) q1 / c) identically.
class GFunction {
public:
    explicit GFunction(const TransformSpec& spec) : spec_(spec) {
        const double base = 4.0 * detail::pi_const * spec_.xi();
        lo_ = base / spec_.cutoff.upper();
        hi_ = base / spec_.cutoff.lower();
    }

    cplx operator()(double x) const {
        if (!(x > 0.0)) return cplx(0.0, 0.0);
        const cplx w =
            spec_.cutoff(4.0 * detail::pi_const * spec_.sqrt_mn() / (x * spec_.X));
        if (w == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
        return std::sqrt(4.0 * detail::pi_const * spec_.sqrt_mn() * double(spec_.q1) / x) * w;
    }

    double lower() const { return lo_; }
    double upper() const { return hi_; }

    // Supremum of |g| over a fixed 4097-point uniform grid (deterministic).
    double sup_norm() const {
        constexpr int grid = 4096;
        double best = 0.0;
        for (int i = 0; i <= grid; ++i) {
            const double x = lo_ + (hi_ - lo_) * double(i) / grid;
            best = std::max(best, std::abs((*this)(x)));
        }
        return best;
    }

    const TransformSpec& spec() const { return spec_; }

private:
    TransformSpec spec_;
    double lo_ = 0.0, hi_ = 0.0;
};

inline GFunction build_g(const TransformSpec& spec) { return GFunction(spec); }

// Mellin transform of a smooth cutoff over its support.
inline QuadResult mellin_cutoff(const SmoothCutoff& f, cplx s) {
    auto kernel = [&](double x) { return f(x) * std::exp((s - 1.0) * std::log(x)); };
    return integrate(kernel, f.lower(), f.upper(), 1e-13, 1e-12);
}

struct MellinPair {
    cplx direct{0.0, 0.0};  // quadrature of the defining integral of g
    cplx closed{0.0, 0.0};  // (q1 X)^{1/2} (4 pi sqrt(mn)/X)^s fhat(1/2 - s)
    double direct_error = 0.0;
};

// Mellin transform of g at s, both by direct quadrature and through the
// closed form in terms of the cutoff's Mellin transform.
inline MellinPair mellin_g(const TransformSpec& spec, cplx s) {
    const GFunction g(spec);
    auto kernel = [&](double x) { return g(x) * std::exp((s - 1.0) * std::log(x)); };
    const QuadResult direct =
        integrate(kernel, g.lower(), g.upper(), 1e-12 * (1.0 + g.sup_norm()), 1e-12);
    const double base = 4.0 * detail::pi_const * spec.sqrt_mn() / spec.X;
    const cplx closed = std::sqrt(double(spec.q1) * spec.X) *
                        std::exp(s * std::log(base)) *
                        mellin_cutoff(spec.cutoff, 0.5 - s).value;
    return {direct.value, closed, direct.error};
}

inline cplx unit_i_power(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

struct TransformValue {
    cplx value{0.0, 0.0};
    double error = 0.0;
};

// Termwise-moment evaluation of i^k * integral J_{k-1}(x) g(x) dx/x:
// expanding J_{k-1} in its power series and integrating term by term gives
//   sum_j (-1)^j nu_{2j+k-1} / (j! Gamma(j+k)),  nu_p = int (x/2)^p g(x) dx/x.
// Exact for the compact support; doubles as an independent cross-check of the
// quadrature path below.
inline TransformValue g_dot_moments(const TransformSpec& spec, int k) {
    if (k < 1) throw Error(errc::config_invalid, "g_dot_moments: k must be >= 1");
    const GFunction g(spec);
    const double mtol = 1e-14 * (1.0 + g.sup_norm());
    cplx sum = 0.0;
    double err = 0.0;
    double peak = 0.0;
    for (int j = 0; j < 200; ++j) {
        const double p = 2.0 * j + double(k) - 1.0;
        auto kernel = [&](double x) { return g(x) * std::exp(p * std::log(0.5 * x)) / x; };
        const QuadResult mom = integrate(kernel, g.lower(), g.upper(), mtol, 1e-13);
        const double w = std::exp(-std::lgamma(j + 1.0) - std::lgamma(double(j + k)));
        const cplx term = ((j & 1) ? -1.0 : 1.0) * w * mom.value;
        sum += term;
        err += w * mom.error;
        peak = std::max(peak, std::abs(term));
        if (j >= 2 && std::abs(term) < 1e-18 * peak + 1e-300) {
            err += std::abs(term);
            break;
        }
    }
    return {unit_i_power(k) * sum, err};
}

// i^k * integral of J_{k-1}(x) g(x) dx/x over the support of g.  Library
// Bessel evaluation for k <= 12, termwise moments beyond (both branches agree
// on overlapping k).
inline TransformValue g_dot(const TransformSpec& spec, int k) {
    if (k < 1) throw Error(errc::config_invalid, "g_dot: k must be >= 1");
    if (k > 12) return g_dot_moments(spec, k);
    const GFunction g(spec);
    auto kernel = [&](double x) { return std::cyl_bessel_j(double(k - 1), x) * g(x) / x; };
    const QuadResult r =
        integrate(kernel, g.lower(), g.upper(), 1e-13 * (1.0 + g.sup_norm()), 1e-12);
    return {unit_i_power(k) * r.value, r.error};
}

namespace detail {

inline void validate_spectral_order(cplx t, int kappa) {
    if (kappa != 0 && kappa != 1)
        throw Error(errc::config_invalid, "spectral kernel: kappa must be 0 or 1");
    const bool real_t = (t.imag() == 0.0);
    const bool imag_t = (t.real() == 0.0);
    if (!real_t && !imag_t)
        throw Error(errc::order_out_of_range,
                    "spectral order must be real or purely imaginary");
    if (real_t && std::abs(t.real()) > 128.0)
        throw Error(errc::order_out_of_range, "spectral order exceeds |t| = 128");
    if (!real_t && std::abs(t.imag()) > 0.5 - 1e-6)
        throw Error(errc::order_out_of_range,
                    "imaginary spectral order beyond 1/2 - 1e-6");
}

// Spectral kernel including its order prefactor,
//   K_t(x) = (i t^kappa / (2 sinh(pi t))) (J_{2it}(x) - (-1)^kappa J_{-2it}(x)),
// by direct power series.  For real t the two orders are conjugate, so a
// single series evaluation suffices; the prefactor and the exponentially
// large |J_{2it}| cancel to an O(1) kernel without loss of relative accuracy
// because the series itself has no term cancellation.
class SeriesKernel {
public:
    SeriesKernel(cplx t, int kappa) : kappa_(kappa) {
        nu_ = 2.0 * cplx(0.0, 1.0) * t;
        real_t_ = (t.imag() == 0.0);
        pref_ = cplx(0.0, 1.0) * (kappa ? t : cplx(1.0, 0.0)) /
                (2.0 * std::sinh(pi_const * t));
    }

    cplx operator()(double x) const {
        cplx combo;
        if (real_t_) {
            const cplx j = bessel_j_power_series(nu_, x);
            combo = kappa_ ? cplx(2.0 * j.real(), 0.0) : cplx(0.0, 2.0 * j.imag());
        } else {
            const cplx jp = bessel_j_power_series(nu_, x);
            const cplx jm = bessel_j_power_series(-nu_, x);
            combo = kappa_ ? jp + jm : jp - jm;
        }
        return pref_ * combo;
    }

private:
    cplx nu_;
    cplx pref_;
    int kappa_;
    bool real_t_;
};

// The same kernel for |2t| <= 2e-3, where the difference of the two series
// loses relative accuracy: expanding each term of the combined series in the
// order nu = 2it gives
//   J_nu - (-1)^kappa J_{-nu} = sum_j (-1)^j (x/2)^{2j} (2/(j!)^2)
//       * exp(-nu^2 psi'(j+1)/2 - nu^4 psi'''(j+1)/24)
//       * {sinh,cosh}(nu (ln(x/2) - psi(j+1)) - nu^3 psi''(j+1)/6),
// with sinh for kappa = 0 and cosh for kappa = 1 (relative error ~ |nu|^5).
class SmallOrderKernel {
public:
    SmallOrderKernel(cplx t, int kappa) : kappa_(kappa) {
        nu_ = 2.0 * cplx(0.0, 1.0) * t;
        pref_ = cplx(0.0, 1.0) * (kappa ? t : cplx(1.0, 0.0)) /
                (2.0 * std::sinh(pi_const * t));
        const cplx nu2 = nu_ * nu_;
        double invf2 = 1.0;
        for (int j = 0; j <= jmax; ++j) {
            if (j > 0) invf2 /= double(j) * double(j);
            damp_[j] = 2.0 * invf2 *
                       std::exp(-nu2 * (0.5 * trigamma_int(j + 1)) -
                                nu2 * nu2 * (pentagamma_int(j + 1) / 24.0));
            psi_[j] = digamma_int(j + 1);
            cubic_[j] = nu_ * nu2 * (tetragamma_int(j + 1) / 6.0);
        }
    }

    cplx operator()(double x) const {
        const double lug = std::log(0.5 * x);
        const double q = 0.25 * x * x;
        double pw = 1.0;
        cplx sum = 0.0;
        for (int j = 0; j <= jmax; ++j) {
            if (j > 0) pw *= q;
            const cplx arg = nu_ * (lug - psi_[j]) - cubic_[j];
            const cplx w = kappa_ ? std::cosh(arg) : std::sinh(arg);
            const cplx term = ((j & 1) ? -1.0 : 1.0) * pw * damp_[j] * w;
            sum += term;
            if (j > 4 && std::abs(term) < 1e-18 * (std::abs(sum) + 1e-280)) break;
        }
        return pref_ * sum;
    }

private:
    static constexpr int jmax = 48;
    cplx nu_;
    cplx pref_;
    std::array<cplx, jmax + 1> damp_{};
    std::array<double, jmax + 1> psi_{};
    std::array<cplx, jmax + 1> cubic_{};
    int kappa_;
};

} // namespace detail

// gt(t) = (i t^kappa / (2 sinh(pi t))) * integral of
// (J_{2it}(x) - (-1)^kappa J_{-2it}(x)) g(x) dx/x, for real t with |t| <= 128
// or purely imaginary t with |t| <= 1/2 - 1e-6.  The removable singularity at
// t = 0 is evaluated by its limit kernels (-Y_0 for kappa = 0, i J_0 / pi for
// kappa = 1), and orders |2t| <= 2e-3 use the expanded kernel.
inline TransformValue g_tilde(const TransformSpec& spec, cplx t, int kappa) {
    detail::validate_spectral_order(t, kappa);
    const GFunction g(spec);
    const double atol = 1e-13 * (1.0 + g.sup_norm());
    QuadResult r;
    if (t == cplx(0.0, 0.0)) {
        if (kappa == 0) {
            auto kernel = [&](double x) { return -neumann_y0_series(x) * g(x) / x; };
            r = integrate(kernel, g.lower(), g.upper(), atol, 1e-12);
        } else {
            auto kernel = [&](double x) {
                return cplx(0.0, 1.0 / detail::pi_const) *
                       bessel_j_power_series(cplx(0.0, 0.0), x) * g(x) / x;
            };
            r = integrate(kernel, g.lower(), g.upper(), atol, 1e-12);
        }
        return {r.value, r.error};
    }
    if (std::abs(2.0 * t) <= 2e-3) {
        const detail::SmallOrderKernel kern(t, kappa);
        auto kernel = [&](double x) { return kern(x) * g(x) / x; };
        r = integrate(kernel, g.lower(), g.upper(), atol, 1e-12);
    } else {
        const detail::SeriesKernel kern(t, kappa);
        auto kernel = [&](double x) { return kern(x) * g(x) / x; };
        r = integrate(kernel, g.lower(), g.upper(), atol, 1e-12);
    }
    return {r.value, r.error};
}

// integral_0^infty e^{i x cosh(theta)} w(theta) dtheta for x > 0 and a weight
// w analytic in the first quadrant with growth controlled by u0: substituting
// u = x (cosh(theta) - 1) = v^2 maps the head onto a Fresnel-type integral,
// and rotating the tail onto u = u0 + i s makes it non-oscillatory with
// damping e^{-s (1 - growth/u0)}.  Take u0 >= 2*rate + 30 for weights growing
// like e^{rate * theta}.
template <typename W>
inline QuadResult oscillatory_cosh_integral(double x, W&& w, double u0) {
    if (!(x > 0.0))
        throw Error(errc::range_violated, "oscillatory_cosh_integral: requires x > 0");
    if (!(u0 >= 1.0))
        throw Error(errc::config_invalid, "oscillatory_cosh_integral: u0 too small");
    auto head_f = [&](double v) -> cplx {
        const double u = v * v;
        const cplx th = std::acosh(cplx(1.0 + u / x, 0.0));
        return std::exp(cplx(0.0, u)) * w(th) * (2.0 / std::sqrt(u + 2.0 * x));
    };
    const QuadResult head = integrate(head_f, 0.0, std::sqrt(u0), 1e-13, 1e-12);
    auto tail_f = [&](double s) -> cplx {
        const cplx u(u0, s);
        const cplx th = std::acosh(1.0 + u / x);
        return std::exp(-s) * w(th) / std::sqrt(u * (u + 2.0 * x));
    };
    const QuadResult tail = integrate(tail_f, 0.0, 1.4 * u0 + 60.0, 1e-13, 1e-12);
    QuadResult out;
    out.value = std::exp(cplx(0.0, x)) *
                (head.value + cplx(0.0, 1.0) * std::exp(cplx(0.0, u0)) * tail.value);
    out.error = head.error + tail.error;
    out.evaluations = head.evaluations + tail.evaluations;
    return out;
}

// J_nu(x) for real |nu| < 1 through the rotated cosh-contour representation
//   J_nu(x) = (2/pi) Im[e^{-i nu pi/2} * integral e^{i x cosh(theta)}
//                        cosh(nu theta) dtheta].
inline double bessel_j_contour(double nu, double x) {
    if (!(std::abs(nu) < 1.0))
        throw Error(errc::order_out_of_range, "bessel_j_contour: requires |nu| < 1");
    auto w = [&](cplx th) { return std::cosh(nu * th); };
    const QuadResult e = oscillatory_cosh_integral(x, w, 30.0);
    return (2.0 / detail::pi_const) *
           (std::exp(cplx(0.0, -0.5 * detail::pi_const * nu)) * e.value).imag();
}

namespace detail {

// The full spectral kernel K_t(x) (prefactor included) evaluated without any
// power series: library Bessel/Neumann functions at t = 0, the cosh-contour
// integral otherwise.  For real t,
//   K_t = (2/pi) Re E            (kappa = 0),
//   K_t = (2 i t coth(pi t)/pi) Im E  (kappa = 1),
// with E = integral e^{i x cosh(theta)} cos(2 t theta) dtheta.
inline cplx spectral_kernel_contour(cplx t, int kappa, double x) {
    if (t == cplx(0.0, 0.0)) {
        if (kappa == 0) return cplx(-std::cyl_neumann(0.0, x), 0.0);
        return cplx(0.0, 1.0 / pi_const) * std::cyl_bessel_j(0.0, x);
    }
    if (t.imag() == 0.0) {
        const double tr = t.real();
        auto w = [&](cplx th) { return std::cos(2.0 * tr * th); };
        const QuadResult e =
            oscillatory_cosh_integral(x, w, std::max(30.0, 2.0 * std::abs(tr) + 30.0));
        if (kappa == 0) return cplx((2.0 / pi_const) * e.value.real(), 0.0);
        const double coth = 1.0 / std::tanh(pi_const * tr);
        return cplx(0.0, (2.0 / pi_const) * tr * coth * e.value.imag());
    }
    const double theta = t.imag();
    const double nu = -2.0 * theta;
    const double jp = bessel_j_contour(nu, x);
    const double jm = bessel_j_contour(-nu, x);
    const double combo = (kappa == 0) ? jp - jm : jp + jm;
    const cplx pref = (kappa ? cplx(0.0, theta) : cplx(1.0, 0.0)) /
                      (2.0 * std::sin(pi_const * theta));
    return pref * combo;
}

} // namespace detail

// Independent evaluation of g_tilde: shares no Bessel code path with the
// power-series route (library functions at t = 0, contour kernels otherwise).
inline TransformValue g_tilde_contour(const TransformSpec& spec, cplx t, int kappa) {
    detail::validate_spectral_order(t, kappa);
    const GFunction g(spec);
    auto kernel = [&](double x) {
        return detail::spectral_kernel_contour(t, kappa, x) * g(x) / x;
    };
    const QuadResult r = integrate(kernel, g.lower(), g.upper(),
                                   1e-12 * (1.0 + g.sup_norm()), 1e-9, 12);
    return {r.value, r.error};
}

// J_n(x) for integer n >= 0 by the cosine integral
//   J_n(x) = (1/pi) integral_0^pi cos(n theta - x sin(theta)) dtheta.
inline double bessel_j_cosine_integral(int n, double x) {
    if (n < 0)
        throw Error(errc::order_out_of_range, "bessel_j_cosine_integral: requires n >= 0");
    auto f = [&](double th) { return std::cos(n * th - x * std::sin(th)); };
    const QuadResult r = integrate(f, 0.0, detail::pi_const, 1e-13, 1e-13);
    return r.value.real() / detail::pi_const;
}

struct GeneralKernels {
    cplx weight_factor{0.0, 0.0};    // finite kernel: fhat(chi) q1^{1/2} / (tau phi(q)^{1/2})
    cplx archimedean{0.0, 0.0};      // principal-series kernel at spectral parameter t
    cplx archimedean_hol{0.0, 0.0};  // discrete-series kernel at weight k
    double archimedean_error = 0.0;
    double archimedean_hol_error = 0.0;
};

// The three kernels of the weighted spectral expansion.  The finite kernel is
// assembled exactly from the finite Mellin data; the two archimedean kernels
// are evaluated from their defining integrals against the cutoff itself
//   2 sqrt(pi) (mn)^{1/4} q1^{1/2} * integral K(x) cutoff(4 pi sqrt(mn)/(x X))
//                                        dx / x^{3/2},
// with K the contour spectral kernel (resp. the cosine-integral J_{k-1}, with
// phase i^k).  After the change of variables defining g these must agree with
// g_tilde and g_dot, which they are deliberately independent of.
inline GeneralKernels kernels_general(const TransformSpec& spec, const ArithmeticWeight& f,
                                      const DirichletCharacter& chi, cplx t, int k) {
    if (chi.modulus() != f.q)
        throw Error(errc::modulus_mismatch,
                    "kernels_general: weight and character moduli differ");
    if (chi.conductor() != spec.q1)
        throw Error(errc::conductor_mismatch,
                    "kernels_general: spec q1 must equal the character conductor");
    if (k < 1) throw Error(errc::config_invalid, "kernels_general: k must be >= 1");
    const int kappa = chi.parity();
    detail::validate_spectral_order(t, kappa);

    GeneralKernels out;
    const MellinCoefficients fhat = q_mellin(f);
    const DirichletCharacter chi1 = chi.primitive_part();
    out.weight_factor = fhat.coeffs[chi.index()] * std::sqrt(double(spec.q1)) /
                        (gauss_sum(chi1) * std::sqrt(double(euler_phi(f.q))));

    const double smn = spec.sqrt_mn();
    const double lo = 4.0 * detail::pi_const * spec.xi() / spec.cutoff.upper();
    const double hi = 4.0 * detail::pi_const * spec.xi() / spec.cutoff.lower();
    const double amp =
        2.0 * std::sqrt(detail::pi_const) * std::sqrt(smn) * std::sqrt(double(spec.q1));
    auto finf = [&](double x) {
        return spec.cutoff(4.0 * detail::pi_const * smn / (x * spec.X));
    };

    auto maass = [&](double x) {
        return detail::spectral_kernel_contour(t, kappa, x) * finf(x) / (x * std::sqrt(x));
    };
    const QuadResult rm = integrate(maass, lo, hi, 1e-12, 1e-9, 12);
    out.archimedean = amp * rm.value;
    out.archimedean_error = amp * rm.error;

    auto hol = [&](double x) {
        return bessel_j_cosine_integral(k - 1, x) * finf(x) / (x * std::sqrt(x));
    };
    const QuadResult rh = integrate(hol, lo, hi, 1e-12, 1e-9, 12);
    out.archimedean_hol = amp * unit_i_power(k) * rh.value;
    out.archimedean_hol_error = amp * rh.error;
    return out;
}

struct BoundCheckPoint {
    double t = 0.0;
    double lhs = 0.0;    // |gt(t)|
    double rhs = 0.0;    // decay majorant with constant 1
    double ratio = 0.0;  // lhs / rhs
};

struct BoundCheckReport {
    std::vector<BoundCheckPoint> points;
    double max_ratio = 0.0;
};

// |gt(t)| against the decay majorant
//   |t|^kappa [ (|gm(2it)| + |gm(-2it)|)/|t|^{1/2}
//             + (|gm(2+2it)| + |gm(2-2it)|)/|t|^{3/2} + ||g||_inf / |t|^{5/2} ]
// over a grid of real |t| >= 1, gm denoting the Mellin transform of g.  The
// maximal ratio is the empirical constant of the bound.
inline BoundCheckReport check_gtilde_bound(const TransformSpec& spec,
                                           const std::vector<double>& t_grid, int kappa) {
    const GFunction g(spec);
    const double sup = g.sup_norm();
    BoundCheckReport rep;
    for (double t : t_grid) {
        if (!(std::abs(t) >= 1.0))
            throw Error(errc::config_invalid, "check_gtilde_bound: grid requires |t| >= 1");
        const double lhs = std::abs(g_tilde(spec, cplx(t, 0.0), kappa).value);
        const double at = std::abs(t);
        auto gm = [&](cplx s) { return std::abs(mellin_g(spec, s).closed); };
        const cplx i2t(0.0, 2.0 * t);
        const double rhs =
            std::pow(at, kappa) *
            ((gm(i2t) + gm(-i2t)) / std::sqrt(at) +
             (gm(2.0 + i2t) + gm(2.0 - i2t)) / std::pow(at, 1.5) +
             sup / std::pow(at, 2.5));
        rep.points.push_back({t, lhs, rhs, lhs / rhs});
        rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
    }
    return rep;
}

// |gt(i theta)| against ||g||_inf * Xi^{-2 theta} (the exceptional-segment
// case of the same bound); returns the ratio.
inline double check_gtilde_imaginary(const TransformSpec& spec, double theta, int kappa) {
    if (!(theta >= 0.0) || theta > 0.5 - 1e-6)
        throw Error(errc::config_invalid, "check_gtilde_imaginary: theta outside [0, 1/2)");
    const double lhs = std::abs(g_tilde(spec, cplx(0.0, theta), kappa).value);
    const GFunction g(spec);
    return lhs / (g.sup_norm() * std::pow(spec.xi(), -2.0 * theta));
}

} // namespace klsum
