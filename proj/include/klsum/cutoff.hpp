#pragma once
// Smooth, compactly supported archimedean weight functions. The basic family
// is the standard C^infinity bump exp(-1/((x-a)(b-x))) on (a,b), rescaled so
// its peak value is exactly 1; the modulated family multiplies it by a unit
// complex exponential e(freq*x), which makes the weight genuinely complex.

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include <klsum/error.hpp>

namespace klsum {

using cplx = std::complex<double>;

class SmoothCutoff {
public:
    enum class Family { bump, modulated_bump };

    static SmoothCutoff bump(double a, double b) {
        return SmoothCutoff(Family::bump, a, b, 0.0);
    }

    static SmoothCutoff modulated_bump(double a, double b, double freq) {
        return SmoothCutoff(Family::modulated_bump, a, b, freq);
    }

    // Real envelope: exp(4/(b-a)^2 - 1/((x-a)(b-x))) inside (a,b), zero
    // outside. The shift 4/(b-a)^2 cancels the exponent at the midpoint, so
    // the supremum of the envelope is exactly 1.
    double envelope(double x) const {
        if (!(x > a_) || !(x < b_)) return 0.0;
        const double prod = (x - a_) * (b_ - x);
        if (prod <= 0.0) return 0.0;
        return std::exp(peak_shift_ - 1.0 / prod);
    }

    cplx operator()(double x) const {
        const double env = envelope(x);
        if (env == 0.0) return {0.0, 0.0};
        if (family_ == Family::bump) return {env, 0.0};
        const double phase = 2.0 * pi * freq_ * x;
        return {env * std::cos(phase), env * std::sin(phase)};
    }

    double lower() const { return a_; }
    double upper() const { return b_; }
    double sup_norm() const { return 1.0; }
    bool is_real() const { return family_ == Family::bump; }
    Family family() const { return family_; }
    double freq() const { return freq_; }

    // Stable textual tag for reports and output metadata.
    std::string tag() const {
        char buf[96];
        if (family_ == Family::bump)
            std::snprintf(buf, sizeof(buf), "bump:%g,%g", a_, b_);
        else
            std::snprintf(buf, sizeof(buf), "modbump:%g,%g,%g", a_, b_, freq_);
        return buf;
    }

    static constexpr double pi = 3.14159265358979323846;

private:
    SmoothCutoff(Family fam, double a, double b, double freq)
        : family_(fam), a_(a), b_(b), freq_(freq) {
        if (!(0.0 < a) || !(a < b))
            throw Error(errc::config_invalid, "cutoff requires 0 < a < b");
        const double half_width = (b_ - a_) / 2.0;
        peak_shift_ = 1.0 / (half_width * half_width);
    }

    Family family_;
    double a_;
    double b_;
    double freq_;
    double peak_shift_;
};

} // namespace klsum
