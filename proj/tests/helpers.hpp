#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

// Relative distance with a floor so comparisons of near-zero quantities do
// not blow up.
inline double rel_err(std::complex<double> a, std::complex<double> b) {
    double scale = std::max({1e-12, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

inline double abs_err(std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b);
}
