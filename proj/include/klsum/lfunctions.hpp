#pragma once

#include <cmath>
#include <complex>

#include "klsum/arith.hpp"
#include "klsum/characters.hpp"
#include "klsum/error.hpp"
#include "klsum/special.hpp"

namespace klsum {

// Dirichlet L(s, psi) for a primitive character psi modulo M:
//   L(s, psi) = M^{-s} sum_{r=1}^{M} psi(r) zeta(s, r/M),
// with zeta the Hurwitz zeta function.  At s = 1 (allowed only for
// non-principal psi) the equivalent digamma closed form is used:
//   L(1, psi) = -(1/M) sum_r psi(r) digamma(r/M).
inline cplx dirichlet_l(cplx s, const DirichletCharacter& psi) {
    if (!psi.is_primitive())
        throw Error(errc::not_primitive, "dirichlet_l: character must be primitive");
    const u64 m = psi.modulus();
    if (m == 1) {
        if (s == cplx(1.0, 0.0))
            throw Error(errc::range_violated, "dirichlet_l: pole at s = 1");
        return riemann_zeta(s);
    }
    if (s == cplx(1.0, 0.0)) {
        cplx acc = 0.0;
        for (u64 r = 1; r < m; ++r) {
            const cplx v = psi(static_cast<i64>(r));
            if (v != cplx(0.0, 0.0)) acc += v * digamma(double(r) / double(m));
        }
        return -acc / double(m);
    }
    cplx acc = 0.0;
    for (u64 r = 1; r < m; ++r) {
        const cplx v = psi(static_cast<i64>(r));
        if (v != cplx(0.0, 0.0)) acc += v * hurwitz_zeta(s, double(r) / double(m));
    }
    return std::exp(-s * std::log(double(m))) * acc;
}

// Reciprocal of the L-function with the Euler factors at primes dividing Q
// removed: if L^(Q)(s, psi) = prod_{p not dividing Q} (1 - psi(p) p^{-s})^{-1},
// this returns 1 / L^(Q)(s, psi).  Every prime of psi's modulus must divide Q
// so that psi agrees with its primitive part on all retained primes; then
//   1 / L^(Q)(s, psi) = (1 / L(s, psi*)) * prod_{p | Q} (1 - psi*(p) p^{-s})^{-1}.
// At the sole pole (psi* principal and s = 1) the reciprocal extends by 0.
inline cplx l_restricted_inverse(cplx s, const DirichletCharacter& psi, u64 Q) {
    if (Q == 0) throw Error(errc::config_invalid, "l_restricted_inverse: Q must be positive");
    for (const auto& [p, e] : factor(psi.modulus()).factors) {
        (void)e;
        if (Q % p != 0)
            throw Error(errc::modulus_mismatch,
                        "l_restricted_inverse: modulus has a prime outside Q");
    }
    const DirichletCharacter star = psi.primitive_part();
    if (star.modulus() == 1 && s == cplx(1.0, 0.0)) return cplx(0.0, 0.0);
    cplx inv = 1.0 / dirichlet_l(s, star);
    for (const auto& [p, e] : factor(Q).factors) {
        (void)e;
        const cplx factor_p =
            1.0 - star(static_cast<i64>(p)) * std::exp(-s * std::log(double(p)));
        if (std::abs(factor_p) < 1e-14)
            throw Error(errc::range_violated, "l_restricted_inverse: vanishing Euler factor");
        inv /= factor_p;
    }
    return inv;
}

} // namespace klsum
