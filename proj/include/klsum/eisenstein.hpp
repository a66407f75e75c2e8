#pragma once

// Fourier coefficients of Eisenstein series attached to the cusps of
// Gamma_0(Q) with a character, the sesquilinear pairing of those coefficients
// summed over singular cusps, and the integral of that pairing against the
// spectral transform of a test function.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numeric>
#include <utility>
#include <vector>

#include <klsum/arith.hpp>
#include <klsum/characters.hpp>
#include <klsum/error.hpp>
#include <klsum/expsums.hpp>
#include <klsum/lfunctions.hpp>
#include <klsum/quadrature.hpp>
#include <klsum/special.hpp>
#include <klsum/transforms.hpp>

namespace klsum {

// ---------------------------------------------------------------------------
// Cusps of Gamma_0(Q)
// ---------------------------------------------------------------------------

// A cusp u/w of Gamma_0(Q): w divides Q and u is coprime to w.  Inequivalent
// cusps with denominator w correspond to classes of u modulo gcd(w, Q/w); the
// representative produced by enumerate_cusps is additionally normalized to be
// congruent to 1 modulo every prime of w outside gcd(w, Q/w).
struct Cusp {
    u64 Q = 1;
    u64 w = 1;
    u64 u = 1;

    Cusp(u64 level, u64 denom, u64 numer) : Q(level), w(denom), u(numer) {
        if (Q == 0 || w == 0 || Q % w != 0)
            throw Error(errc::config_invalid, "Cusp: w must divide the level");
        if (u == 0 || std::gcd(u, w) != 1)
            throw Error(errc::config_invalid, "Cusp: u must be positive and coprime to w");
    }

    // gcd(w, Q/w): the number of inequivalent numerators for this denominator.
    u64 width_gcd() const { return std::gcd(w, Q / w); }
};

inline std::vector<Cusp> enumerate_cusps(u64 Q) {
    if (Q == 0) throw Error(errc::config_invalid, "enumerate_cusps: level must be positive");
    std::vector<Cusp> out;
    for (u64 w : divisors(Q)) {
        const u64 wQ = std::gcd(w, Q / w);
        for (u64 r = 1; r <= wQ; ++r) {
            if (std::gcd(r, wQ) != 1) continue;
            // u == r modulo wQ and u == 1 modulo each prime of w outside wQ.
            u64 u = r % wQ;
            u64 mod = wQ;
            for (const auto& [p, e] : factor(w).factors) {
                (void)e;
                if (wQ % p == 0) continue;
                u = detail::crt_pair(u, mod, 1 % p, p);
                mod *= p;
            }
            if (u == 0) u = 1;  // mod == 1 only for the cusp 1/1
            out.emplace_back(Q, w, u);
        }
    }
    std::sort(out.begin(), out.end(), [](const Cusp& a, const Cusp& b) {
        return a.w != b.w ? a.w < b.w : a.u < b.u;
    });
    return out;
}

// Entries of sigma [1 k; 0 1] sigma^{-1} as exact integers, where sigma is the
// scaling matrix of the cusp u/w at level Q.  The bottom-left entry is a
// multiple of Q, so the matrix lies in Gamma_0(Q).
struct CuspMatrix {
    i64 a = 1, b = 0, c = 0, d = 1;
};

inline CuspMatrix cusp_translation_conjugate(const Cusp& cusp, i64 k = 1) {
    const i64 s = static_cast<i64>(cusp.Q / std::gcd(cusp.w * cusp.w, cusp.Q));
    const i64 u = static_cast<i64>(cusp.u);
    const i64 w = static_cast<i64>(cusp.w);
    return CuspMatrix{1 - k * u * w * s, k * u * u * s, -k * w * w * s, 1 + k * u * w * s};
}

// Divisibility form of the singularity test for a primitive character of
// conductor q1: the character is trivial on the stabilizer of the cusp
// exactly when q1 divides Q / gcd(w, Q/w).
inline bool is_singular(const Cusp& cusp, u64 q1) {
    if (q1 == 0) throw Error(errc::config_invalid, "is_singular: conductor must be positive");
    return (cusp.Q / cusp.width_gcd()) % q1 == 0;
}

// Direct form of the test: evaluate the character on the lower-right entry of
// a generator of the conjugated stabilizer.  sign selects the generator with
// translation +1 or the same matrix negated.
inline bool is_singular_matrix(const Cusp& cusp, const DirichletCharacter& chi1, int sign = 1) {
    const CuspMatrix M = cusp_translation_conjugate(cusp, 1);
    const i64 d = sign >= 0 ? M.d : -M.d;
    return std::abs(chi1(d) - cplx(1.0, 0.0)) < 1e-9;
}

// ---------------------------------------------------------------------------
// Singular cusps and the bi-character decomposition
// ---------------------------------------------------------------------------

struct SingularCuspData {
    Cusp cusp;
    DirichletCharacter chi1;  // inducing primitive character, conductor q1 | Q
    DirichletCharacter psi1;  // primitive component supported on primes of w
    DirichletCharacter psi2;  // primitive component supported on primes of Q/w
    u64 r1 = 1;               // modulus of psi1, divides w
    u64 r2 = 1;               // modulus of psi2, divides Q/w
    u64 Qw = 1;               // product of the primes of Q absent from Q/w
    bool sign_variant_disagrees = false;  // the two stabilizer generators give
                                          // opposite direct-test verdicts
};

namespace detail {

// The character modulo r obtained by restricting chi1 to classes that are
// congruent to 1 modulo the complementary factor comp.
inline DirichletCharacter restrict_character(const DirichletCharacter& chi1, u64 r, u64 comp) {
    auto grp = CharacterGroup::get(r);
    for (std::size_t i = 0; i < grp->num_characters(); ++i) {
        DirichletCharacter cand = grp->character(i);
        if (!cand.is_primitive()) continue;
        bool ok = true;
        for (u64 x = 1; x <= r && ok; ++x) {
            if (std::gcd(x, r) != 1) continue;
            u64 lifted = crt_pair(x % r, r, 1 % comp, comp);
            if (lifted == 0) lifted = 1;
            ok = std::abs(cand(static_cast<i64>(x)) - chi1(static_cast<i64>(lifted))) < 1e-9;
        }
        if (ok) return cand;
    }
    throw Error(errc::conductor_mismatch, "singular_cusps: no primitive component matches the restriction");
}

}  // namespace detail

inline std::vector<SingularCuspData> singular_cusps(u64 Q, const DirichletCharacter& chi1) {
    if (Q == 0) throw Error(errc::config_invalid, "singular_cusps: level must be positive");
    if (!chi1.is_primitive())
        throw Error(errc::not_primitive, "singular_cusps: character must be primitive");
    const u64 q1 = chi1.modulus();
    if (Q % q1 != 0)
        throw Error(errc::conductor_mismatch, "singular_cusps: conductor must divide the level");

    std::vector<SingularCuspData> out;
    for (const Cusp& cusp : enumerate_cusps(Q)) {
        if (!is_singular(cusp, q1)) continue;
        const bool plus = is_singular_matrix(cusp, chi1, +1);
        const bool minus = is_singular_matrix(cusp, chi1, -1);
        if (!plus && !minus)
            throw Error(errc::conductor_mismatch,
                        "singular_cusps: direct stabilizer test contradicts the divisibility test");

        const u64 w = cusp.w;
        const u64 cow = Q / w;
        u64 r1 = 1, r2 = 1;
        for (const auto& [p, e] : factor(q1).factors) {
            u64 pe = 1;
            for (u32 j = 0; j < e; ++j) pe *= p;
            if (w % pe == 0) r1 *= pe;
            else if (cow % pe == 0) r2 *= pe;
            else
                throw Error(errc::conductor_mismatch,
                            "singular_cusps: conductor factor fits neither side of the cusp");
        }
        u64 Qw = 1;
        for (const auto& [p, e] : factor(Q).factors) {
            (void)e;
            if (cow % p != 0) Qw *= p;
        }
        DirichletCharacter psi1 = detail::restrict_character(chi1, r1, r2);
        DirichletCharacter psi2 = detail::restrict_character(chi1, r2, r1);
        out.push_back(SingularCuspData{cusp, chi1, std::move(psi1), std::move(psi2), r1, r2, Qw,
                                       plus != minus});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Level defect
// ---------------------------------------------------------------------------

struct QTilde {
    u64 Q = 1;
    u64 value = 1;
};

// Smallest positive integer whose square is divisible by Q.
inline QTilde q_tilde(u64 Q) {
    if (Q == 0) throw Error(errc::config_invalid, "q_tilde: level must be positive");
    u64 v = 1;
    for (const auto& [p, e] : factor(Q).factors)
        for (u32 j = 0; j < (e + 1) / 2; ++j) v *= p;
    return QTilde{Q, v};
}

// ---------------------------------------------------------------------------
// Fourier coefficients: factored evaluation
// ---------------------------------------------------------------------------

struct CoefficientTruncation {
    // Bound on the index of the ramified subseries.  The subseries terminates
    // on its own once the local factors of the degenerate twisted sums vanish,
    // so for moderate data the default makes the evaluation exact.
    u64 c2_max = 1000000;
    // When > 1, every L-factor is cross-checked against a truncated Euler
    // product over primes up to this bound and the discrepancy is folded into
    // the error estimate.
    u64 l_check_pmax = 1;
};

struct EisensteinCoefficient {
    cplx value{0.0, 0.0};  // sqrt(n) * rho(n, t) for the cusp held in the data
    double error_estimate = 0.0;
    u64 c2_terms = 0;      // ramified indices actually summed
    bool truncated = false;  // the proven-exact bound exceeded c2_max
};

namespace detail {

struct RamifiedSeries {
    cplx sum{0.0, 0.0};
    double tail = 0.0;
    u64 terms = 0;
    bool truncated = false;
};

// Indices composed of the primes of Qw, capped per prime at the exponent
// beyond which the local factor of the degenerate twisted sum is identically
// zero, listed in increasing order.
inline std::vector<u64> ramified_indices(u64 Qw, u64 w, u64 n, const DirichletCharacter& chi_s) {
    std::vector<u64> idx{1};
    const u64 cond = chi_s.conductor();
    for (const auto& [p, e] : factor(Qw).factors) {
        (void)e;
        const u32 cap_raw = valuation(cond, p) + valuation(n, p) + 1;
        const u32 vw = valuation(w, p);
        const u32 cap = cap_raw > vw ? cap_raw - vw : 0;
        const std::size_t sz = idx.size();
        u64 pk = 1;
        for (u32 j = 1; j <= cap; ++j) {
            pk *= p;
            for (std::size_t i = 0; i < sz; ++i) idx.push_back(idx[i] * pk);
        }
    }
    std::sort(idx.begin(), idx.end());
    return idx;
}

inline RamifiedSeries ramified_series(const SingularCuspData& data, const DirichletCharacter& rho,
                                      const DirichletCharacter& chi_s, u64 n, double two_t,
                                      u64 c2_cap) {
    RamifiedSeries out;
    const u64 w = data.cusp.w;
    for (u64 c2 : ramified_indices(data.Qw, w, n, chi_s)) {
        const u64 c = c2 * w;
        if (c2 > c2_cap) {
            out.truncated = true;
            // Square-root cancellation bound on the degenerate twisted sum.
            const double g = double(std::gcd(static_cast<u64>(n), c));
            out.tail += double(divisor_count(c)) * std::sqrt(g) * std::sqrt(double(c)) / double(c2);
            continue;
        }
        const cplx s_val = twisted_kloosterman(-static_cast<i64>(n), 0, c, chi_s);
        const cplx weight = rho(static_cast<i64>(c2)) * data.psi2(static_cast<i64>(c2)) *
                            std::exp(cplx(-std::log(double(c2)), -two_t * std::log(double(c2))));
        out.sum += weight * s_val;
        ++out.terms;
    }
    return out;
}

}  // namespace detail

// sqrt(n) times the n-th Fourier coefficient at spectral parameter t of the
// weight-kappa Eisenstein series attached to a singular cusp, computed from
// the factored form of the series: a finite character sum whose terms combine
// a restricted L-factor, a divisor sum, and a terminating ramified subseries.
inline EisensteinCoefficient eisenstein_coefficient(const SingularCuspData& data, u64 n, double t,
                                                    int kappa,
                                                    const CoefficientTruncation& trunc = {}) {
    if (n == 0) throw Error(errc::config_invalid, "eisenstein_coefficient: index must be positive");
    if (kappa != 0 && kappa != 1)
        throw Error(errc::config_invalid, "eisenstein_coefficient: weight must be 0 or 1");
    if (data.chi1.parity() != kappa)
        throw Error(errc::config_invalid,
                    "eisenstein_coefficient: weight parity must match the character");
    if (trunc.c2_max == 0 || trunc.l_check_pmax == 0)
        throw Error(errc::config_invalid, "eisenstein_coefficient: truncation cutoffs must be positive");

    const u64 Q = data.cusp.Q;
    const u64 w = data.cusp.w;
    const u64 u = data.cusp.u;
    const u64 wQ = data.cusp.width_gcd();
    const double two_t = 2.0 * t;

    const cplx s_half(0.5, t);
    const cplx pref = unit_i_power(kappa) * std::exp(s_half * std::log(detail::pi_const)) *
                      std::exp(cplx(0.0, t * std::log(double(n)))) /
                      gamma_cplx(cplx(0.5 * (1.0 + kappa), t)) *
                      std::exp(s_half * std::log(double(wQ) / (double(w) * double(Q)))) *
                      data.psi1(static_cast<i64>(u)) / double(euler_phi(wQ));

    const u64 ubar = wQ == 1 ? 0 : mod_inverse(static_cast<i64>(u % wQ), wQ);
    auto rho_group = CharacterGroup::get(wQ);

    auto eval = [&](u64 c2_cap) {
        EisensteinCoefficient out;
        cplx total(0.0, 0.0);
        double err = 0.0;
        for (std::size_t i = 0; i < rho_group->num_characters(); ++i) {
            const DirichletCharacter rho = rho_group->character(i);
            const DirichletCharacter rho_sq = multiply_characters(rho, rho);
            const DirichletCharacter twist =
                multiply_characters(multiply_characters(data.psi1.conjugate(), data.psi2), rho_sq);
            const cplx inv_l = l_restricted_inverse(cplx(1.0, two_t), twist, Q);
            if (inv_l == cplx(0.0, 0.0)) continue;

            double l_err = 0.0;
            if (trunc.l_check_pmax > 1) {
                const PartialL pl =
                    partial_l(cplx(1.0, two_t), twist.primitive_part(), Q, trunc.l_check_pmax);
                if (std::abs(pl.value) > 1e-8) {
                    const cplx alt = 1.0 / pl.value;
                    l_err = std::abs(inv_l - alt) + pl.error_estimate * std::abs(alt) * std::abs(alt);
                }
            }

            cplx dsum(0.0, 0.0);
            for (u64 d : divisors(n)) {
                if (std::gcd(d, Q) != 1) continue;
                dsum += twist(static_cast<i64>(d)) *
                        std::exp(cplx(0.0, -two_t * std::log(double(d))));
            }

            const DirichletCharacter chi_s = multiply_characters(data.psi1.conjugate(), rho);
            const detail::RamifiedSeries ram =
                detail::ramified_series(data, rho, chi_s, n, two_t, c2_cap);
            out.c2_terms += ram.terms;
            out.truncated = out.truncated || ram.truncated;

            const cplx front = rho(static_cast<i64>(ubar)) * inv_l * dsum;
            total += front * ram.sum;
            err += std::abs(front) * ram.tail + l_err * std::abs(dsum * ram.sum);
        }
        out.value = pref * total;
        out.error_estimate = std::abs(pref) * err + 1e-12 * (1.0 + std::abs(out.value));
        return out;
    };

    EisensteinCoefficient base = eval(trunc.c2_max);
    if (base.truncated) {
        const EisensteinCoefficient doubled = eval(2 * trunc.c2_max);
        if (std::abs(doubled.value - base.value) >
            base.error_estimate + 1e-12 * (1.0 + std::abs(base.value)))
            throw Error(errc::truncation_too_small,
                        "eisenstein_coefficient: ramified tail exceeds its error estimate");
    }
    return base;
}

// ---------------------------------------------------------------------------
// Fourier coefficients: direct summation of the defining series
// ---------------------------------------------------------------------------

struct DirectCoefficient {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
};

namespace detail {

// Smooth truncation weight, flat to fourth order at both endpoints.
inline double smooth_tail_weight(double v) {
    if (v <= 0.0) return 1.0;
    if (v >= 1.0) return 0.0;
    const double v4 = v * v * v * v;
    return 1.0 - v4 * (35.0 - 84.0 * v + 70.0 * v * v - 20.0 * v * v * v);
}

// Smoothly truncated series value at one cutoff: sum of terms[C] * C^{-1-2it}
// weighted by the tail weight.
inline cplx truncated_series(const std::vector<cplx>& terms, u64 cut, double two_t) {
    cplx acc(0.0, 0.0);
    const u64 top = std::min<u64>(cut, terms.size() - 1);
    for (u64 C = 1; C <= top; ++C) {
        const double lc = std::log(double(C));
        acc += smooth_tail_weight(double(C) / double(cut)) * terms[C] *
               std::exp(cplx(-lc, -two_t * lc));
    }
    return acc;
}

// Averages the smoothly truncated series over a geometric ladder of
// sub-cutoffs with sine-squared weights in the logarithmic variable.  The
// averaging suppresses the slowly decaying oscillation of the remainder that
// a single truncation would retain.
inline cplx log_averaged_series(const std::vector<cplx>& terms, u64 cmax, double two_t) {
    const int grid = 24;
    const u64 cmin = std::max<u64>(cmax / 20, 16);
    const double ratio = double(cmax) / double(cmin);
    double wsum = 0.0;
    cplx acc(0.0, 0.0);
    for (int j = 0; j < grid; ++j) {
        const double frac = (j + 0.5) / grid;
        const u64 cut = static_cast<u64>(
            std::llround(double(cmax) * std::pow(ratio, frac - 1.0)));
        double lam = std::sin(pi_const * frac);
        lam *= lam;
        wsum += lam;
        acc += lam * truncated_series(terms, cut, two_t);
    }
    return acc / wsum;
}

}  // namespace detail

// Direct evaluation of sqrt(n) * rho(n, t) from the defining double series
// over (C, D), truncated at C <= c_max.  The series is summed with a smooth
// truncation weight averaged over a logarithmic ladder of sub-cutoffs, and
// the error estimate compares the result against the same estimator at half
// the cutoff.  Shared inner sums make the evaluation simultaneous over a
// list of indices and spectral parameters.
inline std::vector<std::vector<DirectCoefficient>> eisenstein_coefficient_direct_batch(
    const SingularCuspData& data, const std::vector<u64>& ns, const std::vector<double>& ts,
    int kappa, u64 c_max = 10000) {
    if (kappa != 0 && kappa != 1)
        throw Error(errc::config_invalid, "eisenstein_coefficient_direct: weight must be 0 or 1");
    if (data.chi1.parity() != kappa)
        throw Error(errc::config_invalid,
                    "eisenstein_coefficient_direct: weight parity must match the character");
    if (ns.empty() || ts.empty())
        throw Error(errc::config_invalid, "eisenstein_coefficient_direct: empty evaluation grid");
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (ns[i] == 0 || (i > 0 && ns[i] <= ns[i - 1]))
            throw Error(errc::config_invalid,
                        "eisenstein_coefficient_direct: indices must be positive and increasing");
    if (c_max < 16)
        throw Error(errc::config_invalid, "eisenstein_coefficient_direct: cutoff below 16");

    const u64 Q = data.cusp.Q;
    const u64 w = data.cusp.w;
    const u64 u = data.cusp.u;
    const u64 wQ = data.cusp.width_gcd();
    const u64 cow = Q / w;
    const u64 r1 = data.r1;
    const u64 nmax = ns.back();
    const double two_pi = 2.0 * detail::pi_const;

    // psi1(u * Dbar) = psi1(u) * conj(psi1(D)) tabulated by D mod r1.
    std::vector<cplx> tab1(r1, cplx(0.0, 0.0));
    const cplx p1u = data.psi1(static_cast<i64>(u));
    for (u64 x = 0; x < r1; ++x)
        if (std::gcd(x, r1) == 1 || r1 == 1)
            tab1[x] = p1u * std::conj(data.psi1(static_cast<i64>(x)));

    const auto spf = smallest_factor_sieve(static_cast<u32>(c_max * w + 1));

    // Inner sums A_C(n) over D mod C w in the admissible class, weighted by
    // the character in C; rows for inadmissible C stay zero.
    std::vector<std::vector<cplx>> inner(c_max + 1, std::vector<cplx>(ns.size(), cplx(0.0, 0.0)));
    std::vector<unsigned char> keep;
    std::vector<cplx> acc(ns.size());
    for (u64 C = 1; C <= c_max; ++C) {
        if (std::gcd(C, cow) != 1) continue;
        const u64 L = C * w;
        const u64 d0 = wQ == 1 ? 0
                               : mul_mod(u % wQ, mod_inverse(static_cast<i64>(C % wQ), wQ), wQ);
        const u64 len = L / wQ;
        keep.assign(len, 1);
        for (u64 x = L; x > 1;) {
            const u64 p = spf[x];
            while (x % p == 0) x /= p;
            if (wQ % p == 0) continue;  // the class d0 already avoids p
            const u64 winv = mod_inverse(static_cast<i64>(wQ % p), p);
            for (u64 j = mul_mod((p - d0 % p) % p, winv, p); j < len; j += p) keep[j] = 0;
        }

        std::fill(acc.begin(), acc.end(), cplx(0.0, 0.0));
        cplx z = std::polar(1.0, -two_pi * double(d0) / double(L));
        const cplx step = std::polar(1.0, -two_pi * double(wQ) / double(L));
        u64 dmod = d0 % r1;
        for (u64 j = 0; j < len; ++j) {
            if ((j & 4095u) == 4095u)  // cap rotation drift on long progressions
                z = std::polar(1.0, -two_pi * double((d0 + j * wQ) % L) / double(L));
            if (keep[j]) {
                const cplx a = tab1[dmod];
                cplx zn(1.0, 0.0);
                std::size_t pos = 0;
                for (u64 m = 1; m <= nmax; ++m) {
                    zn *= z;
                    if (m == ns[pos]) {
                        acc[pos] += a * zn;
                        if (++pos == ns.size()) break;
                    }
                }
            }
            z *= step;
            dmod += wQ % r1;
            if (dmod >= r1) dmod -= r1;
        }
        const cplx p2c = data.psi2(static_cast<i64>(C));
        for (std::size_t k = 0; k < ns.size(); ++k) inner[C][k] = p2c * acc[k];
    }

    // Smoothed, log-averaged series estimates per (n, t); the error estimate
    // is three times the drift against the half-cutoff estimator.
    std::vector<std::vector<DirectCoefficient>> out(ns.size(),
                                                    std::vector<DirectCoefficient>(ts.size()));
    std::vector<cplx> col(c_max + 1);
    for (std::size_t k = 0; k < ns.size(); ++k) {
        for (u64 C = 0; C <= c_max; ++C) col[C] = inner[C][k];
        for (std::size_t it_t = 0; it_t < ts.size(); ++it_t) {
            const double t = ts[it_t];
            const double two_t = 2.0 * t;
            const cplx mean = detail::log_averaged_series(col, c_max, two_t);
            // Two incommensurate reference cutoffs: the remainder oscillates in
            // log-cutoff, and a single lag can sit near a node of that
            // oscillation while the common error persists.
            const cplx check2 = detail::log_averaged_series(col, c_max / 2, two_t);
            const cplx check3 = detail::log_averaged_series(col, c_max / 3, two_t);
            const double drift =
                std::max(std::abs(mean - check2), std::abs(mean - check3));
            const cplx s_half(0.5, t);
            const cplx pref = unit_i_power(kappa) * std::exp(s_half * std::log(detail::pi_const)) *
                              std::exp(cplx(0.0, t * std::log(double(ns[k])))) /
                              gamma_cplx(cplx(0.5 * (1.0 + kappa), t)) *
                              std::exp(s_half * std::log(double(wQ) / (double(w) * double(Q))));
            out[k][it_t].value = pref * mean;
            out[k][it_t].error_estimate =
                std::abs(pref) * (3.0 * drift + 1e-9 * (1.0 + std::abs(mean)));
        }
    }
    return out;
}

inline DirectCoefficient eisenstein_coefficient_direct(const SingularCuspData& data, u64 n,
                                                       double t, int kappa, u64 c_max = 10000) {
    return eisenstein_coefficient_direct_batch(data, {n}, {t}, kappa, c_max)[0][0];
}

// ---------------------------------------------------------------------------
// Pairing over singular cusps and its spectral integral
// ---------------------------------------------------------------------------

struct PairingValue {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
};

namespace detail {

inline PairingValue pairing_from_data(const std::vector<SingularCuspData>& cusps, u64 m, u64 n,
                                      double t, int kappa, const CoefficientTruncation& trunc) {
    PairingValue out;
    const double ch = std::cosh(pi_const * t);
    for (const SingularCuspData& data : cusps) {
        const EisensteinCoefficient am = eisenstein_coefficient(data, m, t, kappa, trunc);
        const EisensteinCoefficient an =
            m == n ? am : eisenstein_coefficient(data, n, t, kappa, trunc);
        out.value += std::conj(am.value) * an.value / ch;
        out.error_estimate += (std::abs(am.value) * an.error_estimate +
                               std::abs(an.value) * am.error_estimate +
                               am.error_estimate * an.error_estimate) /
                              ch;
    }
    return out;
}

}  // namespace detail

// Sum over the singular cusps of conj(sqrt(m) rho(m,t)) * sqrt(n) rho(n,t)
// divided by cosh(pi t).  A conductor that does not divide the level leaves
// no singular cusp, so the empty sum is returned rather than an error.
inline PairingValue eisenstein_pairing(u64 Q, const DirichletCharacter& chi1, int kappa, u64 m,
                                       u64 n, double t, const CoefficientTruncation& trunc = {}) {
    if (Q == 0 || m == 0 || n == 0)
        throw Error(errc::config_invalid, "eisenstein_pairing: level and indices must be positive");
    if (kappa != 0 && kappa != 1)
        throw Error(errc::config_invalid, "eisenstein_pairing: weight must be 0 or 1");
    if (!chi1.is_primitive())
        throw Error(errc::not_primitive, "eisenstein_pairing: character must be primitive");
    if (chi1.parity() != kappa)
        throw Error(errc::config_invalid, "eisenstein_pairing: weight parity must match the character");
    if (Q % chi1.modulus() != 0) return PairingValue{};
    return detail::pairing_from_data(singular_cusps(Q, chi1), m, n, t, kappa, trunc);
}

// |pairing| relative to the reference envelope
//   gcd(m, Qt)^{1/2} gcd(n, Qt)^{1/2} / Qt * (Q m n (1+|t|))^{0.1} / (1+|t|)^kappa
// with Qt the smallest integer whose square Q divides.
inline double eisenstein_bound_ratio(u64 Q, const DirichletCharacter& chi1, int kappa, u64 m, u64 n,
                                     double t, const CoefficientTruncation& trunc = {}) {
    const PairingValue pv = eisenstein_pairing(Q, chi1, kappa, m, n, t, trunc);
    const double qt = double(q_tilde(Q).value);
    const double envelope = std::sqrt(double(std::gcd(m, q_tilde(Q).value))) *
                            std::sqrt(double(std::gcd(n, q_tilde(Q).value))) / qt *
                            std::pow(double(Q) * double(m) * double(n) * (1.0 + std::abs(t)), 0.1);
    return std::abs(pv.value) * std::pow(1.0 + std::abs(t), double(kappa)) / envelope;
}

// Integral over the spectral line of the transform g-tilde against the cusp
// pairing, using the supplied grid of positive breakpoints for panels that
// are mirrored across zero, plus a sampled allowance for the tail beyond the
// last breakpoint.
inline PairingValue eisenstein_spectral_term(const TransformSpec& spec, u64 Q,
                                             const DirichletCharacter& chi1, int kappa, u64 m,
                                             u64 n, const std::vector<double>& t_grid,
                                             const CoefficientTruncation& trunc = {}) {
    if (Q == 0 || m == 0 || n == 0)
        throw Error(errc::config_invalid,
                    "eisenstein_spectral_term: level and indices must be positive");
    if (kappa != 0 && kappa != 1)
        throw Error(errc::config_invalid, "eisenstein_spectral_term: weight must be 0 or 1");
    if (!chi1.is_primitive())
        throw Error(errc::not_primitive, "eisenstein_spectral_term: character must be primitive");
    if (chi1.parity() != kappa)
        throw Error(errc::config_invalid,
                    "eisenstein_spectral_term: weight parity must match the character");
    if (t_grid.empty())
        throw Error(errc::config_invalid, "eisenstein_spectral_term: breakpoint grid is empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        if (!(t_grid[i] > 0.0) || (i > 0 && t_grid[i] <= t_grid[i - 1]))
            throw Error(errc::config_invalid,
                        "eisenstein_spectral_term: breakpoints must be positive and increasing");
    if (Q % chi1.modulus() != 0) return PairingValue{};  // integrand vanishes identically

    const std::vector<SingularCuspData> cusps = singular_cusps(Q, chi1);
    double pair_err = 0.0;
    auto integrand = [&](double t) {
        const PairingValue pv = detail::pairing_from_data(cusps, m, n, t, kappa, trunc);
        const TransformValue gt = g_tilde(spec, cplx(t, 0.0), kappa);
        pair_err = std::max(pair_err, pv.error_estimate * std::abs(gt.value) +
                                          gt.error * std::abs(pv.value));
        return gt.value * pv.value;
    };

    std::vector<double> edges;
    edges.reserve(2 * t_grid.size() + 1);
    for (auto it = t_grid.rbegin(); it != t_grid.rend(); ++it) edges.push_back(-*it);
    edges.push_back(0.0);
    for (double r : t_grid) edges.push_back(r);

    PairingValue out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const QuadResult qr = integrate(integrand, edges[i], edges[i + 1], 1e-9, 1e-8, 10);
        out.value += qr.value;
        out.error_estimate += qr.error;
    }
    const double T = t_grid.back();
    double mstar = 0.0;
    for (double f : {1.0, 1.25, 1.5, 2.0}) {
        mstar = std::max(mstar, std::abs(integrand(f * T)));
        mstar = std::max(mstar, std::abs(integrand(-f * T)));
    }
    out.error_estimate += 4.0 * mstar * T + 2.0 * T * pair_err;
    return out;
}

}  // namespace klsum
