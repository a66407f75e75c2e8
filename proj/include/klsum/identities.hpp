#pragma once
// Finite, exactly checkable rearrangement identities for character-twisted
// Kloosterman sums. Each identity relates a coprimality-restricted sum of
// (twisted) Kloosterman values against a finitely supported weight to a
// Moebius-sieved combination of divisibility-restricted twisted sums; the
// master variant additionally decomposes a unit-classes weight through the
// finite character transform. All identities are exact, so the reported
// errors measure only floating-point noise.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <string>

#include <klsum/arith.hpp>
#include <klsum/characters.hpp>
#include <klsum/cutoff.hpp>
#include <klsum/expsums.hpp>

namespace klsum {

// Complex weight with finite support on the positive integers. Stored in an
// ordered map so every consumer iterates in increasing support order.
struct FiniteTestWeight {
    std::map<u64, cplx> values;

    void set(u64 c, cplx v) {
        if (c == 0)
            throw Error(errc::range_violated, "weight support must be positive integers");
        values[c] = v;
    }

    cplx operator()(u64 c) const {
        auto it = values.find(c);
        return it == values.end() ? cplx{0.0, 0.0} : it->second;
    }

    static FiniteTestWeight indicator_range(u64 lo, u64 hi) {
        FiniteTestWeight h;
        for (u64 c = std::max<u64>(lo, 1); c <= hi; ++c) h.values[c] = {1.0, 0.0};
        return h;
    }
};

// Fixed wire identifiers used when reports are serialized; external consumers
// key on these strings, so they must never change.
namespace wire {
inline constexpr const char* mobius_sieve = "BasicMobius";
inline constexpr const char* twist_encoding = "basic";
inline constexpr const char* twist_encoding_general = "basicgeneral";
inline constexpr const char* master_encoding = "THEbasicidentity";
} // namespace wire

struct IdentityReport {
    std::string id;
    u64 m = 0;
    u64 n = 0;
    u64 q = 1; // modulus of the character (the twist's own modulus for the sieve check)
    std::optional<u64> chi_index;
    std::optional<u64> delta;
    std::optional<double> X;
    cplx lhs{0.0, 0.0};
    cplx rhs{0.0, 0.0};
    double abs_error = 0.0;
    double rel_error = 0.0;
    double tolerance = 1e-8;
    bool pass = false;
};

namespace detail {

// Relative error against max(|lhs|, |rhs|, 1e-30); the floor guards the
// all-zero case, where any absolute error would otherwise divide by zero.
inline void finalize_report(IdentityReport& r) {
    r.abs_error = std::abs(r.lhs - r.rhs);
    const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-30});
    r.rel_error = r.abs_error / scale;
    r.pass = r.rel_error < r.tolerance;
}

} // namespace detail

// Moebius sieve for the coprimality condition (s/delta, q1) = 1 inside a
// divisibility-restricted twisted sum:
//   sum_{delta | s, (s/delta, q1) = 1} S_chi1(m, n q1^2, q1 s) h(s)
//     = sum_{d | q1} mu(d) sum_{delta | s, d | s/delta} S_chi1(m, n q1^2, q1 s) h(s).
// Requires chi1 primitive and (m delta, q1) = 1.
inline IdentityReport verify_mobius_identity(u64 m, u64 n, const DirichletCharacter& chi1,
                                             u64 delta, const FiniteTestWeight& h) {
    if (!chi1.is_primitive())
        throw Error(errc::not_primitive, "mobius identity requires a primitive twist");
    if (m == 0 || delta == 0)
        throw Error(errc::range_violated, "mobius identity requires positive m and delta");
    const u64 q1 = chi1.modulus();
    if (std::gcd(m, q1) != 1 || std::gcd(delta, q1) != 1)
        throw Error(errc::not_coprime, "m*delta must be coprime to the twist modulus");

    const u64 n_scaled = n * q1 * q1;
    std::map<u64, cplx> twisted; // s -> S_chi1(m, n q1^2, q1 s)
    for (const auto& [s, hv] : h.values) {
        (void)hv;
        if (s % delta != 0) continue;
        twisted[s] = twisted_kloosterman(static_cast<i64>(m), static_cast<i64>(n_scaled),
                                         q1 * s, chi1);
    }

    IdentityReport rep;
    rep.id = wire::mobius_sieve;
    rep.m = m;
    rep.n = n;
    rep.q = q1;
    rep.chi_index = chi1.index();
    rep.delta = delta;

    detail::KahanCplx lhs;
    for (const auto& [s, sval] : twisted) {
        if (std::gcd(s / delta, q1) != 1) continue;
        lhs.add(sval * h(s));
    }
    detail::KahanCplx rhs;
    for (u64 d : divisors(q1)) {
        const int mu = mobius(d);
        if (mu == 0) continue;
        detail::KahanCplx inner;
        for (const auto& [s, sval] : twisted) {
            if ((s / delta) % d != 0) continue;
            inner.add(sval * h(s));
        }
        rhs.add(static_cast<double>(mu) * inner.sum());
    }
    rep.lhs = lhs.sum();
    rep.rhs = rhs.sum();
    detail::finalize_report(rep);
    return rep;
}

namespace detail {

// Shared core of the twist-encoding identities. The two public entry points
// differ only in how (m_eff, n_eff) are derived from (m, n), so running this
// helper with identical effective parameters produces bitwise identical sums.
//   lhs = sum_{(c,q)=1} chi(c) S(m,n,c) h(c)
//   rhs = (chi1(m_eff)/tau(chi1)) sum_{d|q} mu(d)
//           sum_{d|s} S_chi1(m_eff, n_eff q1^2, q1 s) h(s)
inline IdentityReport twist_identity_impl(const char* id, u64 m, u64 n, u64 m_eff, u64 n_eff,
                                          const DirichletCharacter& chi,
                                          const FiniteTestWeight& h) {
    const u64 q = chi.modulus();
    const DirichletCharacter chi1 = chi.primitive_part();
    const u64 q1 = chi1.modulus();

    IdentityReport rep;
    rep.id = id;
    rep.m = m;
    rep.n = n;
    rep.q = q;
    rep.chi_index = chi.index();

    KahanCplx lhs;
    for (const auto& [c, hv] : h.values) {
        if (std::gcd(c, q) != 1) continue;
        lhs.add(chi(static_cast<i64>(c)) *
                kloosterman(static_cast<i64>(m), static_cast<i64>(n), c) * hv);
    }
    rep.lhs = lhs.sum();

    const cplx prefactor = chi1(static_cast<i64>(m_eff)) / gauss_sum(chi1);
    const u64 n_scaled = n_eff * q1 * q1;
    std::map<u64, cplx> twisted;
    for (const auto& [s, hv] : h.values) {
        (void)hv;
        twisted[s] = twisted_kloosterman(static_cast<i64>(m_eff),
                                         static_cast<i64>(n_scaled), q1 * s, chi1);
    }
    KahanCplx sieved;
    for (u64 d : divisors(q)) {
        const int mu = mobius(d);
        if (mu == 0) continue;
        KahanCplx inner;
        for (const auto& [s, sval] : twisted) {
            if (s % d != 0) continue;
            inner.add(sval * h(s));
        }
        sieved.add(static_cast<double>(mu) * inner.sum());
    }
    rep.rhs = prefactor * sieved.sum();
    finalize_report(rep);
    return rep;
}

} // namespace detail

// Encoding of a character-weighted Kloosterman sum as a Gauss-sum-normalized
// Moebius combination of twisted sums; requires (m, conductor) = 1.
inline IdentityReport verify_twist_identity(u64 m, u64 n, const DirichletCharacter& chi,
                                            const FiniteTestWeight& h) {
    if (m == 0) throw Error(errc::range_violated, "twist identity requires positive m");
    if (std::gcd(m, chi.conductor()) != 1)
        throw Error(errc::not_coprime, "m must be coprime to the conductor");
    return detail::twist_identity_impl(wire::twist_encoding, m, n, m, n, chi, h);
}

// Unrestricted variant: m is split as m = m_eff * t with t carrying every
// prime of m shared with q, and the cofactor migrates to n_eff = n * t. The
// products m*n and m_eff*n_eff agree, which the report's parameters preserve.
inline IdentityReport verify_twist_identity_general(u64 m, u64 n, const DirichletCharacter& chi,
                                                    const FiniteTestWeight& h) {
    const QPartSplit split = q_part_split(m, chi.modulus());
    const u64 m_eff = split.coprime_part;
    const u64 n_eff = n * split.q_part;
    return detail::twist_identity_impl(wire::twist_encoding_general, m, n, m_eff, n_eff, chi, h);
}

// Master encoding: decompose a unit-classes weight f through the finite
// character transform and apply the general twist encoding per character.
//   lhs = sum_{(c,q)=1} S(m,n,c) c^{-1/2} f(c) cutoff(c/X)
//   rhs = phi(q)^{-1/2} sum_chi chi1(m_eff) fhat(chi)/tau(chi1)
//           sum_{d|q} mu(d) sum_{d q1 | c} (q1/c)^{1/2}
//             S_chi1(m_eff, n_eff q1^2, c) cutoff(c/(q1 X))
inline IdentityReport verify_master_identity(u64 m, u64 n, u64 q, const ArithmeticWeight& f,
                                             const SmoothCutoff& cutoff, double X) {
    if (f.q != q)
        throw Error(errc::modulus_mismatch, "weight modulus does not match q");
    if (m == 0 || q == 0 || !(X > 0.0))
        throw Error(errc::range_violated, "master identity requires positive m, q, X");

    auto group = CharacterGroup::get(q);
    const QPartSplit split = q_part_split(m, q);
    const u64 m_eff = split.coprime_part;
    const u64 n_eff = n * split.q_part;

    IdentityReport rep;
    rep.id = wire::master_encoding;
    rep.m = m;
    rep.n = n;
    rep.q = q;
    rep.X = X;

    const double a = cutoff.lower();
    const double b = cutoff.upper();

    detail::KahanCplx lhs;
    {
        const u64 c_lo = std::max<u64>(1, static_cast<u64>(std::floor(a * X)) + 1);
        const u64 c_hi = static_cast<u64>(std::ceil(b * X));
        for (u64 c = c_lo; c <= c_hi; ++c) {
            if (std::gcd(c, q) != 1) continue;
            const cplx w = cutoff(static_cast<double>(c) / X);
            if (w == 0.0) continue;
            lhs.add(kloosterman(static_cast<i64>(m), static_cast<i64>(n), c) /
                    std::sqrt(static_cast<double>(c)) * f(static_cast<i64>(c)) * w);
        }
    }
    rep.lhs = lhs.sum();

    const MellinCoefficients fhat = q_mellin(f);
    detail::KahanCplx rhs;
    for (u64 idx = 0; idx < group->num_characters(); ++idx) {
        const DirichletCharacter chi = group->character(idx);
        const DirichletCharacter chi1 = chi.primitive_part();
        const u64 q1 = chi1.modulus();
        const cplx factor =
            chi1(static_cast<i64>(m_eff)) * fhat.coeffs[idx] / gauss_sum(chi1);
        if (factor == 0.0) continue; // an exactly-zero transform coefficient contributes nothing
        const u64 n_scaled = n_eff * q1 * q1;
        const double scale_x = static_cast<double>(q1) * X;
        const double root_q1 = std::sqrt(static_cast<double>(q1));
        detail::KahanCplx sieved;
        for (u64 d : divisors(q)) {
            const int mu = mobius(d);
            if (mu == 0) continue;
            const u64 step = d * q1;
            const u64 k_lo =
                std::max<u64>(1, static_cast<u64>(std::floor(a * scale_x / step)) + 1);
            const u64 k_hi = static_cast<u64>(std::ceil(b * scale_x / step));
            detail::KahanCplx inner;
            for (u64 k = k_lo; k <= k_hi; ++k) {
                const u64 c = k * step;
                const cplx w = cutoff(static_cast<double>(c) / scale_x);
                if (w == 0.0) continue;
                inner.add(root_q1 / std::sqrt(static_cast<double>(c)) *
                          twisted_kloosterman(static_cast<i64>(m_eff),
                                              static_cast<i64>(n_scaled), c, chi1) *
                          w);
            }
            sieved.add(static_cast<double>(mu) * inner.sum());
        }
        rhs.add(factor * sieved.sum());
    }
    rep.rhs = rhs.sum() / std::sqrt(static_cast<double>(group->phi()));
    detail::finalize_report(rep);
    return rep;
}

// One-line JSON serialization with a fixed key order and %.17g doubles, so
// identical reports always serialize to identical bytes.
inline std::string identity_report_json(const IdentityReport& r) {
    char buf[160];
    std::string out = "{\"id\":\"" + r.id + "\"";
    auto add_u64 = [&](const char* key, u64 v) {
        std::snprintf(buf, sizeof(buf), ",\"%s\":%llu", key,
                      static_cast<unsigned long long>(v));
        out += buf;
    };
    auto add_dbl = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), ",\"%s\":%.17g", key, v);
        out += buf;
    };
    add_u64("m", r.m);
    add_u64("n", r.n);
    add_u64("q", r.q);
    if (r.chi_index) add_u64("chi", *r.chi_index);
    if (r.delta) add_u64("delta", *r.delta);
    if (r.X) add_dbl("X", *r.X);
    add_dbl("lhs_re", r.lhs.real());
    add_dbl("lhs_im", r.lhs.imag());
    add_dbl("rhs_re", r.rhs.real());
    add_dbl("rhs_im", r.rhs.imag());
    add_dbl("abs_error", r.abs_error);
    add_dbl("rel_error", r.rel_error);
    out += r.pass ? ",\"pass\":true}" : ",\"pass\":false}";
    return out;
}

} // namespace klsum
