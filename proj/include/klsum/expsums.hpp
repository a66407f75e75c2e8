#pragma once

// Complete exponential sums: Kloosterman sums (optionally twisted by a
// Dirichlet character), Ramanujan sums, and exact rational Dedekind sums.
//
// Two evaluation paths exist for the Kloosterman family: a direct summation
// over units (the reference) and a fast path that factors the modulus and
// multiplies prime-power local sums after twisting the arguments by the
// complementary cofactor inverse.  Accumulation is compensated so that range
// sweeps are reproducible to the last bit.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <thread>
#include <vector>

#include "klsum/arith.hpp"
#include "klsum/characters.hpp"
#include "klsum/error.hpp"

namespace klsum {

namespace detail {

struct KahanReal {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

struct KahanCplx {
    KahanReal re, im;
    void add(cplx z) { re.add(z.real()); im.add(z.imag()); }
    cplx sum() const { return {re.s, im.s}; }
};

// Inverse table mod a prime p: inv[d] for d in [1, p).
inline void inverse_table(u64 p, std::vector<u32>& inv) {
    inv.assign(p, 0);
    if (p >= 2) inv[1] = 1;
    for (u64 i = 2; i < p; ++i)
        inv[i] = static_cast<u32>(p - (p / i) * inv[p % i] % p);
}

// Newton lift of an inverse mod p to an inverse mod p^e.
inline u64 lift_inverse(u64 d, u64 x, u64 pe) {
    // x = d^{-1} mod p on entry; each step doubles the correct digits.
    while (true) {
        u64 prod = (d * x) % pe;
        if (prod == 1) return x;
        u64 t = (2 + pe - prod) % pe;
        x = (x * t) % pe;
    }
}

// Values of the p-component of chi on residues mod p^v, as exact angle
// numerators over `order`; -1 marks a non-unit residue.
struct LocalChar {
    u64 mod = 1;   // p^v
    u64 order = 1; // order of the local character
    std::vector<i64> num;
};

inline LocalChar local_character(const DirichletCharacter& chi, u64 p) {
    LocalChar lc;
    u64 M = chi.modulus();
    u64 pv = 1;
    while (M % p == 0) { M /= p; pv *= p; }
    lc.mod = pv;
    if (pv == 1) return lc;
    // Order of the local component: lcm over this prime's group components.
    u64 ord = 1;
    const auto& comps = chi.group().components();
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (comps[i].prime != p) continue;
        u64 k = chi.exponents()[i];
        ord = std::lcm(ord, comps[i].order / std::gcd(comps[i].order, k));
    }
    lc.order = ord;
    lc.num.assign(pv, -1);
    for (u64 x = 0; x < pv; ++x) {
        if (std::gcd(x, pv) != 1) continue;
        u64 b = lift_to_modulus(x, pv, chi.modulus(), p);
        i64 n, d;
        if (!chi.angle(static_cast<i64>(b), n, d)) continue;
        lc.num[x] = n * static_cast<i64>(ord / static_cast<u64>(d));
    }
    return lc;
}

// Local sum over units d mod p^e of chi_p(d) e((a d + b d^{-1}) / p^e).
// a, b are already reduced into [0, p^e).  lc == nullptr means untwisted.
inline cplx kloosterman_local(u64 p, u32 e, u64 pe, u64 a, u64 b, const LocalChar* lc) {
    if (pe == 1) return {1.0, 0.0};
    if (pe == 2) {
        double v = ((a + b) % 2 == 0) ? 1.0 : -1.0;
        return {v, 0.0};
    }
    static thread_local std::vector<u32> inv;
    inverse_table(p, inv);
    double w = 2.0 * std::numbers::pi / static_cast<double>(pe);
    if (lc == nullptr || lc->mod == 1) {
        // d and pe - d pair to conjugate phases, so sum cosines over half.
        KahanReal acc;
        if (e == 1) {
            for (u64 d = 1; 2 * d < p; ++d) {
                u64 k = (a * d + b * inv[d]) % p;
                acc.add(2.0 * std::cos(w * static_cast<double>(k)));
            }
        } else {
            for (u64 d = 1; 2 * d < pe; ++d) {
                if (d % p == 0) continue;
                u64 x = lift_inverse(d, inv[d % p], pe);
                u64 k = (a * d + b * x) % pe;
                acc.add(2.0 * std::cos(w * static_cast<double>(k)));
            }
        }
        return {acc.s, 0.0};
    }
    KahanCplx acc;
    u64 lo = lc->mod, lord = lc->order;
    double wl = 2.0 * std::numbers::pi / (static_cast<double>(pe) * static_cast<double>(lord));
    for (u64 d = 1; d < pe; ++d) {
        if (p > 1 && d % p == 0) continue;
        u64 x = (e == 1) ? inv[d] : lift_inverse(d, inv[d % p], pe);
        u64 k = (a * d + b * x) % pe;
        i64 cn = lc->num[d % lo];
        if (cn < 0) continue;
        // angle = k/pe + cn/lord over the common denominator pe*lord
        u64 tot = (k * lord + static_cast<u64>(cn) * pe) % (pe * lord);
        acc.add(cplx{std::cos(wl * static_cast<double>(tot)), std::sin(wl * static_cast<double>(tot))});
    }
    return acc.sum();
}

inline u64 reduce_mod(i64 v, u64 m) {
    i64 r = v % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

} // namespace detail

// S(m, n, c) = sum over units d mod c of e((m d + n d^{-1})/c), by direct
// summation.  Reference path.
inline cplx kloosterman_direct(i64 m, i64 n, u64 c) {
    if (c == 0) throw Error(errc::range_violated, "kloosterman: modulus 0");
    if (c == 1) return {1.0, 0.0};
    u64 a = detail::reduce_mod(m, c), b = detail::reduce_mod(n, c);
    detail::KahanCplx acc;
    double w = 2.0 * std::numbers::pi / static_cast<double>(c);
    for (u64 d = 1; d < c; ++d) {
        if (std::gcd(d, c) != 1) continue;
        u64 x = mod_inverse(static_cast<i64>(d), c);
        u64 k = (a * d + b * x) % c;
        acc.add(cplx{std::cos(w * k), std::sin(w * k)});
    }
    return acc.sum();
}

// Same sum with the character factor chi(d).  Requires modulus(chi) | c.
inline cplx twisted_kloosterman_direct(i64 m, i64 n, u64 c, const DirichletCharacter& chi) {
    if (c == 0) throw Error(errc::range_violated, "kloosterman: modulus 0");
    if (c % chi.modulus() != 0)
        throw Error(errc::modulus_mismatch, "twisted_kloosterman: chi modulus does not divide c");
    if (c == 1) return {1.0, 0.0};
    u64 a = detail::reduce_mod(m, c), b = detail::reduce_mod(n, c);
    detail::KahanCplx acc;
    double w = 2.0 * std::numbers::pi / static_cast<double>(c);
    for (u64 d = 1; d < c; ++d) {
        if (std::gcd(d, c) != 1) continue;
        u64 x = mod_inverse(static_cast<i64>(d), c);
        u64 k = (a * d + b * x) % c;
        acc.add(chi(static_cast<i64>(d)) * cplx{std::cos(w * k), std::sin(w * k)});
    }
    return acc.sum();
}

// Fast multiplicative path: for c = prod p^e, S factors into local sums with
// both arguments twisted by the inverse of the complementary cofactor.
inline cplx twisted_kloosterman(i64 m, i64 n, u64 c, const DirichletCharacter& chi) {
    if (c == 0) throw Error(errc::range_violated, "kloosterman: modulus 0");
    if (c % chi.modulus() != 0)
        throw Error(errc::modulus_mismatch, "twisted_kloosterman: chi modulus does not divide c");
    if (c == 1) return {1.0, 0.0};
    auto fac = factor(c);
    bool twisted = chi.modulus() > 1;
    cplx prod = 1.0;
    for (auto& [p, e] : fac.factors) {
        u64 pe = 1;
        for (u32 i = 0; i < e; ++i) pe *= p;
        u64 t = c / pe;
        u64 tb = mod_inverse(static_cast<i64>(t % pe), pe);
        u64 a = (detail::reduce_mod(m, pe) * tb) % pe;
        u64 b = (detail::reduce_mod(n, pe) * tb) % pe;
        if (twisted && chi.modulus() % p == 0) {
            detail::LocalChar lc = detail::local_character(chi, p);
            prod *= detail::kloosterman_local(p, e, pe, a, b, &lc);
        } else {
            prod *= detail::kloosterman_local(p, e, pe, a, b, nullptr);
        }
    }
    return prod;
}

inline cplx kloosterman(i64 m, i64 n, u64 c) {
    return twisted_kloosterman(m, n, c, principal_character(1));
}

// All pairs (m_i, n_i) against one modulus, sharing the unit list, inverse
// table and root-of-unity table.  Untwisted; the result of each entry is the
// real value S(m_i, n_i, c).
inline void kloosterman_batch(u64 c, const std::vector<std::pair<i64, i64>>& pairs,
                              std::vector<double>& out) {
    out.assign(pairs.size(), 0.0);
    if (c == 0) throw Error(errc::range_violated, "kloosterman: modulus 0");
    if (c == 1) { out.assign(pairs.size(), 1.0); return; }
    if (c == 2) {
        for (std::size_t i = 0; i < pairs.size(); ++i)
            out[i] = ((pairs[i].first + pairs[i].second) % 2 == 0) ? 1.0 : -1.0;
        return;
    }
    static thread_local std::vector<double> costab;
    static thread_local std::vector<std::uint8_t> unit;
    static thread_local std::vector<detail::KahanReal> acc;
    costab.resize(c);
    double w = 2.0 * std::numbers::pi / static_cast<double>(c);
    for (u64 k = 0; k < c; ++k) costab[k] = std::cos(w * static_cast<double>(k));
    unit.assign(c, 1);
    unit[0] = 0;
    for (auto& [p, e] : factor(c).factors)
        for (u64 j = 0; j < c; j += p) unit[j] = 0;
    acc.assign(pairs.size(), detail::KahanReal{});
    std::vector<std::pair<u64, u64>> red(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        red[i] = {detail::reduce_mod(pairs[i].first, c), detail::reduce_mod(pairs[i].second, c)};
    for (u64 d = 1; 2 * d < c; ++d) {
        if (!unit[d]) continue;
        u64 x = mod_inverse(static_cast<i64>(d), c);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            u64 k = (red[i].first * d + red[i].second * x) % c;
            acc[i].add(2.0 * costab[k]);
        }
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = acc[i].s;
}

struct RangeEntry {
    u64 c;
    cplx value;
};

// Every modulus c <= c_max with c = residue mod q (residue = 0 selects the
// multiples of q), ascending.  Identical, bit for bit, to per-modulus calls.
inline std::vector<RangeEntry> kloosterman_range(i64 m, i64 n, u64 residue, u64 q, u64 c_max,
                                                 const DirichletCharacter* twist = nullptr,
                                                 int threads = 1) {
    if (q == 0) throw Error(errc::range_violated, "kloosterman_range: q = 0");
    std::vector<u64> cs;
    for (u64 c = (residue % q == 0) ? q : residue % q; c <= c_max; c += q)
        cs.push_back(c);
    std::vector<RangeEntry> out(cs.size());
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            out[i].c = cs[i];
            out[i].value = twist ? twisted_kloosterman(m, n, cs[i], *twist)
                                 : kloosterman(m, n, cs[i]);
        }
    };
    if (threads <= 1 || cs.size() < 64) {
        work(0, cs.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t nb = static_cast<std::size_t>(threads);
        for (std::size_t t = 0; t < nb; ++t) {
            std::size_t lo = cs.size() * t / nb, hi = cs.size() * (t + 1) / nb;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

// Ramanujan sum r_c(n) via the multiplicative closed form.
inline cplx ramanujan_sum(u64 c, i64 n) {
    if (c == 0) throw Error(errc::range_violated, "ramanujan_sum: modulus 0");
    double prod = 1.0;
    u64 an = static_cast<u64>(n < 0 ? -n : n);
    for (auto& [p, e] : factor(c).factors) {
        u64 pe = 1;
        for (u32 i = 0; i < e; ++i) pe *= p;
        u32 v = (an == 0) ? e : valuation(an, p);
        if (v >= e) prod *= static_cast<double>(pe / p * (p - 1));
        else if (v + 1 == e) prod *= -static_cast<double>(pe / p);
        else prod = 0.0;
    }
    return {prod, 0.0};
}

// ---------------------------------------------------------------------------
// Dedekind sums as exact rationals.

struct DedekindValue {
    i64 num = 0;
    i64 den = 1; // > 0, fraction reduced
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const DedekindValue& o) const { return num == o.num && den == o.den; }
};

namespace detail {

using i128 = __int128;

inline i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { i128 t = a % b; a = b; b = t; }
    return a;
}

struct Rat {
    i128 num = 0, den = 1;
    void reduce() {
        if (den < 0) { num = -num; den = -den; }
        i128 g = gcd128(num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    Rat& operator+=(const Rat& o) {
        num = num * o.den + o.num * den;
        den *= o.den;
        reduce();
        return *this;
    }
};

inline DedekindValue to_value(Rat r) {
    r.reduce();
    DedekindValue v;
    v.num = static_cast<i64>(r.num);
    v.den = static_cast<i64>(r.den);
    return v;
}

} // namespace detail

// s(d, c) by the reciprocity descent along the Euclid chain of (d, c).
inline DedekindValue dedekind_sum(i64 d, u64 c) {
    if (c == 0) throw Error(errc::range_violated, "dedekind_sum: c = 0");
    u64 r = detail::reduce_mod(d, c);
    if (std::gcd(r, c) != 1)
        throw Error(errc::not_coprime, "dedekind_sum: gcd(d, c) > 1");
    std::vector<std::pair<u64, u64>> chain; // (d_k, c_k)
    u64 dk = r, ck = c;
    while (dk > 0) {
        chain.push_back({dk, ck});
        u64 t = ck % dk;
        ck = dk;
        dk = t;
    }
    detail::Rat s; // s(0, 1) = 0
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        auto [dd, cc] = *it;
        detail::Rat a;
        detail::i128 d2 = static_cast<detail::i128>(dd) * dd;
        detail::i128 c2 = static_cast<detail::i128>(cc) * cc;
        a.num = (d2 + c2 + 1) * 2 - static_cast<detail::i128>(6) * dd * cc; // -1/4 + (d^2+c^2+1)/(12dc)
        a.den = static_cast<detail::i128>(24) * dd * cc;
        a.reduce();
        s.num = -s.num;
        s += a;
    }
    return detail::to_value(s);
}

// Direct sawtooth evaluation, the reference for the descent path.
inline DedekindValue dedekind_sum_direct(i64 d, u64 c) {
    if (c == 0) throw Error(errc::range_violated, "dedekind_sum: c = 0");
    u64 r = detail::reduce_mod(d, c);
    if (std::gcd(r, c) != 1)
        throw Error(errc::not_coprime, "dedekind_sum: gcd(d, c) > 1");
    detail::i128 num = 0; // over denominator 4c^2
    for (u64 k = 1; k < c; ++k) {
        u64 kr = (k * r) % c;
        if (kr == 0) continue;
        num += (static_cast<detail::i128>(2) * k - c) * (static_cast<detail::i128>(2) * kr - c);
    }
    detail::Rat s{num, static_cast<detail::i128>(4) * c * c};
    return detail::to_value(s);
}

} // namespace klsum
