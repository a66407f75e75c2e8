#pragma once

// Dirichlet characters with exact rational angles.
//
// The unit group mod q is decomposed into cyclic components (one per odd
// prime power, and the {-1, 5} pair for 2^e with e >= 3).  A character is an
// exponent vector against the component generators; its value at a unit is
// e(num/den) with the fraction carried exactly until the final cis call, so
// algebraically equal values are bit-identical no matter which path produced
// them.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <vector>

#include "klsum/arith.hpp"
#include "klsum/error.hpp"

namespace klsum {

using cplx = std::complex<double>;

// e(num/den) with exact handling of the real/imaginary lattice points.
inline cplx unit_root(i64 num, i64 den) {
    i64 g = std::gcd(num, den);
    if (g > 1) { num /= g; den /= g; }
    if (den == 1) return {1.0, 0.0};
    if (den == 2) return {-1.0, 0.0};
    if (den == 4) return num == 1 ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
    double ang = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
    return {std::cos(ang), std::sin(ang)};
}

class DirichletCharacter;

class CharacterGroup : public std::enable_shared_from_this<CharacterGroup> {
public:
    enum class CompKind { odd_prime, two_minus_one, two_five };

    struct Component {
        CompKind kind;
        u64 prime;
        u32 exponent;      // e with p^e || q
        u64 prime_power;   // p^e
        u64 generator;     // generator residue mod p^e
        u64 order;         // order of the generator
        std::vector<u32> dlog; // residue mod p^e -> discrete log; UINT32_MAX for non-units
    };

    static std::shared_ptr<const CharacterGroup> get(u64 q) {
        static std::mutex mu;
        static std::map<u64, std::shared_ptr<const CharacterGroup>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(q);
        if (it != cache.end()) return it->second;
        auto g = std::shared_ptr<CharacterGroup>(new CharacterGroup(q));
        cache.emplace(q, g);
        return g;
    }

    u64 modulus() const { return q_; }
    u64 phi() const { return phi_; }
    u64 exponent() const { return exponent_; }
    const std::vector<Component>& components() const { return comps_; }
    u64 num_characters() const { return phi_; }

    DirichletCharacter character(u64 index) const;

    // Exact angle of the a-th power residue decomposition: false for non-units.
    bool dlogs(i64 a, std::vector<u64>& out) const {
        u64 r = reduce(a);
        if (q_ == 1) { out.clear(); return true; }
        if (std::gcd(r, q_) != 1) return false;
        out.resize(comps_.size());
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            u32 d = comps_[i].dlog[r % comps_[i].prime_power];
            out[i] = d;
        }
        return true;
    }

    u64 reduce(i64 a) const {
        i64 m = static_cast<i64>(q_);
        i64 r = a % m;
        if (r < 0) r += m;
        return static_cast<u64>(r);
    }

private:
    explicit CharacterGroup(u64 q) : q_(q) {
        if (q == 0) throw Error(errc::range_violated, "CharacterGroup: modulus 0");
        phi_ = 1;
        exponent_ = 1;
        auto f = factor(q);
        for (auto& [p, e] : f.factors) {
            if (p == 2) {
                if (e == 1) continue;
                u64 pe = u64(1) << e;
                if (e == 2) {
                    Component c{CompKind::two_minus_one, 2, e, pe, 3, 2, {}};
                    c.dlog.assign(pe, UINT32_MAX);
                    c.dlog[1] = 0;
                    c.dlog[3] = 1;
                    push(std::move(c));
                } else {
                    Component cm{CompKind::two_minus_one, 2, e, pe, pe - 1, 2, {}};
                    Component c5{CompKind::two_five, 2, e, pe, 5, pe >> 2, {}};
                    cm.dlog.assign(pe, UINT32_MAX);
                    c5.dlog.assign(pe, UINT32_MAX);
                    u64 x = 1;
                    for (u64 k = 0; k < (pe >> 2); ++k) {
                        cm.dlog[x] = 0;      c5.dlog[x] = static_cast<u32>(k);
                        cm.dlog[pe - x] = 1; c5.dlog[pe - x] = static_cast<u32>(k);
                        x = (x * 5) % pe;
                    }
                    push(std::move(cm));
                    push(std::move(c5));
                }
            } else {
                u64 pe = 1;
                for (u32 i = 0; i < e; ++i) pe *= p;
                u64 g = primitive_root(p, e, pe);
                Component c{CompKind::odd_prime, p, e, pe, g, pe / p * (p - 1), {}};
                c.dlog.assign(pe, UINT32_MAX);
                u64 x = 1;
                for (u64 k = 0; k < c.order; ++k) {
                    c.dlog[x] = static_cast<u32>(k);
                    x = mul_mod(x, g, pe);
                }
                push(std::move(c));
            }
        }
    }

    void push(Component&& c) {
        phi_ *= c.order;
        exponent_ = std::lcm(exponent_, c.order);
        comps_.push_back(std::move(c));
    }

    static u64 primitive_root(u64 p, u32 e, u64 pe) {
        u64 ord = p - 1;
        auto pf = factor(ord);
        u64 g = 0;
        for (u64 cand = 2; cand < p; ++cand) {
            bool ok = true;
            for (auto& [q, _] : pf.factors) {
                if (pow_mod(cand, ord / q, p) == 1) { ok = false; break; }
            }
            if (ok) { g = cand; break; }
        }
        if (e == 1) return g;
        // Lift so g generates mod p^2 (then automatically mod every p^e).
        if (pow_mod(g, p - 1, p * p) == 1) g += p;
        return g;
    }

    u64 q_;
    u64 phi_;
    u64 exponent_;
    std::vector<Component> comps_;
};

class DirichletCharacter {
public:
    DirichletCharacter() = default;
    DirichletCharacter(std::shared_ptr<const CharacterGroup> g, std::vector<u64> exps)
        : group_(std::move(g)), exps_(std::move(exps)) {
        const auto& comps = group_->components();
        if (exps_.size() != comps.size())
            throw Error(errc::modulus_mismatch, "DirichletCharacter: exponent vector size");
        for (std::size_t i = 0; i < comps.size(); ++i) exps_[i] %= comps[i].order;
        compute_conductor();
    }

    u64 modulus() const { return group_->modulus(); }
    const CharacterGroup& group() const { return *group_; }
    std::shared_ptr<const CharacterGroup> group_ptr() const { return group_; }
    const std::vector<u64>& exponents() const { return exps_; }
    u64 conductor() const { return conductor_; }
    bool is_primitive() const { return conductor_ == group_->modulus(); }
    bool is_principal() const { return conductor_ == 1; }

    u64 index() const {
        const auto& comps = group_->components();
        u64 idx = 0;
        for (std::size_t i = 0; i < comps.size(); ++i) idx = idx * comps[i].order + exps_[i];
        return idx;
    }

    // kappa: 0 if chi(-1) = 1, else 1.
    int parity() const {
        i64 num, den;
        if (!angle(-1, num, den)) return 0;
        return (num * 2 == den) ? 1 : 0;
    }

    // Exact angle: chi(a) = e(num/den), reduced, 0 <= num < den.  Returns
    // false (value 0) when gcd(a, q) > 1.
    bool angle(i64 a, i64& num, i64& den) const {
        const auto& comps = group_->components();
        u64 r = group_->reduce(a);
        if (group_->modulus() == 1) { num = 0; den = 1; return true; }
        if (std::gcd(r, group_->modulus()) != 1) return false;
        u64 L = group_->exponent();
        u64 acc = 0;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            u64 d = comps[i].dlog[r % comps[i].prime_power];
            u64 local = (exps_[i] * d) % comps[i].order;
            acc = (acc + local * (L / comps[i].order)) % L;
        }
        i64 g = std::gcd(acc, L);
        num = static_cast<i64>(acc / g);
        den = static_cast<i64>(L / g);
        return true;
    }

    cplx operator()(i64 a) const {
        i64 num, den;
        if (!angle(a, num, den)) return {0.0, 0.0};
        return unit_root(num, den);
    }

    DirichletCharacter conjugate() const {
        const auto& comps = group_->components();
        std::vector<u64> e(exps_.size());
        for (std::size_t i = 0; i < exps_.size(); ++i)
            e[i] = (comps[i].order - exps_[i]) % comps[i].order;
        return DirichletCharacter(group_, std::move(e));
    }

    bool operator==(const DirichletCharacter& o) const {
        return modulus() == o.modulus() && exps_ == o.exps_;
    }

    // The primitive character mod conductor() inducing this one.
    DirichletCharacter primitive_part() const;

private:
    void compute_conductor() {
        const auto& comps = group_->components();
        conductor_ = 1;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const auto& c = comps[i];
            u64 k = exps_[i];
            if (c.kind == CharacterGroup::CompKind::odd_prime) {
                if (k == 0) continue;
                u64 ord = c.order / std::gcd(c.order, k);
                u32 a = valuation(ord, c.prime);
                u64 local = c.prime;
                for (u32 j = 0; j < a; ++j) local *= c.prime;
                conductor_ *= local;
            } else if (c.kind == CharacterGroup::CompKind::two_minus_one) {
                // Pairs with an adjacent two_five component when e >= 3.
                bool has_five = i + 1 < comps.size() && comps[i + 1].kind == CharacterGroup::CompKind::two_five;
                u64 k5 = has_five ? exps_[i + 1] : 0;
                if (k5 == 0) {
                    if (k != 0) conductor_ *= 4;
                } else {
                    u64 ord5 = comps[i + 1].order / std::gcd(comps[i + 1].order, k5);
                    conductor_ *= 4 * ord5;
                }
                if (has_five) ++i;
            }
        }
    }

    std::shared_ptr<const CharacterGroup> group_;
    std::vector<u64> exps_;
    u64 conductor_ = 1;
};

inline DirichletCharacter CharacterGroup::character(u64 index) const {
    std::vector<u64> exps(comps_.size());
    for (std::size_t i = comps_.size(); i-- > 0;) {
        exps[i] = index % comps_[i].order;
        index /= comps_[i].order;
    }
    return DirichletCharacter(shared_from_this(), std::move(exps));
}

inline DirichletCharacter principal_character(u64 q) {
    auto g = CharacterGroup::get(q);
    return g->character(0);
}

namespace detail {

// x with x = r1 mod m1, x = r2 mod m2 for coprime m1, m2.
inline u64 crt_pair(u64 r1, u64 m1, u64 r2, u64 m2) {
    u64 inv = mod_inverse(static_cast<i64>(m1 % m2), m2);
    u64 diff = (r2 + m2 - r1 % m2) % m2;
    return r1 + m1 * mul_mod(diff, inv, m2);
}

// Exponent of a character of cyclic order `ord` whose value is e(num/den).
inline u64 exponent_from_angle(i64 num, i64 den, u64 ord) {
    i64 prod = num * static_cast<i64>(ord);
    if (prod % den != 0)
        throw Error(errc::modulus_mismatch, "character angle incompatible with component order");
    i64 k = (prod / den) % static_cast<i64>(ord);
    if (k < 0) k += static_cast<i64>(ord);
    return static_cast<u64>(k);
}

// Lift: b = target mod pe_part, b = 1 mod (q / p-part of q), coprime to q.
inline u64 lift_to_modulus(u64 target, u64 pe_part, u64 q, u64 p) {
    u64 p_part = 1;
    u64 qq = q;
    while (qq % p == 0) { qq /= p; p_part *= p; }
    // qq = q with the p-part removed; pe_part divides p_part.
    if (qq == 1) return target;
    return crt_pair(target % pe_part, pe_part, 1, qq);
}

} // namespace detail

inline DirichletCharacter DirichletCharacter::primitive_part() const {
    u64 f = conductor_;
    if (f == modulus()) return *this;
    auto fg = CharacterGroup::get(f);
    std::vector<u64> exps(fg->components().size());
    for (std::size_t i = 0; i < fg->components().size(); ++i) {
        const auto& c = fg->components()[i];
        u64 b = detail::lift_to_modulus(c.generator % c.prime_power, c.prime_power, modulus(), c.prime);
        i64 num, den;
        if (!angle(static_cast<i64>(b), num, den))
            throw Error(errc::modulus_mismatch, "primitive_part: lift not a unit");
        exps[i] = detail::exponent_from_angle(num, den, c.order);
    }
    return DirichletCharacter(fg, std::move(exps));
}

// Pointwise product as a character modulo lcm of the moduli.
inline DirichletCharacter multiply_characters(const DirichletCharacter& a, const DirichletCharacter& b) {
    u64 L = std::lcm(a.modulus(), b.modulus());
    auto g = CharacterGroup::get(L);
    std::vector<u64> exps(g->components().size());
    for (std::size_t i = 0; i < g->components().size(); ++i) {
        const auto& c = g->components()[i];
        u64 lift = detail::lift_to_modulus(c.generator % c.prime_power, c.prime_power, L, c.prime);
        i64 na, da, nb, db;
        if (!a.angle(static_cast<i64>(lift), na, da) || !b.angle(static_cast<i64>(lift), nb, db))
            throw Error(errc::modulus_mismatch, "multiply_characters: lift not a unit");
        i64 D = std::lcm(da, db);
        i64 num = (na * (D / da) + nb * (D / db)) % D;
        exps[i] = detail::exponent_from_angle(num, D, c.order);
    }
    return DirichletCharacter(g, std::move(exps));
}

// Gauss sum of a primitive character: sum_a chi(a) e(a/q).
inline cplx gauss_sum(const DirichletCharacter& chi) {
    if (!chi.is_primitive())
        throw Error(errc::not_primitive, "gauss_sum: character not primitive");
    u64 q = chi.modulus();
    if (q == 1) return {1.0, 0.0};
    cplx s = 0;
    for (u64 a = 1; a <= q; ++a) {
        i64 num, den;
        if (!chi.angle(static_cast<i64>(a), num, den)) continue;
        i64 D = std::lcm<i64>(den, static_cast<i64>(q));
        i64 tot = (num * (D / den) + static_cast<i64>(a % q) * (D / static_cast<i64>(q))) % D;
        s += unit_root(tot, D);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Weights on primitive residue classes and their character transform.

struct ArithmeticWeight {
    u64 q = 1;
    std::vector<cplx> values; // indexed by residue mod q; zero off the units

    explicit ArithmeticWeight(u64 modulus = 1) : q(modulus), values(modulus, cplx{0.0, 0.0}) {}

    static ArithmeticWeight indicator(u64 q, u64 a) {
        ArithmeticWeight w(q);
        if (std::gcd(a % q, q) != 1)
            throw Error(errc::not_coprime, "indicator class not coprime to the modulus");
        w.values[a % q] = 1.0;
        return w;
    }

    void set(u64 residue, cplx v) {
        residue %= q;
        if (std::gcd(residue, q) != 1 && std::abs(v) != 0.0)
            throw Error(errc::not_coprime, "weight supported off the unit classes");
        values[residue] = v;
    }

    cplx operator()(i64 c) const {
        i64 m = static_cast<i64>(q);
        i64 r = c % m;
        if (r < 0) r += m;
        return values[static_cast<u64>(r)];
    }
};

struct MellinCoefficients {
    u64 q = 1;
    std::vector<cplx> coeffs; // indexed by character index in group order
};

inline MellinCoefficients q_mellin(const ArithmeticWeight& f) {
    auto g = CharacterGroup::get(f.q);
    MellinCoefficients out;
    out.q = f.q;
    out.coeffs.assign(g->phi(), cplx{0.0, 0.0});
    double norm = 1.0 / std::sqrt(static_cast<double>(g->phi()));
    for (u64 i = 0; i < g->phi(); ++i) {
        DirichletCharacter chi = g->character(i);
        cplx acc = 0;
        for (u64 c = 0; c < f.q; ++c) {
            if (f.q > 1 && std::gcd(c, f.q) != 1) continue;
            acc += std::conj(chi(static_cast<i64>(c))) * f.values[c];
        }
        out.coeffs[i] = acc * norm;
    }
    return out;
}

inline ArithmeticWeight q_mellin_invert(const MellinCoefficients& m) {
    auto g = CharacterGroup::get(m.q);
    if (m.coeffs.size() != g->phi())
        throw Error(errc::modulus_mismatch, "q_mellin_invert: coefficient count");
    ArithmeticWeight f(m.q);
    double norm = 1.0 / std::sqrt(static_cast<double>(g->phi()));
    std::vector<DirichletCharacter> chars;
    chars.reserve(g->phi());
    for (u64 i = 0; i < g->phi(); ++i) chars.push_back(g->character(i));
    for (u64 c = 0; c < m.q; ++c) {
        if (m.q > 1 && std::gcd(c, m.q) != 1) continue;
        cplx acc = 0;
        for (u64 i = 0; i < g->phi(); ++i) acc += m.coeffs[i] * chars[i](static_cast<i64>(c));
        f.values[c] = acc * norm;
    }
    return f;
}

inline double l1_norm(const MellinCoefficients& m) {
    double s = 0;
    for (auto& c : m.coeffs) s += std::abs(c);
    return s;
}

// ---------------------------------------------------------------------------
// Truncated Euler product for L with the primes of Q removed.

struct PartialL {
    cplx value{1.0, 0.0};
    double error_estimate = 0.0;
    u32 p_max = 0;
};

inline const std::vector<u32>& cached_primes(u32 limit) {
    static std::mutex mu;
    static std::vector<u32> primes;
    static u32 have = 0;
    std::lock_guard<std::mutex> lock(mu);
    if (limit > have) {
        primes = primes_up_to(limit);
        have = limit;
    }
    return primes;
}

// Product over p <= p_max, p not dividing Q, of (1 - psi(p) p^{-s})^{-1}.
// The error estimate is the dyadic self-convergence gap: three times the
// distance between the values at p_max and p_max/2.
inline PartialL partial_l(cplx s, const DirichletCharacter& psi, u64 Q, u32 p_max) {
    PartialL out;
    out.p_max = p_max;
    const auto& primes = cached_primes(p_max);
    cplx prod = 1.0;
    cplx half = 1.0;
    bool half_set = false;
    for (u32 p : primes) {
        if (p > p_max) break;
        if (!half_set && p > p_max / 2) { half = prod; half_set = true; }
        if (Q % p == 0) continue;
        cplx val = psi(static_cast<i64>(p));
        cplx factor = 1.0 - val * std::exp(-s * std::log(static_cast<double>(p)));
        prod /= factor;
    }
    if (!half_set) half = prod;
    out.value = prod;
    out.error_estimate = 3.0 * std::abs(prod - half);
    return out;
}

} // namespace klsum
