#pragma once

// Elementary number theory: 64-bit modular arithmetic, deterministic
// primality, factorization, and the standard multiplicative functions.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "klsum/error.hpp"

namespace klsum {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u32 = std::uint32_t;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 pow_mod(u64 a, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Extended gcd: returns g = gcd(a,b) and x,y with a*x + b*y = g.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    x = 1; y = 0;
    i64 x1 = 0, y1 = 1;
    while (b) {
        i64 q = a / b;
        a -= q * b; std::swap(a, b);
        x -= q * x1; std::swap(x, x1);
        y -= q * y1; std::swap(y, y1);
    }
    return a;
}

// Inverse of a modulo c, result in [0, c).  c = 1 gives 0.
inline u64 mod_inverse(i64 a, u64 c) {
    if (c == 0) throw Error(errc::not_invertible, "mod_inverse: zero modulus");
    if (c == 1) return 0;
    i64 m = static_cast<i64>(c);
    i64 r = a % m;
    if (r < 0) r += m;
    i64 x, y;
    i64 g = ext_gcd(r, m, x, y);
    if (g != 1)
        throw Error(errc::not_invertible,
                    "mod_inverse: gcd(" + std::to_string(a) + ", " + std::to_string(c) + ") = " +
                        std::to_string(g));
    x %= m;
    if (x < 0) x += m;
    return static_cast<u64>(x);
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs with this base set.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i + 1 < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

inline u64 pollard_rho(u64 n) {
    // Brent's cycle variant with deterministic parameter sweep.
    for (u64 c = 1;; ++c) {
        auto step = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
        u64 x = 2, y = 2, d = 1;
        u64 power = 1, lam = 1;
        while (d == 1) {
            if (power == lam) { x = y; power <<= 1; lam = 0; }
            y = step(y);
            ++lam;
            u64 diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = std::gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

inline void factor_rec(u64 n, std::vector<u64>& primes) {
    if (n == 1) return;
    if (is_prime(n)) { primes.push_back(n); return; }
    u64 d = pollard_rho(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

} // namespace detail

struct Factorization {
    u64 value = 1;
    std::vector<std::pair<u64, u32>> factors; // (prime, exponent), primes ascending
};

inline Factorization factor(u64 n) {
    Factorization f;
    f.value = n;
    if (n <= 1) return f;
    std::vector<u64> primes;
    for (u64 p : {2ull, 3ull, 5ull}) {
        while (n % p == 0) { primes.push_back(p); n /= p; }
    }
    // 30-wheel trial division up to 10^6, then Miller-Rabin / Pollard rho.
    static constexpr u64 wheel[] = {7, 11, 13, 17, 19, 23, 29, 31};
    for (u64 base = 0; base * 30 + 7 <= 1000000 && n > 1; base += 1) {
        for (u64 off : wheel) {
            u64 p = base * 30 + off;
            if (p * p > n) break;
            while (n % p == 0) { primes.push_back(p); n /= p; }
        }
        if (n == 1) break;
        u64 next = base * 30 + 37;
        if (next * next > n) break;
    }
    if (n > 1) {
        if (is_prime(n)) primes.push_back(n);
        else detail::factor_rec(n, primes);
    }
    std::sort(primes.begin(), primes.end());
    for (u64 p : primes) {
        if (!f.factors.empty() && f.factors.back().first == p) f.factors.back().second++;
        else f.factors.push_back({p, 1});
    }
    return f;
}

inline int mobius(u64 n) {
    if (n == 0) return 0;
    auto f = factor(n);
    for (auto& [p, e] : f.factors)
        if (e > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

inline u64 euler_phi(u64 n) {
    if (n == 0) return 0;
    u64 r = n;
    for (auto& [p, e] : factor(n).factors) r = r / p * (p - 1);
    return r;
}

inline u64 divisor_count(u64 n) {
    if (n == 0) return 0;
    u64 r = 1;
    for (auto& [p, e] : factor(n).factors) r *= (e + 1);
    return r;
}

inline std::vector<u64> divisors(u64 n) {
    std::vector<u64> d{1};
    if (n == 0) return {};
    for (auto& [p, e] : factor(n).factors) {
        std::size_t sz = d.size();
        u64 pk = 1;
        for (u32 k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < sz; ++i) d.push_back(d[i] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

inline u64 radical(u64 n) {
    u64 r = 1;
    for (auto& [p, e] : factor(n).factors) r *= p;
    return r;
}

inline u32 valuation(u64 n, u64 p) {
    u32 v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

// Split m = coprime_part * q_part where q_part collects every prime of m that
// divides q, so gcd(coprime_part, q) = 1 and q_part | m.
struct QPartSplit {
    u64 m = 0;
    u64 q = 0;
    u64 coprime_part = 0;
    u64 q_part = 1;
};

inline QPartSplit q_part_split(u64 m, u64 q) {
    if (m == 0) throw Error(errc::range_violated, "q_part_split: m must be positive");
    QPartSplit s;
    s.m = m; s.q = q;
    u64 x = m, t = 1;
    while (true) {
        u64 g = std::gcd(x, q);
        if (g == 1) break;
        t *= g;
        x /= g;
    }
    s.coprime_part = x;
    s.q_part = t;
    return s;
}

// Sieves, used by the range evaluators and Euler products.
inline std::vector<u32> smallest_factor_sieve(u32 limit) {
    std::vector<u32> spf(limit + 1, 0);
    for (u32 i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            for (u64 j = i; j <= limit; j += i)
                if (spf[j] == 0) spf[j] = i;
        }
    }
    return spf;
}

inline std::vector<u32> primes_up_to(u32 limit) {
    std::vector<bool> comp(limit + 1, false);
    std::vector<u32> ps;
    for (u32 i = 2; i <= limit; ++i) {
        if (!comp[i]) {
            ps.push_back(i);
            for (u64 j = static_cast<u64>(i) * i; j <= limit; j += i) comp[j] = true;
        }
    }
    return ps;
}

} // namespace klsum
