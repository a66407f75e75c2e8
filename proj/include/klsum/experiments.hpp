#pragma once
// Desk-scale experiment drivers: cancellation of Kloosterman sums along an
// arithmetic progression, the character-restricted divisibility sum it
// decomposes into, equidistribution of Dedekind sums, term-by-term majorant
// baselines, exponent fitting, and a config-driven runner that emits
// deterministic CSV/JSON artifacts.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <klsum/arith.hpp>
#include <klsum/characters.hpp>
#include <klsum/cutoff.hpp>
#include <klsum/eisenstein.hpp>
#include <klsum/expsums.hpp>
#include <klsum/identities.hpp>
#include <klsum/parallel.hpp>
#include <klsum/transforms.hpp>

namespace klsum {

inline constexpr const char* library_version = "klsum 1.0.0";

// Best admissible exponent toward the Ramanujan bound; reports use it as the
// default reference slope 1/2 + 2*theta.
inline constexpr double default_theta = 7.0 / 64.0;

namespace detail {

struct CplxSum {
    cplx v{0.0, 0.0};
    CplxSum& operator+=(const CplxSum& o) {
        v += o.v;
        return *this;
    }
};

struct RealSum {
    double v = 0.0;
    RealSum& operator+=(const RealSum& o) {
        v += o.v;
        return *this;
    }
};

inline void require_progression_args(u64 m, u64 n, u64 q, u64 a, double X) {
    if (m == 0 || n == 0 || q == 0 || a == 0)
        throw Error(errc::config_invalid, "progression sum: parameters must be positive");
    if (std::gcd(a, q) != 1)
        throw Error(errc::not_coprime, "progression sum: class must be coprime to the modulus");
    if (!(X > 0.0) || static_cast<double>(m) * static_cast<double>(n) > X * X)
        throw Error(errc::range_violated, "progression sum: requires mn <= X^2");
}

}  // namespace detail

// Sum of S(m,n,c)/sqrt(c) weighted by cutoff(c/X) over c = a mod q.  The
// support of the cutoff makes this a finite sum, evaluated exactly.
inline cplx progression_sum(u64 m, u64 n, u64 q, u64 a, double X, const SmoothCutoff& cutoff,
                            unsigned threads = 1) {
    detail::require_progression_args(m, n, q, a, X);
    const u64 c_lo = std::max<u64>(1, static_cast<u64>(std::floor(cutoff.lower() * X)) + 1);
    const u64 c_hi = static_cast<u64>(std::ceil(cutoff.upper() * X));
    if (c_hi < c_lo) return {0.0, 0.0};
    // First index of the progression at or above c_lo.
    const u64 first = c_lo + (a % q + q - c_lo % q) % q;
    if (first > c_hi) return {0.0, 0.0};
    const u64 terms = (c_hi - first) / q + 1;
    const auto total = parallel_block_reduce<detail::CplxSum>(
        0, terms, 2048, threads, {}, [&](u64 lo, u64 hi) {
            detail::KahanCplx acc;
            for (u64 i = lo; i < hi; ++i) {
                const u64 c = first + i * q;
                const cplx w = cutoff(static_cast<double>(c) / X);
                if (w == 0.0) continue;
                acc.add(kloosterman(static_cast<i64>(m), static_cast<i64>(n), c) /
                        std::sqrt(static_cast<double>(c)) * w);
            }
            return detail::CplxSum{acc.sum()};
        });
    return total.v;
}

// Term-by-term majorant of the same progression sum: tau(c) gcd(m,n,c)^{1/2}
// in place of |S(m,n,c)| c^{-1/2}.
inline double weil_baseline(u64 m, u64 n, u64 q, u64 a, double X, const SmoothCutoff& cutoff) {
    detail::require_progression_args(m, n, q, a, X);
    const u64 c_lo = std::max<u64>(1, static_cast<u64>(std::floor(cutoff.lower() * X)) + 1);
    const u64 c_hi = static_cast<u64>(std::ceil(cutoff.upper() * X));
    detail::KahanReal acc;
    for (u64 c = c_lo; c <= c_hi; ++c) {
        if (c % q != a % q) continue;
        const double w = cutoff(static_cast<double>(c) / X).real();
        if (w == 0.0) continue;
        acc.add(static_cast<double>(divisor_count(c)) *
                std::sqrt(static_cast<double>(std::gcd(std::gcd(m, n), c))) * w);
    }
    return acc.s;
}

// Character-restricted divisibility sum: sum over c divisible by d*q1 of
// S_chi1(m', n' q1^2, c)/sqrt(c) weighted by cutoff(c/(q1 X)), where
// m' = m with the primes of q removed and n' = n times the removed part.
inline cplx claim_sum(u64 m, u64 n, u64 d, u64 q, const DirichletCharacter& chi1, double X,
                      const SmoothCutoff& cutoff, unsigned threads = 1) {
    if (m == 0 || n == 0 || d == 0 || q == 0)
        throw Error(errc::config_invalid, "claim sum: parameters must be positive");
    if (!chi1.is_primitive())
        throw Error(errc::not_primitive, "claim sum: character must be primitive");
    const u64 q1 = chi1.modulus();
    if (q % d != 0) throw Error(errc::config_invalid, "claim sum: d must divide q");
    if (q % q1 != 0)
        throw Error(errc::conductor_mismatch, "claim sum: conductor must divide q");
    if (!(X > 0.0) || static_cast<double>(m) * static_cast<double>(n) > X * X)
        throw Error(errc::range_violated, "claim sum: requires mn <= X^2");

    const QPartSplit split = q_part_split(m, q);
    const u64 m_eff = split.coprime_part;
    const u64 n_eff = n * split.q_part * q1 * q1;
    const double scale_x = static_cast<double>(q1) * X;
    const u64 step = d * q1;
    const u64 k_lo = std::max<u64>(1, static_cast<u64>(std::floor(cutoff.lower() * scale_x /
                                                                  static_cast<double>(step))) +
                                          1);
    const u64 k_hi =
        static_cast<u64>(std::ceil(cutoff.upper() * scale_x / static_cast<double>(step)));
    if (k_hi < k_lo) return {0.0, 0.0};
    const auto total = parallel_block_reduce<detail::CplxSum>(
        k_lo, k_hi + 1, 2048, threads, {}, [&](u64 lo, u64 hi) {
            detail::KahanCplx acc;
            for (u64 k = lo; k < hi; ++k) {
                const u64 c = k * step;
                const cplx w = cutoff(static_cast<double>(c) / scale_x);
                if (w == 0.0) continue;
                acc.add(twisted_kloosterman(static_cast<i64>(m_eff), static_cast<i64>(n_eff), c,
                                            chi1) /
                        std::sqrt(static_cast<double>(c)) * w);
            }
            return detail::CplxSum{acc.sum()};
        });
    return total.v;
}

// ---------------------------------------------------------------------------
// Dedekind sum equidistribution
// ---------------------------------------------------------------------------

struct DiscrepancyPoint {
    double x = 0.0;
    u64 count = 0;       // points accumulated up to x
    double d_star = 1.0; // star discrepancy; 1 on the empty set by convention
};

namespace detail {

// Star discrepancy of a sorted point set in [0,1) against the uniform
// distribution.
inline double star_discrepancy_sorted(const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (n == 0) return 1.0;
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - y[i];
        const double lo = y[i] - static_cast<double>(i) / static_cast<double>(n);
        d = std::max({d, hi, lo});
    }
    return d;
}

}  // namespace detail

// Star discrepancy of {<12 s(d,c)> : d mod c, gcd(d,c) = 1, c <= x, c = a (q)}
// for each grid value x.  Fractional parts are exact rationals before the
// final division.
inline std::vector<DiscrepancyPoint> dedekind_equidistribution(u64 q, u64 a,
                                                               const std::vector<double>& x_grid) {
    if (q == 0 || a == 0 || std::gcd(a, q) != 1)
        throw Error(errc::not_coprime, "dedekind equidistribution: class must be coprime");
    if (x_grid.empty())
        throw Error(errc::config_invalid, "dedekind equidistribution: empty grid");
    for (std::size_t i = 0; i < x_grid.size(); ++i)
        if (!(x_grid[i] > 0.0) || (i > 0 && x_grid[i] <= x_grid[i - 1]))
            throw Error(errc::config_invalid,
                        "dedekind equidistribution: grid must be positive and increasing");

    std::vector<DiscrepancyPoint> out;
    out.reserve(x_grid.size());
    std::vector<double> values;  // fractional parts, appended in increasing c
    const u64 c_max = static_cast<u64>(std::floor(x_grid.back()));
    u64 c = a % q == 0 ? q : a % q;  // smallest positive c = a mod q
    std::size_t gi = 0;
    for (;; c += q) {
        while (gi < x_grid.size() && static_cast<double>(c) > x_grid[gi]) {
            std::vector<double> sorted(values);
            std::sort(sorted.begin(), sorted.end());
            out.push_back({x_grid[gi], sorted.size(), detail::star_discrepancy_sorted(sorted)});
            ++gi;
        }
        if (c > c_max || gi >= x_grid.size()) break;
        for (u64 dd = 0; dd < c; ++dd) {
            if (std::gcd(dd, c) != 1) continue;
            const DedekindValue s = dedekind_sum(static_cast<i64>(dd), c);
            const i64 num12 = 12 * s.num;
            i64 r = num12 % s.den;
            if (r < 0) r += s.den;
            values.push_back(static_cast<double>(r) / static_cast<double>(s.den));
        }
    }
    while (gi < x_grid.size()) {
        std::vector<double> sorted(values);
        std::sort(sorted.begin(), sorted.end());
        out.push_back({x_grid[gi], sorted.size(), detail::star_discrepancy_sorted(sorted)});
        ++gi;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exponent fitting
// ---------------------------------------------------------------------------

struct ExponentFit {
    std::vector<std::pair<double, double>> points;  // retained (x, value) pairs
    double alpha = 0.0;                             // least-squares slope in log-log
    double intercept = 0.0;
    double residual = 0.0;  // root mean square residual of log values
    u64 dropped = 0;        // grid points excluded as numerically zero
};

// Ordinary least squares of log(value) against log(x).  Values at or below
// 1e-12 are excluded: sign changes through cancellation produce near-zeros
// that would dominate the fit.
inline ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& grid) {
    ExponentFit fit;
    for (const auto& p : grid) {
        if (!(p.first > 0.0))
            throw Error(errc::config_invalid, "fit_exponent: abscissae must be positive");
        if (p.second > 1e-12)
            fit.points.push_back(p);
        else
            ++fit.dropped;
    }
    if (fit.points.size() < 2)
        throw Error(errc::range_violated, "fit_exponent: needs at least two usable points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(fit.points.size());
    for (const auto& p : fit.points) {
        const double lx = std::log(p.first), ly = std::log(p.second);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0)
        throw Error(errc::config_invalid, "fit_exponent: degenerate abscissae");
    fit.alpha = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.alpha * sx) / n;
    double ss = 0.0;
    for (const auto& p : fit.points) {
        const double r = std::log(p.second) - (fit.intercept + fit.alpha * std::log(p.first));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

// ---------------------------------------------------------------------------
// Identity suite
// ---------------------------------------------------------------------------

// One deterministic pass of the exact-identity checks: `draws` random
// parameter tuples; for each, every character of the drawn modulus goes
// through the sieve and twist encodings, and the tuple goes through the
// master encoding once.  Reports are appended in draw order.  The weight h
// is a dense random complex vector on {1..support_max}: with a dense weight
// both sides of each identity are generically nonzero, so the relative error
// is a meaningful measure (a sparse weight can make one side an empty sum
// while the other carries pure rounding noise).
inline std::vector<IdentityReport> identity_suite(u64 draws, u64 seed, u64 q_max = 30,
                                                  u64 mn_max = 50, u64 support_max = 200) {
    if (draws == 0 || q_max == 0 || mn_max == 0 || support_max == 0)
        throw Error(errc::config_invalid, "identity suite: counts must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> qd(1, q_max), mnd(1, mn_max);
    std::uniform_int_distribution<u64> deltad(1, 3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<IdentityReport> out;
    for (u64 trial = 0; trial < draws; ++trial) {
        const u64 q = qd(rng), m = mnd(rng), n = mnd(rng);
        const u64 delta = deltad(rng);
        FiniteTestWeight h;
        for (u64 s = 1; s <= support_max; ++s) h.values[s] = cplx{unif(rng), unif(rng)};
        ArithmeticWeight f(q);
        for (u64 r = 0; r < q; ++r)
            if (std::gcd(r, q) == 1) f.set(r, cplx{unif(rng), unif(rng)});
        auto group = CharacterGroup::get(q);
        for (u64 i = 0; i < group->num_characters(); ++i) {
            const DirichletCharacter chi = group->character(i);
            const u64 cond = chi.conductor();
            // Sieve and restricted twist encodings hold only for admissible
            // parameters (coprime to the conductor); skip the rest.
            if (std::gcd(m, cond) == 1 && std::gcd(delta, cond) == 1)
                out.push_back(verify_mobius_identity(m, n, chi.primitive_part(), delta, h));
            if (std::gcd(m, cond) == 1) out.push_back(verify_twist_identity(m, n, chi, h));
            out.push_back(verify_twist_identity_general(m, n, chi, h));
        }
        const double X = 40.0 + static_cast<double>(rng() % 61);  // 40..100
        out.push_back(verify_master_identity(m, n, q, f, SmoothCutoff::bump(1.0, 2.0), X));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Config-driven runner
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    std::string experiment;  // subcommand tag, e.g. "progression-sum"
    u64 m = 1, n = 1;
    u64 q = 1, a = 1;  // progression class / dedekind class / identity modulus cap
    u64 d = 1;         // claim-sum divisor of q
    u64 q1 = 1;        // claim-sum / table conductor
    u64 chi_index = 0; // character index within the group mod q1
    u64 level = 1;     // table level Q
    std::vector<double> x_grid;
    double cutoff_lo = 1.0, cutoff_hi = 2.0;
    double cutoff_freq = 0.0;  // nonzero selects the modulated bump family
    double theta = default_theta;
    u64 seed = 1;
    u64 draws = 200;
    u64 q_max = 30, mn_max = 50;  // verify-identities draw caps
    std::vector<u64> index_grid = {1, 2, 3, 4, 5};     // table n-grid / transform orders
    std::vector<double> t_grid = {0.0, 0.5, 1.0};      // table spectral points
    CoefficientTruncation truncation;
    std::string out_path = "klsum-out";
    std::string format = "csv";  // csv | json
    unsigned threads = 1;
};

struct RunResult {
    std::vector<std::string> files;
    bool thresholds_met = true;  // false when an identity report misses its tolerance
    bool has_fit = false;
    ExponentFit fit;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class OutputFile {
  public:
    OutputFile(const std::string& path) : path_(path), f_(std::fopen(path.c_str(), "wb")) {
        if (!f_) throw Error(errc::io_error, "cannot open output file: " + path);
    }
    ~OutputFile() {
        if (f_) std::fclose(f_);
    }
    OutputFile(const OutputFile&) = delete;
    OutputFile& operator=(const OutputFile&) = delete;
    void write(const std::string& s) {
        if (std::fwrite(s.data(), 1, s.size(), f_) != s.size())
            throw Error(errc::io_error, "short write: " + path_);
    }
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::FILE* f_ = nullptr;
};

inline void validate_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw Error(errc::config_invalid, "empty x grid");
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!(grid[i] > 0.0) || (i > 0 && grid[i] <= grid[i - 1]))
            throw Error(errc::config_invalid, "x grid must be positive and strictly increasing");
}

inline SmoothCutoff make_cutoff(const ExperimentConfig& cfg) {
    if (cfg.cutoff_freq != 0.0)
        return SmoothCutoff::modulated_bump(cfg.cutoff_lo, cfg.cutoff_hi, cfg.cutoff_freq);
    return SmoothCutoff::bump(cfg.cutoff_lo, cfg.cutoff_hi);
}

inline std::string config_json_fragment(const ExperimentConfig& cfg) {
    std::string s = "\"experiment\":\"" + cfg.experiment + "\"";
    s += ",\"version\":\"" + std::string(library_version) + "\"";
    s += ",\"m\":" + std::to_string(cfg.m) + ",\"n\":" + std::to_string(cfg.n);
    s += ",\"q\":" + std::to_string(cfg.q) + ",\"a\":" + std::to_string(cfg.a);
    s += ",\"d\":" + std::to_string(cfg.d) + ",\"q1\":" + std::to_string(cfg.q1);
    s += ",\"chi_index\":" + std::to_string(cfg.chi_index);
    s += ",\"level\":" + std::to_string(cfg.level);
    s += ",\"cutoff\":\"" + make_cutoff(cfg).tag() + "\"";
    s += ",\"theta\":" + fmt_double(cfg.theta);
    s += ",\"seed\":" + std::to_string(cfg.seed);
    s += ",\"threads\":" + std::to_string(cfg.threads);
    return s;
}

struct PhaseTimer {
    const char* label;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    explicit PhaseTimer(const char* l) : label(l) {}
    ~PhaseTimer() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::fprintf(stderr, "# timing %s %.3f s\n", label, secs);
    }
};

}  // namespace detail

// Executes one experiment described by the config and writes its artifacts:
// a CSV (or JSON-lines) data file plus a JSON summary.  Output bytes are a
// pure function of the config; timing goes to stderr only.
inline RunResult run(const ExperimentConfig& cfg) {
    RunResult res;
    const SmoothCutoff cutoff = detail::make_cutoff(cfg);
    if (cfg.format != "csv" && cfg.format != "json")
        throw Error(errc::config_invalid, "format must be csv or json");

    if (cfg.experiment == "progression-sum" || cfg.experiment == "claim-sum") {
        detail::validate_grid(cfg.x_grid);
        for (double x : cfg.x_grid)
            if (static_cast<double>(cfg.m) * static_cast<double>(cfg.n) > x * x)
                throw Error(errc::range_violated, "x grid point outside mn <= X^2");
        const bool claim = cfg.experiment == "claim-sum";
        DirichletCharacter chi1 = CharacterGroup::get(cfg.q1)->character(cfg.chi_index);
        std::vector<std::pair<double, double>> fit_grid;
        std::string data;
        data += claim ? "X,re,im,abs\n" : "X,re,im,abs,weil_baseline,ratio\n";
        {
            detail::PhaseTimer timer(cfg.experiment.c_str());
            for (double x : cfg.x_grid) {
                cplx s;
                if (claim) {
                    s = claim_sum(cfg.m, cfg.n, cfg.d, cfg.q, chi1, x, cutoff, cfg.threads);
                    data += detail::fmt_double(x) + "," + detail::fmt_double(s.real()) + "," +
                            detail::fmt_double(s.imag()) + "," + detail::fmt_double(std::abs(s)) +
                            "\n";
                } else {
                    s = progression_sum(cfg.m, cfg.n, cfg.q, cfg.a, x, cutoff, cfg.threads);
                    const double base = weil_baseline(cfg.m, cfg.n, cfg.q, cfg.a, x, cutoff);
                    const double ratio = base > 0.0 ? std::abs(s) / base : 0.0;
                    data += detail::fmt_double(x) + "," + detail::fmt_double(s.real()) + "," +
                            detail::fmt_double(s.imag()) + "," + detail::fmt_double(std::abs(s)) +
                            "," + detail::fmt_double(base) + "," + detail::fmt_double(ratio) +
                            "\n";
                }
                fit_grid.push_back({x, std::abs(s)});
            }
        }
        detail::OutputFile csv(cfg.out_path + ".csv");
        csv.write(data);
        res.files.push_back(csv.path());

        std::string summary = "{" + detail::config_json_fragment(cfg);
        summary += ",\"reference_exponent\":" + detail::fmt_double(0.5 + 2.0 * cfg.theta);
        try {
            res.fit = fit_exponent(fit_grid);
            res.has_fit = true;
            summary += ",\"fit\":{\"alpha\":" + detail::fmt_double(res.fit.alpha) +
                       ",\"intercept\":" + detail::fmt_double(res.fit.intercept) +
                       ",\"residual\":" + detail::fmt_double(res.fit.residual) +
                       ",\"points_used\":" + std::to_string(res.fit.points.size()) +
                       ",\"points_dropped\":" + std::to_string(res.fit.dropped) + "}";
        } catch (const Error&) {
            summary += ",\"fit\":null";
        }
        summary += "}\n";
        detail::OutputFile js(cfg.out_path + ".json");
        js.write(summary);
        res.files.push_back(js.path());
        return res;
    }

    if (cfg.experiment == "dedekind") {
        detail::validate_grid(cfg.x_grid);
        std::vector<DiscrepancyPoint> pts;
        {
            detail::PhaseTimer timer("dedekind");
            pts = dedekind_equidistribution(cfg.q, cfg.a, cfg.x_grid);
        }
        std::string data = "x,count,d_star\n";
        std::vector<std::pair<double, double>> fit_grid;
        for (const auto& p : pts) {
            data += detail::fmt_double(p.x) + "," + std::to_string(p.count) + "," +
                    detail::fmt_double(p.d_star) + "\n";
            fit_grid.push_back({p.x, p.d_star});
        }
        detail::OutputFile csv(cfg.out_path + ".csv");
        csv.write(data);
        res.files.push_back(csv.path());
        std::string summary = "{" + detail::config_json_fragment(cfg);
        summary += ",\"empty_set_d_star\":1";
        try {
            res.fit = fit_exponent(fit_grid);
            res.has_fit = true;
            summary += ",\"fit\":{\"slope\":" + detail::fmt_double(res.fit.alpha) +
                       ",\"residual\":" + detail::fmt_double(res.fit.residual) + "}";
        } catch (const Error&) {
            summary += ",\"fit\":null";
        }
        summary += "}\n";
        detail::OutputFile js(cfg.out_path + ".json");
        js.write(summary);
        res.files.push_back(js.path());
        return res;
    }

    if (cfg.experiment == "verify-identities") {
        std::vector<IdentityReport> reports;
        {
            detail::PhaseTimer timer("verify-identities");
            reports = identity_suite(cfg.draws, cfg.seed, cfg.q_max, cfg.mn_max);
        }
        std::string data;
        double worst = 0.0;
        for (const auto& r : reports) {
            data += identity_report_json(r) + "\n";
            worst = std::max(worst, r.rel_error);
            if (!r.pass) res.thresholds_met = false;
        }
        detail::OutputFile lines(cfg.out_path + ".jsonl");
        lines.write(data);
        res.files.push_back(lines.path());
        std::string summary = "{" + detail::config_json_fragment(cfg);
        summary += ",\"draws\":" + std::to_string(cfg.draws);
        summary += ",\"reports\":" + std::to_string(reports.size());
        summary += ",\"worst_rel_error\":" + detail::fmt_double(worst);
        summary += ",\"all_passed\":" + std::string(res.thresholds_met ? "true" : "false");
        summary += "}\n";
        detail::OutputFile js(cfg.out_path + ".json");
        js.write(summary);
        res.files.push_back(js.path());
        return res;
    }

    if (cfg.experiment == "eisenstein-table") {
        DirichletCharacter chi1 = CharacterGroup::get(cfg.q1)->character(cfg.chi_index);
        const int kappa = chi1.parity();
        std::string data;
        {
            detail::PhaseTimer timer("eisenstein-table");
            const auto cusps = singular_cusps(cfg.level, chi1);
            for (const auto& cusp_data : cusps)
                for (u64 n : cfg.index_grid)
                    for (double t : cfg.t_grid) {
                        const auto c =
                            eisenstein_coefficient(cusp_data, n, t, kappa, cfg.truncation);
                        data += "{\"Q\":" + std::to_string(cfg.level) +
                                ",\"q1_index\":" + std::to_string(cfg.chi_index) +
                                ",\"kappa\":" + std::to_string(kappa) +
                                ",\"cusp\":{\"u\":" + std::to_string(cusp_data.cusp.u) +
                                ",\"w\":" + std::to_string(cusp_data.cusp.w) + "}" +
                                ",\"n\":" + std::to_string(n) +
                                ",\"t\":" + detail::fmt_double(t) +
                                ",\"re\":" + detail::fmt_double(c.value.real()) +
                                ",\"im\":" + detail::fmt_double(c.value.imag()) +
                                ",\"err\":" + detail::fmt_double(c.error_estimate) + "}\n";
                    }
        }
        detail::OutputFile lines(cfg.out_path + ".jsonl");
        lines.write(data);
        res.files.push_back(lines.path());
        std::string summary = "{" + detail::config_json_fragment(cfg) + "}\n";
        detail::OutputFile js(cfg.out_path + ".json");
        js.write(summary);
        res.files.push_back(js.path());
        return res;
    }

    if (cfg.experiment == "transform-table") {
        detail::validate_grid(cfg.x_grid);
        const double X = cfg.x_grid.back();
        const TransformSpec spec(cfg.m, cfg.n, cfg.q1, X, cutoff);
        std::string data = "kind,arg,re,im,err\n";
        {
            detail::PhaseTimer timer("transform-table");
            for (u64 k : cfg.index_grid) {
                const auto v = g_dot(spec, static_cast<int>(k));
                data += "gdot," + std::to_string(k) + "," + detail::fmt_double(v.value.real()) +
                        "," + detail::fmt_double(v.value.imag()) + "," +
                        detail::fmt_double(v.error) + "\n";
            }
            const int kappa = static_cast<int>(cfg.chi_index % 2);
            for (double t : cfg.t_grid) {
                const auto v = g_tilde(spec, cplx(t, 0.0), kappa);
                data += "gtilde," + detail::fmt_double(t) + "," +
                        detail::fmt_double(v.value.real()) + "," +
                        detail::fmt_double(v.value.imag()) + "," + detail::fmt_double(v.error) +
                        "\n";
            }
        }
        detail::OutputFile csv(cfg.out_path + ".csv");
        csv.write(data);
        res.files.push_back(csv.path());
        std::string summary = "{" + detail::config_json_fragment(cfg) + "}\n";
        detail::OutputFile js(cfg.out_path + ".json");
        js.write(summary);
        res.files.push_back(js.path());
        return res;
    }

    throw Error(errc::config_invalid, "unknown experiment: " + cfg.experiment);
}

}  // namespace klsum
