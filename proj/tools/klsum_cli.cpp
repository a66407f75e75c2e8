// Command line driver for the experiment runner.  Each subcommand fills an
// ExperimentConfig and hands it to klsum::run; values come from built-in
// defaults, then an optional JSON config file, then explicit flags, in that
// order of increasing precedence.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <klsum/experiments.hpp>

namespace {

using nlohmann::json;

// Reads the JSON config named by --config (scanned ahead of CLI11 so its
// values can serve as defaults that explicit flags then override).
json load_config(int argc, char** argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
    }
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw klsum::Error(klsum::errc::io_error, "cannot read config file: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw klsum::Error(klsum::errc::config_invalid,
                           "config parse error in " + path + ": " + e.what());
    }
    if (!j.is_object())
        throw klsum::Error(klsum::errc::config_invalid, "config must be a JSON object: " + path);
    return j;
}

template <typename T>
void from_config(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw klsum::Error(klsum::errc::config_invalid,
                           std::string("config field '") + key + "': " + e.what());
    }
}

void parse_cutoff(const std::string& tag, klsum::ExperimentConfig& cfg) {
    double a = 0.0, b = 0.0, freq = 0.0;
    if (std::sscanf(tag.c_str(), "bump:%lf,%lf", &a, &b) == 2) {
        cfg.cutoff_lo = a;
        cfg.cutoff_hi = b;
        cfg.cutoff_freq = 0.0;
        return;
    }
    if (std::sscanf(tag.c_str(), "modbump:%lf,%lf,%lf", &a, &b, &freq) == 3) {
        cfg.cutoff_lo = a;
        cfg.cutoff_hi = b;
        cfg.cutoff_freq = freq;
        return;
    }
    throw klsum::Error(klsum::errc::config_invalid,
                       "cutoff must be bump:a,b or modbump:a,b,freq, got: " + tag);
}

// Geometric ladder from x_min to x_max with `steps` points; a single step
// yields {x_min}.
std::vector<double> geometric_grid(double x_min, double x_max, unsigned steps) {
    if (steps == 0 || !(x_min > 0.0) || !(x_max >= x_min))
        throw klsum::Error(klsum::errc::config_invalid,
                           "x grid needs 0 < x-min <= x-max and x-steps >= 1");
    if (steps == 1) return {x_min};
    if (!(x_max > x_min))
        throw klsum::Error(klsum::errc::config_invalid,
                           "x-steps > 1 needs x-max > x-min");
    std::vector<double> grid(steps);
    const double lr = std::log(x_max / x_min) / static_cast<double>(steps - 1);
    for (unsigned i = 0; i < steps; ++i)
        grid[i] = x_min * std::exp(lr * static_cast<double>(i));
    grid.front() = x_min;
    grid.back() = x_max;
    return grid;
}

struct CliState {
    klsum::ExperimentConfig cfg;
    double x_min = 0.0, x_max = 0.0;
    unsigned x_steps = 0;
    std::string cutoff_tag;
    std::string config_path;  // consumed by load_config; registered so CLI11 accepts it
};

// Registers the shared flag set on a subcommand; each option writes straight
// into the config, so flag values override whatever the JSON put there.
void add_common_options(CLI::App* sub, CliState& st) {
    sub->add_option("--m", st.cfg.m, "first frequency m");
    sub->add_option("--n", st.cfg.n, "second frequency n");
    sub->add_option("--q", st.cfg.q, "progression modulus / identity modulus cap");
    sub->add_option("--a", st.cfg.a, "progression class a mod q");
    sub->add_option("--x-min", st.x_min, "smallest grid point X");
    sub->add_option("--x-max", st.x_max, "largest grid point X");
    sub->add_option("--x-steps", st.x_steps, "number of geometric grid points");
    sub->add_option("--cutoff", st.cutoff_tag, "bump:a,b or modbump:a,b,freq");
    sub->add_option("--theta", st.cfg.theta, "reference progression exponent parameter");
    sub->add_option("--threads", st.cfg.threads, "worker threads (0 = hardware)");
    sub->add_option("--out", st.cfg.out_path, "output path stem");
    sub->add_option("--format", st.cfg.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", st.config_path, "JSON config file mirroring the flags");
    sub->add_option("--d", st.cfg.d, "divisor d of q (claim-sum)");
    sub->add_option("--q1", st.cfg.q1, "twist modulus q1");
    sub->add_option("--chi-index", st.cfg.chi_index, "character index in the group mod q1");
    sub->add_option("--level", st.cfg.level, "level Q (eisenstein-table)");
    sub->add_option("--seed", st.cfg.seed, "random seed (verify-identities)");
    sub->add_option("--draws", st.cfg.draws, "number of random draws (verify-identities)");
    sub->add_option("--orders", st.cfg.index_grid, "index list for table subcommands")
        ->delimiter(',');
    sub->add_option("--t-grid", st.cfg.t_grid, "spectral points for table subcommands")
        ->delimiter(',');
    sub->add_option("--c2-max", st.cfg.truncation.c2_max,
                    "ramified-part truncation (eisenstein-table)");
}

void apply_json_config(const json& j, CliState& st) {
    from_config(j, "m", st.cfg.m);
    from_config(j, "n", st.cfg.n);
    from_config(j, "q", st.cfg.q);
    from_config(j, "a", st.cfg.a);
    from_config(j, "d", st.cfg.d);
    from_config(j, "q1", st.cfg.q1);
    from_config(j, "chi-index", st.cfg.chi_index);
    from_config(j, "level", st.cfg.level);
    from_config(j, "x-min", st.x_min);
    from_config(j, "x-max", st.x_max);
    from_config(j, "x-steps", st.x_steps);
    from_config(j, "x-grid", st.cfg.x_grid);
    from_config(j, "theta", st.cfg.theta);
    from_config(j, "threads", st.cfg.threads);
    from_config(j, "out", st.cfg.out_path);
    from_config(j, "format", st.cfg.format);
    from_config(j, "seed", st.cfg.seed);
    from_config(j, "draws", st.cfg.draws);
    from_config(j, "q-max", st.cfg.q_max);
    from_config(j, "mn-max", st.cfg.mn_max);
    from_config(j, "orders", st.cfg.index_grid);
    from_config(j, "t-grid", st.cfg.t_grid);
    from_config(j, "c2-max", st.cfg.truncation.c2_max);
    std::string tag;
    from_config(j, "cutoff", tag);
    if (!tag.empty()) parse_cutoff(tag, st.cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kloosterman-sum experiment runner"};
    app.require_subcommand(1);

    CliState st;
    const char* names[] = {"verify-identities", "progression-sum", "claim-sum",
                           "dedekind",          "eisenstein-table", "transform-table"};
    const char* briefs[] = {
        "run the exact encoding-identity suite over random draws",
        "sum S(m,n,c)/sqrt(c) with a smooth cutoff over c = a mod q",
        "character-restricted divisibility sum over dq1 | c",
        "star discrepancy of scaled Dedekind sums along a progression",
        "tabulate Fourier coefficients at the singular cusps of a level",
        "tabulate spectral-side integral transforms of the cutoff"};
    std::vector<CLI::App*> subs;
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], briefs[i]);
        add_common_options(sub, st);
        subs.push_back(sub);
    }

    try {
        apply_json_config(load_config(argc, argv), st);
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const klsum::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    for (int i = 0; i < 6; ++i)
        if (subs[i]->parsed()) st.cfg.experiment = names[i];
    if (!st.cutoff_tag.empty()) {
        try {
            parse_cutoff(st.cutoff_tag, st.cfg);
        } catch (const klsum::Error& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 1;
        }
    }

    try {
        if (st.x_steps > 0 || st.x_min > 0.0 || st.x_max > 0.0)
            st.cfg.x_grid = geometric_grid(st.x_min, st.x_max,
                                           st.x_steps > 0 ? st.x_steps : 1);
        const klsum::RunResult result = klsum::run(st.cfg);
        for (const auto& f : result.files) std::fprintf(stderr, "# wrote %s\n", f.c_str());
        if (st.cfg.experiment == "verify-identities" && !result.thresholds_met) {
            std::fprintf(stderr, "error: identity suite exceeded its tolerance\n");
            return 2;
        }
    } catch (const klsum::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
