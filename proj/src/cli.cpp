#include "pec/cli.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pec/baseline.hpp"
#include "pec/config.hpp"
#include "pec/engine.hpp"
#include "pec/errors.hpp"
#include "pec/optimizer.hpp"

namespace pec {

namespace {

struct Out {
    std::FILE* f = stdout;
    bool owned = false;

    explicit Out(const std::string& path) {
        if (path.empty()) return;
        f = std::fopen(path.c_str(), "wb");
        if (!f) throw ConfigError("cannot open output file: " + path);
        owned = true;
    }
    Out(const Out&) = delete;
    Out& operator=(const Out&) = delete;
    ~Out() {
        if (owned) std::fclose(f);
    }
};

// CSV numbers use %.12g: enough digits for stable means, short enough to
// stay readable.
void put_num(std::string& row, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    if (!row.empty()) row += ',';
    row += buf;
}

void put_int(std::string& row, long long v) {
    if (!row.empty()) row += ',';
    row += std::to_string(v);
}

void emit(std::FILE* f, std::string& row) {
    row += '\n';
    std::fputs(row.c_str(), f);
    row.clear();
}

struct Moments {
    double sum = 0, sumsq = 0;
    std::size_t count = 0;

    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++count;
    }
    double mean() const { return sum / double(count); }
    double se() const {
        if (count < 2) return 0;
        double var = (sumsq - sum * sum / double(count)) / double(count - 1);
        if (var < 0) var = 0;
        return std::sqrt(var / double(count));
    }
};

int single(const std::vector<int>& v, const char* what) {
    if (v.size() != 1)
        throw ConfigError(std::string(what) + " must be a single value for this command");
    return v[0];
}

PrivateCodingScheme resolve_tuple(const RunConfig& cfg, int scheme) {
    if (scheme < 1 || scheme > 3) throw ConfigError("scheme must be 1, 2, or 3");
    if (cfg.e < 2) throw ConfigError("e must be set to at least 2");
    if (cfg.p < 1) throw ConfigError("p must be set to at least 1");
    if (cfg.n < 2) throw ConfigError("n must be set to at least 2");
    PrivateCodingScheme tp;
    tp.scheme = scheme;
    tp.e = cfg.e;
    tp.p = cfg.p;
    tp.n = cfg.n;
    if (scheme == 3) {
        if (cfg.n_prime < 1 || cfg.k_prime < 1)
            throw ConfigError("scheme 3 needs n_prime and k_prime");
        tp.n_prime = cfg.n_prime;
        tp.k_prime = cfg.k_prime;
    }
    AssignmentPlan plan = plan_for_tuple(tp);
    if (cfg.k > 0) {
        tp.k = cfg.k;
    } else {
        int z = single(cfg.zs, "z");
        if (z < 1) throw ConfigError("z must be at least 1");
        tp.k = plan.a * z + 1;
    }
    if (scheme == 1) tp.t = cfg.t > 0 ? cfg.t : tp.k;
    return tp;
}

void tuple_cols(std::string& row, const PrivateCodingScheme& tp) {
    put_int(row, tp.e);
    put_int(row, tp.p);
    put_int(row, tp.n);
    put_int(row, tp.k);
    put_int(row, tp.n_prime);
    put_int(row, tp.k_prime);
    put_int(row, tp.t);
}

BaselinePlan baseline_plan_from(const RunConfig& cfg, const SystemConfig& sys) {
    int e = cfg.e > 0 ? cfg.e : sys.e_max;
    if (e > sys.e_max) throw ConfigError("baseline e must not exceed e_max");
    return make_baseline_plan(sys, e, cfg.baseline_n_c, cfg.baseline_k_c,
                              cfg.baseline_replication, cfg.baseline_upload_log2);
}

int cmd_simulate(const RunConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
    int scheme = single(cfg.schemes, "scheme");
    SetupBank bank(cfg.sys.seed, cfg.sys.e_max, cfg.sys.eta);
    bank.ensure(cfg.trials);
    Out out(cfg.out);
    std::string row =
        "scheme,e,p,n,k,n_prime,k_prime,t,trials,mean_upload_end,mean_compute_end,"
        "mean_download_end,mean_decode,mean_total,stderr_total";
    emit(out.f, row);

    Moments up, comp, down, dec, tot;
    auto add = [&](const TrialOutcome& o) {
        up.add(o.upload_end);
        comp.add(o.compute_end);
        down.add(o.download_end);
        dec.add(o.decode_time);
        tot.add(o.total);
    };

    if (scheme == 0) {
        BaselinePlan plan = baseline_plan_from(cfg, cfg.sys);
        for (std::size_t i = 0; i < cfg.trials; ++i) add(baseline_trial(plan, cfg.sys, bank.row(i)));
        put_int(row, 0);
        put_int(row, plan.e);
        put_int(row, 0);
        put_int(row, plan.n_c);
        put_int(row, plan.k_c);
        put_int(row, 0);
        put_int(row, 0);
        put_int(row, 0);
    } else {
        PrivateCodingScheme tp = resolve_tuple(cfg, scheme);
        AssignmentPlan plan = plan_for_tuple(tp);
        for (std::size_t i = 0; i < cfg.trials; ++i) add(tuple_trial(tp, plan, cfg.sys, bank.row(i)));
        put_int(row, tp.scheme);
        tuple_cols(row, tp);
    }
    put_int(row, (long long)cfg.trials);
    put_num(row, up.mean());
    put_num(row, comp.mean());
    put_num(row, down.mean());
    put_num(row, dec.mean());
    put_num(row, tot.mean());
    put_num(row, tot.se());
    emit(out.f, row);
    return 0;
}

int cmd_trace(const RunConfig& cfg) {
    int scheme = single(cfg.schemes, "scheme");
    if (scheme == 0) throw ConfigError("trace supports schemes 1, 2, and 3");
    PrivateCodingScheme tp = resolve_tuple(cfg, scheme);
    AssignmentPlan plan = plan_for_tuple(tp);
    SetupBank bank(cfg.sys.seed, cfg.sys.e_max, cfg.sys.eta);
    bank.ensure(1);
    SetupTimes setup;
    setup.lambda.assign(bank.row(0), bank.row(0) + tp.e);

    EventLog log;
    TrialOutcome o;
    if (scheme == 1) o = replay_scheme1(plan, tp.k, tp.t, cfg.sys, setup, &log);
    else if (scheme == 2) o = run_scheme2(plan, tp.k, cfg.sys, setup, &log);
    else o = run_scheme3(plan, tp.k, tp.k_prime, cfg.sys, setup, &log);

    Out out(cfg.out);
    for (const std::string& line : log) std::fprintf(out.f, "%s\n", line.c_str());
    std::fprintf(out.f,
                 "upload_end=%.6f compute_end=%.6f download_end=%.6f decode=%.6f total=%.6f\n",
                 o.upload_end, o.compute_end, o.download_end, o.decode_time, o.total);
    return 0;
}

int cmd_optimize(const RunConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
    SetupBank bank(cfg.sys.seed, cfg.sys.e_max, cfg.sys.eta);
    Out out(cfg.out);
    std::string row = "variant,e,p,n,k,n_prime,k_prime,t,z,mean,stderr,trials";
    emit(out.f, row);
    for (int scheme : cfg.schemes) {
        if (scheme < 1 || scheme > 3)
            throw ConfigError("optimize: scheme must be 1, 2, or 3");
        for (int z : cfg.zs) {
            SearchSpace space{scheme, z, cfg.v3_n_prime_max, cfg.v3_n_max};
            OptimizationResult res = optimize(space, cfg.sys, cfg.trials, bank, cfg.threads);
            for (const TupleResult& tr : res.table) {
                put_int(row, tr.tuple.scheme);
                tuple_cols(row, tr.tuple);
                put_int(row, z);
                put_num(row, tr.mean);
                put_num(row, tr.se);
                put_int(row, (long long)tr.trials);
                emit(out.f, row);
            }
        }
    }
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
    SetupBank bank(cfg.sys.seed, cfg.sys.e_max, cfg.sys.eta);
    bank.ensure(cfg.trials);
    Out out(cfg.out);
    std::string row = "gamma,scheme,z,mean_latency,stderr,e,p,n,k,n_prime,k_prime,t";
    emit(out.f, row);
    for (double gamma : cfg.gamma_grid) {
        SystemConfig sys = cfg.sys;
        sys.gamma = gamma;
        for (int scheme : cfg.schemes) {
            if (scheme == 0) {
                BaselinePlan plan = baseline_plan_from(cfg, sys);
                Moments tot;
                for (std::size_t i = 0; i < cfg.trials; ++i)
                    tot.add(baseline_trial(plan, sys, bank.row(i)).total);
                put_num(row, gamma);
                put_int(row, 0);
                put_int(row, 0);
                put_num(row, tot.mean());
                put_num(row, tot.se());
                put_int(row, plan.e);
                put_int(row, 0);
                put_int(row, plan.n_c);
                put_int(row, plan.k_c);
                put_int(row, 0);
                put_int(row, 0);
                put_int(row, 0);
                emit(out.f, row);
                continue;
            }
            if (scheme < 0 || scheme > 3)
                throw ConfigError("sweep: scheme must be 0, 1, 2, or 3");
            for (int z : cfg.zs) {
                SearchSpace space{scheme, z, cfg.v3_n_prime_max, cfg.v3_n_max};
                OptimizationResult res = optimize(space, sys, cfg.trials, bank, cfg.threads);
                put_num(row, gamma);
                put_int(row, scheme);
                put_int(row, z);
                put_num(row, res.best.mean);
                put_num(row, res.best.se);
                tuple_cols(row, res.best.tuple);
                emit(out.f, row);
            }
        }
    }
    return 0;
}

int cmd_deadline(const RunConfig& cfg) {
    if (cfg.trials < 10000)
        throw ConfigError("deadline: trials must be at least 10000");
    if (cfg.trials < 100000)
        std::fprintf(stderr,
                     "warning: %zu trials resolves exceedance probabilities only down to "
                     "about 1e-3; consider trials=1000000\n",
                     cfg.trials);
    int z = single(cfg.zs, "z");
    SetupBank bank(cfg.sys.seed, cfg.sys.e_max, cfg.sys.eta);
    Out out(cfg.out);
    std::string row = "gamma,scheme,deadline,exceedance_probability";
    emit(out.f, row);
    for (double gamma : cfg.gamma_grid) {
        SystemConfig sys = cfg.sys;
        sys.gamma = gamma;
        for (int scheme : cfg.schemes) {
            if (scheme < 1 || scheme > 3)
                throw ConfigError("deadline: scheme must be 1, 2, or 3");
            SearchSpace space{scheme, z, cfg.v3_n_prime_max, cfg.v3_n_max};
            DeadlineResult dr = deadline_profile_space(space, sys, cfg.deadline_grid,
                                                       cfg.trials, cfg.stage1_trials, bank,
                                                       cfg.threads);
            for (std::size_t d = 0; d < cfg.deadline_grid.size(); ++d) {
                put_num(row, gamma);
                put_int(row, scheme);
                put_num(row, cfg.deadline_grid[d]);
                put_num(row, dr.probability[d]);
                emit(out.f, row);
            }
        }
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"latency simulator for privacy-preserving coded edge computing"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string out_path, seed_s, trials_s, scheme_s, z_s, gamma_grid_s, deadline_grid_s;
    app.add_option("--config", config_path, "config file (key=value lines, # comments)");
    app.add_option("--set", sets, "override one key=value; repeatable, applied in order");
    auto* opt_out = app.add_option("--out,-o", out_path, "write CSV here instead of stdout");
    auto* opt_seed = app.add_option("--seed", seed_s, "base RNG seed");
    auto* opt_trials = app.add_option("--trials", trials_s, "Monte Carlo trials per tuple");
    auto* opt_scheme = app.add_option("--scheme", scheme_s, "scheme list, e.g. 1,2,3 (0 = nonprivate reference)");
    auto* opt_z = app.add_option("--z", z_s, "collusion bound list, e.g. 1,2");
    auto* opt_gg = app.add_option("--gamma-grid", gamma_grid_s, "comma-separated gamma values");
    auto* opt_dg = app.add_option("--deadline-grid", deadline_grid_s, "comma-separated deadlines");

    CLI::App* sc_simulate = app.add_subcommand("simulate", "mean latency breakdown of one fixed tuple");
    CLI::App* sc_optimize = app.add_subcommand("optimize", "evaluate every feasible tuple at fixed gamma");
    CLI::App* sc_sweep = app.add_subcommand("sweep", "best mean latency per gamma/scheme/z");
    CLI::App* sc_deadline = app.add_subcommand("deadline", "min exceedance probability per gamma/scheme/deadline");
    CLI::App* sc_trace = app.add_subcommand("trace", "event log of a single trial");
    for (CLI::App* sc : {sc_simulate, sc_optimize, sc_sweep, sc_deadline, sc_trace})
        sc->fallthrough();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        for (const std::string& s : sets) {
            std::size_t eq = s.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ConfigError("--set expects key=value, got '" + s + "'");
            apply_config_entry(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        if (*opt_out) cfg.out = out_path;
        if (*opt_seed) apply_config_entry(cfg, "seed", seed_s);
        if (*opt_trials) apply_config_entry(cfg, "trials", trials_s);
        if (*opt_scheme) apply_config_entry(cfg, "scheme", scheme_s);
        if (*opt_z) apply_config_entry(cfg, "z", z_s);
        if (*opt_gg) apply_config_entry(cfg, "gamma_grid", gamma_grid_s);
        if (*opt_dg) apply_config_entry(cfg, "deadline_grid", deadline_grid_s);

        std::string echo = echo_config(cfg);
        std::fputs(echo.c_str(), stderr);

        if (app.got_subcommand(sc_simulate)) return cmd_simulate(cfg);
        if (app.got_subcommand(sc_optimize)) return cmd_optimize(cfg);
        if (app.got_subcommand(sc_sweep)) return cmd_sweep(cfg);
        if (app.got_subcommand(sc_deadline)) return cmd_deadline(cfg);
        return cmd_trace(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const EmptySpace& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const InfeasibleConfig& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const InfeasibleFill& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const InfeasibleT& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const Deadlock& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace pec
