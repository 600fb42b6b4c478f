// End-to-end command-line driver tests: CSV schemas, parse-back against
// direct library recomputation, determinism, config handling, exit codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pec/baseline.hpp"
#include "pec/cli.hpp"
#include "pec/config.hpp"
#include "pec/errors.hpp"
#include "pec/optimizer.hpp"

using namespace pec;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<std::string> cells_of(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& p) : path(p) { std::remove(path.c_str()); }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("simulate emits one data row matching a direct recomputation") {
    TempFile f("cli_sim.csv");
    int rc = run_cli({"simulate", "--set", "e=3", "--set", "p=2", "--set", "n=3",
                      "--scheme", "1", "--z", "1", "--trials", "50", "--seed", "5",
                      "-o", f.path});
    REQUIRE(rc == 0);
    auto ls = lines_of(slurp(f.path));
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] ==
          "scheme,e,p,n,k,n_prime,k_prime,t,trials,mean_upload_end,mean_compute_end,"
          "mean_download_end,mean_decode,mean_total,stderr_total");
    auto c = cells_of(ls[1]);
    REQUIRE(c.size() == 15);
    CHECK(c[0] == "1");
    CHECK(c[1] == "3");
    CHECK(c[2] == "2");
    CHECK(c[3] == "3");
    CHECK(c[4] == "3"); // k = a*z + 1 with a = 2
    CHECK(c[5] == "0");
    CHECK(c[6] == "0");
    CHECK(c[7] == "3"); // t defaults to k
    CHECK(c[8] == "50");

    SystemConfig sys;
    sys.seed = 5;
    SetupBank bank(sys.seed, sys.e_max, sys.eta);
    bank.ensure(50);
    PrivateCodingScheme tp{1, 3, 2, 3, 3, 3, 0, 0};
    AssignmentPlan plan = plan_for_tuple(tp);
    double up = 0, comp = 0, down = 0, dec = 0, tot = 0;
    for (std::size_t i = 0; i < 50; ++i) {
        TrialOutcome o = tuple_trial(tp, plan, sys, bank.row(i));
        up += o.upload_end;
        comp += o.compute_end;
        down += o.download_end;
        dec += o.decode_time;
        tot += o.total;
    }
    CHECK(std::stod(c[9]) == doctest::Approx(up / 50).epsilon(1e-10));
    CHECK(std::stod(c[10]) == doctest::Approx(comp / 50).epsilon(1e-10));
    CHECK(std::stod(c[11]) == doctest::Approx(down / 50).epsilon(1e-10));
    CHECK(std::stod(c[12]) == doctest::Approx(dec / 50).epsilon(1e-10));
    CHECK(std::stod(c[13]) == doctest::Approx(tot / 50).epsilon(1e-10));
}

TEST_CASE("same seed gives byte-identical CSV, new seed moves the means") {
    TempFile a("cli_det_a.csv"), b("cli_det_b.csv"), d("cli_det_c.csv");
    std::vector<std::string> base = {"simulate", "--set", "e=4",    "--set",  "p=2",
                                     "--set",    "n=4",  "--scheme", "2",      "--z",
                                     "1",        "--trials", "80"};
    auto with = [&](const std::string& out, const char* seed) {
        std::vector<std::string> v = base;
        v.push_back("--seed");
        v.push_back(seed);
        v.push_back("-o");
        v.push_back(out);
        return run_cli(v);
    };
    REQUIRE(with(a.path, "7") == 0);
    REQUIRE(with(b.path, "7") == 0);
    REQUIRE(with(d.path, "8") == 0);
    CHECK(slurp(a.path) == slurp(b.path));
    CHECK(slurp(a.path) != slurp(d.path));
}

TEST_CASE("optimize lists the whole feasible table") {
    TempFile f("cli_opt.csv");
    int rc = run_cli({"optimize", "--set", "e_max=3", "--scheme", "1", "--z", "1",
                      "--trials", "30", "-o", f.path});
    REQUIRE(rc == 0);
    auto ls = lines_of(slurp(f.path));
    REQUIRE(ls.size() == 3); // header + the two feasible stopping rules
    CHECK(ls[0] == "variant,e,p,n,k,n_prime,k_prime,t,z,mean,stderr,trials");
    SystemConfig sys;
    sys.e_max = 3;
    SetupBank bank(sys.seed, sys.e_max, sys.eta);
    SearchSpace sp;
    sp.scheme = 1;
    sp.z = 1;
    OptimizationResult res = optimize(sp, sys, 30, bank);
    for (int i = 0; i < 2; ++i) {
        auto c = cells_of(ls[std::size_t(i) + 1]);
        REQUIRE(c.size() == 12);
        CHECK(c[0] == "1");
        CHECK(std::stoi(c[1]) == res.table[std::size_t(i)].tuple.e);
        CHECK(std::stoi(c[7]) == res.table[std::size_t(i)].tuple.t);
        CHECK(c[8] == "1");
        CHECK(std::stod(c[9]) == doctest::Approx(res.table[std::size_t(i)].mean).epsilon(1e-10));
        CHECK(std::stod(c[10]) == doctest::Approx(res.table[std::size_t(i)].se).epsilon(1e-8));
        CHECK(c[11] == "30");
    }
}

TEST_CASE("sweep covers the gamma x scheme x z grid") {
    TempFile f("cli_sweep.csv");
    int rc = run_cli({"sweep", "--gamma-grid", "0,1", "--scheme", "0,2", "--z", "1,2",
                      "--trials", "20", "-o", f.path});
    REQUIRE(rc == 0);
    auto ls = lines_of(slurp(f.path));
    CHECK(ls[0] == "gamma,scheme,z,mean_latency,stderr,e,p,n,k,n_prime,k_prime,t");
    // per gamma: one reference row + one row per z
    REQUIRE(ls.size() == 1 + 2 * (1 + 2));
    std::vector<std::string> want_gamma = {"0", "0", "0", "1", "1", "1"};
    std::vector<std::string> want_scheme = {"0", "2", "2", "0", "2", "2"};
    std::vector<std::string> want_z = {"0", "1", "2", "0", "1", "2"};
    for (std::size_t i = 0; i < 6; ++i) {
        auto c = cells_of(ls[i + 1]);
        REQUIRE(c.size() == 12);
        CHECK(c[0] == want_gamma[i]);
        CHECK(c[1] == want_scheme[i]);
        CHECK(c[2] == want_z[i]);
        CHECK(std::stod(c[3]) > 0);
    }
}

TEST_CASE("baseline simulate row matches the library") {
    TempFile f("cli_base.csv");
    int rc = run_cli({"simulate", "--scheme", "0", "--trials", "40", "-o", f.path});
    REQUIRE(rc == 0);
    auto ls = lines_of(slurp(f.path));
    REQUIRE(ls.size() == 2);
    auto c = cells_of(ls[1]);
    REQUIRE(c.size() == 15);
    CHECK(c[0] == "0");
    CHECK(c[1] == "9");
    CHECK(c[3] == "3600"); // default storage fill
    CHECK(c[4] == "600");
    SystemConfig sys;
    BaselinePlan plan = make_baseline_plan(sys, sys.e_max, 0, 0, 1, false);
    SetupBank bank(sys.seed, sys.e_max, sys.eta);
    bank.ensure(40);
    double tot = 0;
    for (std::size_t i = 0; i < 40; ++i) tot += baseline_trial(plan, sys, bank.row(i)).total;
    CHECK(std::stod(c[13]) == doctest::Approx(tot / 40).epsilon(1e-10));
}

TEST_CASE("deadline command reports a survival curve per gamma") {
    TempFile f("cli_dead.csv");
    int rc = run_cli({"deadline", "--set", "e_max=3", "--scheme", "2", "--z", "1",
                      "--trials", "10000", "--set", "stage1_trials=10000", "--gamma-grid",
                      "1", "--deadline-grid", "1000,5000,1e9", "-o", f.path});
    REQUIRE(rc == 0);
    auto ls = lines_of(slurp(f.path));
    CHECK(ls[0] == "gamma,scheme,deadline,exceedance_probability");
    REQUIRE(ls.size() == 4);
    double prev = 1.0;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        auto c = cells_of(ls[i]);
        REQUIRE(c.size() == 4);
        CHECK(c[0] == "1");
        CHECK(c[1] == "2");
        double p = std::stod(c[3]);
        CHECK(p >= 0.0);
        CHECK(p <= prev);
        prev = p;
    }
    auto last = cells_of(ls[3]);
    CHECK(std::stod(last[3]) == 0.0); // nothing exceeds a 1e9 deadline
}

TEST_CASE("trace prints the event log and a final summary line") {
    TempFile f("cli_trace.txt");
    int rc = run_cli({"trace", "--set", "e=3", "--set", "p=2", "--set", "n=3",
                      "--scheme", "2", "--z", "1", "-o", f.path});
    REQUIRE(rc == 0);
    auto ls = lines_of(slurp(f.path));
    REQUIRE(ls.size() >= 2); // at least one event plus the summary
    double up, comp, down, dec, tot;
    int got = std::sscanf(ls.back().c_str(),
                          "upload_end=%lf compute_end=%lf download_end=%lf decode=%lf total=%lf",
                          &up, &comp, &down, &dec, &tot);
    REQUIRE(got == 5);
    CHECK(up == doctest::Approx(300.0)); // gamma * r * e * a = 1 * 50 * 3 * 2
    CHECK(tot == doctest::Approx(down + dec).epsilon(1e-9));
    CHECK(comp >= up);

    // The sequential variant traces to the same summary shape.
    TempFile g("cli_trace1.txt");
    rc = run_cli({"trace", "--set", "e=3", "--set", "p=2", "--set", "n=3", "--scheme",
                  "1", "--z", "1", "-o", g.path});
    REQUIRE(rc == 0);
    auto ls1 = lines_of(slurp(g.path));
    REQUIRE(!ls1.empty());
    got = std::sscanf(ls1.back().c_str(),
                      "upload_end=%lf compute_end=%lf download_end=%lf decode=%lf total=%lf",
                      &up, &comp, &down, &dec, &tot);
    CHECK(got == 5);
    CHECK(up == doctest::Approx(300.0));
}

TEST_CASE("config file loads, overrides apply in order") {
    TempFile cfgf("cli_cfg.conf");
    {
        std::ofstream out(cfgf.path);
        out << "# fixed tuple\n"
            << "e = 3\n"
            << "p = 2\n\n"
            << "n = 3\n"
            << "scheme = 2\n"
            << "trials = 25\n";
    }
    TempFile f("cli_cfgrun.csv");
    int rc = run_cli({"simulate", "--config", cfgf.path, "--set", "trials=35", "-o", f.path});
    REQUIRE(rc == 0);
    auto ls = lines_of(slurp(f.path));
    REQUIRE(ls.size() == 2);
    auto c = cells_of(ls[1]);
    CHECK(c[0] == "2");
    CHECK(c[8] == "35"); // --set wins over the file
}

TEST_CASE("echo round-trips through a config file") {
    RunConfig cfg;
    apply_config_entry(cfg, "e_max", "5");
    apply_config_entry(cfg, "gamma", "2.5");
    apply_config_entry(cfg, "scheme", "1,3");
    apply_config_entry(cfg, "z", "2");
    apply_config_entry(cfg, "deadline_grid", "100,200.5");
    apply_config_entry(cfg, "baseline_upload_log2", "1");
    std::string echoed = echo_config(cfg);
    TempFile cfgf("cli_echo.conf");
    {
        std::ofstream out(cfgf.path);
        out << echoed;
    }
    RunConfig back;
    load_config_file(back, cfgf.path);
    CHECK(echo_config(back) == echoed);
    CHECK(back.sys.e_max == 5);
    CHECK(back.sys.gamma == 2.5);
    CHECK(back.schemes == std::vector<int>{1, 3});

    CHECK_THROWS_AS(apply_config_entry(cfg, "no_such_key", "1"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "trials", "abc"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "trials", "-5"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "baseline_upload_log2", "maybe"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "gamma_grid", ""), ConfigError);
}

TEST_CASE("exit codes separate usage, infeasibility, and success") {
    // usage / configuration problems -> 2
    CHECK(run_cli({"nonsense"}) == 2);
    CHECK(run_cli({"simulate", "--set", "no_such_key=1"}) == 2);
    CHECK(run_cli({"simulate", "--set", "novalue"}) == 2);
    CHECK(run_cli({"simulate", "--scheme", "4", "--set", "e=3", "--set", "p=2", "--set",
                   "n=3"}) == 2);
    CHECK(run_cli({"simulate", "--scheme", "1"}) == 2); // e/p/n unset
    CHECK(run_cli({"deadline", "--trials", "500", "--scheme", "2"}) == 2);
    CHECK(run_cli({"trace", "--scheme", "0", "--set", "e=3", "--set", "p=2", "--set",
                   "n=3"}) == 2);

    // infeasible instances -> 3
    TempFile f("cli_empty.csv");
    CHECK(run_cli({"optimize", "--scheme", "1", "--z", "9", "--trials", "5", "-o",
                   f.path}) == 3);
    CHECK(run_cli({"simulate", "--scheme", "1", "--set", "e=3", "--set", "p=2", "--set",
                   "n=3", "--set", "k=3", "--set", "t=99", "--trials", "5", "-o",
                   f.path}) == 3);
}

TEST_CASE("out key in the config stream works like the flag") {
    TempFile f("cli_outkey.csv");
    int rc = run_cli({"simulate", "--scheme", "0", "--trials", "5", "--set",
                      "out=" + f.path});
    REQUIRE(rc == 0);
    auto ls = lines_of(slurp(f.path));
    CHECK(ls.size() == 2);
}
