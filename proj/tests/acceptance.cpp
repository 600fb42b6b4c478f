// Acceptance harness: ten numbered end-to-end checks over the library and
// CLI. Run with no arguments for all criteria or with a single number to
// run one. Prints one "criterion N PASS/FAIL" line per check; exits
// nonzero if any selected check fails.
#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pec/assignment.hpp"
#include "pec/baseline.hpp"
#include "pec/cli.hpp"
#include "pec/engine.hpp"
#include "pec/errors.hpp"
#include "pec/field.hpp"
#include "pec/latency.hpp"
#include "pec/optimizer.hpp"
#include "pec/reed_solomon.hpp"
#include "pec/rng.hpp"
#include "pec/secret_sharing.hpp"

using namespace pec;

namespace {

int worker_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw < 1) hw = 1;
    if (hw > 8) hw = 8;
    return int(hw);
}

bool note(bool ok, const char* fmt, ...) {
    if (!ok) {
        std::va_list ap;
        va_start(ap, fmt);
        std::printf("  - ");
        std::vprintf(fmt, ap);
        std::printf("\n");
        va_end(ap);
    }
    return ok;
}

// ---------------------------------------------------------------- 1
// Exact roundtrip: shares of random user vectors, products with a random
// network matrix, recovery from every sufficient share subset.
bool criterion1() {
    Field field(65537);
    Rng rng(2024);
    bool ok = true;
    for (int inst = 0; inst < 200; ++inst) {
        int m = 1 + int(rng.next_u64() % 12);
        int r = 1 + int(rng.next_u64() % 6);
        int users = 1 + int(rng.next_u64() % 3);
        int n = 2 + int(rng.next_u64() % 5);
        const std::size_t ms = std::size_t(m), rs = std::size_t(r), us = std::size_t(users);

        FeMatrix w{ms, rs};
        for (auto& v : w.a) v = Fe(rng.next_u64() % 65537);
        std::vector<std::vector<Fe>> xs(us, std::vector<Fe>(rs));
        for (auto& x : xs)
            for (auto& v : x) v = Fe(rng.next_u64() % 65537);
        FeMatrix xmat{rs, us};
        for (std::size_t c = 0; c < us; ++c)
            for (std::size_t i = 0; i < rs; ++i) xmat.at(i, c) = xs[c][i];
        FeMatrix truth = mat_mul(field, w, xmat);

        for (int k = 1; k <= n; ++k) {
            RsCode code = make_rs_code(field, n, k);
            std::vector<UserData> users_data = make_user_data(xs, code, rng);
            std::vector<ShareMatrix> shares = make_shares(users_data, code);

            std::vector<int> pick(std::size_t(k), 0);
            std::function<bool(int, int)> walk = [&](int from, int depth) {
                if (depth == k) {
                    std::vector<std::pair<int, FeMatrix>> irs;
                    for (int idx : pick) {
                        const ShareMatrix& sm = shares[std::size_t(idx - 1)];
                        irs.emplace_back(sm.h, mat_mul(field, w, sm.s));
                    }
                    return recover_results(irs, code) == truth;
                }
                for (int h = from; h <= n; ++h) {
                    pick[std::size_t(depth)] = h;
                    if (!walk(h + 1, depth + 1)) return false;
                }
                return true;
            };
            if (!note(walk(1, 0),
                      "instance %d: recovery mismatch at m=%d r=%d users=%d n=%d k=%d", inst, m,
                      r, users, n, k)) {
                ok = false;
                break;
            }
        }
        if (!ok) break;
    }
    return ok;
}

// ---------------------------------------------------------------- 2
// Share distributions below the threshold are identical for different
// secrets (enumerated exactly).
bool criterion2() {
    Field field(7);
    bool ok = true;
    const int pairs[3][2] = {{3, 2}, {4, 3}, {5, 3}};
    for (auto& nk : pairs) {
        int n = nk[0], k = nk[1];
        RsCode code = make_rs_code(field, n, k);
        // every nonempty subset of [n] with fewer than k positions
        for (int mask = 1; mask < (1 << n); ++mask) {
            std::vector<int> subset;
            for (int h = 1; h <= n; ++h)
                if (mask & (1 << (h - 1))) subset.push_back(h);
            if (int(subset.size()) >= k) continue;
            auto h1 = privacy_histogram(2, subset, code);
            auto h2 = privacy_histogram(5, subset, code);
            if (!note(h1 == h2, "(n=%d,k=%d): distributions differ on a %zu-subset", n, k,
                      subset.size()))
                ok = false;
        }
    }
    return ok;
}

// ---------------------------------------------------------------- 3
// Every share layout on the full parameter grid lets any single share
// index reach every block.
bool criterion3() {
    bool ok = true;
    for (int e = 2; e <= 9; ++e)
        for (int p = 1; p <= e; ++p)
            for (int n = 2; n <= e; ++n)
                if (!note(coverage_check(build_plan_uncoded(e, p, n, default_generator(e))),
                          "coverage fails at e=%d p=%d n=%d", e, p, n))
                    ok = false;
    return ok;
}

// ---------------------------------------------------------------- 4
// Pinned five-node assignment tables for p=3 with the (1 4 2 5 3) cycle.
bool criterion4() {
    auto pi = perm_from_cycle({1, 4, 2, 5, 3});
    IndexMatrix iw = build_iw(5, 3, pi);
    ShareAssignment sa = build_is(5, 3, 5, pi);
    const int want_iw[3][5] = {{1, 2, 3, 4, 5}, {4, 5, 1, 2, 3}, {2, 3, 4, 5, 1}};
    const int want_is[2][5] = {{1, 2, 3, 4, 5}, {2, 3, 4, 5, 1}};
    bool ok = true;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 5; ++j)
            if (!note(iw.at(i, j) == want_iw[i - 1][j - 1], "work table (%d,%d)=%d, want %d", i,
                      j, iw.at(i, j), want_iw[i - 1][j - 1]))
                ok = false;
    if (!note(sa.is.rows == 2 && sa.is.cols == 5, "share table shape %dx%d, want 2x5",
              sa.is.rows, sa.is.cols))
        return false;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 5; ++j)
            if (!note(sa.is.at(i, j) == want_is[i - 1][j - 1], "share table (%d,%d)=%d, want %d",
                      i, j, sa.is.at(i, j), want_is[i - 1][j - 1]))
                ok = false;
    if (!note(sa.a == 2, "a=%d, want 2", sa.a)) ok = false;
    return ok;
}

// ---------------------------------------------------------------- 5
// The closed-form sequential-variant latency agrees with an independent
// event replay on 1000 random configurations.
bool criterion5() {
    Rng rng(99);
    SystemConfig base;
    bool ok = true;
    int tested = 0, attempts = 0;
    while (tested < 1000 && attempts < 100000) {
        ++attempts;
        int e = 2 + int(rng.next_u64() % 8);
        int p = 1 + int(rng.next_u64() % e);
        int n = 2 + int(rng.next_u64() % (e - 1 > 0 ? e - 1 : 1));
        if (n > e) continue;
        AssignmentPlan plan = build_plan_uncoded(e, p, n, default_generator(e));
        // per-block reachability
        int cmin = plan.a * p, dmin = plan.n;
        for (int l = 1; l <= plan.n_blocks; ++l) {
            int cnt = 0;
            std::vector<char> seen(std::size_t(plan.n) + 1, 0);
            for (int j = 1; j <= e; ++j) {
                int times = 0;
                for (int b : plan.en_blocks[std::size_t(j - 1)])
                    if (b == l) ++times;
                cnt += times * int(plan.en_shares[std::size_t(j - 1)].size());
                if (times)
                    for (int h : plan.en_shares[std::size_t(j - 1)]) seen[std::size_t(h)] = 1;
            }
            cmin = std::min(cmin, cnt);
            int distinct = 0;
            for (int h = 1; h <= plan.n; ++h) distinct += seen[std::size_t(h)];
            dmin = std::min(dmin, distinct);
        }
        if (dmin < 2) continue;
        int k = 2 + int(rng.next_u64() % (dmin - 1 > 0 ? dmin - 1 : 1));
        if (k > dmin) continue;
        if (cmin < k) continue;
        int t = k + int(rng.next_u64() % (cmin - k + 1));

        SystemConfig cfg = base;
        cfg.gamma = (tested % 4 == 0) ? 0.0 : 3.0 * rng.uniform01();
        cfg.u = int(rng.next_u64() % 4);
        cfg.m = (tested % 2 == 0) ? 600 : 240;
        SetupTimes setup = sample_setup_times(e, cfg.eta, rng);

        TrialOutcome a = scheme1_total_latency(plan, k, t, cfg, setup);
        TrialOutcome b = replay_scheme1(plan, k, t, cfg, setup, nullptr);
        double d = std::max({std::fabs(a.upload_end - b.upload_end),
                             std::fabs(a.compute_end - b.compute_end),
                             std::fabs(a.download_end - b.download_end),
                             std::fabs(a.decode_time - b.decode_time),
                             std::fabs(a.total - b.total)});
        if (!note(d < 1e-9, "config %d (e=%d p=%d n=%d k=%d t=%d): max field gap %.3e", tested,
                  e, p, n, k, t, d))
            ok = false;
        ++tested;
    }
    if (!note(tested == 1000, "only %d of 1000 configurations sampled", tested)) ok = false;
    return ok;
}

// ---------------------------------------------------------------- 6
// The pinned six-cell pattern on a 3x4 product array peels to full
// recovery.
bool criterion6() {
    std::vector<std::uint8_t> known(12, 0);
    auto mark = [&](int l, int h) { known[std::size_t(l - 1) * 4 + std::size_t(h - 1)] = 1; };
    mark(1, 1);
    mark(1, 2);
    mark(2, 2);
    mark(2, 3);
    mark(3, 1);
    mark(3, 4);
    PeelResult res = peel_pattern(3, 4, 3, 2, known);
    return note(res.recovered, "six-cell pattern did not reach full recovery");
}

// ---------------------------------------------------------------- 7
// Deadline exceedance probabilities of optimizer-selected tuples at the
// default operating point, 10^6 trials.
bool criterion7() {
    struct Check {
        double gamma;
        int scheme;
        double lo, hi;
    };
    const std::vector<Check> checks = {
        {4.5, 1, 0.32, 0.48},   {4.5, 2, 1.3e-3, 1.2e-2}, {1.0, 1, 4.8e-2, 1.1e-1},
        {1.0, 2, 1.5e-4, 1.4e-3}, {1.0, 3, 3e-5, 3e-4},
    };
    const std::size_t trials = 1000000, stage1 = 10000;
    const std::vector<double> deadlines = {1e4};
    SystemConfig sys;
    SetupBank bank(sys.seed, sys.e_max, sys.eta);
    int threads = worker_threads();
    bool ok = true;
    for (const Check& c : checks) {
        SystemConfig run = sys;
        run.gamma = c.gamma;
        SearchSpace space;
        space.scheme = c.scheme;
        space.z = 1;
        DeadlineResult dr =
            deadline_profile_space(space, run, deadlines, trials, stage1, bank, threads);
        double p = dr.probability[0];
        const PrivateCodingScheme& tp = dr.chosen[0];
        std::printf("  deadline 1e4, gamma=%.1f, variant %d: p=%.6g (band [%g, %g]) via "
                    "e=%d p=%d n=%d k=%d n'=%d k'=%d t=%d\n",
                    c.gamma, c.scheme, p, c.lo, c.hi, tp.e, tp.p, tp.n, tp.k, tp.n_prime,
                    tp.k_prime, tp.t);
        if (!note(p >= c.lo && p <= c.hi, "gamma=%.1f variant %d: %.6g outside [%g, %g]",
                  c.gamma, c.scheme, p, c.lo, c.hi))
            ok = false;
    }
    return ok;
}

// ---------------------------------------------------------------- 8
// Ordering of optimized mean latencies across privacy levels and
// variants over the channel-price grid, 10^4 trials.
bool criterion8() {
    const std::size_t trials = 10000;
    SystemConfig sys;
    SetupBank bank(sys.seed, sys.e_max, sys.eta);
    int threads = worker_threads();
    bool ok = true;
    for (int g = 0; g <= 5; ++g) {
        SystemConfig run = sys;
        run.gamma = double(g);

        std::vector<TupleResult> s1_by_z;
        for (int z = 1; z <= 4; ++z) {
            SearchSpace sp;
            sp.scheme = 1;
            sp.z = z;
            s1_by_z.push_back(optimize(sp, run, trials, bank, threads).best);
        }
        for (int z = 1; z < 4; ++z)
            if (!note(s1_by_z[std::size_t(z - 1)].mean <= s1_by_z[std::size_t(z)].mean,
                      "gamma=%d: variant-1 mean decreases from z=%d (%.1f) to z=%d (%.1f)", g, z,
                      s1_by_z[std::size_t(z - 1)].mean, z + 1, s1_by_z[std::size_t(z)].mean))
                ok = false;

        SearchSpace sp2;
        sp2.scheme = 2;
        sp2.z = 1;
        TupleResult s2 = optimize(sp2, run, trials, bank, threads).best;
        const TupleResult& s1 = s1_by_z[0];
        std::printf("  gamma=%d: variant1 %.1f, variant2 %.1f\n", g, s1.mean, s2.mean);
        if (!note(s2.mean <= s1.mean + 2 * s1.se,
                  "gamma=%d: variant-2 mean %.1f above variant-1 %.1f + 2se", g, s2.mean,
                  s1.mean))
            ok = false;

        if (g <= 1) {
            SearchSpace sp3;
            sp3.scheme = 3;
            sp3.z = 1;
            TupleResult s3 = optimize(sp3, run, trials, bank, threads).best;
            std::printf("  gamma=%d: variant3 %.1f\n", g, s3.mean);
            if (!note(s3.mean <= s2.mean + 2 * s2.se,
                      "gamma=%d: variant-3 mean %.1f above variant-2 %.1f + 2se", g, s3.mean,
                      s2.mean))
                ok = false;
        }
    }
    return ok;
}

// ---------------------------------------------------------------- 9
// The nonprivate reference pays at least 10x the decode latency of the
// best coded-network tuple at the default operating point.
bool criterion9() {
    SystemConfig sys; // gamma = 1
    SetupBank bank(sys.seed, sys.e_max, sys.eta);
    int threads = worker_threads();

    BaselinePlan bplan = make_baseline_plan(sys, sys.e_max, 0, 0, 1, false);
    bank.ensure(1);
    double base_decode = baseline_trial(bplan, sys, bank.row(0)).decode_time;

    SearchSpace sp;
    sp.scheme = 3;
    sp.z = 1;
    const std::size_t trials = 2000;
    OptimizationResult res = optimize(sp, sys, trials, bank, threads);
    AssignmentPlan plan = plan_for_tuple(res.best.tuple);
    double dec = 0;
    for (std::size_t i = 0; i < trials; ++i)
        dec += tuple_trial(res.best.tuple, plan, sys, bank.row(i)).decode_time;
    dec /= double(trials);
    std::printf("  reference decode %.1f vs coded-network decode %.2f (ratio %.1f)\n",
                base_decode, dec, base_decode / dec);
    return note(base_decode >= 10.0 * dec, "decode ratio %.2f below 10", base_decode / dec);
}

// ---------------------------------------------------------------- 10
// Reruns with identical seed and configuration produce byte-identical
// CSV for every command family.
bool criterion10() {
    auto slurp = [](const char* path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    struct Cmd {
        const char* name;
        std::vector<std::string> args;
    };
    std::vector<Cmd> cmds = {
        {"simulate",
         {"simulate", "--set", "e=4", "--set", "p=2", "--set", "n=4", "--scheme", "2", "--z",
          "1", "--trials", "200", "--seed", "7"}},
        {"optimize", {"optimize", "--set", "e_max=4", "--scheme", "1", "--z", "1", "--trials",
                      "100", "--seed", "3"}},
        {"sweep",
         {"sweep", "--gamma-grid", "0,1", "--scheme", "1", "--z", "1", "--trials", "60"}},
    };
    bool ok = true;
    for (const Cmd& c : cmds) {
        std::string fa = std::string("acc10_") + c.name + "_a.csv";
        std::string fb = std::string("acc10_") + c.name + "_b.csv";
        std::vector<std::string> a = c.args, b = c.args;
        a.insert(a.end(), {"-o", fa});
        b.insert(b.end(), {"-o", fb});
        int ra = run_cli(a), rb = run_cli(b);
        if (!note(ra == 0 && rb == 0, "%s exited %d/%d", c.name, ra, rb)) {
            ok = false;
            continue;
        }
        std::string ca = slurp(fa.c_str()), cb = slurp(fb.c_str());
        if (!note(!ca.empty() && ca == cb, "%s reruns differ", c.name)) ok = false;
        std::remove(fa.c_str());
        std::remove(fb.c_str());
    }
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > 10) {
            std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
            return 2;
        }
    }

    struct Entry {
        int num;
        const char* what;
        bool (*fn)();
    };
    const Entry entries[] = {
        {1, "exact recovery from every sufficient share subset", criterion1},
        {2, "sub-threshold share distributions are secret-independent", criterion2},
        {3, "full-grid share coverage", criterion3},
        {4, "pinned five-node assignment tables", criterion4},
        {5, "closed form matches event replay on 1000 random configs", criterion5},
        {6, "six-cell product-array pattern peels to full recovery", criterion6},
        {7, "deadline exceedance probabilities in quoted bands", criterion7},
        {8, "latency orderings across privacy levels and variants", criterion8},
        {9, "reference decode at least 10x the coded-network decode", criterion9},
        {10, "byte-identical CSV on seeded reruns", criterion10},
    };

    bool all_ok = true;
    for (const Entry& e : entries) {
        if (only && e.num != only) continue;
        bool ok = e.fn();
        std::printf("criterion %d %s (%s)\n", e.num, ok ? "PASS" : "FAIL", e.what);
        std::fflush(stdout);
        if (!ok) all_ok = false;
    }
    return all_ok ? 0 : 1;
}
