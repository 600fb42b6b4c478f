#include "pec/optimizer.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>

#include "pec/engine.hpp"
#include "pec/errors.hpp"
#include "pec/rng.hpp"

namespace pec {

namespace {

void check_space(const SearchSpace& space, const SystemConfig& cfg) {
    if (space.scheme < 1 || space.scheme > 3)
        throw InvalidParams("search space: scheme must be 1, 2, or 3");
    if (space.z < 1) throw InvalidParams("search space: z must be >= 1");
    if (cfg.e_max < 2) throw InvalidParams("search space: e_max must be >= 2");
}

// known[(l-1)*n + (h-1)] = 1 iff some node can compute cell (l,h).
std::vector<std::uint8_t> full_computation_pattern(const AssignmentPlan& plan) {
    std::vector<std::uint8_t> known(std::size_t(plan.n_blocks) * plan.n, 0);
    for (int j = 0; j < plan.e; ++j)
        for (int l : plan.en_blocks[j])
            for (int h : plan.en_shares[j]) known[std::size_t(l - 1) * plan.n + (h - 1)] = 1;
    return known;
}

} // namespace

std::vector<PrivateCodingScheme> enumerate_feasible(const SearchSpace& space,
                                                    const SystemConfig& cfg) {
    check_space(space, cfg);
    std::vector<PrivateCodingScheme> out;

    if (space.scheme == 1 || space.scheme == 2) {
        for (int e = 2; e <= cfg.e_max; ++e) {
            int p_max = int(storage_floor(cfg.mu, e));
            for (int p = 1; p <= p_max; ++p) {
                for (int n = 2; n <= e; ++n) {
                    AssignmentPlan plan = build_plan_uncoded(e, p, n, default_generator(e));
                    // plan.a is the largest per-node share count, so k covers
                    // the worst-case collusion even when columns are ragged.
                    int k = plan.a * space.z + 1;
                    if (k > n) continue;
                    if (!coverage_check(plan)) continue;
                    PrivateCodingScheme base{space.scheme, e, p, n, k, 0, 0, 0};
                    if (space.scheme == 1) {
                        // t can demand at most as many computed results as the
                        // thinnest block can ever produce (a*p when every node
                        // holds a shares, less when columns are ragged).
                        int t_max = plan.a * p;
                        for (int l = 1; l <= plan.n_blocks; ++l) {
                            int cnt = 0;
                            for (int j = 0; j < plan.e; ++j) {
                                for (int b : plan.en_blocks[j])
                                    if (b == l) cnt += int(plan.en_shares[j].size());
                            }
                            t_max = std::min(t_max, cnt);
                        }
                        for (int t = k; t <= t_max; ++t) {
                            base.t = t;
                            out.push_back(base);
                        }
                    } else {
                        out.push_back(base);
                    }
                }
            }
        }
    } else {
        for (int e = 2; e <= cfg.e_max; ++e) {
            int n_cap = space.v3_n_max > 0 ? space.v3_n_max : e + 2;
            for (int kp = 1; kp <= e; ++kp) {
                int p_max = int(storage_floor(cfg.mu, kp));
                for (int p = 1; p <= p_max; ++p) {
                    int np_max = std::min(e + p, space.v3_n_prime_max);
                    for (int np = std::max(kp, p); np <= np_max; ++np) {
                        for (int n = 2; n <= n_cap; ++n) {
                            AssignmentPlan plan = build_plan_coded(e, p, n, np);
                            int k = plan.a * space.z + 1;
                            if (k > n) continue;
                            PeelCounts pc =
                                count_peel_events(np, n, k, kp, full_computation_pattern(plan));
                            if (!pc.recovered) continue;
                            out.push_back({3, e, p, n, k, 0, np, kp});
                        }
                    }
                }
            }
        }
    }
    if (out.empty()) throw EmptySpace();
    return out;
}

SetupBank::SetupBank(std::uint64_t seed, int e_max, double eta)
    : seed_(seed), e_max_(e_max), eta_(eta) {
    if (e_max < 1) throw InvalidParams("setup bank: e_max must be >= 1");
    if (!(eta > 0)) throw InvalidParams("setup bank: eta must be > 0");
}

void SetupBank::ensure(std::size_t trials) {
    if (trials <= rows_) return;
    flat_.reserve(trials * e_max_);
    for (std::size_t i = rows_; i < trials; ++i) {
        Rng rng = Rng::substream(seed_, i);
        for (int d = 0; d < e_max_; ++d) flat_.push_back(rng.exponential(eta_));
    }
    rows_ = trials;
}

AssignmentPlan plan_for_tuple(const PrivateCodingScheme& tuple) {
    if (tuple.scheme == 3) return build_plan_coded(tuple.e, tuple.p, tuple.n, tuple.n_prime);
    return build_plan_uncoded(tuple.e, tuple.p, tuple.n, default_generator(tuple.e));
}

TrialOutcome tuple_trial(const PrivateCodingScheme& tuple, const AssignmentPlan& plan,
                         const SystemConfig& cfg, const double* lambda_abs) {
    switch (tuple.scheme) {
    case 1:
        return scheme1_trial(plan, tuple.k, tuple.t, cfg, lambda_abs);
    case 2:
        return scheme2_trial(plan, tuple.k, cfg, lambda_abs);
    case 3:
        return scheme3_trial(plan, tuple.k, tuple.k_prime, cfg, lambda_abs);
    default:
        throw InvalidParams("tuple_trial: scheme must be 1, 2, or 3");
    }
}

namespace {

// Evaluation unit: one plan evaluated per trial, yielding one total per
// member tuple (variant-1 units carry every t of an (e,p,n) group).
struct Unit {
    AssignmentPlan plan;
    PrivateCodingScheme base;
    std::vector<int> ts;            // variant 1; empty otherwise
    std::size_t first_row = 0;      // index of the unit's first tuple
    std::size_t rows = 1;
};

std::vector<Unit> build_units(const std::vector<PrivateCodingScheme>& tuples) {
    std::vector<Unit> units;
    for (std::size_t i = 0; i < tuples.size();) {
        Unit u;
        u.base = tuples[i];
        u.plan = plan_for_tuple(tuples[i]);
        u.first_row = i;
        if (tuples[i].scheme == 1) {
            std::size_t j = i;
            while (j < tuples.size() && tuples[j].scheme == 1 && tuples[j].e == u.base.e &&
                   tuples[j].p == u.base.p && tuples[j].n == u.base.n && tuples[j].k == u.base.k) {
                u.ts.push_back(tuples[j].t);
                ++j;
            }
            u.rows = j - i;
            i = j;
        } else {
            ++i;
        }
        units.push_back(std::move(u));
    }
    return units;
}

// Run every unit for `trials` bank rows, handing each tuple's per-trial
// total to sink(row_index, total). Units may run on several threads; rows
// within a unit stay sequential, so any sink that only touches its own
// row's slots stays deterministic.
template <typename Sink>
void evaluate_units(std::vector<Unit>& units, const SystemConfig& cfg, std::size_t trials,
                    const SetupBank& bank, int threads, const Sink& sink) {
    std::vector<double> totals_buf;
    auto run_unit = [&](Unit& u, std::vector<double>& totals) {
        if (!u.ts.empty()) {
            totals.resize(u.ts.size());
            for (std::size_t i = 0; i < trials; ++i) {
                scheme1_trial_multi_t(u.plan, u.base.k, u.ts.data(), int(u.ts.size()), cfg,
                                      bank.row(i), totals.data());
                for (std::size_t x = 0; x < u.ts.size(); ++x) sink(u.first_row + x, totals[x]);
            }
        } else if (u.base.scheme == 2) {
            for (std::size_t i = 0; i < trials; ++i)
                sink(u.first_row, scheme2_trial(u.plan, u.base.k, cfg, bank.row(i)).total);
        } else {
            for (std::size_t i = 0; i < trials; ++i)
                sink(u.first_row,
                     scheme3_trial(u.plan, u.base.k, u.base.k_prime, cfg, bank.row(i)).total);
        }
    };

    if (threads <= 1 || units.size() <= 1) {
        for (Unit& u : units) run_unit(u, totals_buf);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        std::vector<double> totals;
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= units.size()) return;
            run_unit(units[i], totals);
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

bool tuple_before(const PrivateCodingScheme& x, const PrivateCodingScheme& y) {
    auto key = [](const PrivateCodingScheme& s) {
        return std::array<int, 6>{s.e, s.n, s.p, s.n_prime, s.k_prime, s.t};
    };
    return key(x) < key(y);
}

} // namespace

OptimizationResult optimize(const SearchSpace& space, const SystemConfig& cfg,
                            std::size_t trials, SetupBank& bank, int threads) {
    if (trials < 1) throw InvalidParams("optimize: trials must be >= 1");
    std::vector<PrivateCodingScheme> tuples = enumerate_feasible(space, cfg);
    std::vector<Unit> units = build_units(tuples);
    bank.ensure(trials);

    std::vector<double> sum(tuples.size(), 0), sumsq(tuples.size(), 0);
    evaluate_units(units, cfg, trials, bank, threads, [&](std::size_t row, double total) {
        sum[row] += total;
        sumsq[row] += total * total;
    });

    OptimizationResult res;
    res.table.resize(tuples.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        TupleResult& row = res.table[i];
        row.tuple = tuples[i];
        row.trials = trials;
        row.mean = sum[i] / double(trials);
        double var = 0;
        if (trials > 1) {
            var = (sumsq[i] - sum[i] * sum[i] / double(trials)) / double(trials - 1);
            if (var < 0) var = 0;
        }
        row.se = std::sqrt(var / double(trials));
        if (i > 0 && (row.mean < res.table[best].mean ||
                      (row.mean == res.table[best].mean &&
                       tuple_before(row.tuple, res.table[best].tuple))))
            best = i;
    }
    res.best = res.table[best];
    return res;
}

std::vector<double> deadline_profile(const PrivateCodingScheme& tuple, const SystemConfig& cfg,
                                     const std::vector<double>& deadlines, std::size_t trials,
                                     SetupBank& bank) {
    if (trials < 1) throw InvalidParams("deadline_profile: trials must be >= 1");
    bank.ensure(trials);
    AssignmentPlan plan = plan_for_tuple(tuple);
    std::vector<std::size_t> count(deadlines.size(), 0);
    for (std::size_t i = 0; i < trials; ++i) {
        double total = tuple_trial(tuple, plan, cfg, bank.row(i)).total;
        for (std::size_t d = 0; d < deadlines.size(); ++d)
            if (total > deadlines[d]) ++count[d];
    }
    std::vector<double> prob(deadlines.size());
    for (std::size_t d = 0; d < deadlines.size(); ++d)
        prob[d] = double(count[d]) / double(trials);
    return prob;
}

DeadlineResult deadline_profile_space(const SearchSpace& space, const SystemConfig& cfg,
                                      const std::vector<double>& deadlines, std::size_t trials,
                                      std::size_t stage1_trials, SetupBank& bank, int threads) {
    if (trials < 1) throw InvalidParams("deadline_profile_space: trials must be >= 1");
    DeadlineResult res;
    if (deadlines.empty()) return res;

    std::vector<PrivateCodingScheme> tuples = enumerate_feasible(space, cfg);
    std::vector<Unit> units = build_units(tuples);
    const std::size_t nd = deadlines.size();
    const std::size_t s1 = std::min(trials, std::max<std::size_t>(stage1_trials, 1));
    bank.ensure(s1);

    // Stage 1: screen every tuple.
    std::vector<std::uint64_t> count(tuples.size() * nd, 0);
    std::vector<double> sum(tuples.size(), 0);
    evaluate_units(units, cfg, s1, bank, threads, [&](std::size_t row, double total) {
        sum[row] += total;
        std::uint64_t* c = count.data() + row * nd;
        for (std::size_t d = 0; d < nd; ++d)
            if (total > deadlines[d]) ++c[d];
    });

    if (s1 == trials) {
        res.probability.resize(nd);
        res.chosen.resize(nd);
        for (std::size_t d = 0; d < nd; ++d) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < tuples.size(); ++i)
                if (count[i * nd + d] < count[best * nd + d]) best = i;
            res.probability[d] = double(count[best * nd + d]) / double(trials);
            res.chosen[d] = tuples[best];
        }
        return res;
    }

    // Stage 2: re-run the most promising candidates per deadline at full
    // resolution and keep each deadline's minimum.
    std::vector<std::size_t> cand;
    {
        std::vector<char> picked(tuples.size(), 0);
        std::vector<std::size_t> order;
        for (std::size_t d = 0; d < nd; ++d) {
            std::uint64_t best = count[d];
            for (std::size_t i = 1; i < tuples.size(); ++i)
                best = std::min(best, count[i * nd + d]);
            double thresh = double(best) + 2.0 * std::sqrt(double(best) + 1.0);
            order.clear();
            for (std::size_t i = 0; i < tuples.size(); ++i)
                if (double(count[i * nd + d]) <= thresh) order.push_back(i);
            std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                if (count[x * nd + d] != count[y * nd + d])
                    return count[x * nd + d] < count[y * nd + d];
                if (sum[x] != sum[y]) return sum[x] < sum[y];
                return x < y;
            });
            for (std::size_t i = 0; i < order.size() && i < 8; ++i) picked[order[i]] = 1;
        }
        // Keep the mean-best tuple in the running as well.
        std::size_t mean_best = 0;
        for (std::size_t i = 1; i < tuples.size(); ++i)
            if (sum[i] < sum[mean_best]) mean_best = i;
        picked[mean_best] = 1;
        for (std::size_t i = 0; i < tuples.size(); ++i)
            if (picked[i]) cand.push_back(i);
    }

    bank.ensure(trials);
    std::vector<std::uint64_t> full_count(cand.size() * nd, 0);
    {
        std::vector<PrivateCodingScheme> cand_tuples;
        cand_tuples.reserve(cand.size());
        for (std::size_t i : cand) cand_tuples.push_back(tuples[i]);
        std::vector<Unit> cand_units = build_units(cand_tuples);
        evaluate_units(cand_units, cfg, trials, bank, threads,
                       [&](std::size_t row, double total) {
                           std::uint64_t* c = full_count.data() + row * nd;
                           for (std::size_t d = 0; d < nd; ++d)
                               if (total > deadlines[d]) ++c[d];
                       });
    }

    res.probability.resize(nd);
    res.chosen.resize(nd);
    for (std::size_t d = 0; d < nd; ++d) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < cand.size(); ++i)
            if (full_count[i * nd + d] < full_count[best * nd + d]) best = i;
        res.probability[d] = double(full_count[best * nd + d]) / double(trials);
        res.chosen[d] = tuples[cand[best]];
    }
    return res;
}

} // namespace pec
