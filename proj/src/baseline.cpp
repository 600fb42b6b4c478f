#include "pec/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "pec/errors.hpp"
#include "pec/reed_solomon.hpp"

namespace pec {

BaselinePlan make_baseline_plan(const SystemConfig& cfg, int e, int n_c, int k_c,
                                int replication, bool upload_log2) {
    if (e < 2) throw InvalidParams("baseline: need e >= 2");
    if (replication < 1 || replication > e)
        throw InfeasibleConfig("baseline: replication must be in [1, e]");
    BaselinePlan plan;
    plan.e = e;
    plan.k_c = k_c > 0 ? k_c : cfg.m;
    plan.n_c = n_c > 0 ? n_c
                       : int(storage_floor(cfg.mu, (long long)cfg.m * e) / replication);
    plan.replication = replication;
    plan.upload_log2 = upload_log2;
    if (plan.n_c < plan.k_c)
        throw InfeasibleConfig("baseline: code length shorter than its dimension");

    // Deal copy c of coded row i round-robin; consecutive copies land on
    // consecutive (hence distinct) nodes.
    plan.node_rows.resize(e);
    long long total = (long long)plan.n_c * replication;
    long long per_node_cap = storage_floor(cfg.mu, cfg.m);
    for (long long idx = 0; idx < total; ++idx)
        plan.node_rows[idx % e].push_back(int(idx / replication) + 1);
    for (const auto& rows : plan.node_rows)
        if ((long long)rows.size() > per_node_cap)
            throw InfeasibleConfig("baseline: per-node storage exceeded");
    return plan;
}

double baseline_upload_latency(double gamma, int r, int e, bool log2_base) {
    if (e < 2) throw InvalidParams("baseline: need e >= 2");
    return gamma * r * (log2_base ? std::log2(double(e)) : std::log(double(e)));
}

namespace {

struct Head {
    double time;
    int node; // 0-based
    int idx;  // next row index within the node
};

struct BaselineScratch {
    std::vector<Head> heap;
    std::vector<int> got;       // per coded row, copies completed
    std::vector<int> by_mult;   // bucket counts
};

thread_local BaselineScratch bls;

bool head_after(const Head& x, const Head& y) {
    if (x.time != y.time) return x.time > y.time;
    return x.node > y.node;
}

} // namespace

TrialOutcome baseline_trial(const BaselinePlan& plan, const SystemConfig& cfg,
                            const double* lambda_abs) {
    const int e = plan.e;
    const double up = baseline_upload_latency(cfg.gamma, cfg.r, e, plan.upload_log2);

    BaselineScratch& s = bls;
    s.heap.clear();
    s.got.assign(plan.n_c, 0);

    for (int j = 0; j < e; ++j) {
        if (plan.node_rows[j].empty()) continue;
        double start = up + lambda_abs[j] / cfg.tau;
        s.heap.push_back({start + 1.0, j, 0});
    }
    std::make_heap(s.heap.begin(), s.heap.end(), head_after);

    // Merge completion streams (node j's s-th row lands at start_j + s)
    // until k_c distinct rows exist; rows finishing at exactly that instant
    // still count toward the download multiplicities.
    int distinct = 0;
    double t_comp = -1;
    while (!s.heap.empty()) {
        std::pop_heap(s.heap.begin(), s.heap.end(), head_after);
        Head h = s.heap.back();
        s.heap.pop_back();
        if (t_comp >= 0 && h.time > t_comp) break;
        if (s.got[plan.node_rows[h.node][h.idx] - 1]++ == 0) ++distinct;
        if (distinct == plan.k_c && t_comp < 0) t_comp = h.time;
        if (h.idx + 1 < int(plan.node_rows[h.node].size())) {
            double start = up + lambda_abs[h.node] / cfg.tau;
            s.heap.push_back({start + double(h.idx + 2), h.node, h.idx + 1});
            std::push_heap(s.heap.begin(), s.heap.end(), head_after);
        }
    }
    if (t_comp < 0) throw InfeasibleConfig("baseline: fewer distinct rows than the dimension");

    // Download the k_c best-replicated rows, one symbol each, highest
    // multiplicity first.
    const int u = cfg.effective_u(e);
    s.by_mult.assign(plan.replication + 1, 0);
    for (int c : s.got)
        if (c > 0) ++s.by_mult[std::min(c, plan.replication)];
    double down = 0;
    int need = plan.k_c;
    for (int rho = plan.replication; rho >= 1 && need > 0; --rho) {
        int take = std::min(need, s.by_mult[rho]);
        down += take * (cfg.gamma / std::min(rho, u));
        need -= take;
    }

    TrialOutcome out;
    out.upload_end = up;
    out.compute_end = t_comp;
    out.download_end = t_comp + down;
    out.decode_time = cfg.delta / (2.0 * cfg.r - 1.0) * decoding_cost_ops(plan.n_c, plan.k_c);
    out.total = out.download_end + out.decode_time;
    return out;
}

TrialOutcome baseline_total_latency(const BaselinePlan& plan, const SystemConfig& cfg,
                                    const SetupTimes& setup) {
    if (int(setup.lambda.size()) != plan.e)
        throw DimensionMismatch("baseline_total_latency: setup size");
    return baseline_trial(plan, cfg, setup.lambda.data());
}

} // namespace pec
