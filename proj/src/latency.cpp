#include "pec/latency.hpp"

#include <algorithm>
#include <cmath>

#include "pec/reed_solomon.hpp"

namespace pec {

SetupTimes sample_setup_times(int e, double eta, Rng& rng) {
    SetupTimes s;
    s.lambda.resize(e);
    for (double& l : s.lambda) l = rng.exponential(eta);
    return s;
}

double upload_arrival(int j, int h_prime, double gamma, int r, int e) {
    return gamma * r * (double(e) * (h_prime - 1) + j);
}

std::vector<double> compute_start_times(int e, int a, double per_share_work, double gamma,
                                        int r, const std::vector<double>& lambda_norm) {
    std::vector<double> start(std::size_t(e) * a);
    for (int j = 1; j <= e; ++j) {
        double prev = lambda_norm[j - 1] + upload_arrival(j, 1, gamma, r, e);
        start[std::size_t(j - 1) * a] = prev;
        for (int h = 2; h <= a; ++h) {
            double arrival = upload_arrival(j, h, gamma, r, e);
            prev = std::max(prev + per_share_work, arrival);
            start[std::size_t(j - 1) * a + (h - 1)] = prev;
        }
    }
    return start;
}

std::vector<int> select_top_k(const std::vector<int>& rho_by_h, int k) {
    std::vector<int> order;
    for (int h = 1; h <= int(rho_by_h.size()); ++h)
        if (rho_by_h[h - 1] > 0) order.push_back(h);
    if (int(order.size()) < k) throw InvalidParams("select_top_k: fewer candidates than k");
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return rho_by_h[x - 1] > rho_by_h[y - 1]; });
    order.resize(k);
    return order;
}

double download_latency(const std::vector<int>& rhos, double gamma, double block_rows, int u) {
    double sum = 0;
    for (int rho : rhos) {
        if (rho < 1) throw InvalidParams("download_latency: multiplicities must be >= 1");
        sum += gamma * block_rows / std::min(rho, u);
    }
    return sum;
}

double decode_latency(int n, int k, int m, int r, double delta) {
    if (n == 1) return 0; // a single plaintext share needs no decoding
    return delta / (2.0 * r - 1.0) * m * decoding_cost_ops(n, k);
}

namespace {

struct CompletionEvent {
    double time;
    int j;    // node
    int slot; // position in the node's processing order, 0-based
};

// Per-thread buffers so Monte Carlo loops run without heap traffic.
struct Scheme1Scratch {
    std::vector<double> start;
    std::vector<CompletionEvent> events;
    std::vector<int> rho, count, distinct, order;
};

thread_local Scheme1Scratch s1s;

} // namespace

namespace {

// Fill s.events with the sorted completion times of every slot; slot s of
// node j is block s%p of share s/p.
void build_completion_events(const AssignmentPlan& plan, const SystemConfig& cfg,
                             const double* lambda_abs, Scheme1Scratch& s) {
    const int e = plan.e, p = plan.p, a = plan.a;
    const double work = double(cfg.m) / plan.n_blocks;

    s.start.resize(std::size_t(e) * a);
    s.events.clear();
    for (int j = 1; j <= e; ++j) {
        const int aj = int(plan.en_shares[j - 1].size()); // <= a; ragged plans allowed
        if (aj == 0) continue;
        double prev = lambda_abs[j - 1] / cfg.tau + upload_arrival(j, 1, cfg.gamma, cfg.r, e);
        s.start[std::size_t(j - 1) * a] = prev;
        for (int h = 2; h <= aj; ++h) {
            double arrival = upload_arrival(j, h, cfg.gamma, cfg.r, e);
            prev = std::max(prev + double(p) * work, arrival);
            s.start[std::size_t(j - 1) * a + (h - 1)] = prev;
        }
        for (int h = 0; h < aj; ++h)
            for (int l = 1; l <= p; ++l)
                s.events.push_back(
                    {s.start[std::size_t(j - 1) * a + h] + l * work, j, h * p + (l - 1)});
    }
    std::sort(s.events.begin(), s.events.end(),
              [](const CompletionEvent& x, const CompletionEvent& y) {
                  if (x.time != y.time) return x.time < y.time;
                  if (x.j != y.j) return x.j < y.j;
                  return x.slot < y.slot;
              });
}

// Finish one t value against the prepared events: sweep to the stopping
// instant, then price the downloads and the decode.
TrialOutcome finish_for_t(const AssignmentPlan& plan, int k, int t, const SystemConfig& cfg,
                          Scheme1Scratch& s) {
    const int p = plan.p, n = plan.n, n_blocks = plan.n_blocks;
    const double work = double(cfg.m) / n_blocks;

    // Sweep until every block has t results and k distinct share indices.
    // Results landing at exactly the stop instant still count toward the
    // multiplicities used by the download phase.
    s.rho.assign(std::size_t(n_blocks) * n, 0);
    s.count.assign(n_blocks, 0);
    s.distinct.assign(n_blocks, 0);
    int satisfied = 0;
    auto block_ok = [&](int l) { return s.count[l - 1] >= t && s.distinct[l - 1] >= k; };

    double stop_time = -1;
    std::size_t idx = 0;
    for (; idx < s.events.size(); ++idx) {
        const auto& ev = s.events[idx];
        int l = plan.en_blocks[ev.j - 1][ev.slot % p];
        int h = plan.en_shares[ev.j - 1][ev.slot / p];
        bool was_ok = block_ok(l);
        ++s.count[l - 1];
        if (s.rho[std::size_t(l - 1) * n + (h - 1)]++ == 0) ++s.distinct[l - 1];
        if (!was_ok && block_ok(l)) ++satisfied;
        if (satisfied == n_blocks) {
            stop_time = ev.time;
            break;
        }
    }
    if (stop_time < 0) throw InfeasibleT();
    for (++idx; idx < s.events.size() && s.events[idx].time <= stop_time; ++idx) {
        const auto& ev = s.events[idx];
        int l = plan.en_blocks[ev.j - 1][ev.slot % p];
        int h = plan.en_shares[ev.j - 1][ev.slot / p];
        ++s.rho[std::size_t(l - 1) * n + (h - 1)];
    }

    TrialOutcome out;
    out.upload_end = cfg.gamma * cfg.r * double(plan.e) * plan.a;
    out.compute_end = stop_time;

    // Download the k best-replicated results per block; selection sort of
    // the top k with ties toward the smaller share index.
    const int u = cfg.effective_u(plan.e);
    double down = 0;
    for (int l = 0; l < n_blocks; ++l) {
        const int* row = s.rho.data() + std::size_t(l) * n;
        s.order.clear();
        for (int h = 0; h < n; ++h)
            if (row[h] > 0) s.order.push_back(h);
        if (int(s.order.size()) < k) throw InvalidParams("scheme1: fewer candidates than k");
        for (int i = 0; i < k; ++i) {
            int bi = i;
            for (int x = i + 1; x < int(s.order.size()); ++x) {
                int cx = s.order[x], cb = s.order[bi];
                if (row[cx] > row[cb] || (row[cx] == row[cb] && cx < cb)) bi = x;
            }
            std::swap(s.order[i], s.order[bi]);
            down += cfg.gamma * work / std::min(row[s.order[i]], u);
        }
    }
    out.download_end = out.compute_end + down;
    out.decode_time = decode_latency(n, k, cfg.m, cfg.r, cfg.delta);
    out.total = out.download_end + out.decode_time;
    return out;
}

void check_scheme1_params(const AssignmentPlan& plan, int k, int t) {
    if (k < 1 || k > plan.n) throw InvalidParams("scheme1: need 1 <= k <= n");
    if (t < 1) throw InvalidParams("scheme1: need t >= 1");
    if (t > plan.a * plan.p) throw InfeasibleT();
}

} // namespace

TrialOutcome scheme1_trial(const AssignmentPlan& plan, int k, int t, const SystemConfig& cfg,
                           const double* lambda_abs) {
    check_scheme1_params(plan, k, t);
    Scheme1Scratch& s = s1s;
    build_completion_events(plan, cfg, lambda_abs, s);
    return finish_for_t(plan, k, t, cfg, s);
}

void scheme1_trial_multi_t(const AssignmentPlan& plan, int k, const int* ts, int count,
                           const SystemConfig& cfg, const double* lambda_abs, double* totals) {
    for (int i = 0; i < count; ++i) check_scheme1_params(plan, k, ts[i]);
    Scheme1Scratch& s = s1s;
    build_completion_events(plan, cfg, lambda_abs, s);
    for (int i = 0; i < count; ++i) totals[i] = finish_for_t(plan, k, ts[i], cfg, s).total;
}

TrialOutcome scheme1_total_latency(const AssignmentPlan& plan, int k, int t,
                                   const SystemConfig& cfg, const SetupTimes& setup) {
    if (int(setup.lambda.size()) != plan.e)
        throw DimensionMismatch("scheme1_total_latency: setup size");
    return scheme1_trial(plan, k, t, cfg, setup.lambda.data());
}

} // namespace pec
