#include "pec/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "pec/errors.hpp"
#include "pec/reed_solomon.hpp"

namespace pec {

namespace {

// Event kinds in tie-break order at equal times: share arrivals (trace
// only), nodes waking up for an arrived share, finished computations, the
// upload-phase end opening the channel, download completions. Within a
// kind, smaller node then smaller payload wins.
constexpr int kArrival = 0;
constexpr int kEnBegins = 1;
constexpr int kIrComputed = 2;
constexpr int kUploadEnd = 3;
constexpr int kDownloadDone = 4;

struct Ev {
    double t;
    std::uint32_t key; // kind << 27 | en << 20 | payload
};

inline std::uint32_t ev_key(int kind, int en, int payload) {
    return (std::uint32_t(kind) << 27) | (std::uint32_t(en) << 20) | std::uint32_t(payload);
}

inline bool ev_after(const Ev& x, const Ev& y) {
    if (x.t != y.t) return x.t > y.t;
    return x.key > y.key;
}

struct EvHeap {
    std::vector<Ev> v;
    void clear() { v.clear(); }
    bool empty() const { return v.empty(); }
    void push(double t, int kind, int en, int payload) {
        v.push_back({t, ev_key(kind, en, payload)});
        std::push_heap(v.begin(), v.end(), ev_after);
    }
    Ev pop() {
        std::pop_heap(v.begin(), v.end(), ev_after);
        Ev e = v.back();
        v.pop_back();
        return e;
    }
};

// Reused across trials on the same thread so the hot loop never allocates.
struct Scratch {
    EvHeap heap;
    std::vector<int> mult;        // per cell: queue multiplicity
    std::vector<std::uint8_t> st; // per cell: 0 absent, 1 queued, 2 started, 3 downloaded
    std::vector<int> queued;      // cell ids waiting for the channel
    std::vector<int> next_slot;   // per node
    std::vector<int> distinct;    // per block, distinct downloaded share indices
    std::vector<std::uint8_t> known, row_filled, col_filled, dl;
    std::vector<int> row_cnt, col_cnt, stack;
    std::vector<int> rho, count, dist, rho_row;
};

thread_local Scratch tls;

void logf(EventLog* log, const char* fmt, ...) {
    if (!log) return;
    char buf[160];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    log->emplace_back(buf);
}

void log_arrivals(EvHeap& heap, const AssignmentPlan& plan, double gamma, int r) {
    for (int j = 1; j <= plan.e; ++j)
        for (int hp = 1; hp <= int(plan.en_shares[j - 1].size()); ++hp)
            heap.push(upload_arrival(j, hp, gamma, r, plan.e), kArrival, j, hp - 1);
}

void check_common(const AssignmentPlan& plan, int k) {
    if (plan.e > 127) throw InvalidParams("engine: at most 127 nodes");
    if (k < 1 || k > plan.n) throw InvalidParams("engine: need 1 <= k <= n");
}

TrialOutcome queue_run(const AssignmentPlan& plan, int k, int k_prime, const SystemConfig& cfg,
                       const double* lambda_abs, EventLog* log, TrialDetail* detail) {
    check_common(plan, k);
    const int e = plan.e, p = plan.p, a = plan.a, n = plan.n, nb = plan.n_blocks;
    if (k_prime < 0 || k_prime > nb)
        throw InvalidParams("engine: need 1 <= k_prime <= block count");
    const int cells = nb * n;
    const int u = cfg.effective_u(e);
    const double rows = double(cfg.m) / (k_prime == 0 ? nb : k_prime);
    const double work = rows; // one intermediate result = `rows` inner products
    const double u_end = cfg.gamma * cfg.r * double(e) * a;

    Scratch& s = tls;
    s.heap.clear();
    s.mult.assign(cells, 0);
    s.st.assign(cells, 0);
    s.queued.clear();
    s.next_slot.assign(e, 0);
    int pending_blocks = nb; // uncoded termination
    int known_count = 0;     // coded termination
    if (k_prime == 0) {
        s.distinct.assign(nb, 0);
    } else {
        s.known.assign(cells, 0);
        s.dl.assign(cells, 0);
        s.row_filled.assign(nb, 0);
        s.col_filled.assign(n, 0);
        s.row_cnt.assign(nb, 0);
        s.col_cnt.assign(n, 0);
        s.stack.clear();
    }

    bool in_flight = false;
    bool done = false;
    double last_ir = 0, dl_end = 0;

    auto cell_of = [&](int j, int slot) {
        int l = plan.en_blocks[j - 1][slot % p];
        int h = plan.en_shares[j - 1][slot / p];
        return (l - 1) * n + (h - 1);
    };

    // Move node j along its slot sequence from `now`: wait for the next
    // share if it has not arrived, silently skip results whose download has
    // started, otherwise begin computing.
    auto advance = [&](int j, double now) {
        int slot = s.next_slot[j - 1];
        const int lim = int(plan.en_shares[j - 1].size()) * p; // ragged plans allowed
        while (slot < lim) {
            double arr = upload_arrival(j, slot / p + 1, cfg.gamma, cfg.r, e);
            if (arr > now) {
                s.next_slot[j - 1] = slot;
                s.heap.push(arr, kEnBegins, j, slot);
                return;
            }
            int cell = cell_of(j, slot);
            if (s.st[cell] >= 2) {
                logf(log, "t=%.6f skip en=%d block=%d share=%d", now, j, cell / n + 1,
                     cell % n + 1);
                ++slot;
                continue;
            }
            s.next_slot[j - 1] = slot;
            s.heap.push(now + work, kIrComputed, j, slot);
            logf(log, "t=%.6f compute_begin en=%d block=%d share=%d", now, j, cell / n + 1,
                 cell % n + 1);
            return;
        }
        s.next_slot[j - 1] = slot;
    };

    // A queued result is worthless once its block already has k distinct
    // downloads (uncoded) or the cell is derivable from what was downloaded
    // (coded): transmitting it could only delay results still needed, and
    // the run with it would no longer beat the sequential scheme. Such
    // entries are dropped when the channel looks for work.
    auto needed = [&](int cell) {
        return k_prime == 0 ? s.distinct[cell / n] < k : !s.known[cell];
    };

    auto try_start = [&](double now) {
        if (in_flight || now < u_end || done) return;
        int bi = -1, w = 0;
        for (int i = 0; i < int(s.queued.size()); ++i) {
            int c = s.queued[i];
            if (!needed(c)) {
                logf(log, "t=%.6f drop block=%d share=%d", now, c / n + 1, c % n + 1);
                continue;
            }
            s.queued[w] = c;
            if (bi < 0) {
                bi = w;
            } else {
                int b = s.queued[bi];
                if (s.mult[c] > s.mult[b] || (s.mult[c] == s.mult[b] && c < b)) bi = w;
            }
            ++w;
        }
        s.queued.resize(w);
        if (bi < 0) {
            logf(log, "t=%.6f channel_idle", now);
            return;
        }
        int cell = s.queued[bi];
        s.queued[bi] = s.queued.back();
        s.queued.pop_back();
        s.st[cell] = 2;
        int speedup = std::min(s.mult[cell], u);
        double dur = cfg.gamma * rows / speedup;
        in_flight = true;
        s.heap.push(now + dur, kDownloadDone, 0, cell);
        logf(log, "t=%.6f download_begin block=%d share=%d mult=%d speedup=%d dur=%.6f", now,
             cell / n + 1, cell % n + 1, s.mult[cell], speedup, dur);
    };

    // Coded termination bookkeeping: incremental peeling fixpoint. Columns
    // are filled whenever k_prime entries are known; re-marking known cells
    // is a no-op, so the missing "has erasures" restriction cannot change
    // the fixpoint.
    auto peel_add = [&](int cell0) {
        auto mark = [&](int c) {
            if (s.known[c]) return;
            s.known[c] = 1;
            ++known_count;
            ++s.row_cnt[c / n];
            ++s.col_cnt[c % n];
            s.stack.push_back(c);
        };
        mark(cell0);
        while (!s.stack.empty()) {
            int c = s.stack.back();
            s.stack.pop_back();
            int l = c / n, h = c % n;
            if (!s.row_filled[l] && s.row_cnt[l] >= k) {
                s.row_filled[l] = 1;
                for (int x = 0; x < n; ++x) mark(l * n + x);
            }
            if (!s.col_filled[h] && s.col_cnt[h] >= k_prime) {
                s.col_filled[h] = 1;
                for (int y = 0; y < nb; ++y) mark(y * n + h);
            }
        }
    };

    if (log) log_arrivals(s.heap, plan, cfg.gamma, cfg.r);
    s.heap.push(u_end, kUploadEnd, 0, 0);
    for (int j = 1; j <= e; ++j) {
        if (plan.en_shares[j - 1].empty()) continue;
        double tb = lambda_abs[j - 1] / cfg.tau + upload_arrival(j, 1, cfg.gamma, cfg.r, e);
        s.heap.push(tb, kEnBegins, j, 0);
    }

    while (!s.heap.empty()) {
        Ev ev = s.heap.pop();
        const double now = ev.t;
        const int kind = int(ev.key >> 27);
        const int en = int((ev.key >> 20) & 0x7f);
        const int payload = int(ev.key & 0xfffff);
        switch (kind) {
        case kArrival:
            logf(log, "t=%.6f arrival en=%d slot=%d share=%d", now, en, payload + 1,
                 plan.en_shares[en - 1][payload]);
            break;
        case kUploadEnd:
            logf(log, "t=%.6f upload_phase_end", now);
            try_start(now);
            break;
        case kIrComputed: {
            int cell = cell_of(en, payload);
            last_ir = now;
            if (s.st[cell] == 0) {
                s.st[cell] = 1;
                s.mult[cell] = 1;
                s.queued.push_back(cell);
            } else if (s.st[cell] == 1) {
                ++s.mult[cell];
            }
            logf(log, "t=%.6f ir_computed en=%d block=%d share=%d mult=%d", now, en,
                 cell / n + 1, cell % n + 1, s.st[cell] == 1 ? s.mult[cell] : 0);
            try_start(now);
            s.next_slot[en - 1] = payload + 1;
            advance(en, now);
            break;
        }
        case kEnBegins:
            advance(en, now);
            break;
        case kDownloadDone: {
            int cell = payload;
            in_flight = false;
            s.st[cell] = 3;
            if (detail) detail->downloaded_cells.push_back(cell);
            logf(log, "t=%.6f download_done block=%d share=%d", now, cell / n + 1, cell % n + 1);
            if (k_prime == 0) {
                if (++s.distinct[cell / n] == k && --pending_blocks == 0) done = true;
            } else {
                s.dl[cell] = 1;
                peel_add(cell);
                if (known_count == cells) done = true;
            }
            if (done) {
                dl_end = now;
            } else {
                try_start(now);
            }
            break;
        }
        }
        if (done) break;
    }
    if (!done) throw Deadlock();

    TrialOutcome out;
    out.upload_end = u_end;
    out.compute_end = last_ir;
    out.download_end = dl_end;
    if (k_prime == 0) {
        out.decode_time = decode_latency(n, k, cfg.m, cfg.r, cfg.delta);
    } else {
        PeelCounts pc = count_peel_events(nb, n, k, k_prime, s.dl);
        if (!pc.recovered) throw Error("engine: downloaded pattern does not peel");
        double per_op = cfg.delta / (2.0 * cfg.r - 1.0) * rows;
        out.decode_time = per_op * (pc.row_events * decoding_cost_ops(n, k) +
                                    pc.col_events * decoding_cost_ops(nb, k_prime));
        logf(log, "decode row_events=%d col_events=%d", pc.row_events, pc.col_events);
        if (detail) detail->decode_events = peel_pattern(nb, n, k, k_prime, s.dl).events;
    }
    out.total = out.download_end + out.decode_time;
    logf(log, "t=%.6f terminated compute_end=%.6f download_end=%.6f decode=%.6f total=%.6f",
         dl_end, out.compute_end, out.download_end, out.decode_time, out.total);
    return out;
}

} // namespace

PeelCounts count_peel_events(int nprime, int n, int k, int kprime,
                             const std::vector<std::uint8_t>& known) {
    if (int(known.size()) != nprime * n) throw DimensionMismatch("count_peel_events: bad size");
    thread_local std::vector<std::uint8_t> kn, rdone, cdone;
    thread_local std::vector<int> rc, cc;
    kn = known;
    rdone.assign(nprime, 0);
    cdone.assign(n, 0);
    rc.assign(nprime, 0);
    cc.assign(n, 0);
    for (int l = 0; l < nprime; ++l)
        for (int h = 0; h < n; ++h)
            if (kn[l * n + h]) {
                ++rc[l];
                ++cc[h];
            }

    PeelCounts out;
    bool progress = true;
    while (progress) {
        progress = false;
        for (int l = 0; l < nprime; ++l) {
            if (rdone[l] || rc[l] < k) continue;
            rdone[l] = 1;
            ++out.row_events;
            for (int h = 0; h < n; ++h)
                if (!kn[l * n + h]) {
                    kn[l * n + h] = 1;
                    ++rc[l];
                    ++cc[h];
                }
            progress = true;
        }
        for (int h = 0; h < n; ++h) {
            if (cdone[h] || cc[h] < kprime || cc[h] == nprime) continue;
            cdone[h] = 1;
            ++out.col_events;
            for (int l = 0; l < nprime; ++l)
                if (!kn[l * n + h]) {
                    kn[l * n + h] = 1;
                    ++rc[l];
                    ++cc[h];
                }
            progress = true;
        }
    }
    out.recovered = std::all_of(kn.begin(), kn.end(), [](std::uint8_t v) { return v != 0; });
    return out;
}

TrialOutcome scheme2_trial(const AssignmentPlan& plan, int k, const SystemConfig& cfg,
                           const double* lambda_abs) {
    return queue_run(plan, k, 0, cfg, lambda_abs, nullptr, nullptr);
}

TrialOutcome scheme3_trial(const AssignmentPlan& plan, int k, int k_prime,
                           const SystemConfig& cfg, const double* lambda_abs) {
    if (k_prime < 1) throw InvalidParams("engine: need k_prime >= 1");
    return queue_run(plan, k, k_prime, cfg, lambda_abs, nullptr, nullptr);
}

TrialOutcome run_scheme2(const AssignmentPlan& plan, int k, const SystemConfig& cfg,
                         const SetupTimes& setup, EventLog* log, TrialDetail* detail) {
    if (int(setup.lambda.size()) != plan.e) throw DimensionMismatch("run_scheme2: setup size");
    return queue_run(plan, k, 0, cfg, setup.lambda.data(), log, detail);
}

TrialOutcome run_scheme3(const AssignmentPlan& plan, int k, int k_prime, const SystemConfig& cfg,
                         const SetupTimes& setup, EventLog* log, TrialDetail* detail) {
    if (int(setup.lambda.size()) != plan.e) throw DimensionMismatch("run_scheme3: setup size");
    if (k_prime < 1) throw InvalidParams("engine: need k_prime >= 1");
    return queue_run(plan, k, k_prime, cfg, setup.lambda.data(), log, detail);
}

TrialOutcome replay_scheme1(const AssignmentPlan& plan, int k, int t, const SystemConfig& cfg,
                            const SetupTimes& setup, EventLog* log) {
    check_common(plan, k);
    if (int(setup.lambda.size()) != plan.e) throw DimensionMismatch("replay_scheme1: setup size");
    const int e = plan.e, p = plan.p, a = plan.a, n = plan.n, nb = plan.n_blocks;
    if (t < 1) throw InvalidParams("scheme1: need t >= 1");
    if (t > a * p) throw InfeasibleT();
    const double work = double(cfg.m) / nb;

    Scratch& s = tls;
    s.heap.clear();
    s.rho.assign(std::size_t(nb) * n, 0);
    s.count.assign(nb, 0);
    s.dist.assign(nb, 0);

    if (log) log_arrivals(s.heap, plan, cfg.gamma, cfg.r);
    // begin[j-1] is when node j started its current share's work, so the
    // l-th result of that share lands at begin + l*work, bitwise the same
    // arithmetic as the closed form.
    double begin[128];
    for (int j = 1; j <= e; ++j) {
        if (plan.en_shares[j - 1].empty()) continue;
        begin[j - 1] = setup.lambda[j - 1] / cfg.tau + upload_arrival(j, 1, cfg.gamma, cfg.r, e);
        s.heap.push(begin[j - 1] + work, kIrComputed, j, 0);
    }

    int satisfied = 0;
    double stop_time = -1;
    auto block_ok = [&](int l0) { return s.count[l0] >= t && s.dist[l0] >= k; };

    while (!s.heap.empty()) {
        Ev ev = s.heap.pop();
        const int kind = int(ev.key >> 27);
        const int j = int((ev.key >> 20) & 0x7f);
        const int slot = int(ev.key & 0xfffff);
        if (kind == kArrival) {
            logf(log, "t=%.6f arrival en=%d slot=%d share=%d", ev.t, j, slot + 1,
                 plan.en_shares[j - 1][slot]);
            continue;
        }
        const int l = plan.en_blocks[j - 1][slot % p];
        const int h = plan.en_shares[j - 1][slot / p];
        logf(log, "t=%.6f ir_computed en=%d block=%d share=%d", ev.t, j, l, h);

        if (stop_time < 0) {
            bool was_ok = block_ok(l - 1);
            ++s.count[l - 1];
            if (s.rho[std::size_t(l - 1) * n + (h - 1)]++ == 0) ++s.dist[l - 1];
            if (!was_ok && block_ok(l - 1)) ++satisfied;
            if (satisfied == nb) stop_time = ev.t;
        } else if (ev.t <= stop_time) {
            ++s.rho[std::size_t(l - 1) * n + (h - 1)];
        } else {
            break;
        }

        // Chain the node's next result.
        int next = slot + 1;
        if (next < int(plan.en_shares[j - 1].size()) * p) {
            if (next % p == 0) {
                int hp = next / p;
                double arr = upload_arrival(j, hp + 1, cfg.gamma, cfg.r, e);
                begin[j - 1] = std::max(begin[j - 1] + double(p) * work, arr);
                s.heap.push(begin[j - 1] + work, kIrComputed, j, next);
            } else {
                s.heap.push(begin[j - 1] + (next % p + 1) * work, kIrComputed, j, next);
            }
        }
    }
    if (stop_time < 0) throw InfeasibleT();

    TrialOutcome out;
    out.upload_end = cfg.gamma * cfg.r * double(e) * a;
    out.compute_end = stop_time;
    double down = 0;
    std::vector<int>& rho_row = s.rho_row;
    rho_row.assign(n, 0);
    for (int l = 1; l <= nb; ++l) {
        for (int h = 1; h <= n; ++h) rho_row[h - 1] = s.rho[std::size_t(l - 1) * n + (h - 1)];
        std::vector<int> chosen = select_top_k(rho_row, k);
        for (int h : chosen) {
            double dur = cfg.gamma * work / std::min(rho_row[h - 1], cfg.effective_u(e));
            logf(log, "download block=%d share=%d mult=%d dur=%.6f", l, h, rho_row[h - 1], dur);
            down += dur;
        }
    }
    out.download_end = out.compute_end + down;
    out.decode_time = decode_latency(n, k, cfg.m, cfg.r, cfg.delta);
    out.total = out.download_end + out.decode_time;
    logf(log, "t=%.6f terminated compute_end=%.6f download_end=%.6f decode=%.6f total=%.6f",
         out.download_end, out.compute_end, out.download_end, out.decode_time, out.total);
    return out;
}

} // namespace pec
