#pragma once

#include <cstdint>
#include <vector>

#include "pec/latency.hpp"

namespace pec {

// Nonprivate comparison scheme: the network matrix itself is MDS-coded into
// n_c rows of which any k_c recover it, each coded row replicated
// `replication` times and dealt round-robin over the e nodes. Kept for
// comparative runs only; the layout is a documented reconstruction.
struct BaselinePlan {
    int e = 0;
    int n_c = 0;         // coded rows
    int k_c = 0;         // rows needed to decode (the matrix height m)
    int replication = 1; // copies per coded row
    bool upload_log2 = false;
    std::vector<std::vector<int>> node_rows; // coded row ids per node, compute order
};

// Defaults: k_c = m, n_c = floor(mu*m*e / replication), copies of row i on
// nodes (i-1)*R+c mod e. Throws InfeasibleConfig when the code or the
// per-node storage cannot fit.
BaselinePlan make_baseline_plan(const SystemConfig& cfg, int e, int n_c = 0, int k_c = 0,
                                int replication = 1, bool upload_log2 = false);

// Broadcast cost of the user vector: gamma * r * ln(e), or log2 when the
// plan says so.
double baseline_upload_latency(double gamma, int r, int e, bool log2_base = false);

// One run: broadcast upload, nodes compute their stored rows sequentially
// after setup, rows are downloaded in descending replication multiplicity
// until k_c distinct rows are delivered, then one long-code decode.
TrialOutcome baseline_total_latency(const BaselinePlan& plan, const SystemConfig& cfg,
                                    const SetupTimes& setup);

// Raw-pointer variant for Monte Carlo loops (e absolute setup times).
TrialOutcome baseline_trial(const BaselinePlan& plan, const SystemConfig& cfg,
                            const double* lambda_abs);

} // namespace pec
