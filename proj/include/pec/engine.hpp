#pragma once

#include <string>
#include <vector>

#include "pec/latency.hpp"
#include "pec/secret_sharing.hpp"

namespace pec {

// Event log for trace runs; one human-readable line per event.
using EventLog = std::vector<std::string>;

// Optional details recorded during a run, for validation: cell ids
// (block-1)*n + (share-1) in download-completion order, and for the coded
// scheme the canonical peeling order over the downloaded pattern.
struct TrialDetail {
    std::vector<int> downloaded_cells;
    std::vector<PeelEvent> decode_events;
};

// Priority-queue download scheme, uncoded network matrix: nodes fill a
// shared queue with finished results, the channel (busy with uploads until
// gamma*r*e*a) repeatedly transmits the still-needed entry with the highest
// multiplicity (ties: smaller block, then smaller share index), dropping
// entries whose block already collected k distinct downloads. A
// transmission's speedup min(rho,u) is frozen at its start, nodes skip
// results whose download has already started, and the run ends when every
// block has k distinct share indices downloaded. Throws Deadlock if the
// nodes run dry first.
TrialOutcome run_scheme2(const AssignmentPlan& plan, int k, const SystemConfig& cfg,
                         const SetupTimes& setup, EventLog* log = nullptr,
                         TrialDetail* detail = nullptr);

// Same event semantics over a coded network matrix cut into k_prime pieces
// and encoded to n_blocks blocks of m/k_prime rows: termination fires when
// the downloaded cell pattern of the (n_blocks x n) product array peels to
// completion, and decoding is charged per peeling event (a row event costs
// one (n,k) decode of a block, a column event one (n_blocks,k_prime)
// decode).
TrialOutcome run_scheme3(const AssignmentPlan& plan, int k, int k_prime,
                         const SystemConfig& cfg, const SetupTimes& setup,
                         EventLog* log = nullptr, TrialDetail* detail = nullptr);

// Event-driven re-derivation of the sequential-download scheme; must agree
// with scheme1_total_latency to within 1e-9.
TrialOutcome replay_scheme1(const AssignmentPlan& plan, int k, int t, const SystemConfig& cfg,
                            const SetupTimes& setup, EventLog* log = nullptr);

// Allocation-free entry points for tight Monte Carlo loops: lambda_abs
// points at e absolute setup times. Scratch buffers live in thread-local
// storage, so concurrent use from different threads is safe.
TrialOutcome scheme2_trial(const AssignmentPlan& plan, int k, const SystemConfig& cfg,
                           const double* lambda_abs);
TrialOutcome scheme3_trial(const AssignmentPlan& plan, int k, int k_prime,
                           const SystemConfig& cfg, const double* lambda_abs);

// Peeling-event counts of the canonical sweep over a downloaded pattern;
// used for decode accounting and exposed for cross-checks against
// peel_pattern. Returns {row_events, col_events, recovered}.
struct PeelCounts {
    int row_events = 0;
    int col_events = 0;
    bool recovered = false;
};
PeelCounts count_peel_events(int nprime, int n, int k, int kprime,
                             const std::vector<std::uint8_t>& known);

} // namespace pec
