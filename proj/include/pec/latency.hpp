#pragma once

#include <cstdint>
#include <vector>

#include "pec/assignment.hpp"
#include "pec/rng.hpp"

namespace pec {

// Global experiment knobs. Latencies are normalized: one unit equals the
// time a node needs for one r-length inner product, so gamma is the
// communication time per symbol in those units and setup times enter as
// lambda/tau.
struct SystemConfig {
    int e_max = 9;
    double mu = 2.0 / 3.0; // fraction of the network matrix each node can store
    double tau = 5e-4;     // absolute seconds per inner product
    double eta = 0.5;      // rate of the exponential setup times
    double delta = 3.0;    // user-vs-node slowdown per arithmetic op
    double gamma = 1.0;    // normalized communication time per symbol
    int m = 600;           // network matrix rows
    int r = 50;            // network matrix columns = user vector length
    int u = 0;             // beamforming user cap; 0 means "same as e"
    std::uint32_t q = 65537;
    std::uint64_t seed = 1;

    int effective_u(int e) const { return u > 0 ? u : e; }
};

struct SetupTimes {
    std::vector<double> lambda; // absolute units; divide by tau where used
};

// e i.i.d. draws lambda_j = -ln(U)/eta.
SetupTimes sample_setup_times(int e, double eta, Rng& rng);

// Arrival of node j's h'-th share matrix on the serial uplink:
// gamma * r * (e*(h'-1) + j).
double upload_arrival(int j, int h_prime, double gamma, int r, int e);

// Start times per node and share slot: a node starts its first share after
// its setup ends (counted from that share's arrival) and each later share
// when both the previous work finishes and the share has arrived. Row-major
// e x a result.
std::vector<double> compute_start_times(int e, int a, double per_share_work, double gamma,
                                        int r, const std::vector<double>& lambda_norm);

// Pick the k share indices with the largest multiplicities for one block;
// ties toward the smaller share index. `rho_by_h` maps share index -> count
// (0 = not computed). Returns chosen share indices.
std::vector<int> select_top_k(const std::vector<int>& rho_by_h, int k);

// Sum of gamma * block_rows / min(rho, u) over the chosen multiplicities.
double download_latency(const std::vector<int>& rhos, double gamma, double block_rows, int u);

// Per-user cost of erasure-decoding m codeword rows of an (n,k) code,
// delta/(2r-1) per operation. n = 1 needs no decoding and costs 0.
double decode_latency(int n, int k, int m, int r, double delta);

// One simulated run's latency breakdown, all in normalized units.
struct TrialOutcome {
    double upload_end = 0;   // end of the upload phase
    double compute_end = 0;  // end of the computation phase (scheme-dependent)
    double download_end = 0; // completion of the last needed download
    double decode_time = 0;
    double total = 0;
};

// Deterministic replay of the sequential-download scheme: nodes compute
// until every block has >= t results (duplicates counted) and >= k distinct
// share indices, then the k best-replicated results per block are sent one
// after the other, then users decode. Throws InfeasibleT when even full
// computation cannot reach the stopping rule.
TrialOutcome scheme1_total_latency(const AssignmentPlan& plan, int k, int t,
                                   const SystemConfig& cfg, const SetupTimes& setup);

// Same computation against a raw pointer to e absolute setup times, reusing
// thread-local scratch buffers; meant for tight Monte Carlo loops.
TrialOutcome scheme1_trial(const AssignmentPlan& plan, int k, int t, const SystemConfig& cfg,
                           const double* lambda_abs);

// Evaluate several t values against one trial's shared completion events;
// totals[i] is exactly scheme1_trial(..., ts[i], ...).total.
void scheme1_trial_multi_t(const AssignmentPlan& plan, int k, const int* ts, int count,
                           const SystemConfig& cfg, const double* lambda_abs, double* totals);

// floor(mu * units) with a guard against binary fractions like 2/3 landing
// just below an integer.
inline long long storage_floor(double mu, long long units) {
    return (long long)(mu * double(units) + 1e-9);
}

} // namespace pec
