#pragma once

#include <cstdint>
#include <vector>

#include "pec/assignment.hpp"
#include "pec/latency.hpp"

namespace pec {

// One point of the search grid. Variant 1 uses t; variant 3 uses n_prime
// and k_prime; k is always a*z + 1 for the z the space was built with.
struct PrivateCodingScheme {
    int scheme = 1;
    int e = 0, p = 0, n = 0, k = 0;
    int t = 0;
    int n_prime = 0, k_prime = 0;
};

struct SearchSpace {
    int scheme = 1;
    int z = 1;
    // caps for the coded variant's relaxed code lengths; n_max == 0 means
    // e + 2 per tuple
    int v3_n_prime_max = 13;
    int v3_n_max = 0;
};

// Every tuple passing the variant's feasibility chain, in deterministic
// enumeration order. Throws EmptySpace when nothing survives.
std::vector<PrivateCodingScheme> enumerate_feasible(const SearchSpace& space,
                                                    const SystemConfig& cfg);

// Common-random-number table: row i holds e_max absolute setup times drawn
// from the seed^i substream; a tuple with e nodes reads the first e. Rows
// are materialized by ensure() and immutable afterwards, so concurrent
// row() reads are safe.
class SetupBank {
  public:
    SetupBank(std::uint64_t seed, int e_max, double eta);
    void ensure(std::size_t trials);
    const double* row(std::size_t trial) const { return flat_.data() + trial * e_max_; }
    int width() const { return e_max_; }

  private:
    std::uint64_t seed_;
    int e_max_;
    double eta_;
    std::size_t rows_ = 0;
    std::vector<double> flat_;
};

struct TupleResult {
    PrivateCodingScheme tuple;
    double mean = 0;
    double se = 0; // standard error of the mean
    std::size_t trials = 0;
};

struct OptimizationResult {
    TupleResult best;
    std::vector<TupleResult> table; // enumeration order
};

// Mean total latency of every feasible tuple over `trials` common setup
// draws; best = argmin mean, ties toward smaller e, then n, then the
// remaining fields.
OptimizationResult optimize(const SearchSpace& space, const SystemConfig& cfg,
                            std::size_t trials, SetupBank& bank, int threads = 1);

// Deadline exceedance probabilities of one fixed tuple.
std::vector<double> deadline_profile(const PrivateCodingScheme& tuple, const SystemConfig& cfg,
                                     const std::vector<double>& deadlines, std::size_t trials,
                                     SetupBank& bank);

// Per-deadline optimized exceedance over a space: all tuples are screened
// at stage1_trials, the most promising few per deadline are re-run at the
// full trial count, and each deadline reports the minimum.
struct DeadlineResult {
    std::vector<double> probability;
    std::vector<PrivateCodingScheme> chosen;
};
DeadlineResult deadline_profile_space(const SearchSpace& space, const SystemConfig& cfg,
                                      const std::vector<double>& deadlines, std::size_t trials,
                                      std::size_t stage1_trials, SetupBank& bank,
                                      int threads = 1);

// Plan construction and one-trial dispatch for a tuple; shared by the CLI's
// simulate/trace paths.
AssignmentPlan plan_for_tuple(const PrivateCodingScheme& tuple);
TrialOutcome tuple_trial(const PrivateCodingScheme& tuple, const AssignmentPlan& plan,
                         const SystemConfig& cfg, const double* lambda_abs);

} // namespace pec
