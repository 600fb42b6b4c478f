#pragma once

#include <string>
#include <vector>

#include "pec/errors.hpp"

namespace pec {

// Map an integer onto [1, e] by adding/subtracting e; wrap_index(e, e) = e.
int wrap_index(long long x, int e);

// A single full-length cycle on [1, order], stored as an image table.
struct CyclicPermutation {
    int order = 0;
    std::vector<int> image; // image[i-1] = pi(i), 1-based values

    int apply(int j) const { return image[j - 1]; }
};

// Build from cycle notation: cycle[i] maps to cycle[i+1], last to first.
// Throws InvalidParams unless the input is a permutation of [1, order]
// given as one cycle of full length.
CyclicPermutation perm_from_cycle(const std::vector<int>& cycle);

// The standard generator (1 e e-1 ... 2), i.e. j -> wrap(j-1).
CyclicPermutation default_generator(int order);

// pi^power applied to j; power >= 0.
int perm_power_apply(const CyclicPermutation& pi, long long power, int j);

// Small dense matrix of 1-based indices; 0 marks an unfilled slot.
struct IndexMatrix {
    int rows = 0, cols = 0;
    std::vector<int> a;

    IndexMatrix() = default;
    IndexMatrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0) {}
    int& at(int r, int c) { return a[std::size_t(r - 1) * cols + (c - 1)]; } // 1-based
    int at(int r, int c) const { return a[std::size_t(r - 1) * cols + (c - 1)]; }
    bool operator==(const IndexMatrix&) const = default;
};

// Work assignment: row i, column j holds pi^(i-1)(j); node j stores the
// blocks listed in its column, processed top to bottom.
IndexMatrix build_iw(int e, int p, const CyclicPermutation& pi);

// Share assignment: row d+1, column j holds pi^(d*(e-p))(j) for
// d = 0..ceil(e/p)-1. A node's share list is its column restricted to
// [1, n], first occurrence order, top to bottom; a is the longest list.
// Columns usually share one length (then a = ceil(ceil(e/p)*n/e)), but
// some n < e corners come out ragged, including empty columns.
struct ShareAssignment {
    IndexMatrix is;
    std::vector<std::vector<int>> en_shares;
    int a = 0;
};
ShareAssignment build_is(int e, int p, int n, const CyclicPermutation& pi);

// Work assignment for a coded network matrix cut into n_prime blocks.
// n_prime == e matches build_iw; n_prime > e uses an order-n_prime cycle
// truncated to e columns; n_prime < e fills diagonally with wraparound and
// tops up holes greedily with the least-used block index not already in
// that column (ties toward the smaller index, holes scanned row-major).
// Throws InfeasibleFill when p > n_prime (a column cannot stay
// duplicate-free).
IndexMatrix build_ic(int e, int p, int n_prime, const CyclicPermutation& pi_c);

// Everything a simulation needs about one layout. n_blocks is e for the
// uncoded variants and n_prime for the coded one.
struct AssignmentPlan {
    int e = 0, p = 0, n = 0, n_blocks = 0, a = 0;
    IndexMatrix iw; // or ic
    IndexMatrix is;
    std::vector<std::vector<int>> en_blocks; // per node, processing order
    std::vector<std::vector<int>> en_shares; // per node, arrival order
};

// Uncoded layout from (e, p, n) and a generator of order max(n, e).
AssignmentPlan build_plan_uncoded(int e, int p, int n, const CyclicPermutation& pi);

// Coded layout: block matrix from build_ic, share matrix from a default
// generator of order max(n, e).
AssignmentPlan build_plan_coded(int e, int p, int n, int n_prime);

// True iff every share index h in [1, n] reaches every block: the union
// of block lists over nodes holding h covers [1, n_blocks].
bool coverage_check(const AssignmentPlan& plan);

// Row-by-row text dump of the plan's matrices, for debugging.
std::string plan_to_string(const AssignmentPlan& plan);

} // namespace pec
