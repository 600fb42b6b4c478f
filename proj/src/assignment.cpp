#include "pec/assignment.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace pec {

int wrap_index(long long x, int e) {
    long long m = (x - 1) % e;
    if (m < 0) m += e;
    return int(m) + 1;
}

CyclicPermutation perm_from_cycle(const std::vector<int>& cycle) {
    const int order = int(cycle.size());
    if (order < 1) throw InvalidParams("cycle must be nonempty");
    std::vector<std::uint8_t> seen(order, 0);
    for (int v : cycle) {
        if (v < 1 || v > order) throw InvalidParams("cycle entries must lie in [1, order]");
        if (seen[v - 1]++) throw InvalidParams("cycle entries must be distinct");
    }
    CyclicPermutation pi;
    pi.order = order;
    pi.image.resize(order);
    for (int i = 0; i < order; ++i) pi.image[cycle[i] - 1] = cycle[(i + 1) % order];
    return pi;
}

CyclicPermutation default_generator(int order) {
    if (order < 1) throw InvalidParams("permutation order must be positive");
    CyclicPermutation pi;
    pi.order = order;
    pi.image.resize(order);
    for (int j = 1; j <= order; ++j) pi.image[j - 1] = wrap_index(j - 1, order);
    return pi;
}

int perm_power_apply(const CyclicPermutation& pi, long long power, int j) {
    assert(power >= 0 && j >= 1 && j <= pi.order);
    long long reduced = power % pi.order; // pi has order `order`: a full cycle
    int v = j;
    for (long long i = 0; i < reduced; ++i) v = pi.apply(v);
    return v;
}

IndexMatrix build_iw(int e, int p, const CyclicPermutation& pi) {
    if (e < 1 || p < 1 || p > e) throw InvalidParams("build_iw needs 1 <= p <= e");
    if (pi.order < e) throw InvalidParams("build_iw: permutation order too small");
    IndexMatrix iw(p, e);
    // Row 1 is the identity; each further row applies pi once more.
    for (int j = 1; j <= e; ++j) iw.at(1, j) = j;
    for (int i = 2; i <= p; ++i)
        for (int j = 1; j <= e; ++j) iw.at(i, j) = pi.apply(iw.at(i - 1, j));
    return iw;
}

ShareAssignment build_is(int e, int p, int n, const CyclicPermutation& pi) {
    if (e < 1 || p < 1 || p > e) throw InvalidParams("build_is needs 1 <= p <= e");
    if (n < 1 || n > pi.order) throw InvalidParams("build_is needs 1 <= n <= order");
    const int beta = (e + p - 1) / p - 1; // ceil(e/p) - 1
    ShareAssignment out;
    out.is = IndexMatrix(beta + 1, e);
    for (int j = 1; j <= e; ++j) out.is.at(1, j) = j;
    for (int d = 1; d <= beta; ++d)
        for (int j = 1; j <= e; ++j) {
            int v = out.is.at(d, j);
            for (int step = 0; step < e - p; ++step) v = pi.apply(v);
            out.is.at(d + 1, j) = v;
        }

    out.en_shares.resize(e);
    for (int j = 1; j <= e; ++j) {
        auto& lst = out.en_shares[j - 1];
        for (int d = 0; d <= beta; ++d) {
            int v = out.is.at(d + 1, j);
            if (v <= n && std::find(lst.begin(), lst.end(), v) == lst.end()) lst.push_back(v);
        }
    }
    // Usually every column keeps the same count and a matches
    // ceil(ceil(e/p)*n/e); corner cases with n < e can come out ragged, so
    // a is the longest list and feasibility filters decide who cares.
    out.a = 0;
    for (const auto& lst : out.en_shares) out.a = std::max(out.a, int(lst.size()));
    return out;
}

IndexMatrix build_ic(int e, int p, int n_prime, const CyclicPermutation& pi_c) {
    if (e < 1 || p < 1 || p > e || n_prime < 1) throw InvalidParams("build_ic: bad dimensions");
    if (n_prime >= e) {
        if (pi_c.order != n_prime) throw InvalidParams("build_ic: generator order must be n_prime");
        // Same construction as the work matrix over [1, n_prime], keeping
        // only the first e columns.
        IndexMatrix ic(p, e);
        for (int j = 1; j <= e; ++j) ic.at(1, j) = j;
        for (int i = 2; i <= p; ++i)
            for (int j = 1; j <= e; ++j) ic.at(i, j) = pi_c.apply(ic.at(i - 1, j));
        return ic;
    }

    if (p > n_prime) throw InfeasibleFill("build_ic: p > n_prime forces a column duplicate");

    // Diagonal fill: row i carries 1..n_prime starting at column i, with
    // wraparound; the rest stays open.
    IndexMatrix ic(p, e);
    for (int i = 1; i <= p; ++i)
        for (int c = 1; c <= n_prime; ++c) ic.at(i, wrap_index(i + c - 1, e)) = c;

    std::vector<int> used(n_prime, 0);
    for (int v : ic.a)
        if (v) ++used[v - 1];

    // Top up holes with the globally least-used index not already in the
    // column; ties go to the smaller index. Row-major scan.
    for (int i = 1; i <= p; ++i)
        for (int j = 1; j <= e; ++j) {
            if (ic.at(i, j)) continue;
            std::vector<std::uint8_t> in_col(n_prime, 0);
            for (int ii = 1; ii <= p; ++ii)
                if (int v = ic.at(ii, j)) in_col[v - 1] = 1;
            int pick = 0;
            for (int v = 1; v <= n_prime; ++v) {
                if (in_col[v - 1]) continue;
                if (pick == 0 || used[v - 1] < used[pick - 1]) pick = v;
            }
            if (pick == 0) throw InfeasibleFill();
            ic.at(i, j) = pick;
            ++used[pick - 1];
        }
    return ic;
}

namespace {

std::vector<std::vector<int>> columns_of(const IndexMatrix& m) {
    std::vector<std::vector<int>> cols(m.cols);
    for (int j = 1; j <= m.cols; ++j) {
        cols[j - 1].reserve(m.rows);
        for (int i = 1; i <= m.rows; ++i) cols[j - 1].push_back(m.at(i, j));
    }
    return cols;
}

} // namespace

AssignmentPlan build_plan_uncoded(int e, int p, int n, const CyclicPermutation& pi) {
    if (n > pi.order || e > pi.order) throw InvalidParams("build_plan_uncoded: order too small");
    AssignmentPlan plan;
    plan.e = e;
    plan.p = p;
    plan.n = n;
    plan.n_blocks = e;
    plan.iw = build_iw(e, p, pi);
    ShareAssignment sa = build_is(e, p, n, pi);
    plan.is = std::move(sa.is);
    plan.en_shares = std::move(sa.en_shares);
    plan.a = sa.a;
    plan.en_blocks = columns_of(plan.iw);
    return plan;
}

AssignmentPlan build_plan_coded(int e, int p, int n, int n_prime) {
    AssignmentPlan plan;
    plan.e = e;
    plan.p = p;
    plan.n = n;
    plan.n_blocks = n_prime;
    plan.iw = build_ic(e, p, n_prime, default_generator(std::max(n_prime, e)));
    ShareAssignment sa = build_is(e, p, n, default_generator(std::max(n, e)));
    plan.is = std::move(sa.is);
    plan.en_shares = std::move(sa.en_shares);
    plan.a = sa.a;
    plan.en_blocks = columns_of(plan.iw);
    return plan;
}

bool coverage_check(const AssignmentPlan& plan) {
    for (int h = 1; h <= plan.n; ++h) {
        std::vector<std::uint8_t> seen(plan.n_blocks, 0);
        int covered = 0;
        for (int j = 1; j <= plan.e; ++j) {
            const auto& shares = plan.en_shares[j - 1];
            if (std::find(shares.begin(), shares.end(), h) == shares.end()) continue;
            for (int l : plan.en_blocks[j - 1])
                if (!seen[l - 1]) {
                    seen[l - 1] = 1;
                    ++covered;
                }
        }
        if (covered != plan.n_blocks) return false;
    }
    return true;
}

std::string plan_to_string(const AssignmentPlan& plan) {
    std::ostringstream os;
    auto dump = [&os](const char* name, const IndexMatrix& m) {
        os << name << " (" << m.rows << "x" << m.cols << "):\n";
        for (int i = 1; i <= m.rows; ++i) {
            for (int j = 1; j <= m.cols; ++j) os << (j > 1 ? " " : "  ") << m.at(i, j);
            os << "\n";
        }
    };
    os << "e=" << plan.e << " p=" << plan.p << " n=" << plan.n << " n_blocks=" << plan.n_blocks
       << " a=" << plan.a << "\n";
    dump("work", plan.iw);
    dump("shares", plan.is);
    return os.str();
}

} // namespace pec
