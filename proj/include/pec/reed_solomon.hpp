#pragma once

#include <utility>
#include <vector>

#include "pec/field.hpp"

namespace pec {

// Nonsystematic (n,k) Reed-Solomon code: a message is the coefficient
// vector of a degree-(k-1) polynomial, the codeword its evaluations at the
// first n evaluation points. The constant coefficient carries the secret,
// so any k-1 evaluations reveal nothing about it (classic Shamir).
struct RsCode {
    const Field* field = nullptr;
    int n = 0;
    int k = 0;
    std::vector<Fe> points; // evaluation points, index h-1 holds point for position h
};

// Validates 1 <= k <= n <= q-1.
RsCode make_rs_code(const Field& f, int n, int k);

// Evaluate the message polynomial at all n points.
std::vector<Fe> rs_encode(const RsCode& code, const std::vector<Fe>& message);

// Erasure decoding: `available` holds (position in [n], value) pairs with
// distinct positions. Interpolates the first k by position order and, when
// more are supplied, checks the rest against the interpolated polynomial.
// Throws NotEnoughShares (< k symbols) or InconsistentShares.
std::vector<Fe> rs_decode_erasures(const RsCode& code,
                                   const std::vector<std::pair<int, Fe>>& available);

// Operation count of one codeword-row erasure decode under the costed
// decoder (syndrome/locator work plus transform): n(n-k) + n(n-k-1)
// multiplications/additions and n/2(ceil(log2 n)-1) + n ceil(log2 n) for
// the transform, i.e. n*(2(n-k) + 1.5*ceil(log2 n) - 1.5). Fractional for
// odd n; returned as a double. Throws InvalidParams if k > n or n < 1.
double decoding_cost_ops(int n, int k);

} // namespace pec
