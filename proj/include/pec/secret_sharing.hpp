#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pec/reed_solomon.hpp"
#include "pec/rng.hpp"

namespace pec {

// One user's private vector plus the k-1 masking vectors that blind it.
struct UserData {
    std::vector<Fe> x;                         // length r
    std::vector<std::vector<Fe>> randomness;   // k-1 vectors, each length r
};

// Share h of every user, stacked as columns: S is r x u, column i holds
// user i's h-th share.
struct ShareMatrix {
    int h = 0;
    FeMatrix s;
};

// Encode every user's vector coordinatewise: for user i and coordinate l,
// the message (x[l], rand[0][l], ..., rand[k-2][l]) is RS-encoded and the
// h-th symbol lands in share matrix h. Throws DimensionMismatch on ragged
// input.
std::vector<ShareMatrix> make_shares(const std::vector<UserData>& users, const RsCode& code);

// Convenience: draw the masking vectors from rng.
std::vector<UserData> make_user_data(const std::vector<std::vector<Fe>>& xs,
                                     const RsCode& code, Rng& rng);

// Recover the plaintext products from intermediate results. `irs` holds
// (share index h, product-with-share-matrix) pairs of equal shape; each
// entry of the output is the constant coefficient of the polynomial
// interpolated across the h-dimension. Throws NotEnoughShares.
FeMatrix recover_results(const std::vector<std::pair<int, FeMatrix>>& irs, const RsCode& code);

// Exact distribution of the share values seen at `subset` positions when
// the scalar `secret` is shared, over all q^(k-1) masking assignments.
// Map key = tuple of share values in subset order, value = count.
// Privacy holds iff the map is independent of the secret.
// Throws SubsetTooLarge if |subset| >= k.
std::map<std::vector<Fe>, std::uint64_t>
privacy_histogram(Fe secret, const std::vector<int>& subset, const RsCode& code);

// -------- product-code peeling --------

struct PeelEvent {
    bool is_row = false; // true: a length-n row decoded; false: a length-nprime column
    int index = 0;       // 1-based row or column index
};

struct PeelResult {
    bool recovered = false;
    std::vector<PeelEvent> events;
};

// Peeling schedule over a known/unknown pattern of an nprime x n array
// whose rows are (n,k) codewords and whose columns are (nprime,kprime)
// codewords. Sweeps rows then columns, ascending index. A row is decoded
// (one event) the first sweep it has >= k known cells, even when it has no
// erasure left: the row message is what consumers extract. A column is
// decoded only when it has >= kprime known cells AND still has erasures,
// since column decoding exists purely to fill cells. `known` is row-major,
// nprime*n entries. Recovered means every cell ends up known.
PeelResult peel_pattern(int nprime, int n, int k, int kprime, std::vector<std::uint8_t> known);

// Same array with actual data; cell (l,h) is 1-based (row l, column h) at
// flat index (l-1)*n + (h-1). Known cells hold block vectors of equal
// length. Decoding fills erased cells in place following the schedule of
// peel_pattern and returns the same event list.
struct ProductCodeArray {
    const RsCode* row_code = nullptr; // (n,k), positions are column indices h
    const RsCode* col_code = nullptr; // (nprime,kprime), positions are row indices l
    int block_len = 0;
    std::vector<std::optional<std::vector<Fe>>> cells; // nprime*n, row-major
};

PeelResult peel_product_code(ProductCodeArray& arr);

} // namespace pec
