#include "pec/secret_sharing.hpp"

#include <algorithm>

namespace pec {

std::vector<ShareMatrix> make_shares(const std::vector<UserData>& users, const RsCode& code) {
    const std::size_t u = users.size();
    const std::size_t r = u ? users[0].x.size() : 0;
    for (const auto& user : users) {
        if (user.x.size() != r) throw DimensionMismatch("make_shares: ragged user vectors");
        if (int(user.randomness.size()) != code.k - 1)
            throw DimensionMismatch("make_shares: need exactly k-1 masking vectors");
        for (const auto& mask : user.randomness)
            if (mask.size() != r) throw DimensionMismatch("make_shares: ragged masking vector");
    }

    std::vector<ShareMatrix> out(code.n);
    for (int h = 1; h <= code.n; ++h) {
        out[h - 1].h = h;
        out[h - 1].s = FeMatrix(r, u);
    }
    std::vector<Fe> message(code.k);
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t l = 0; l < r; ++l) {
            message[0] = users[i].x[l];
            for (int c = 1; c < code.k; ++c) message[c] = users[i].randomness[c - 1][l];
            std::vector<Fe> symbols = rs_encode(code, message);
            for (int h = 1; h <= code.n; ++h) out[h - 1].s.at(l, i) = symbols[h - 1];
        }
    return out;
}

std::vector<UserData> make_user_data(const std::vector<std::vector<Fe>>& xs,
                                     const RsCode& code, Rng& rng) {
    std::vector<UserData> users(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        users[i].x = xs[i];
        users[i].randomness.resize(code.k - 1);
        for (auto& mask : users[i].randomness) {
            mask.resize(xs[i].size());
            for (auto& v : mask) v = Fe(rng.next_u64() % code.field->modulus());
        }
    }
    return users;
}

FeMatrix recover_results(const std::vector<std::pair<int, FeMatrix>>& irs, const RsCode& code) {
    if (int(irs.size()) < code.k) throw NotEnoughShares();
    const std::size_t rows = irs[0].second.rows, cols = irs[0].second.cols;
    for (const auto& [h, m] : irs) {
        if (h < 1 || h > code.n) throw InvalidParams("recover_results: share index out of range");
        if (m.rows != rows || m.cols != cols)
            throw DimensionMismatch("recover_results: mismatched result shapes");
    }

    FeMatrix out(rows, cols);
    std::vector<std::pair<int, Fe>> column(irs.size());
    for (std::size_t rr = 0; rr < rows; ++rr)
        for (std::size_t cc = 0; cc < cols; ++cc) {
            for (std::size_t i = 0; i < irs.size(); ++i)
                column[i] = {irs[i].first, irs[i].second.at(rr, cc)};
            out.at(rr, cc) = rs_decode_erasures(code, column)[0];
        }
    return out;
}

std::map<std::vector<Fe>, std::uint64_t>
privacy_histogram(Fe secret, const std::vector<int>& subset, const RsCode& code) {
    if (int(subset.size()) >= code.k) throw SubsetTooLarge();
    for (int pos : subset)
        if (pos < 1 || pos > code.n) throw InvalidParams("privacy_histogram: position out of range");

    const std::uint32_t q = code.field->modulus();
    std::map<std::vector<Fe>, std::uint64_t> hist;
    std::vector<Fe> message(code.k, 0);
    message[0] = secret;
    std::vector<Fe> key(subset.size());

    // Odometer over all q^(k-1) masking assignments.
    while (true) {
        std::vector<Fe> symbols = rs_encode(code, message);
        for (std::size_t i = 0; i < subset.size(); ++i) key[i] = symbols[subset[i] - 1];
        ++hist[key];

        int c = 1;
        for (; c < code.k; ++c) {
            if (++message[c] < q) break;
            message[c] = 0;
        }
        if (c == code.k) break;
    }
    return hist;
}

// Shared sweep logic: calls row_fn/col_fn when a line decodes. Lines are
// scanned rows first then columns, ascending, restarting after each full
// sweep that made progress.
namespace {

template <typename RowFn, typename ColFn>
PeelResult peel_sweep(int nprime, int n, int k, int kprime, std::vector<std::uint8_t>& known,
                      RowFn&& decode_row, ColFn&& decode_col) {
    std::vector<std::uint8_t> row_done(nprime, 0);
    std::vector<std::uint8_t> col_done(n, 0);
    PeelResult result;

    bool progress = true;
    while (progress) {
        progress = false;
        for (int l = 1; l <= nprime; ++l) {
            if (row_done[l - 1]) continue;
            int cnt = 0;
            for (int h = 1; h <= n; ++h) cnt += known[(l - 1) * n + (h - 1)];
            if (cnt < k) continue;
            decode_row(l);
            for (int h = 1; h <= n; ++h) known[(l - 1) * n + (h - 1)] = 1;
            row_done[l - 1] = 1;
            result.events.push_back({true, l});
            progress = true;
        }
        for (int h = 1; h <= n; ++h) {
            if (col_done[h - 1]) continue;
            int cnt = 0;
            for (int l = 1; l <= nprime; ++l) cnt += known[(l - 1) * n + (h - 1)];
            if (cnt < kprime || cnt == nprime) continue; // nothing to fill when complete
            decode_col(h);
            for (int l = 1; l <= nprime; ++l) known[(l - 1) * n + (h - 1)] = 1;
            col_done[h - 1] = 1;
            result.events.push_back({false, h});
            progress = true;
        }
    }
    result.recovered =
        std::all_of(known.begin(), known.end(), [](std::uint8_t v) { return v != 0; });
    return result;
}

} // namespace

PeelResult peel_pattern(int nprime, int n, int k, int kprime, std::vector<std::uint8_t> known) {
    if (int(known.size()) != nprime * n) throw DimensionMismatch("peel_pattern: bad pattern size");
    return peel_sweep(
        nprime, n, k, kprime, known, [](int) {}, [](int) {});
}

PeelResult peel_product_code(ProductCodeArray& arr) {
    const int nprime = arr.col_code->n, n = arr.row_code->n;
    const int k = arr.row_code->k, kprime = arr.col_code->k;
    if (int(arr.cells.size()) != nprime * n)
        throw DimensionMismatch("peel_product_code: bad cell count");

    std::vector<std::uint8_t> known(arr.cells.size());
    for (std::size_t i = 0; i < arr.cells.size(); ++i) known[i] = arr.cells[i].has_value();

    auto cell = [&](int l, int h) -> std::optional<std::vector<Fe>>& {
        return arr.cells[std::size_t(l - 1) * n + (h - 1)];
    };

    // Decode one line of blocks: interpolate each block entry across the
    // known positions, then re-encode to fill every position of the line.
    auto decode_row = [&](int l) {
        std::vector<int> have;
        for (int h = 1; h <= n; ++h)
            if (cell(l, h)) have.push_back(h);
        std::vector<std::pair<int, Fe>> pts(have.size());
        for (int e = 0; e < arr.block_len; ++e) {
            for (std::size_t i = 0; i < have.size(); ++i)
                pts[i] = {have[i], (*cell(l, have[i]))[e]};
            std::vector<Fe> symbols = rs_encode(*arr.row_code, rs_decode_erasures(*arr.row_code, pts));
            for (int h = 1; h <= n; ++h) {
                if (!cell(l, h)) cell(l, h).emplace(arr.block_len);
                (*cell(l, h))[e] = symbols[h - 1];
            }
        }
    };
    auto decode_col = [&](int h) {
        std::vector<int> have;
        for (int l = 1; l <= nprime; ++l)
            if (cell(l, h)) have.push_back(l);
        std::vector<std::pair<int, Fe>> pts(have.size());
        for (int e = 0; e < arr.block_len; ++e) {
            for (std::size_t i = 0; i < have.size(); ++i)
                pts[i] = {have[i], (*cell(have[i], h))[e]};
            std::vector<Fe> symbols = rs_encode(*arr.col_code, rs_decode_erasures(*arr.col_code, pts));
            for (int l = 1; l <= nprime; ++l) {
                if (!cell(l, h)) cell(l, h).emplace(arr.block_len);
                (*cell(l, h))[e] = symbols[l - 1];
            }
        }
    };

    return peel_sweep(nprime, n, k, kprime, known, decode_row, decode_col);
}

} // namespace pec
