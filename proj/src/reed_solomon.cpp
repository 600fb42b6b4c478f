#include "pec/reed_solomon.hpp"

#include <algorithm>

namespace pec {

RsCode make_rs_code(const Field& f, int n, int k) {
    if (k < 1 || n < k) throw InvalidParams("rs code needs 1 <= k <= n");
    if (std::uint64_t(n) > std::uint64_t(f.modulus()) - 1)
        throw InvalidParams("rs code needs n <= q-1 distinct nonzero points");
    RsCode code;
    code.field = &f;
    code.n = n;
    code.k = k;
    code.points.resize(n);
    for (int h = 1; h <= n; ++h) code.points[h - 1] = f.eval_point(h);
    return code;
}

std::vector<Fe> rs_encode(const RsCode& code, const std::vector<Fe>& message) {
    if (int(message.size()) != code.k) throw DimensionMismatch("rs_encode: message length != k");
    const Field& f = *code.field;
    std::vector<Fe> out(code.n);
    for (int h = 0; h < code.n; ++h) {
        // Horner evaluation at the h-th point.
        Fe acc = 0;
        for (int c = code.k - 1; c >= 0; --c) acc = f.add(f.mul(acc, code.points[h]), message[c]);
        out[h] = acc;
    }
    return out;
}

std::vector<Fe> rs_decode_erasures(const RsCode& code,
                                   const std::vector<std::pair<int, Fe>>& available) {
    if (int(available.size()) < code.k) throw NotEnoughShares();
    const Field& f = *code.field;

    // Interpolate on the first k symbols sorted by position.
    std::vector<std::pair<int, Fe>> sorted = available;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i].first == sorted[i + 1].first)
            throw InvalidParams("rs_decode_erasures: duplicate position");
    for (auto& [pos, val] : sorted) {
        (void)val;
        if (pos < 1 || pos > code.n) throw InvalidParams("rs_decode_erasures: position out of range");
    }

    const int k = code.k;
    std::vector<Fe> xs(k);
    for (int i = 0; i < k; ++i) xs[i] = code.points[sorted[i].first - 1];

    // master(theta) = prod_i (theta - xs[i]), coefficients low-to-high.
    std::vector<Fe> master(k + 1, 0);
    master[0] = 1;
    for (int i = 0; i < k; ++i) {
        for (int d = i + 1; d >= 1; --d)
            master[d] = f.add(master[d - 1], f.mul(master[d], f.neg(xs[i])));
        master[0] = f.mul(master[0], f.neg(xs[i]));
    }

    std::vector<Fe> coeffs(k, 0);
    std::vector<Fe> basis(k);
    for (int i = 0; i < k; ++i) {
        // basis = master / (theta - xs[i]) by synthetic division.
        Fe carry = 0;
        for (int d = k; d >= 1; --d) {
            carry = f.add(master[d], f.mul(carry, xs[i]));
            basis[d - 1] = carry;
        }
        // Scale so the basis polynomial is 1 at xs[i]: divide by
        // prod_{j != i} (xs[i] - xs[j]), which is basis evaluated there.
        Fe denom = 0;
        for (int d = k - 1; d >= 0; --d) denom = f.add(f.mul(denom, xs[i]), basis[d]);
        Fe scale = f.mul(sorted[i].second, f.inv(denom));
        for (int d = 0; d < k; ++d) coeffs[d] = f.add(coeffs[d], f.mul(basis[d], scale));
    }

    // Any surplus symbols must lie on the interpolated polynomial.
    for (std::size_t i = k; i < sorted.size(); ++i) {
        Fe x = code.points[sorted[i].first - 1];
        Fe acc = 0;
        for (int c = k - 1; c >= 0; --c) acc = f.add(f.mul(acc, x), coeffs[c]);
        if (acc != sorted[i].second) throw InconsistentShares();
    }
    return coeffs;
}

double decoding_cost_ops(int n, int k) {
    if (n < 1 || k > n || k < 1) throw InvalidParams("decoding_cost_ops needs 1 <= k <= n");
    int log2n = 0;
    while ((1 << log2n) < n) ++log2n; // ceil(log2 n), 0 for n = 1
    return double(n) * (2.0 * (n - k) + 1.5 * log2n - 1.5);
}

} // namespace pec
