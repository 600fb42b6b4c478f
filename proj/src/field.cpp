#include "pec/field.hpp"

#include <cassert>

namespace pec {

bool Field::is_prime(std::uint32_t x) {
    if (x < 2) return false;
    if (x % 2 == 0) return x == 2;
    for (std::uint64_t d = 3; d * d <= x; d += 2)
        if (x % d == 0) return false;
    return true;
}

Field::Field(std::uint32_t q) : q_(q) {
    if (!is_prime(q)) throw InvalidParams("field modulus must be prime");
}

Fe Field::pow(Fe a, std::uint64_t x) const {
    Fe result = 1;
    Fe base = a;
    while (x > 0) {
        if (x & 1) result = mul(result, base);
        base = mul(base, base);
        x >>= 1;
    }
    return result;
}

Fe Field::inv(Fe a) const {
    if (a == 0) throw ZeroInverse();
    return pow(a, q_ - 2);
}

Fe Field::eval_point(int i) const {
    assert(i >= 1 && std::uint32_t(i) < q_);
    return Fe(i);
}

std::vector<Fe> mat_vec_mul(const Field& f, const FeMatrix& m, const std::vector<Fe>& v) {
    if (m.cols != v.size()) throw DimensionMismatch("mat_vec_mul: cols != len(v)");
    std::vector<Fe> out(m.rows, 0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        std::uint64_t acc = 0;
        for (std::size_t c = 0; c < m.cols; ++c) {
            acc += std::uint64_t(m.at(r, c)) * v[c] % f.modulus();
            if (acc >= (std::uint64_t(1) << 62)) acc %= f.modulus();
        }
        out[r] = Fe(acc % f.modulus());
    }
    return out;
}

FeMatrix mat_mul(const Field& f, const FeMatrix& x, const FeMatrix& y) {
    if (x.cols != y.rows) throw DimensionMismatch("mat_mul: inner dimensions differ");
    FeMatrix out(x.rows, y.cols);
    for (std::size_t r = 0; r < x.rows; ++r)
        for (std::size_t c = 0; c < y.cols; ++c) {
            std::uint64_t acc = 0;
            for (std::size_t i = 0; i < x.cols; ++i) {
                acc += std::uint64_t(x.at(r, i)) * y.at(i, c) % f.modulus();
                if (acc >= (std::uint64_t(1) << 62)) acc %= f.modulus();
            }
            out.at(r, c) = Fe(acc % f.modulus());
        }
    return out;
}

} // namespace pec
