#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pec/errors.hpp"

namespace pec {

// A field element is a plain integer in [0, q). Keeping elements untyped
// avoids dragging a context pointer through every value; the Field object
// owns the modulus and all arithmetic goes through it.
using Fe = std::uint32_t;

class Field {
public:
    // q must be prime; validated at construction.
    explicit Field(std::uint32_t q);

    std::uint32_t modulus() const { return q_; }

    Fe add(Fe a, Fe b) const {
        std::uint64_t s = std::uint64_t(a) + b;
        return s >= q_ ? Fe(s - q_) : Fe(s);
    }
    Fe sub(Fe a, Fe b) const { return a >= b ? Fe(a - b) : Fe(a + q_ - b); }
    Fe neg(Fe a) const { return a == 0 ? 0 : Fe(q_ - a); }
    Fe mul(Fe a, Fe b) const { return Fe(std::uint64_t(a) * b % q_); }

    Fe pow(Fe a, std::uint64_t x) const;

    // Multiplicative inverse via Fermat (q is prime). Throws ZeroInverse.
    Fe inv(Fe a) const;

    // i-th evaluation point, 1-based; points are 1, 2, ..., q-1 in natural
    // order so share indices are reproducible.
    Fe eval_point(int i) const;

    static bool is_prime(std::uint32_t x);

private:
    std::uint32_t q_;
};

// Dense row-major matrix of field elements.
struct FeMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Fe> a;

    FeMatrix() = default;
    FeMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

    Fe& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    Fe at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    bool operator==(const FeMatrix&) const = default;
};

// M*v over GF(q). Throws DimensionMismatch if M.cols != v.size().
std::vector<Fe> mat_vec_mul(const Field& f, const FeMatrix& m, const std::vector<Fe>& v);

// X*Y over GF(q). Throws DimensionMismatch on incompatible shapes.
FeMatrix mat_mul(const Field& f, const FeMatrix& x, const FeMatrix& y);

} // namespace pec
