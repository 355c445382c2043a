#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dblext {

using BigInt = boost::multiprecision::cpp_int;

/// Dense row-major matrix.
template <class T>
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = T(1);
        }
        return m;
    }

    T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

using IntMatrix = Matrix<std::int64_t>;
using BigMatrix = Matrix<BigInt>;

struct SmithOptions {
    bool row_transform = false;  // P
    bool row_inverse = false;    // P^-1
    bool col_transform = false;  // Q
    bool col_inverse = false;    // Q^-1
};

/// S = P A Q with S diagonal, diagonal[0] | diagonal[1] | ... (all positive).
/// Only the transforms requested in SmithOptions are filled in.
struct SmithForm {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t rank = 0;
    std::vector<BigInt> diagonal;
    BigMatrix P, Pinv, Q, Qinv;
    bool used_bigint = false;  // the checked 64-bit pass overflowed

    /// The i-th diagonal entry, 0 beyond the rank.
    BigInt entry(std::size_t i) const { return i < rank ? diagonal[i] : BigInt(0); }
};

/// Runs on checked 64-bit integers and falls back to arbitrary precision on
/// overflow. Pivoting is deterministic, so the transforms are reproducible.
SmithForm smith_normal_form(const IntMatrix& a, const SmithOptions& options = {});
SmithForm smith_normal_form(const BigMatrix& a, const SmithOptions& options = {});

std::int64_t mod_floor(std::int64_t a, std::int64_t m);
std::int64_t mod_floor(const BigInt& a, std::int64_t m);

/// A submodule of (Z/m)^k in Howell form: echelon rows whose pivots divide m
/// and such that the rows with pivot column >= c span exactly the elements
/// vanishing before column c. This makes reduce() return the lexicographically
/// smallest element of a coset.
class ModLattice {
public:
    ModLattice(std::int64_t modulus, std::size_t dimension, const std::vector<std::vector<std::int64_t>>& generators);

    std::int64_t modulus() const { return m_; }
    std::size_t dimension() const { return k_; }
    const std::vector<std::vector<std::int64_t>>& basis() const { return rows_; }
    const std::vector<std::size_t>& pivot_columns() const { return pivot_col_; }
    const std::vector<std::int64_t>& pivot_values() const { return pivot_val_; }

    /// Lexicographically smallest representative of x + L (entries in [0, m)).
    std::vector<std::int64_t> reduce(std::vector<std::int64_t> x) const;
    bool contains(const std::vector<std::int64_t>& x) const;
    /// Number of elements, prod m / d_i.
    BigInt size() const;

    /// Calls fn(element) for every element of base + L, in a fixed order.
    template <class Fn>
    void for_each_coset_element(const std::vector<std::int64_t>& base, Fn&& fn) const {
        std::vector<std::int64_t> x = base;
        enumerate(0, x, fn);
    }

private:
    template <class Fn>
    void enumerate(std::size_t i, std::vector<std::int64_t>& x, Fn& fn) const {
        if (i == rows_.size()) {
            fn(static_cast<const std::vector<std::int64_t>&>(x));
            return;
        }
        const std::int64_t count = m_ / pivot_val_[i];
        for (std::int64_t t = 0; t < count; ++t) {
            enumerate(i + 1, x, fn);
            for (std::size_t j = 0; j < k_; ++j) {
                x[j] = (x[j] + rows_[i][j]) % m_;
            }
        }
    }

    std::int64_t m_;
    std::size_t k_;
    std::vector<std::vector<std::int64_t>> rows_;
    std::vector<std::size_t> pivot_col_;
    std::vector<std::int64_t> pivot_val_;
};

/// Solution set of A x = b over Z/m.
struct ModSolution {
    std::int64_t modulus = 1;
    bool solvable = false;
    /// Lexicographically smallest solution (entries in [0, m)).
    std::vector<std::int64_t> particular;
    /// Howell basis of the solution space of A x = 0.
    std::vector<std::vector<std::int64_t>> kernel;
    /// When unsolvable: a row vector w with w A = 0 and w b != 0 (mod m).
    std::vector<std::int64_t> certificate;
    /// Number of solutions (0 if unsolvable).
    BigInt count;
};

ModSolution solve_mod(const IntMatrix& a, const std::vector<std::int64_t>& b, std::int64_t m);

/// Least t > 0 with t z in im(A) + m Z^rows. `smith` must carry P.
std::int64_t class_order_mod(const SmithForm& smith, const std::vector<std::int64_t>& z, std::int64_t m);

/// Membership of an integral vector in im(A) over Z.
struct IntegralImage {
    bool in_image = false;
    /// Order of z in Z^rows / im(A); 0 when infinite.
    BigInt order;
    /// x with A x = z when in_image.
    std::vector<BigInt> witness;
};

IntegralImage integral_image(const IntMatrix& a, const std::vector<BigInt>& z);

/// H = ker(next) / im(prev) at a middle space of dimension k. `prev` is k x k_prev,
/// `next` is k_next x k. With modulus m >= 1 coefficients are Z/m; with
/// modulus 0 they are integral.
struct HomologyData {
    std::vector<BigInt> invariant_factors;  // torsion, each > 1, divisibility chain
    std::size_t free_rank = 0;
    /// Mod-m only: one representative cocycle per invariant factor (entries in [0, m)).
    std::vector<std::vector<std::int64_t>> representatives;
};

HomologyData homology_mod(const IntMatrix& prev, const IntMatrix& next, std::size_t k, std::int64_t m);
HomologyData homology_integral(const IntMatrix& prev, const IntMatrix& next, std::size_t k);

}  // namespace dblext
