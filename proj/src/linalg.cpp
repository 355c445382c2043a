#include "dblext/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <stdexcept>

#include "dblext/errors.hpp"

namespace dblext {

namespace {

struct Overflow {};

// Checked 64-bit arithmetic; BigInt overloads never overflow.
std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
    return r;
}
std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
}
std::int64_t neg(std::int64_t a) {
    if (a == INT64_MIN) throw Overflow{};
    return -a;
}
std::int64_t quot(std::int64_t a, std::int64_t b) {
    if (a == INT64_MIN && b == -1) throw Overflow{};
    return a / b;
}
std::int64_t magnitude(std::int64_t a) { return a < 0 ? neg(a) : a; }

BigInt add(const BigInt& a, const BigInt& b) { return a + b; }
BigInt mul(const BigInt& a, const BigInt& b) { return a * b; }
BigInt neg(const BigInt& a) { return -a; }
BigInt quot(const BigInt& a, const BigInt& b) { return a / b; }
BigInt magnitude(const BigInt& a) { return abs(a); }

BigInt to_big(std::int64_t v) { return BigInt(v); }
BigInt to_big(const BigInt& v) { return v; }

template <class T>
BigMatrix to_big_matrix(const Matrix<T>& m) {
    BigMatrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        out.data[i] = to_big(m.data[i]);
    }
    return out;
}

template <class T>
class SmithWork {
public:
    SmithWork(Matrix<T> a, const SmithOptions& o) : A(std::move(a)), opt(o) {
        if (opt.row_transform) P = Matrix<T>::identity(A.rows);
        if (opt.row_inverse) Pinv = Matrix<T>::identity(A.rows);
        if (opt.col_transform) Q = Matrix<T>::identity(A.cols);
        if (opt.col_inverse) Qinv = Matrix<T>::identity(A.cols);
    }

    SmithForm run() {
        const std::size_t n = std::min(A.rows, A.cols);
        std::size_t rank = 0;
        for (std::size_t t = 0; t < n; ++t) {
            if (!move_min_to_pivot(t, true)) {
                break;
            }
            for (;;) {
                bool dirty = false;
                for (std::size_t i = t + 1; i < A.rows; ++i) {
                    if (A(i, t) != 0) {
                        row_addmul(i, t, neg(quot(A(i, t), A(t, t))), t);
                        dirty = dirty || A(i, t) != 0;
                    }
                }
                for (std::size_t j = t + 1; j < A.cols; ++j) {
                    if (A(t, j) != 0) {
                        col_addmul(j, t, neg(quot(A(t, j), A(t, t))), t);
                        dirty = dirty || A(t, j) != 0;
                    }
                }
                if (dirty) {
                    move_min_to_pivot(t, false);
                    continue;
                }
                bool fixed = false;
                for (std::size_t i = t + 1; i < A.rows && !fixed; ++i) {
                    for (std::size_t j = t + 1; j < A.cols; ++j) {
                        if (A(i, j) % A(t, t) != 0) {
                            row_addmul(t, i, T(1), t);
                            fixed = true;
                            break;
                        }
                    }
                }
                if (!fixed) {
                    break;
                }
            }
            if (A(t, t) < 0) {
                row_negate(t, t);
            }
            ++rank;
        }
        SmithForm out;
        out.rows = A.rows;
        out.cols = A.cols;
        out.rank = rank;
        for (std::size_t i = 0; i < rank; ++i) {
            out.diagonal.push_back(to_big(A(i, i)));
        }
        if (opt.row_transform) out.P = to_big_matrix(P);
        if (opt.row_inverse) out.Pinv = to_big_matrix(Pinv);
        if (opt.col_transform) out.Q = to_big_matrix(Q);
        if (opt.col_inverse) out.Qinv = to_big_matrix(Qinv);
        return out;
    }

private:
    // Moves the nonzero entry of least magnitude to (t, t). With `whole` the
    // search covers the trailing submatrix, otherwise only row t and column t.
    bool move_min_to_pivot(std::size_t t, bool whole) {
        bool found = false;
        std::size_t bi = 0, bj = 0;
        T best = 0;
        auto consider = [&](std::size_t i, std::size_t j) {
            if (A(i, j) != 0 && (!found || magnitude(A(i, j)) < best)) {
                found = true;
                best = magnitude(A(i, j));
                bi = i;
                bj = j;
            }
        };
        if (whole) {
            for (std::size_t i = t; i < A.rows; ++i) {
                for (std::size_t j = t; j < A.cols; ++j) {
                    consider(i, j);
                }
            }
        } else {
            for (std::size_t i = t; i < A.rows; ++i) consider(i, t);
            for (std::size_t j = t + 1; j < A.cols; ++j) consider(t, j);
        }
        if (!found) {
            return false;
        }
        if (bi != t) row_swap(bi, t);
        if (bj != t) col_swap(bj, t);
        return true;
    }

    void row_swap(std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < A.cols; ++c) std::swap(A(i, c), A(j, c));
        if (opt.row_transform)
            for (std::size_t c = 0; c < P.cols; ++c) std::swap(P(i, c), P(j, c));
        if (opt.row_inverse)
            for (std::size_t r = 0; r < Pinv.rows; ++r) std::swap(Pinv(r, i), Pinv(r, j));
    }
    void col_swap(std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < A.rows; ++r) std::swap(A(r, i), A(r, j));
        if (opt.col_transform)
            for (std::size_t r = 0; r < Q.rows; ++r) std::swap(Q(r, i), Q(r, j));
        if (opt.col_inverse)
            for (std::size_t c = 0; c < Qinv.cols; ++c) std::swap(Qinv(i, c), Qinv(j, c));
    }
    // row_i += q * row_j
    void row_addmul(std::size_t i, std::size_t j, const T& q, std::size_t from) {
        for (std::size_t c = from; c < A.cols; ++c)
            if (A(j, c) != 0) A(i, c) = add(A(i, c), mul(q, A(j, c)));
        if (opt.row_transform)
            for (std::size_t c = 0; c < P.cols; ++c)
                if (P(j, c) != 0) P(i, c) = add(P(i, c), mul(q, P(j, c)));
        if (opt.row_inverse)
            for (std::size_t r = 0; r < Pinv.rows; ++r)
                if (Pinv(r, i) != 0) Pinv(r, j) = add(Pinv(r, j), neg(mul(q, Pinv(r, i))));
    }
    // col_j += q * col_i
    void col_addmul(std::size_t j, std::size_t i, const T& q, std::size_t from) {
        for (std::size_t r = from; r < A.rows; ++r)
            if (A(r, i) != 0) A(r, j) = add(A(r, j), mul(q, A(r, i)));
        if (opt.col_transform)
            for (std::size_t r = 0; r < Q.rows; ++r)
                if (Q(r, i) != 0) Q(r, j) = add(Q(r, j), mul(q, Q(r, i)));
        if (opt.col_inverse)
            for (std::size_t c = 0; c < Qinv.cols; ++c)
                if (Qinv(j, c) != 0) Qinv(i, c) = add(Qinv(i, c), neg(mul(q, Qinv(j, c))));
    }
    void row_negate(std::size_t i, std::size_t from) {
        for (std::size_t c = from; c < A.cols; ++c) A(i, c) = neg(A(i, c));
        if (opt.row_transform)
            for (std::size_t c = 0; c < P.cols; ++c) P(i, c) = neg(P(i, c));
        if (opt.row_inverse)
            for (std::size_t r = 0; r < Pinv.rows; ++r) Pinv(r, i) = neg(Pinv(r, i));
    }

    Matrix<T> A, P, Pinv, Q, Qinv;
    SmithOptions opt;
};

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

// Returns (g, u, v) with u a + v b = g = gcd(a, b), for a, b >= 0.
std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b) {
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
        std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
        std::tie(old_t, t) = std::make_tuple(t, old_t - q * t);
    }
    return {old_r, old_s, old_t};
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    if (m == 1) return 0;
    auto [g, u, v] = ext_gcd(mod_floor(a, m), m);
    (void)v;
    if (g != 1) throw std::logic_error("inverse_mod: not a unit");
    return mod_floor(u, m);
}

// A unit u of Z/m with u * a == gcd(a, m) (mod m).
std::int64_t normalizing_unit(std::int64_t a, std::int64_t m) {
    const std::int64_t d = gcd64(a, m);
    const std::int64_t md = m / d;
    std::int64_t u = inverse_mod(a / d, md);
    if (md == 1) u = 1;
    while (gcd64(u, m) != 1) {
        u += md;
    }
    return u;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / gcd64(a, b) * b; }

std::vector<BigInt> big_matvec(const BigMatrix& a, const std::vector<BigInt>& x) {
    std::vector<BigInt> out(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        BigInt s = 0;
        for (std::size_t j = 0; j < a.cols; ++j) {
            if (a(i, j) != 0 && x[j] != 0) s += a(i, j) * x[j];
        }
        out[i] = s;
    }
    return out;
}

void require_modulus(std::int64_t m) {
    if (m < 1) throw DomainError("modulus must be at least 1");
}

}  // namespace

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t mod_floor(const BigInt& a, std::int64_t m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r.convert_to<std::int64_t>();
}

SmithForm smith_normal_form(const IntMatrix& a, const SmithOptions& options) {
    try {
        return SmithWork<std::int64_t>(a, options).run();
    } catch (const Overflow&) {
        SmithForm out = SmithWork<BigInt>(to_big_matrix(a), options).run();
        out.used_bigint = true;
        return out;
    }
}

SmithForm smith_normal_form(const BigMatrix& a, const SmithOptions& options) {
    SmithForm out = SmithWork<BigInt>(a, options).run();
    out.used_bigint = true;
    return out;
}

// ModLattice -----------------------------------------------------------------------

ModLattice::ModLattice(std::int64_t modulus, std::size_t dimension,
                       const std::vector<std::vector<std::int64_t>>& generators)
    : m_(modulus), k_(dimension) {
    require_modulus(modulus);
    std::vector<std::vector<std::int64_t>> work;
    for (const auto& g : generators) {
        if (g.size() != k_) throw std::logic_error("ModLattice: generator of wrong length");
        std::vector<std::int64_t> row(k_);
        bool nonzero = false;
        for (std::size_t j = 0; j < k_; ++j) {
            row[j] = mod_floor(g[j], m_);
            nonzero = nonzero || row[j] != 0;
        }
        if (nonzero) work.push_back(std::move(row));
    }
    auto combine = [&](const std::vector<std::int64_t>& a, std::int64_t ca, const std::vector<std::int64_t>& b,
                       std::int64_t cb) {
        std::vector<std::int64_t> out(k_);
        for (std::size_t j = 0; j < k_; ++j) {
            out[j] = mod_floor(mulmod(mod_floor(ca, m_), a[j], m_) + mulmod(mod_floor(cb, m_), b[j], m_), m_);
        }
        return out;
    };
    auto is_zero = [](const std::vector<std::int64_t>& v) {
        return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
    };
    for (std::size_t c = 0; c < k_ && !work.empty(); ++c) {
        std::optional<std::vector<std::int64_t>> pivot;
        std::vector<std::vector<std::int64_t>> rest;
        for (auto& row : work) {
            if (row[c] == 0) {
                rest.push_back(std::move(row));
                continue;
            }
            if (!pivot) {
                pivot = std::move(row);
                continue;
            }
            const std::int64_t a = (*pivot)[c], b = row[c];
            auto [g, u, v] = ext_gcd(a, b);
            auto new_pivot = combine(*pivot, u, row, v);
            auto new_row = combine(*pivot, b / g, row, -(a / g));
            pivot = std::move(new_pivot);
            if (!is_zero(new_row)) rest.push_back(std::move(new_row));
        }
        work = std::move(rest);
        if (!pivot) continue;
        const std::int64_t u = normalizing_unit((*pivot)[c], m_);
        auto p = combine(*pivot, u, *pivot, 0);
        const std::int64_t d = p[c];
        auto extra = combine(p, m_ / d, p, 0);
        if (!is_zero(extra)) work.push_back(std::move(extra));
        rows_.push_back(std::move(p));
        pivot_col_.push_back(c);
        pivot_val_.push_back(d);
    }
    // Reduce entries above each pivot into [0, d) so the basis is canonical.
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (std::size_t r = 0; r < i; ++r) {
            const std::int64_t q = rows_[r][pivot_col_[i]] / pivot_val_[i];
            if (q != 0) rows_[r] = combine(rows_[r], 1, rows_[i], -q);
        }
    }
}

std::vector<std::int64_t> ModLattice::reduce(std::vector<std::int64_t> x) const {
    if (x.size() != k_) throw std::logic_error("ModLattice::reduce: wrong length");
    for (auto& v : x) v = mod_floor(v, m_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const std::int64_t q = x[pivot_col_[i]] / pivot_val_[i];
        if (q == 0) continue;
        for (std::size_t j = 0; j < k_; ++j) {
            x[j] = mod_floor(x[j] - mulmod(q, rows_[i][j], m_), m_);
        }
    }
    return x;
}

bool ModLattice::contains(const std::vector<std::int64_t>& x) const {
    auto r = reduce(x);
    return std::all_of(r.begin(), r.end(), [](std::int64_t v) { return v == 0; });
}

BigInt ModLattice::size() const {
    BigInt n = 1;
    for (std::int64_t d : pivot_val_) n *= m_ / d;
    return n;
}

// Solving -------------------------------------------------------------------------------

ModSolution solve_mod(const IntMatrix& a, const std::vector<std::int64_t>& b, std::int64_t m) {
    require_modulus(m);
    if (b.size() != a.rows) throw std::logic_error("solve_mod: right-hand side of wrong length");
    SmithOptions opt;
    opt.row_transform = true;
    opt.col_transform = true;
    const SmithForm s = smith_normal_form(a, opt);
    std::vector<BigInt> bb(b.begin(), b.end());
    const std::vector<BigInt> r = big_matvec(s.P, bb);

    ModSolution out;
    out.modulus = m;
    std::vector<std::int64_t> y(a.cols, 0);
    std::vector<std::int64_t> g(a.rows, m);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const std::int64_t ri = mod_floor(r[i], m);
        if (i < s.rank) g[i] = gcd64(mod_floor(s.diagonal[i], m), m);
        if (ri % g[i] != 0) {
            out.solvable = false;
            out.certificate.assign(a.rows, 0);
            for (std::size_t j = 0; j < a.rows; ++j) {
                out.certificate[j] = mulmod(m / g[i], mod_floor(s.P(i, j), m), m);
            }
            out.count = 0;
            return out;
        }
        if (i < s.rank && g[i] != m) {
            const std::int64_t mg = m / g[i];
            const std::int64_t si = mod_floor(s.diagonal[i], m) / g[i];
            y[i] = mulmod(ri / g[i], inverse_mod(si, mg), mg);
        }
    }
    std::vector<std::int64_t> x(a.cols, 0);
    std::vector<std::vector<std::int64_t>> gens;
    for (std::size_t j = 0; j < a.cols; ++j) {
        const std::int64_t scale = j < s.rank ? m / g[j] : 1;
        std::vector<std::int64_t> col(a.cols);
        for (std::size_t i = 0; i < a.cols; ++i) {
            const std::int64_t q = mod_floor(s.Q(i, j), m);
            x[i] = mod_floor(x[i] + mulmod(q, y[j], m), m);
            col[i] = mulmod(q, scale % m, m);
        }
        gens.push_back(std::move(col));
    }
    ModLattice kernel(m, a.cols, gens);
    out.solvable = true;
    out.particular = kernel.reduce(x);
    out.kernel = kernel.basis();
    out.count = kernel.size();
    return out;
}

std::int64_t class_order_mod(const SmithForm& smith, const std::vector<std::int64_t>& z, std::int64_t m) {
    require_modulus(m);
    std::vector<BigInt> zz(z.begin(), z.end());
    const std::vector<BigInt> r = big_matvec(smith.P, zz);
    std::int64_t order = 1;
    for (std::size_t i = 0; i < smith.rows; ++i) {
        const std::int64_t g = i < smith.rank ? gcd64(mod_floor(smith.diagonal[i], m), m) : m;
        const std::int64_t ri = mod_floor(r[i], m);
        order = lcm64(order, g / gcd64(g, ri));
    }
    return order;
}

IntegralImage integral_image(const IntMatrix& a, const std::vector<BigInt>& z) {
    if (z.size() != a.rows) throw std::logic_error("integral_image: vector of wrong length");
    SmithOptions opt;
    opt.row_transform = true;
    opt.col_transform = true;
    const SmithForm s = smith_normal_form(a, opt);
    const std::vector<BigInt> r = big_matvec(s.P, z);
    IntegralImage out;
    out.order = 1;
    for (std::size_t i = s.rank; i < a.rows; ++i) {
        if (r[i] != 0) {
            out.order = 0;
            return out;
        }
    }
    std::vector<BigInt> y(a.cols, 0);
    for (std::size_t i = 0; i < s.rank; ++i) {
        const BigInt g = gcd(s.diagonal[i], r[i]);
        out.order = lcm(out.order, s.diagonal[i] / g);
        if (r[i] % s.diagonal[i] == 0) y[i] = r[i] / s.diagonal[i];
    }
    out.in_image = out.order == 1;
    if (out.in_image) out.witness = big_matvec(s.Q, y);
    return out;
}

// Homology -------------------------------------------------------------------------------

HomologyData homology_mod(const IntMatrix& prev, const IntMatrix& next, std::size_t k, std::int64_t m) {
    require_modulus(m);
    if (prev.rows != k || next.cols != k) throw std::logic_error("homology_mod: dimension mismatch");
    HomologyData out;
    if (k == 0) return out;

    SmithOptions opt;
    opt.col_transform = true;
    opt.col_inverse = true;
    const SmithForm sn = smith_normal_form(next, opt);
    // Cocycles mod m: L = Q diag(scale) Z^k.
    std::vector<std::int64_t> scale(k, 1);
    for (std::size_t i = 0; i < sn.rank; ++i) {
        scale[i] = m / gcd64(mod_floor(sn.diagonal[i], m), m);
    }
    // Coboundaries plus m Z^k, in the coordinates of L.
    BigMatrix c(k, prev.cols + k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < prev.cols; ++j) {
            BigInt sum = 0;
            for (std::size_t l = 0; l < k; ++l) {
                if (prev(l, j) != 0) sum += sn.Qinv(i, l) * prev(l, j);
            }
            c(i, j) = sum;
        }
        for (std::size_t l = 0; l < k; ++l) {
            c(i, prev.cols + l) = sn.Qinv(i, l) * m;
        }
        for (std::size_t j = 0; j < c.cols; ++j) {
            if (c(i, j) % scale[i] != 0) throw std::logic_error("homology_mod: lattice is not contained in cocycles");
            c(i, j) /= scale[i];
        }
    }
    SmithOptions copt;
    copt.row_inverse = true;
    const SmithForm sc = smith_normal_form(c, copt);
    if (sc.rank != k) throw std::logic_error("homology_mod: quotient is not finite");

    std::vector<std::vector<std::int64_t>> boundary_gens;
    for (std::size_t j = 0; j < prev.cols; ++j) {
        std::vector<std::int64_t> col(k);
        for (std::size_t i = 0; i < k; ++i) col[i] = mod_floor(prev(i, j), m);
        boundary_gens.push_back(std::move(col));
    }
    const ModLattice boundaries(m, k, boundary_gens);

    for (std::size_t i = 0; i < k; ++i) {
        if (sc.diagonal[i] == 1) continue;
        out.invariant_factors.push_back(sc.diagonal[i]);
        std::vector<std::int64_t> rep(k, 0);
        for (std::size_t r = 0; r < k; ++r) {
            BigInt sum = 0;
            for (std::size_t l = 0; l < k; ++l) {
                if (sc.Pinv(l, i) != 0) sum += sn.Q(r, l) * scale[l] * sc.Pinv(l, i);
            }
            rep[r] = mod_floor(sum, m);
        }
        out.representatives.push_back(boundaries.reduce(rep));
    }
    return out;
}

HomologyData homology_integral(const IntMatrix& prev, const IntMatrix& next, std::size_t k) {
    if (prev.rows != k || next.cols != k) throw std::logic_error("homology_integral: dimension mismatch");
    HomologyData out;
    const SmithForm sn = smith_normal_form(next);
    const SmithForm sp = smith_normal_form(prev);
    out.free_rank = k - sn.rank - sp.rank;
    for (const auto& d : sp.diagonal) {
        if (d > 1) out.invariant_factors.push_back(d);
    }
    return out;
}

}  // namespace dblext
