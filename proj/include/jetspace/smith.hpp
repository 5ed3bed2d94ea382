#ifndef JETSPACE_SMITH_HPP
#define JETSPACE_SMITH_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <jetspace/errors.hpp>
#include <jetspace/univariate.hpp>

namespace jetspace
{

using PolyMatrix = std::vector<std::vector<UniPoly>>;

struct SmithForm {
    std::size_t rows = 0;
    std::size_t cols = 0;
    // Nonzero diagonal entries, monic, each dividing the next.
    std::vector<UniPoly> invariants;
};

namespace detail
{

inline std::size_t matrix_cols(const PolyMatrix &a)
{
    const std::size_t c = a.empty() ? 0 : a.front().size();
    for (const auto &r : a) {
        require(r.size() == c, "ragged polynomial matrix");
    }
    return c;
}

} // namespace detail

namespace detail
{

// Scales a vector of polynomials by a nonzero rational so its coefficients
// become coprime integers. Units of Q[t] are the nonzero constants, so this
// does not change the module.
template <typename Get>
void make_primitive(std::size_t count, Get &&get)
{
    Integer den = 1, num = 0;
    for (std::size_t i = 0; i < count; ++i) {
        for (const auto &c : get(i).coefficients()) {
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
            mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
        }
    }
    if (num == 0) {
        return;
    }
    const Rational f = make_rational(den, num);
    if (f == 1) {
        return;
    }
    for (std::size_t i = 0; i < count; ++i) {
        UniPoly &p = get(i);
        p = f * p;
    }
}

} // namespace detail

namespace detail
{

struct XGcd {
    UniPoly g, u, v;
};

// g = u a + v b with g monic; a, b not both zero.
inline XGcd xgcd(const UniPoly &a, const UniPoly &b)
{
    UniPoly r0 = a, r1 = b;
    UniPoly u0 = UniPoly::constant(1), u1, v0, v1 = UniPoly::constant(1);
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        UniPoly u2 = u0 - q * u1;
        UniPoly v2 = v0 - q * v1;
        r0 = std::move(r1);
        r1 = std::move(r);
        u0 = std::move(u1);
        u1 = std::move(u2);
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    const Rational inv = 1 / r0.leading();
    return {inv * r0, inv * u0, inv * v0};
}

inline UniPoly poly_gcd(UniPoly a, UniPoly b)
{
    while (!b.is_zero()) {
        UniPoly r = divmod(a, b).second;
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

// Gaussian elimination on a dense rational matrix; returns the pivot columns
// and, for square input, the determinant.
inline std::pair<std::vector<std::size_t>, Rational> dense_eliminate(std::vector<RationalVector> m)
{
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m.front().size();
    std::vector<std::size_t> pivots;
    Rational det = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) {
            ++p;
        }
        if (p == rows) {
            det = 0;
            continue;
        }
        if (p != r) {
            std::swap(m[p], m[r]);
            det = -det;
        }
        det *= m[r][c];
        const Rational inv = 1 / m[r][c];
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) {
                continue;
            }
            const Rational f = m[i][c] * inv;
            for (std::size_t j = c; j < cols; ++j) {
                m[i][j] -= f * m[r][j];
            }
        }
        pivots.push_back(c);
        ++r;
    }
    if (r < rows) {
        det = 0;
    }
    return {std::move(pivots), det};
}

inline std::vector<RationalVector> evaluate_matrix(const PolyMatrix &a, const Rational &t)
{
    std::vector<RationalVector> m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (const auto &p : a[i]) {
            m[i].push_back(p.evaluate(t));
        }
    }
    return m;
}

inline PolyMatrix transpose(const PolyMatrix &a, std::size_t cols)
{
    PolyMatrix t(cols, std::vector<UniPoly>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            t[j][i] = a[i][j];
        }
    }
    return t;
}

// Newton interpolation through (xs[i], ys[i]).
inline UniPoly interpolate(const std::vector<Rational> &xs, std::vector<Rational> ys)
{
    const std::size_t n = xs.size();
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = n - 1; i >= k; --i) {
            ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - k]);
        }
    }
    UniPoly p;
    for (std::size_t k = n; k-- > 0;) {
        p = p * UniPoly{-xs[k], Rational(1)} + UniPoly::constant(ys[k]);
    }
    return p;
}

// A nonzero maximal minor of a matrix with full row rank, or zero when the
// row rank is not full.
inline UniPoly full_row_minor(const PolyMatrix &a, std::size_t cols)
{
    const std::size_t rows = a.size();
    if (rows == 0 || rows > cols) {
        return {};
    }
    std::int64_t maxdeg = 0;
    for (const auto &r : a) {
        for (const auto &p : r) {
            maxdeg = std::max(maxdeg, p.degree());
        }
    }
    // a rows x rows minor has degree <= rows * maxdeg, so it cannot vanish at
    // more points than that
    const auto tries = static_cast<std::int64_t>(rows) * maxdeg + 1;
    std::vector<std::size_t> chosen;
    for (std::int64_t x = 0; x < tries && chosen.size() < rows; ++x) {
        auto piv = dense_eliminate(evaluate_matrix(a, Rational(x))).first;
        if (piv.size() == rows) {
            chosen = std::move(piv);
        }
    }
    if (chosen.size() < rows) {
        return {};
    }
    PolyMatrix sub(rows);
    std::int64_t bound = 0;
    for (const std::size_t c : chosen) {
        std::int64_t d = 0;
        for (std::size_t i = 0; i < rows; ++i) {
            sub[i].push_back(a[i][c]);
            d = std::max(d, a[i][c].degree());
        }
        bound += d;
    }
    std::vector<Rational> xs, ys;
    for (std::int64_t x = 0; x <= bound; ++x) {
        xs.emplace_back(x);
        ys.push_back(dense_eliminate(evaluate_matrix(sub, Rational(x))).second);
    }
    return interpolate(xs, std::move(ys)).monic();
}

// Euclidean diagonalization. With a nonzero modulus d whose multiples d e_i
// all lie in the column span, every entry may be reduced mod d; the
// invariants are then gcd(diagonal, d), with d filling the missing slots.
inline std::vector<UniPoly> diagonalize(PolyMatrix a, std::size_t cols, const UniPoly &d)
{
    const std::size_t rows = a.size();
    const bool modular = !d.is_zero();
    std::vector<UniPoly> diag;

    auto primitive_row = [&](std::size_t i, std::size_t from) {
        make_primitive(cols - from, [&](std::size_t j) -> UniPoly & { return a[i][from + j]; });
    };
    auto primitive_col = [&](std::size_t j, std::size_t from) {
        make_primitive(rows - from, [&](std::size_t i) -> UniPoly & { return a[from + i][j]; });
    };
    auto reduce = [&](UniPoly &p) {
        if (modular && p.degree() >= d.degree()) {
            p = divmod(p, d).second;
        }
    };
    if (modular) {
        for (auto &r : a) {
            for (auto &p : r) {
                reduce(p);
            }
        }
    }

    std::size_t k = 0;
    while (k < rows && k < cols) {
        std::size_t pi = rows, pj = cols;
        for (std::size_t i = k; i < rows; ++i) {
            for (std::size_t j = k; j < cols; ++j) {
                if (!a[i][j].is_zero() && (pi == rows || a[i][j].degree() < a[pi][pj].degree())) {
                    pi = i;
                    pj = j;
                }
            }
        }
        if (pi == rows) {
            break;
        }
        std::swap(a[k], a[pi]);
        for (auto &r : a) {
            std::swap(r[k], r[pj]);
        }
        const Rational lead = a[k][k].leading();
        for (std::size_t j = k; j < cols; ++j) {
            a[k][j] = (1 / lead) * a[k][j];
        }

        bool clean = true;
        for (std::size_t i = k + 1; i < rows; ++i) {
            if (a[i][k].is_zero()) {
                continue;
            }
            const auto [q, r] = divmod(a[i][k], a[k][k]);
            if (r.is_zero()) {
                for (std::size_t j = k; j < cols; ++j) {
                    a[i][j] -= q * a[k][j];
                    reduce(a[i][j]);
                }
                primitive_row(i, k);
                continue;
            }
            // rows k, i <- [u v; -e/g p/g] (rows k, i); determinant 1
            const auto x = xgcd(a[k][k], a[i][k]);
            const UniPoly ek = -divmod(a[i][k], x.g).first;
            const UniPoly pk = divmod(a[k][k], x.g).first;
            for (std::size_t j = k; j < cols; ++j) {
                UniPoly top = x.u * a[k][j] + x.v * a[i][j];
                UniPoly bottom = ek * a[k][j] + pk * a[i][j];
                reduce(top);
                reduce(bottom);
                a[k][j] = std::move(top);
                a[i][j] = std::move(bottom);
            }
            a[i][k] = UniPoly();
            primitive_row(i, k);
        }
        for (std::size_t j = k + 1; j < cols; ++j) {
            if (a[k][j].is_zero()) {
                continue;
            }
            const auto [q, r] = divmod(a[k][j], a[k][k]);
            if (r.is_zero()) {
                for (std::size_t i = k; i < rows; ++i) {
                    a[i][j] -= q * a[i][k];
                    reduce(a[i][j]);
                }
                primitive_col(j, k);
                continue;
            }
            const auto x = xgcd(a[k][k], a[k][j]);
            const UniPoly ek = -divmod(a[k][j], x.g).first;
            const UniPoly pk = divmod(a[k][k], x.g).first;
            for (std::size_t i = k; i < rows; ++i) {
                UniPoly left = x.u * a[i][k] + x.v * a[i][j];
                UniPoly right = ek * a[i][k] + pk * a[i][j];
                reduce(left);
                reduce(right);
                a[i][k] = std::move(left);
                a[i][j] = std::move(right);
            }
            a[k][j] = UniPoly();
            primitive_col(j, k);
            // column k changed below the pivot
            clean = false;
        }
        if (!clean) {
            bool below = false;
            for (std::size_t i = k + 1; i < rows; ++i) {
                below = below || !a[i][k].is_zero();
            }
            if (below) {
                continue;
            }
        }
        // fold a row holding a non-multiple into row k
        bool divides = true;
        for (std::size_t i = k + 1; i < rows && divides; ++i) {
            for (std::size_t j = k + 1; j < cols; ++j) {
                if (!divmod(a[i][j], a[k][k]).second.is_zero()) {
                    for (std::size_t c = k; c < cols; ++c) {
                        a[k][c] += a[i][c];
                    }
                    divides = false;
                    break;
                }
            }
        }
        if (!divides) {
            continue;
        }
        diag.push_back(a[k][k].monic());
        ++k;
    }
    if (modular) {
        for (auto &p : diag) {
            p = poly_gcd(p, d);
        }
        while (diag.size() < rows) {
            diag.push_back(d);
        }
    }
    return diag;
}

} // namespace detail

// Smith normal form over Q[t]. When the matrix or its transpose has full row
// rank, the elimination runs modulo a nonzero maximal minor so degrees stay
// bounded.
inline SmithForm smith_form(const PolyMatrix &a, std::size_t cols)
{
    const std::size_t rows = a.size();
    for (const auto &r : a) {
        detail::require(r.size() == cols, "ragged polynomial matrix");
    }
    SmithForm out{rows, cols, {}};
    if (rows == 0 || cols == 0) {
        return out;
    }
    if (rows <= cols) {
        const UniPoly d = detail::full_row_minor(a, cols);
        out.invariants = detail::diagonalize(a, cols, d);
        return out;
    }
    PolyMatrix t = detail::transpose(a, cols);
    const UniPoly d = detail::full_row_minor(t, rows);
    out.invariants = detail::diagonalize(std::move(t), rows, d);
    return out;
}

inline SmithForm smith_form(const PolyMatrix &a)
{
    return smith_form(a, detail::matrix_cols(a));
}

} // namespace jetspace

#endif
