#ifndef JETSPACE_SYMBOLS_HPP
#define JETSPACE_SYMBOLS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <jetspace/errors.hpp>
#include <jetspace/laurent_poly.hpp>
#include <jetspace/multi_index.hpp>
#include <jetspace/rational.hpp>
#include <jetspace/univariate.hpp>
#include <jetspace/weyl.hpp>

namespace jetspace
{

using OperatorMatrix = std::vector<std::vector<WeylElement>>;

// Matrix of polynomials in chart variables x_1..x_m and cotangent variables
// xi_1..xi_m; every nonzero entry is homogeneous of degree N in xi. Entries
// are stored as polynomials in 2m variables, x first.
class SymbolMatrix
{
public:
    SymbolMatrix(std::size_t chart_dim, std::int64_t order, std::size_t rows, std::size_t cols)
        : m_m(chart_dim), m_order(order), m_cols(cols),
          m_entries(rows, std::vector<LaurentPoly>(cols, LaurentPoly(2 * chart_dim)))
    {
    }

    std::size_t chart_dim() const
    {
        return m_m;
    }
    std::int64_t order() const
    {
        return m_order;
    }
    std::size_t rows() const
    {
        return m_entries.size();
    }
    std::size_t cols() const
    {
        return m_cols;
    }
    const LaurentPoly &entry(std::size_t i, std::size_t j) const
    {
        return m_entries.at(i).at(j);
    }
    LaurentPoly &entry(std::size_t i, std::size_t j)
    {
        return m_entries.at(i).at(j);
    }

    bool is_zero() const
    {
        for (const auto &r : m_entries) {
            for (const auto &e : r) {
                if (!e.is_zero()) {
                    return false;
                }
            }
        }
        return true;
    }

    bool constant_coefficient() const
    {
        for (const auto &r : m_entries) {
            for (const auto &e : r) {
                for (const auto &[mono, c] : e.terms()) {
                    for (std::size_t i = 0; i < m_m; ++i) {
                        if (mono[i] != 0) {
                            return false;
                        }
                    }
                }
            }
        }
        return true;
    }

    // Determinant by cofactor expansion; square matrices only.
    LaurentPoly determinant() const
    {
        detail::require(rows() == cols(), "determinant of a non-square symbol");
        std::vector<std::size_t> colset(m_cols);
        for (std::size_t j = 0; j < m_cols; ++j) {
            colset[j] = j;
        }
        return minor_det(0, colset);
    }

    friend SymbolMatrix operator*(const SymbolMatrix &a, const SymbolMatrix &b)
    {
        detail::require(a.m_m == b.m_m, "symbol product over different charts");
        detail::require(a.cols() == b.rows(), "symbol product dimension mismatch");
        SymbolMatrix out(a.m_m, a.m_order + b.m_order, a.rows(), b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < b.cols(); ++j) {
                for (std::size_t k = 0; k < a.cols(); ++k) {
                    out.m_entries[i][j] += a.m_entries[i][k] * b.m_entries[k][j];
                }
            }
        }
        return out;
    }

    friend bool operator==(const SymbolMatrix &, const SymbolMatrix &) = default;

private:
    LaurentPoly minor_det(std::size_t row, const std::vector<std::size_t> &colset) const
    {
        if (colset.empty()) {
            return LaurentPoly::constant(2 * m_m, 1);
        }
        LaurentPoly acc(2 * m_m);
        for (std::size_t p = 0; p < colset.size(); ++p) {
            const LaurentPoly &e = m_entries[row][colset[p]];
            if (e.is_zero()) {
                continue;
            }
            std::vector<std::size_t> rest;
            rest.reserve(colset.size() - 1);
            for (std::size_t q = 0; q < colset.size(); ++q) {
                if (q != p) {
                    rest.push_back(colset[q]);
                }
            }
            const LaurentPoly term = e * minor_det(row + 1, rest);
            if (p % 2 == 0) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        return acc;
    }

    std::size_t m_m;
    std::int64_t m_order;
    std::size_t m_cols;
    std::vector<std::vector<LaurentPoly>> m_entries;
};

// Drops the x-part of a constant-coefficient entry: a polynomial in xi only.
inline LaurentPoly cotangent_part(const LaurentPoly &p, std::size_t m)
{
    LaurentPoly out(m);
    for (const auto &[mono, c] : p.terms()) {
        std::vector<exponent_t> xi(mono.begin() + static_cast<std::ptrdiff_t>(m), mono.end());
        for (std::size_t i = 0; i < m; ++i) {
            detail::require(mono[i] == 0, "symbol entry has non-constant coefficients");
        }
        out.add_term(MultiIndex(std::move(xi)), c);
    }
    return out;
}

// Names x0.. for chart variables and xi0.. for cotangent variables.
inline std::string symbol_entry_string(const LaurentPoly &p, std::size_t m)
{
    if (p.is_zero()) {
        return "0";
    }
    std::string s;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        Rational c = it->second;
        if (!s.empty()) {
            s += c < 0 ? " - " : " + ";
            c = abs(c);
        } else if (c < 0) {
            s += "-";
            c = -c;
        }
        std::string mono;
        for (std::size_t i = 0; i < 2 * m; ++i) {
            const exponent_t e = it->first[i];
            if (e == 0) {
                continue;
            }
            if (!mono.empty()) {
                mono += "*";
            }
            mono += (i < m ? "x" : "xi") + std::to_string(i % m);
            if (e != 1) {
                mono += "^" + std::to_string(e);
            }
        }
        if (mono.empty()) {
            s += c.get_str();
        } else {
            s += (c == 1 ? "" : c.get_str() + "*") + mono;
        }
    }
    return s;
}

// Top-order part of each entry with d^beta replaced by xi^beta.
inline SymbolMatrix symbol_of(const OperatorMatrix &op, std::int64_t order)
{
    detail::require(!op.empty() && !op.front().empty(), "symbol_of needs a nonempty operator matrix");
    const std::size_t m = op.front().front().nvars();
    SymbolMatrix out(m, order, op.size(), op.front().size());
    for (std::size_t i = 0; i < op.size(); ++i) {
        detail::require(op[i].size() == out.cols(), "ragged operator matrix");
        for (std::size_t j = 0; j < op[i].size(); ++j) {
            const WeylElement &e = op[i][j];
            detail::require(e.nvars() == m, "operator entries act on different variable counts");
            const auto o = e.order();
            detail::require(!o || *o <= order, "operator entry has order above N");
            for (const auto &[mono, c] : e.terms()) {
                if (mono.d.total() != order) {
                    continue;
                }
                std::vector<exponent_t> v(mono.x.begin(), mono.x.end());
                v.insert(v.end(), mono.d.begin(), mono.d.end());
                out.entry(i, j).add_term(MultiIndex(std::move(v)), c);
            }
        }
    }
    return out;
}

inline SymbolMatrix symbol_of(const WeylElement &op, std::int64_t order)
{
    return symbol_of(OperatorMatrix{{op}}, order);
}

// A point xi in the algebraic closure: `point`, except that coordinate
// root_slot (if set) is a root of root_poly. With by_homogeneity set no
// coordinates are known, only existence.
struct AlgebraicWitness {
    RationalVector point;
    std::optional<std::size_t> root_slot;
    UniPoly root_poly;
    bool by_homogeneity = false;

    bool is_rational() const
    {
        return !by_homogeneity && !root_slot;
    }

    std::string to_string() const
    {
        if (by_homogeneity) {
            return "exists by homogeneity";
        }
        std::string s = "(";
        for (std::size_t i = 0; i < point.size(); ++i) {
            if (i) {
                s += ", ";
            }
            s += root_slot == i ? std::string("t") : point[i].get_str();
        }
        s += ")";
        if (root_slot) {
            s += " with " + root_poly.to_string("t") + " = 0";
        }
        return s;
    }
};

struct AlgebraicVerdict {
    bool elliptic = false;
    std::optional<AlgebraicWitness> witness;
    LaurentPoly determinant;
};

enum class Tri { yes, no, unknown };

inline std::string to_string(Tri t)
{
    switch (t) {
        case Tri::yes:
            return "true";
        case Tri::no:
            return "false";
        default:
            return "unknown";
    }
}

struct RealVerdict {
    Tri elliptic = Tri::unknown;
    // A nonzero real point where det vanishes.
    std::optional<RationalVector> zero;
    // Two points where det takes opposite signs (a real zero lies between).
    std::optional<std::pair<RationalVector, RationalVector>> sign_change;
    LaurentPoly determinant;
};

struct RealSearchOptions {
    int max_depth = 12;
    std::size_t point_budget = 200000;
};

namespace detail
{

inline LaurentPoly constant_determinant(const SymbolMatrix &s)
{
    require(s.constant_coefficient(), "ellipticity checks need a constant-coefficient symbol");
    require(s.rows() == s.cols(), "ellipticity needs a square symbol");
    return cotangent_part(s.determinant(), s.chart_dim());
}

inline RationalVector basis_vector(std::size_t m, std::size_t k)
{
    RationalVector v(m, Rational(0));
    v[k] = 1;
    return v;
}

inline std::optional<RationalVector> basis_zero(const LaurentPoly &det)
{
    for (std::size_t k = 0; k < det.nvars(); ++k) {
        RationalVector v = basis_vector(det.nvars(), k);
        if (det.evaluate(v) == 0) {
            return v;
        }
    }
    return std::nullopt;
}

// Exact p-th root of a rational, if one exists.
inline std::optional<Rational> rational_root(const Rational &v, unsigned long p)
{
    if (v < 0 && p % 2 == 0) {
        return std::nullopt;
    }
    Integer num = abs(v.get_num());
    Integer den = v.get_den();
    Integer rn, rd;
    if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), p) == 0 || mpz_root(rd.get_mpz_t(), den.get_mpz_t(), p) == 0) {
        return std::nullopt;
    }
    Rational r = make_rational(v < 0 ? Integer(-rn) : rn, rd);
    return r;
}

// c1 xi_i^p + c2 xi_j^p: a zero is xi_i = 1, xi_j = t with t^p = -c1/c2.
inline std::optional<AlgebraicWitness> binomial_zero(const LaurentPoly &det)
{
    if (det.size() != 2) {
        return std::nullopt;
    }
    const auto &[m1, c1] = *det.terms().begin();
    const auto &[m2, c2] = *std::next(det.terms().begin());
    const std::size_t n = det.nvars();
    std::optional<std::size_t> i1, i2;
    for (std::size_t k = 0; k < n; ++k) {
        if (m1[k] != 0) {
            if (i1 || m1[k] < 0) {
                return std::nullopt;
            }
            i1 = k;
        }
        if (m2[k] != 0) {
            if (i2 || m2[k] < 0) {
                return std::nullopt;
            }
            i2 = k;
        }
    }
    if (!i1 || !i2 || *i1 == *i2 || m1[*i1] != m2[*i2]) {
        return std::nullopt;
    }
    const auto p = static_cast<unsigned long>(m1[*i1]);
    // c_a x_a^p + c_b x_b^p with a < b and x_a = 1: t^p = -c_a/c_b in slot b.
    const bool first_low = *i1 < *i2;
    const std::size_t a = first_low ? *i1 : *i2;
    const std::size_t b = first_low ? *i2 : *i1;
    const Rational target = first_low ? -c1 / c2 : -c2 / c1;
    AlgebraicWitness w;
    w.point = RationalVector(n, Rational(0));
    w.point[a] = 1;
    if (auto r = rational_root(target, p)) {
        w.point[b] = *r;
    } else {
        w.root_slot = b;
        w.root_poly = UniPoly::monomial(p) - UniPoly::constant(target);
    }
    return w;
}

// Small integer vectors in [-3,3]^m, m <= 4.
inline std::optional<RationalVector> small_integer_zero(const LaurentPoly &det)
{
    const std::size_t m = det.nvars();
    if (m > 4) {
        return std::nullopt;
    }
    RationalVector v(m, Rational(0));
    std::optional<RationalVector> found;
    const auto rec = [&](const auto &self, std::size_t pos, bool nonzero) -> void {
        if (found) {
            return;
        }
        if (pos == m) {
            if (nonzero && det.evaluate(v) == 0) {
                found = v;
            }
            return;
        }
        for (int x = -3; x <= 3; ++x) {
            v[pos] = x;
            self(self, pos + 1, nonzero || x != 0);
        }
        v[pos] = 0;
    };
    rec(rec, 0, false);
    return found;
}

} // namespace detail

// Ellipticity over an algebraically closed field: det sigma(xi) != 0 for all
// nonzero xi. For m >= 2 a nonconstant homogeneous form always has a
// nontrivial zero, so only N = 0 or m = 1 can pass.
inline AlgebraicVerdict elliptic_algebraic(const SymbolMatrix &s)
{
    AlgebraicVerdict v;
    v.determinant = detail::constant_determinant(s);
    const std::size_t m = s.chart_dim();
    const LaurentPoly &det = v.determinant;
    if (det.is_zero()) {
        v.witness = AlgebraicWitness{detail::basis_vector(m, 0), std::nullopt, {}, false};
        return v;
    }
    const auto deg = det.homogeneous_degree();
    if (!deg) {
        throw inconsistency_error("determinant of a homogeneous symbol is not homogeneous");
    }
    if (*deg == 0 || m == 1) {
        v.elliptic = true;
        return v;
    }
    if (auto z = detail::basis_zero(det)) {
        v.witness = AlgebraicWitness{*z, std::nullopt, {}, false};
    } else if (auto b = detail::binomial_zero(det)) {
        v.witness = *b;
    } else if (auto z2 = detail::small_integer_zero(det)) {
        v.witness = AlgebraicWitness{*z2, std::nullopt, {}, false};
    } else {
        AlgebraicWitness w;
        w.by_homogeneity = true;
        v.witness = w;
    }
    return v;
}

namespace detail
{

// Congruence diagonalization Q = T^{-t} diag(d) T^{-1}, i.e. Q(T y) = sum d_i y_i^2.
struct congruence {
    std::vector<RationalVector> t;
    RationalVector d;
};

inline congruence diagonalize(std::vector<RationalVector> q)
{
    const std::size_t m = q.size();
    std::vector<RationalVector> t(m, RationalVector(m, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
        t[i][i] = 1;
    }
    auto add_col_row = [&](std::size_t dst, std::size_t src, const Rational &f) {
        // column dst += f * column src, then row dst += f * row src
        for (std::size_t r = 0; r < m; ++r) {
            q[r][dst] += f * q[r][src];
            t[r][dst] += f * t[r][src];
        }
        for (std::size_t c = 0; c < m; ++c) {
            q[dst][c] += f * q[src][c];
        }
    };
    auto swap_idx = [&](std::size_t a, std::size_t b) {
        std::swap(q[a], q[b]);
        for (std::size_t r = 0; r < m; ++r) {
            std::swap(q[r][a], q[r][b]);
            std::swap(t[r][a], t[r][b]);
        }
    };
    for (std::size_t k = 0; k < m; ++k) {
        if (q[k][k] == 0) {
            std::size_t j = k + 1;
            while (j < m && q[j][j] == 0) {
                ++j;
            }
            if (j < m) {
                swap_idx(k, j);
            } else {
                j = k + 1;
                while (j < m && q[k][j] == 0) {
                    ++j;
                }
                if (j == m) {
                    continue;
                }
                add_col_row(k, j, Rational(1));
            }
        }
        for (std::size_t j = k + 1; j < m; ++j) {
            if (q[j][k] == 0) {
                continue;
            }
            const Rational f = -q[j][k] / q[k][k];
            add_col_row(j, k, f);
        }
    }
    congruence out{std::move(t), RationalVector(m)};
    for (std::size_t i = 0; i < m; ++i) {
        out.d[i] = q[i][i];
    }
    return out;
}

inline RationalVector column(const std::vector<RationalVector> &t, const RationalVector &y)
{
    RationalVector out(t.size(), Rational(0));
    for (std::size_t r = 0; r < t.size(); ++r) {
        for (std::size_t c = 0; c < y.size(); ++c) {
            out[r] += t[r][c] * y[c];
        }
    }
    return out;
}

inline void real_quadratic(const LaurentPoly &det, RealVerdict &v)
{
    const std::size_t m = det.nvars();
    std::vector<RationalVector> q(m, RationalVector(m, Rational(0)));
    for (const auto &[mono, c] : det.terms()) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < m; ++i) {
            for (exponent_t e = 0; e < mono[i]; ++e) {
                idx.push_back(i);
            }
        }
        if (idx[0] == idx[1]) {
            q[idx[0]][idx[0]] += c;
        } else {
            q[idx[0]][idx[1]] += c / 2;
            q[idx[1]][idx[0]] += c / 2;
        }
    }
    const congruence cg = diagonalize(q);
    const bool all_pos = std::all_of(cg.d.begin(), cg.d.end(), [](const Rational &x) { return x > 0; });
    const bool all_neg = std::all_of(cg.d.begin(), cg.d.end(), [](const Rational &x) { return x < 0; });
    if (all_pos || all_neg) {
        v.elliptic = Tri::yes;
        return;
    }
    v.elliptic = Tri::no;
    for (std::size_t i = 0; i < m; ++i) {
        if (cg.d[i] == 0) {
            v.zero = column(cg.t, basis_vector(m, i));
            return;
        }
    }
    const auto pos = static_cast<std::size_t>(
        std::find_if(cg.d.begin(), cg.d.end(), [](const Rational &x) { return x > 0; }) - cg.d.begin());
    const auto neg = static_cast<std::size_t>(
        std::find_if(cg.d.begin(), cg.d.end(), [](const Rational &x) { return x < 0; }) - cg.d.begin());
    // d_pos y_pos^2 + d_neg y_neg^2 = 0  <=>  (y_pos / y_neg)^2 = -d_neg / d_pos
    if (auto s = rational_root(-cg.d[neg] / cg.d[pos], 2)) {
        RationalVector y(m, Rational(0));
        y[pos] = *s;
        y[neg] = 1;
        v.zero = column(cg.t, y);
    } else {
        v.sign_change = std::make_pair(column(cg.t, basis_vector(m, pos)), column(cg.t, basis_vector(m, neg)));
    }
}

// Points of the max-norm unit sphere with coordinates on the dyadic grid of
// step 2^-level. Visits until f returns false.
template <typename F>
bool for_each_sphere_point(std::size_t m, int level, F &&f)
{
    const long steps = 2L << level; // grid values -1 + i 2^-level, i = 0..steps
    const Rational h = make_rational(1, Integer(1) << static_cast<unsigned long>(level));
    RationalVector v(m);
    for (std::size_t face = 0; face < m; ++face) {
        for (int sign : {1, -1}) {
            v[face] = sign;
            std::vector<long> idx(m, 0);
            while (true) {
                for (std::size_t k = 0; k < m; ++k) {
                    if (k != face) {
                        v[k] = Rational(-1) + h * idx[k];
                    }
                }
                if (!f(static_cast<const RationalVector &>(v))) {
                    return false;
                }
                std::size_t k = 0;
                for (; k < m; ++k) {
                    if (k == face) {
                        continue;
                    }
                    if (++idx[k] <= steps) {
                        break;
                    }
                    idx[k] = 0;
                }
                if (k == m) {
                    break;
                }
            }
        }
    }
    return true;
}

} // namespace detail

// Ellipticity over the reals: det sigma(xi) != 0 for all nonzero real xi.
// Quadratic determinants are decided exactly; other degrees by a sign search
// on dyadic grids of the unit sphere, which can only refute.
inline RealVerdict elliptic_real(const SymbolMatrix &s, const RealSearchOptions &opts = {})
{
    RealVerdict v;
    v.determinant = detail::constant_determinant(s);
    const LaurentPoly &det = v.determinant;
    const std::size_t m = s.chart_dim();
    if (det.is_zero()) {
        v.elliptic = Tri::no;
        v.zero = detail::basis_vector(m, 0);
        return v;
    }
    const auto deg = det.homogeneous_degree();
    if (!deg) {
        throw inconsistency_error("determinant of a homogeneous symbol is not homogeneous");
    }
    if (*deg == 0 || m == 1) {
        v.elliptic = Tri::yes;
        return v;
    }
    if (auto z = detail::basis_zero(det)) {
        v.elliptic = Tri::no;
        v.zero = *z;
        return v;
    }
    if (*deg == 2) {
        detail::real_quadratic(det, v);
        return v;
    }
    for (int level = 1; level <= opts.max_depth; ++level) {
        const double per_face = std::pow(double((2L << level) + 1), double(m - 1));
        if (2.0 * double(m) * per_face > double(opts.point_budget)) {
            break;
        }
        std::optional<RationalVector> pos, neg;
        detail::for_each_sphere_point(m, level, [&](const RationalVector &p) {
            const Rational val = det.evaluate(p);
            if (val == 0) {
                v.zero = p;
                return false;
            }
            if (val > 0 && !pos) {
                pos = p;
            }
            if (val < 0 && !neg) {
                neg = p;
            }
            return !(pos && neg);
        });
        if (v.zero) {
            v.elliptic = Tri::no;
            return v;
        }
        if (pos && neg) {
            v.elliptic = Tri::no;
            v.sign_change = std::make_pair(*pos, *neg);
            return v;
        }
    }
    v.elliptic = Tri::unknown;
    return v;
}

struct EllipticityVerdict {
    bool algebraic = false;
    Tri real = Tri::unknown;
    std::optional<AlgebraicWitness> witness;
};

// Both notions side by side. The witness is a real zero when one is known,
// otherwise the algebraic witness.
inline EllipticityVerdict check_ellipticity(const SymbolMatrix &s)
{
    const AlgebraicVerdict alg = elliptic_algebraic(s);
    const RealVerdict re = elliptic_real(s);
    EllipticityVerdict out{alg.elliptic, re.elliptic, alg.witness};
    if (re.zero) {
        out.witness = AlgebraicWitness{*re.zero, std::nullopt, {}, false};
    }
    return out;
}

// Constant coefficients (no x in any term): the operator commutes with
// translations and descends to every torus quotient.
inline bool torus_operator_check(const OperatorMatrix &op)
{
    for (const auto &r : op) {
        for (const auto &e : r) {
            if (!e.has_constant_coefficients()) {
                return false;
            }
        }
    }
    return true;
}

} // namespace jetspace

#endif
