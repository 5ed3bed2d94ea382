#ifndef JETSPACE_JET_HPP
#define JETSPACE_JET_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <jetspace/errors.hpp>
#include <jetspace/exact_matrix.hpp>
#include <jetspace/laurent_poly.hpp>
#include <jetspace/multi_index.hpp>
#include <jetspace/rational.hpp>
#include <jetspace/weyl.hpp>

namespace jetspace
{

// Class in B (x) B / I^{N+1} for B = Q[x_1..x_m], written in the coordinates
// x and dx = y - x so that I is generated by the dx_i. Terms of dx-degree
// above N are dropped on construction and after every product.
//
// Internally a polynomial in 2m variables: x_1..x_m then dx_1..dx_m.
class JetElement
{
public:
    JetElement(std::size_t m, std::int64_t order) : m_m(m), m_order(order), m_poly(2 * m)
    {
        detail::require(order >= 0, "jet order must be nonnegative");
    }

    std::size_t nvars() const
    {
        return m_m;
    }
    std::int64_t order() const
    {
        return m_order;
    }
    bool is_zero() const
    {
        return m_poly.is_zero();
    }

    void add_term(const MultiIndex &x, const MultiIndex &dx, const Rational &c)
    {
        detail::require(x.size() == m_m && dx.size() == m_m, "jet monomial has wrong length");
        if (dx.total() > m_order) {
            return;
        }
        m_poly.add_term(join(x, dx), c);
    }

    // Visits (x-exponent, dx-exponent, coefficient).
    template <typename F>
    void for_each_term(F &&f) const
    {
        for (const auto &[mono, c] : m_poly.terms()) {
            auto [x, dx] = split(mono);
            f(x, dx, c);
        }
    }

    // The coefficient of dx^k as a polynomial in x.
    LaurentPoly dx_coefficient(const MultiIndex &k) const
    {
        LaurentPoly out(m_m);
        for_each_term([&](const MultiIndex &x, const MultiIndex &dx, const Rational &c) {
            if (dx == k) {
                out.add_term(x, c);
            }
        });
        return out;
    }

    friend JetElement operator*(const JetElement &a, const JetElement &b)
    {
        detail::require(a.m_m == b.m_m && a.m_order == b.m_order, "jet product of incompatible elements");
        JetElement out(a.m_m, a.m_order);
        for (const auto &[ma, ca] : a.m_poly.terms()) {
            for (const auto &[mb, cb] : b.m_poly.terms()) {
                const MultiIndex s = ma + mb;
                if (a.dx_degree(s) <= a.m_order) {
                    out.m_poly.add_term(s, ca * cb);
                }
            }
        }
        return out;
    }
    friend JetElement operator+(JetElement a, const JetElement &b)
    {
        detail::require(a.m_m == b.m_m && a.m_order == b.m_order, "jet sum of incompatible elements");
        a.m_poly += b.m_poly;
        return a;
    }
    friend bool operator==(const JetElement &, const JetElement &) = default;

    // e.g. "x0^2 + 2*x0*dx0".
    std::string to_string() const
    {
        if (is_zero()) {
            return "0";
        }
        std::string s;
        for (auto it = m_poly.terms().rbegin(); it != m_poly.terms().rend(); ++it) {
            Rational c = it->second;
            if (!s.empty()) {
                s += c < 0 ? " - " : " + ";
                c = abs(c);
            } else if (c < 0) {
                s += "-";
                c = -c;
            }
            std::string mono;
            for (std::size_t i = 0; i < 2 * m_m; ++i) {
                const exponent_t e = it->first[i];
                if (e == 0) {
                    continue;
                }
                if (!mono.empty()) {
                    mono += "*";
                }
                mono += (i < m_m ? "x" : "dx") + std::to_string(i % m_m);
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

private:
    MultiIndex join(const MultiIndex &x, const MultiIndex &dx) const
    {
        std::vector<exponent_t> v(x.begin(), x.end());
        v.insert(v.end(), dx.begin(), dx.end());
        return MultiIndex(std::move(v));
    }
    std::pair<MultiIndex, MultiIndex> split(const MultiIndex &mono) const
    {
        std::vector<exponent_t> x(mono.begin(), mono.begin() + static_cast<std::ptrdiff_t>(m_m));
        std::vector<exponent_t> dx(mono.begin() + static_cast<std::ptrdiff_t>(m_m), mono.end());
        return {MultiIndex(std::move(x)), MultiIndex(std::move(dx))};
    }
    std::int64_t dx_degree(const MultiIndex &mono) const
    {
        std::int64_t d = 0;
        for (std::size_t i = m_m; i < 2 * m_m; ++i) {
            d += mono[i];
        }
        return d;
    }

    std::size_t m_m;
    std::int64_t m_order;
    LaurentPoly m_poly;
};

// d^N(f) = f(x + dx) truncated past dx-degree N.
inline JetElement universal_derivation(const LaurentPoly &f, std::int64_t order)
{
    detail::require(f.is_polynomial(), "universal derivation needs a polynomial (nonnegative exponents)");
    const std::size_t m = f.nvars();
    JetElement out(m, order);
    for (const auto &[g, c] : f.terms()) {
        // x^g -> prod_j sum_{k_j} binom(g_j, k_j) x_j^{g_j - k_j} dx_j^{k_j}
        MultiIndex k(m);
        const auto rec = [&](const auto &self, std::size_t pos, std::int64_t used, const Integer &coef) -> void {
            if (pos == m) {
                out.add_term(g - k, k, c * Rational(coef));
                return;
            }
            for (exponent_t j = 0; j <= g[pos] && used + j <= order; ++j) {
                k[pos] = j;
                self(self, pos + 1, used + j, coef * binomial(g[pos], j));
            }
            k[pos] = 0;
        };
        rec(rec, 0, 0, Integer(1));
    }
    return out;
}

// Rank of J^N(B^r / Q) for B a polynomial ring in m variables.
inline Integer jet_free_rank(std::int64_t m, std::int64_t order, std::int64_t r)
{
    detail::require(m >= 1 && order >= 0 && r >= 1, "jet_free_rank needs m >= 1, N >= 0, r >= 1");
    return r * binomial(m + order, order);
}

// The B-linear map J^N(B) -> B attached to an operator of order <= N:
// dx^k |-> k! * sum_alpha c_{alpha,k} x^alpha, so that lift(d^N f) = D f.
class JetLift
{
public:
    JetLift(WeylElement op, std::int64_t order) : m_op(std::move(op)), m_order(order)
    {
        const auto o = m_op.order();
        detail::require(!o || *o <= order, "operator order exceeds the jet order");
    }

    LaurentPoly on_basis(const MultiIndex &k) const
    {
        LaurentPoly out(m_op.nvars());
        const Rational kf = [&] {
            Integer f = 1;
            for (auto e : k) {
                f *= factorial(e);
            }
            return Rational(f);
        }();
        for (const auto &[mono, c] : m_op.terms()) {
            if (mono.d == k) {
                out.add_term(mono.x, c * kf);
            }
        }
        return out;
    }

    LaurentPoly operator()(const JetElement &j) const
    {
        detail::require(j.nvars() == m_op.nvars() && j.order() == m_order, "jet element does not match the lift");
        LaurentPoly out(m_op.nvars());
        j.for_each_term([&](const MultiIndex &x, const MultiIndex &dx, const Rational &c) {
            out += LaurentPoly::monomial(x, c) * on_basis(dx);
        });
        return out;
    }

private:
    WeylElement m_op;
    std::int64_t m_order;
};

// Checks D~(d^N f) == D f on every test polynomial.
inline bool do_jet_correspondence_check(const WeylElement &op, std::int64_t order, const std::vector<LaurentPoly> &tests)
{
    const JetLift lift(op, order);
    for (const auto &f : tests) {
        if (lift(universal_derivation(f, order)) != apply(op, f)) {
            return false;
        }
    }
    return true;
}

struct SymbolQuotientReport {
    bool holds = false;
    std::size_t dimension = 0;
};

// The operators d^beta, |beta| = N, against the jet basis dx^k, |k| = N: their
// lifts restricted to I^N / I^{N+1} form the pairing matrix. They project to a
// basis of DO^N / DO^{N-1} iff this matrix is invertible over B; its entries
// are constants here, so rank over Q decides it.
inline SymbolQuotientReport symbol_quotient_check(std::int64_t m, std::int64_t order)
{
    detail::require(m >= 1 && order >= 1, "symbol_quotient_check needs m >= 1, N >= 1");
    const auto n = static_cast<std::size_t>(m);
    const auto top = compositions(n, order);
    ExactMatrix pairing(top.size(), top.size());
    bool constant_entries = true;
    for (std::size_t i = 0; i < top.size(); ++i) {
        const JetLift lift(WeylElement::monomial(MultiIndex(n), top[i]), order);
        for (std::size_t j = 0; j < top.size(); ++j) {
            const LaurentPoly v = lift.on_basis(top[j]);
            if (v.is_zero()) {
                continue;
            }
            if (v.size() != 1 || v.terms().begin()->first != MultiIndex(n)) {
                constant_entries = false;
                continue;
            }
            pairing.set(i, j, v.terms().begin()->second);
        }
    }
    SymbolQuotientReport rep;
    rep.dimension = top.size();
    rep.holds = constant_entries && rank(pairing) == top.size() && Integer(top.size()) == binomial(m + order - 1, order);
    return rep;
}

} // namespace jetspace

#endif
