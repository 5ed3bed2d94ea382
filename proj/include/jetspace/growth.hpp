#ifndef JETSPACE_GROWTH_HPP
#define JETSPACE_GROWTH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <jetspace/cohomology.hpp>
#include <jetspace/errors.hpp>
#include <jetspace/rational.hpp>
#include <jetspace/twisted_do.hpp>
#include <jetspace/univariate.hpp>

namespace jetspace
{

struct GrowthRow {
    std::int64_t order = 0;
    std::size_t dim = 0;
    // dim(N) - dim(N-1); dim(0) itself for N = 0.
    std::int64_t delta = 0;
    // h^0(S^N T (b - a)).
    Integer expected_delta;
    bool match = false;
};

struct GrowthTable {
    std::int64_t n = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::vector<GrowthRow> rows;
};

inline std::int64_t default_nmax(std::int64_t n)
{
    return n <= 2 ? 4 : 2;
}

inline GrowthTable growth_table(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t nmax)
{
    detail::require(n >= 2, "growth computations need n >= 2");
    detail::require(nmax >= 1, "growth computations need N_max >= 1");
    GrowthTable t{n, a, b, {}};
    std::size_t prev = 0;
    for (std::int64_t order = 0; order <= nmax; ++order) {
        GrowthRow r;
        r.order = order;
        r.dim = global_do_dimension(n, a, b, order).dim;
        r.delta = static_cast<std::int64_t>(r.dim) - static_cast<std::int64_t>(prev);
        r.expected_delta = h0_sym_tangent(n, order, b - a).h0;
        r.match = Integer(r.delta) == r.expected_delta;
        prev = r.dim;
        t.rows.push_back(std::move(r));
    }
    return t;
}

// Least M < N_max such that every row with M < N <= N_max matches. At least
// one difference must be verified, so M = N_max is never returned.
inline std::optional<std::int64_t> find_threshold(const GrowthTable &t)
{
    std::optional<std::int64_t> m;
    for (auto it = t.rows.rbegin(); it != t.rows.rend(); ++it) {
        if (!it->match) {
            break;
        }
        m = it->order - 1;
    }
    if (m && *m < 0) {
        m = 0;
    }
    return m;
}

inline std::int64_t stabilization_threshold(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t nmax)
{
    const auto m = find_threshold(growth_table(n, a, b, nmax));
    if (!m) {
        throw inconsistency_error("no stabilization <= N_max = " + std::to_string(nmax) + " for (n, a, b) = ("
                                  + std::to_string(n) + ", " + std::to_string(a) + ", " + std::to_string(b) + ")");
    }
    return *m;
}

// binom(n + N, n) and chi(O(c + N)) = binom(n + c + N, n) as polynomials in N.
inline UniPoly binomial_poly(std::int64_t n, std::int64_t shift)
{
    UniPoly p = UniPoly::constant(1);
    for (std::int64_t i = 1; i <= n; ++i) {
        p *= UniPoly{make_rational(shift + i, i), make_rational(1, i)};
    }
    return p;
}

struct GrowthPolynomial {
    std::int64_t n = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t threshold = 0;
    // P(N) = binom(n+N, N) chi(O(b-a+N)) + constant
    UniPoly poly;
    Rational constant;

    std::int64_t degree() const
    {
        return poly.degree();
    }
    Rational operator()(std::int64_t order) const
    {
        return poly.evaluate(Rational(order));
    }
};

inline GrowthPolynomial growth_polynomial(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t threshold,
                                          const Integer &dim_at_threshold)
{
    detail::require(n >= 1 && threshold >= 0, "growth_polynomial needs n >= 1, M >= 0");
    GrowthPolynomial g;
    g.n = n;
    g.a = a;
    g.b = b;
    g.threshold = threshold;
    const UniPoly main = binomial_poly(n, 0) * binomial_poly(n, b - a);
    g.constant = Rational(dim_at_threshold) - main.evaluate(Rational(threshold));
    g.poly = main + UniPoly::constant(g.constant);
    if (g.poly.degree() != 2 * n) {
        throw inconsistency_error("growth polynomial does not have degree 2n");
    }
    return g;
}

inline GrowthPolynomial growth_polynomial(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t threshold)
{
    const auto d = global_do_dimension(n, a, b, threshold).dim;
    return growth_polynomial(n, a, b, threshold, Integer(static_cast<unsigned long>(d)));
}

// h^0(DO^d) = h^0(DO^M) + binom(n+d,d) chi(O(b-a+d)) - binom(n+M,M) chi(O(b-a+M)),
// evaluated in integers.
inline Integer line_pair_formula(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t threshold,
                                 const Integer &dim_at_threshold, std::int64_t order)
{
    return dim_at_threshold + binomial(n + order, order) * euler_characteristic(n, b - a + order)
           - binomial(n + threshold, threshold) * euler_characteristic(n, b - a + threshold);
}

struct GrowthReport {
    GrowthTable table;
    std::optional<std::int64_t> threshold;
    std::optional<GrowthPolynomial> polynomial;
    // Integer evaluations of the line-pair formula for M < N <= N_max.
    std::vector<Integer> line_pair_values;
    // P(N) - P(N-1) == chi(S^N T (b-a)) for M < N <= N_max.
    bool telescoping = false;
    bool verdict = false;
    std::optional<std::int64_t> first_failure;
};

inline GrowthReport verify_growth(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t nmax)
{
    GrowthReport rep;
    rep.table = growth_table(n, a, b, nmax);
    rep.threshold = find_threshold(rep.table);
    if (!rep.threshold) {
        for (const auto &r : rep.table.rows) {
            if (!r.match) {
                rep.first_failure = r.order;
                break;
            }
        }
        return rep;
    }
    const std::int64_t m = *rep.threshold;
    const Integer dim_m(static_cast<unsigned long>(rep.table.rows[static_cast<std::size_t>(m)].dim));
    rep.polynomial = growth_polynomial(n, a, b, m, dim_m);

    const UniPoly shifted = taylor_shift(rep.polynomial->poly, Rational(-1));
    rep.verdict = true;
    rep.telescoping = true;
    for (std::int64_t order = m + 1; order <= nmax; ++order) {
        const auto &row = rep.table.rows[static_cast<std::size_t>(order)];
        const Rational p = (*rep.polynomial)(order);
        const Integer lp = line_pair_formula(n, a, b, m, dim_m, order);
        rep.line_pair_values.push_back(lp);
        const Rational step = p - shifted.evaluate(Rational(order));
        if (step != Rational(chi_sym_tangent(n, order, b - a))) {
            rep.telescoping = false;
        }
        if (p != Rational(static_cast<unsigned long>(row.dim)) || Rational(lp) != p) {
            rep.verdict = false;
            if (!rep.first_failure) {
                rep.first_failure = order;
            }
        }
    }
    rep.verdict = rep.verdict && rep.telescoping;
    return rep;
}

} // namespace jetspace

#endif
