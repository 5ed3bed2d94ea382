#ifndef JETSPACE_TEST_SUPPORT_HPP
#define JETSPACE_TEST_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <jetspace/jetspace.hpp>

namespace testing_support
{

using namespace jetspace;

inline std::int64_t uniform(std::mt19937_64 &rng, std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// Small-height rationals p/q, |p| <= h, 1 <= q <= h.
inline Rational random_rational(std::mt19937_64 &rng, std::int64_t h = 5)
{
    return make_rational(uniform(rng, -h, h), uniform(rng, 1, h));
}

inline Rational random_nonzero(std::mt19937_64 &rng, std::int64_t h = 5)
{
    Rational r;
    do {
        r = random_rational(rng, h);
    } while (r == 0);
    return r;
}

inline MultiIndex random_index(std::mt19937_64 &rng, std::size_t n, std::int64_t lo, std::int64_t hi)
{
    std::vector<exponent_t> e(n);
    for (auto &x : e) {
        x = static_cast<exponent_t>(uniform(rng, lo, hi));
    }
    return MultiIndex(std::move(e));
}

inline LaurentPoly random_laurent(std::mt19937_64 &rng, std::size_t n, std::size_t terms, std::int64_t lo = -2,
                                  std::int64_t hi = 2)
{
    LaurentPoly p(n);
    for (std::size_t t = 0; t < terms; ++t) {
        p.add_term(random_index(rng, n, lo, hi), random_rational(rng));
    }
    return p;
}

// Random index of nonnegative entries with the given total.
inline MultiIndex random_composition(std::mt19937_64 &rng, std::size_t n, std::int64_t total)
{
    std::vector<exponent_t> e(n, 0);
    for (std::int64_t k = 0; k < total; ++k) {
        ++e[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(n) - 1))];
    }
    return MultiIndex(std::move(e));
}

// Graded element of the given degree with Weyl order <= max_order.
inline WeylElement random_graded_weyl(std::mt19937_64 &rng, std::size_t n, std::int64_t degree, std::int64_t max_order,
                                      std::size_t terms = 3)
{
    WeylElement w(n);
    for (std::size_t t = 0; t < terms; ++t) {
        std::int64_t lo = std::max<std::int64_t>(0, -degree);
        if (lo > max_order) {
            break;
        }
        const std::int64_t beta_total = uniform(rng, lo, max_order);
        const MultiIndex beta = random_composition(rng, n, beta_total);
        const MultiIndex alpha = random_composition(rng, n, beta_total + degree);
        w.add_term(alpha, beta, random_nonzero(rng));
    }
    return w;
}

inline WeylElement random_constant_coefficient(std::mt19937_64 &rng, std::size_t n, std::int64_t order,
                                               std::size_t terms = 3)
{
    WeylElement w(n);
    for (std::size_t t = 0; t < terms; ++t) {
        const std::int64_t k = t == 0 ? order : uniform(rng, 0, order);
        w.add_term(MultiIndex(n), random_composition(rng, n, k), random_nonzero(rng));
    }
    return w;
}

inline ExactMatrix random_matrix(std::mt19937_64 &rng, std::size_t r, std::size_t c, double density = 0.5)
{
    ExactMatrix m(r, c);
    std::bernoulli_distribution keep(density);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            if (keep(rng)) {
                m.set(i, j, random_rational(rng));
            }
        }
    }
    return m;
}

// All multi-indices with entries in [lo, hi].
inline std::vector<MultiIndex> box(std::size_t n, std::int64_t lo, std::int64_t hi)
{
    std::vector<MultiIndex> out;
    std::vector<exponent_t> e(n, static_cast<exponent_t>(lo));
    while (true) {
        out.emplace_back(e);
        std::size_t k = 0;
        while (k < n && e[k] == hi) {
            e[k++] = static_cast<exponent_t>(lo);
        }
        if (k == n) {
            break;
        }
        ++e[k];
    }
    return out;
}

inline UniPoly t_pow(std::size_t k)
{
    return UniPoly::monomial(k);
}

inline UniPoly random_unipoly(std::mt19937_64 &rng, std::int64_t max_deg)
{
    RationalVector c(static_cast<std::size_t>(uniform(rng, 0, max_deg)) + 1);
    for (auto &x : c) {
        x = uniform(rng, -3, 3);
    }
    return UniPoly(c);
}

// (t I - C)^{N+1} for the companion matrix C of a monic p: presents the
// jet module of Q[t]/(p), computed from the second-factor action.
inline PolyMatrix companion_jet(const UniPoly &p, std::int64_t order)
{
    const UniPoly q = p.monic();
    const auto d = static_cast<std::size_t>(q.degree());
    PolyMatrix base(d, std::vector<UniPoly>(d));
    for (std::size_t i = 0; i < d; ++i) {
        base[i][i] = t_pow(1);
        if (i + 1 < d) {
            base[i + 1][i] = UniPoly::constant(-1);
        }
        base[i][d - 1] = base[i][d - 1] + UniPoly::constant(q.coefficient(i));
    }
    PolyMatrix acc(d, std::vector<UniPoly>(d));
    for (std::size_t i = 0; i < d; ++i) {
        acc[i][i] = UniPoly::constant(1);
    }
    for (std::int64_t e = 0; e <= order; ++e) {
        PolyMatrix next(d, std::vector<UniPoly>(d));
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                for (std::size_t k = 0; k < d; ++k) {
                    next[i][j] += acc[i][k] * base[k][j];
                }
            }
        }
        acc = next;
    }
    return acc;
}

// Expected structure of J^N(M) from M's decomposition.
inline ModuleStructure jet_oracle(const PresentedModule &m, std::int64_t order)
{
    const ModuleStructure s = structure(m);
    std::vector<PolyMatrix> blocks;
    std::size_t dim = 0;
    for (const auto &d : s.torsion) {
        blocks.push_back(companion_jet(d, order));
        dim += blocks.back().size();
    }
    PolyMatrix diag(dim, std::vector<UniPoly>(dim));
    std::size_t off = 0;
    for (const auto &b : blocks) {
        for (std::size_t i = 0; i < b.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                diag[off + i][off + j] = b[i][j];
            }
        }
        off += b.size();
    }
    ModuleStructure out = structure(PresentedModule(dim, diag));
    out.free_rank = s.free_rank * static_cast<std::size_t>(order + 1);
    return out;
}

inline ExactMatrix matrix_product(const ExactMatrix &l, const ExactMatrix &r)
{
    ExactMatrix out(l.rows(), r.cols());
    for (std::size_t i = 0; i < l.rows(); ++i) {
        for (const auto &[k, v] : l.row(i)) {
            for (const auto &[j, w] : r.row(k)) {
                out.add_to(i, j, v * w);
            }
        }
    }
    return out;
}

inline bool same_matrix(const ExactMatrix &l, const ExactMatrix &r)
{
    if (l.rows() != r.rows() || l.cols() != r.cols()) {
        return false;
    }
    for (std::size_t i = 0; i < l.rows(); ++i) {
        if (l.row(i) != r.row(i)) {
            return false;
        }
    }
    return true;
}

inline LaurentPoly xi(std::size_t m, std::size_t i, std::int64_t p = 1)
{
    std::vector<exponent_t> e(m, 0);
    e[i] = static_cast<exponent_t>(p);
    return LaurentPoly::monomial(MultiIndex(std::move(e)));
}

// Scalar symbol straight from a polynomial in xi.
inline SymbolMatrix scalar_symbol(std::size_t m, std::int64_t order, const LaurentPoly &p)
{
    SymbolMatrix s(m, order, 1, 1);
    for (const auto &[mono, c] : p.terms()) {
        std::vector<exponent_t> v(m, 0);
        v.insert(v.end(), mono.begin(), mono.end());
        s.entry(0, 0).add_term(MultiIndex(std::move(v)), c);
    }
    return s;
}

inline WeylElement laplacian(std::size_t m)
{
    WeylElement w(m);
    for (std::size_t i = 0; i < m; ++i) {
        w += compose(WeylElement::d(m, i), WeylElement::d(m, i));
    }
    return w;
}

inline OperatorMatrix compose_matrices(const OperatorMatrix &l, const OperatorMatrix &r)
{
    const std::size_t m = l.front().front().nvars();
    OperatorMatrix out(l.size(), std::vector<WeylElement>(r.front().size(), WeylElement(m)));
    for (std::size_t i = 0; i < l.size(); ++i) {
        for (std::size_t j = 0; j < r.front().size(); ++j) {
            for (std::size_t k = 0; k < r.size(); ++k) {
                out[i][j] += compose(l[i][k], r[k][j]);
            }
        }
    }
    return out;
}

} // namespace testing_support

#endif
