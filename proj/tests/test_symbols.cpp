#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace jetspace;
using namespace testing_support;

namespace
{

// Exact definiteness by leading principal minors.
Rational det_dense(std::vector<RationalVector> a)
{
    const std::size_t n = a.size();
    Rational d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) {
            ++p;
        }
        if (p == n) {
            return 0;
        }
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            const Rational f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) {
                a[i][j] -= f * a[c][j];
            }
        }
    }
    return d;
}

bool sylvester_definite(const std::vector<RationalVector> &q)
{
    bool pos = true, neg = true;
    for (std::size_t k = 1; k <= q.size(); ++k) {
        std::vector<RationalVector> lead(k, RationalVector(k));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                lead[i][j] = q[i][j];
            }
        }
        const Rational d = det_dense(lead);
        pos = pos && d > 0;
        neg = neg && (k % 2 == 1 ? d < 0 : d > 0);
    }
    return pos || neg;
}

// Values at deg + 1 integer points of det(point with slot = t), interpolated.
UniPoly along_slot(const LaurentPoly &det, RationalVector point, std::size_t slot)
{
    const auto deg = *det.homogeneous_degree();
    UniPoly acc;
    std::vector<Rational> xs, ys;
    for (std::int64_t k = 0; k <= deg; ++k) {
        point[slot] = k;
        xs.emplace_back(k);
        ys.push_back(det.evaluate(point));
    }
    // Lagrange form
    for (std::size_t i = 0; i < xs.size(); ++i) {
        UniPoly basis = UniPoly::constant(ys[i]);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j != i) {
                basis = basis * UniPoly{-xs[j] / (xs[i] - xs[j]), Rational(1) / (xs[i] - xs[j])};
            }
        }
        acc += basis;
    }
    return acc;
}

bool nonzero(const RationalVector &v)
{
    return std::any_of(v.begin(), v.end(), [](const Rational &x) { return x != 0; });
}

} // namespace

TEST_CASE("symbol examples", "[symbol]")
{
    const auto lap = symbol_of(laplacian(2), 2);
    const std::size_t m = 2;
    LaurentPoly want(2 * m);
    want.add_term(MultiIndex{0, 0, 2, 0}, 1);
    want.add_term(MultiIndex{0, 0, 0, 2}, 1);
    CHECK(lap.entry(0, 0) == want);
    CHECK(symbol_entry_string(lap.entry(0, 0), 2) == "xi0^2 + xi1^2");

    const WeylElement xd = WeylElement::monomial(MultiIndex{1}, MultiIndex{1}) + WeylElement::constant(1, 1);
    const auto s = symbol_of(xd, 1);
    CHECK(s.entry(0, 0) == LaurentPoly::monomial(MultiIndex{1, 1}));
    CHECK_FALSE(s.constant_coefficient());

    CHECK(symbol_of(xd, 2).is_zero());
    CHECK_THROWS_AS(symbol_of(laplacian(2), 1), precondition_error);
}

TEST_CASE("block operator symbols are strictly triangular and singular", "[symbol][block]")
{
    std::mt19937_64 rng(108);
    for (int trial = 0; trial < 20; ++trial) {
        const auto n = uniform(rng, 1, 2);
        const auto len = static_cast<std::size_t>(n) + 1;
        const auto d = uniform(rng, 0, 2);
        WeylElement d12 = random_graded_weyl(rng, len, d, 3, 2);
        if (!d12.order() || *d12.order() < 1) {
            continue;
        }
        const auto b = block_operator(n, 0, d, d12);
        const auto sym = symbol_of(b.entries(), *d12.order());
        CHECK(sym.entry(0, 0).is_zero());
        CHECK(sym.entry(0, 1).is_zero());
        CHECK(sym.entry(1, 1).is_zero());
        CHECK_FALSE(sym.entry(1, 0).is_zero());
        CHECK(sym.determinant().is_zero());
    }
    const auto b = block_operator(1, 0, 2, WeylElement::monomial(MultiIndex{3, 0}, MultiIndex{1, 0}));
    const auto sym = symbol_of(b.entries(), 1);
    CHECK(symbol_entry_string(sym.entry(1, 0), 2) == "x0^3*xi0");
    CHECK(sym.determinant().is_zero());
}

TEST_CASE("symbols multiply on constant coefficient pairs", "[symbol][property]")
{
    std::mt19937_64 rng(13113);
    for (int trial = 0; trial < 60; ++trial) {
        const auto m = static_cast<std::size_t>(uniform(rng, 1, 3));
        const auto r = static_cast<std::size_t>(uniform(rng, 1, 2));
        const auto n1 = uniform(rng, 0, 3);
        const auto n2 = uniform(rng, 0, 3);
        OperatorMatrix a(r, std::vector<WeylElement>(r)), b(r, std::vector<WeylElement>(r));
        for (auto &row : a) {
            for (auto &e : row) {
                e = random_constant_coefficient(rng, m, n1);
            }
        }
        for (auto &row : b) {
            for (auto &e : row) {
                e = random_constant_coefficient(rng, m, n2);
            }
        }
        const auto lhs = symbol_of(compose_matrices(a, b), n1 + n2);
        const auto rhs = symbol_of(a, n1) * symbol_of(b, n2);
        CHECK(lhs == rhs);
        CHECK(torus_operator_check(a));
    }
}

TEST_CASE("symbol vanishes exactly below the order", "[symbol][property]")
{
    std::mt19937_64 rng(46);
    for (int trial = 0; trial < 60; ++trial) {
        const auto m = static_cast<std::size_t>(uniform(rng, 1, 3));
        const auto k = uniform(rng, 0, 3);
        const WeylElement d = random_constant_coefficient(rng, m, k);
        const auto order = *d.order();
        CHECK_FALSE(symbol_of(d, order).is_zero());
        CHECK(symbol_of(d, order + 1).is_zero());
    }
}

TEST_CASE("algebraic ellipticity examples", "[elliptic][algebraic]")
{
    CHECK(elliptic_algebraic(scalar_symbol(1, 1, xi(1, 0))).elliptic);

    const auto prod = elliptic_algebraic(scalar_symbol(2, 2, xi(2, 0) * xi(2, 1)));
    CHECK_FALSE(prod.elliptic);
    REQUIRE(prod.witness.has_value());
    CHECK(prod.witness->is_rational());
    CHECK(prod.witness->point == RationalVector{1, 0});

    const auto lap = elliptic_algebraic(symbol_of(laplacian(2), 2));
    CHECK_FALSE(lap.elliptic);
    REQUIRE(lap.witness.has_value());
    REQUIRE(lap.witness->root_slot.has_value());
    CHECK(lap.witness->root_poly == UniPoly{Rational(1), Rational(0), Rational(1)});
    CHECK(lap.witness->to_string() == "(1, t) with t^2 + 1 = 0");

    const auto lap4 = elliptic_algebraic(symbol_of(laplacian(4), 2));
    CHECK_FALSE(lap4.elliptic);
    CHECK(lap4.witness->by_homogeneity);

    const auto cube = elliptic_algebraic(scalar_symbol(2, 3, xi(2, 0, 3) + Rational(8) * xi(2, 1, 3)));
    REQUIRE(cube.witness.has_value());
    CHECK(cube.witness->point == RationalVector{1, make_rational(-1, 2)});

    const WeylElement xd = WeylElement::monomial(MultiIndex{1}, MultiIndex{1});
    CHECK_THROWS_AS(elliptic_algebraic(symbol_of(xd, 1)), precondition_error);
}

TEST_CASE("constant coefficient symbols are never algebraically elliptic in two or more variables",
          "[elliptic][algebraic][property]")
{
    std::mt19937_64 rng(13114);
    for (int trial = 0; trial < 80; ++trial) {
        const auto m = static_cast<std::size_t>(uniform(rng, 2, 4));
        const auto r = static_cast<std::size_t>(uniform(rng, 1, 2));
        const auto order = uniform(rng, 1, 3);
        OperatorMatrix op(r, std::vector<WeylElement>(r));
        for (auto &row : op) {
            for (auto &e : row) {
                e = random_constant_coefficient(rng, m, order, 2);
            }
        }
        const auto sym = symbol_of(op, order);
        const auto v = elliptic_algebraic(sym);
        CHECK_FALSE(v.elliptic);
        REQUIRE(v.witness.has_value());
        if (v.witness->is_rational()) {
            CHECK(nonzero(v.witness->point));
            CHECK(v.determinant.evaluate(v.witness->point) == 0);
        } else if (v.witness->root_slot) {
            const UniPoly q = along_slot(v.determinant, v.witness->point, *v.witness->root_slot);
            CHECK(divmod(q, v.witness->root_poly).second.is_zero());
        } else {
            CHECK(v.witness->by_homogeneity);
            CHECK(v.determinant.homogeneous_degree().value_or(0) > 0);
        }
    }
}

TEST_CASE("real ellipticity examples", "[elliptic][real]")
{
    CHECK(elliptic_real(symbol_of(laplacian(2), 2)).elliptic == Tri::yes);
    CHECK(elliptic_real(symbol_of(laplacian(4), 2)).elliptic == Tri::yes);

    const auto hyp = elliptic_real(scalar_symbol(2, 2, xi(2, 0, 2) - xi(2, 1, 2)));
    CHECK(hyp.elliptic == Tri::no);
    REQUIRE(hyp.zero.has_value());
    CHECK(hyp.determinant.evaluate(*hyp.zero) == 0);
    CHECK(abs((*hyp.zero)[0]) == abs((*hyp.zero)[1]));
    CHECK(hyp.determinant.evaluate(RationalVector{1, 1}) == 0);

    const auto prod = elliptic_real(scalar_symbol(2, 2, xi(2, 0) * xi(2, 1)));
    CHECK(prod.elliptic == Tri::no);
    CHECK(*prod.zero == RationalVector{1, 0});

    const auto irr = elliptic_real(scalar_symbol(2, 2, xi(2, 0, 2) - Rational(2) * xi(2, 1, 2)));
    CHECK(irr.elliptic == Tri::no);
    REQUIRE(irr.sign_change.has_value());
    CHECK(irr.determinant.evaluate(irr.sign_change->first) > 0);
    CHECK(irr.determinant.evaluate(irr.sign_change->second) < 0);

    const LaurentPoly r2 = xi(2, 0, 2) + xi(2, 1, 2);
    CHECK(elliptic_real(scalar_symbol(2, 4, r2 * r2)).elliptic == Tri::unknown);
    const auto mixed = elliptic_real(scalar_symbol(2, 4, r2 * (xi(2, 0, 2) - Rational(3) * xi(2, 1, 2))));
    CHECK(mixed.elliptic == Tri::no);
    const auto cubic = elliptic_real(scalar_symbol(2, 3, xi(2, 0, 3) + xi(2, 1, 3)));
    CHECK(cubic.elliptic == Tri::no);
    REQUIRE(cubic.zero.has_value());
    CHECK(cubic.determinant.evaluate(*cubic.zero) == 0);
}

TEST_CASE("quadratic real verdicts agree with Sylvester and a sphere scan", "[elliptic][real][property]")
{
    std::mt19937_64 rng(2512);
    for (int trial = 0; trial < 120; ++trial) {
        const auto m = static_cast<std::size_t>(uniform(rng, 2, 3));
        std::vector<RationalVector> q(m, RationalVector(m, Rational(0)));
        LaurentPoly form(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i; j < m; ++j) {
                const Integer c = uniform(rng, -3, 3);
                std::vector<exponent_t> e(m, 0);
                ++e[i];
                ++e[j];
                form.add_term(MultiIndex(std::move(e)), Rational(c));
                if (i == j) {
                    q[i][i] = c;
                } else {
                    q[i][j] = q[j][i] = Rational(c) / 2;
                }
            }
        }
        if (form.is_zero()) {
            continue;
        }
        const auto v = elliptic_real(scalar_symbol(m, 2, form));
        INFO(symbol_entry_string(scalar_symbol(m, 2, form).entry(0, 0), m));
        CHECK((v.elliptic == Tri::yes) == sylvester_definite(q));
        bool pos = false, neg = false, zero = false;
        detail::for_each_sphere_point(m, 4, [&](const RationalVector &p) {
            const Rational val = form.evaluate(p);
            zero = zero || val == 0;
            pos = pos || val > 0;
            neg = neg || val < 0;
            return true;
        });
        if (v.elliptic == Tri::yes) {
            CHECK_FALSE(zero);
            CHECK_FALSE((pos && neg));
        } else {
            CHECK(v.elliptic == Tri::no);
            if (v.zero) {
                CHECK(nonzero(*v.zero));
                CHECK(form.evaluate(*v.zero) == 0);
            } else {
                REQUIRE(v.sign_change.has_value());
                CHECK(form.evaluate(v.sign_change->first) * form.evaluate(v.sign_change->second) < 0);
            }
        }
    }
}

TEST_CASE("combined verdict", "[elliptic]")
{
    const auto lap = check_ellipticity(symbol_of(laplacian(2), 2));
    CHECK_FALSE(lap.algebraic);
    CHECK(lap.real == Tri::yes);
    REQUIRE(lap.witness.has_value());
    CHECK_FALSE(lap.witness->is_rational());

    const auto prod = check_ellipticity(scalar_symbol(2, 2, xi(2, 0) * xi(2, 1)));
    CHECK_FALSE(prod.algebraic);
    CHECK(prod.real == Tri::no);
    CHECK(prod.witness->is_rational());

    const auto line = check_ellipticity(scalar_symbol(1, 3, Rational(5) * xi(1, 0, 3)));
    CHECK(line.algebraic);
    CHECK(line.real == Tri::yes);
    CHECK_FALSE(line.witness.has_value());
    CHECK(to_string(Tri::unknown) == "unknown");
}

TEST_CASE("torus operators", "[elliptic][torus]")
{
    CHECK(torus_operator_check({{laplacian(3)}}));
    CHECK_FALSE(torus_operator_check({{WeylElement::monomial(MultiIndex{1}, MultiIndex{1})}}));
    const WeylElement mixed = compose(WeylElement::d(2, 0), WeylElement::d(2, 1)) + WeylElement::constant(2, 3);
    CHECK(torus_operator_check({{mixed}}));
}
