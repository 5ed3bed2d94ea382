#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace jetspace;
using namespace testing_support;

namespace
{

struct Outcome {
    bool ok = true;
    std::ostringstream note;

    void require(bool cond, const std::string &what)
    {
        if (!cond && ok) {
            note << "first failure: " << what << "; ";
        }
        ok = ok && cond;
    }
};

struct Criterion {
    int id;
    std::string name;
    double budget;
    std::function<void(Outcome &)> body;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t as_size(const Integer &z)
{
    return static_cast<std::size_t>(z.get_ui());
}

void weyl_faithfulness(Outcome &out)
{
    std::mt19937_64 rng(20260101);
    std::size_t checked = 0;
    for (int pair = 0; pair < 500; ++pair) {
        const auto n = static_cast<std::size_t>(uniform(rng, 1, 3));
        const WeylElement d1 = random_graded_weyl(rng, n, uniform(rng, -2, 2), 3);
        const WeylElement d2 = random_graded_weyl(rng, n, uniform(rng, -2, 2), 3);
        const WeylElement c = compose(d1, d2);
        for (const auto &g : box(n, -4, 4)) {
            out.require(apply(c, g) == apply(d1, apply(d2, g)), d1.to_string() + " o " + d2.to_string());
            ++checked;
        }
    }
    out.note << "500 pairs, " << checked << " monomial checks";
}

void p1_baseline(Outcome &out)
{
    const auto dim = global_do_dimension(1, 0, 0, 1).dim;
    out.require(dim == 4, "dim DO^1(O,O) on P1 = " + std::to_string(dim));
    for (std::int64_t a = -5; a <= 5; ++a) {
        for (std::int64_t b = -5; b <= 5; ++b) {
            const auto got = global_do_dimension(1, a, b, 0).dim;
            out.require(Integer(static_cast<unsigned long>(got)) == h0_line(1, b - a),
                        "order 0 at a=" + std::to_string(a) + " b=" + std::to_string(b));
        }
    }
    out.note << "dim DO^1 = " << dim << ", 121 order-zero pairs";
}

void vector_fields(Outcome &out)
{
    for (std::int64_t n = 2; n <= 3; ++n) {
        const Integer h = h0_sym_tangent(n, 1, 0).h0;
        out.require(h == n * n + 2 * n, "h0(T) on P" + std::to_string(n));
        out.note << "P" << n << ": " << h << " ";
    }
}

const std::int64_t growth_pairs[][2] = {{0, 0}, {0, 1}, {0, -1}, {0, 2}};
std::map<std::int64_t, GrowthReport> growth_reports;

void difference_law(Outcome &out)
{
    for (const auto &[a, b] : growth_pairs) {
        const GrowthReport rep = verify_growth(2, a, b, 4);
        growth_reports[b] = rep;
        const std::string tag = "(a,b)=(" + std::to_string(a) + "," + std::to_string(b) + ")";
        out.require(rep.threshold.has_value() && *rep.threshold <= 4, tag + " no threshold");
        if (!rep.threshold) {
            continue;
        }
        const std::int64_t m = *rep.threshold;
        for (std::int64_t order = m + 1; order <= 4; ++order) {
            const auto dim = global_do_dimension(2, a, b, order).dim;
            const auto prev = global_do_dimension(2, a, b, order - 1).dim;
            const Integer expect = h0_sym_tangent(2, order, b - a).h0;
            out.require(Integer(static_cast<unsigned long>(dim - prev)) == expect,
                        tag + " N=" + std::to_string(order));
        }
        out.note << tag << " M=" << m << " ";
    }
}

void growth_formula(Outcome &out)
{
    for (const auto &[a, b] : growth_pairs) {
        const std::string tag = "(a,b)=(" + std::to_string(a) + "," + std::to_string(b) + ")";
        const auto it = growth_reports.find(b);
        out.require(it != growth_reports.end(), tag + " missing report");
        if (it == growth_reports.end()) {
            continue;
        }
        const GrowthReport &rep = it->second;
        out.require(rep.polynomial.has_value(), tag + " no polynomial");
        if (!rep.polynomial) {
            continue;
        }
        const auto &p = *rep.polynomial;
        out.require(p.degree() == 4, tag + " degree");
        const std::int64_t m = *rep.threshold;
        for (std::int64_t order = m + 1; order <= 4; ++order) {
            const auto idx = static_cast<std::size_t>(order - m - 1);
            const Rational dim(static_cast<unsigned long>(rep.table.rows[static_cast<std::size_t>(order)].dim));
            out.require(p(order) == dim, tag + " P(N) at N=" + std::to_string(order));
            out.require(idx < rep.line_pair_values.size() && Rational(rep.line_pair_values[idx]) == p(order),
                        tag + " line pair at N=" + std::to_string(order));
        }
        out.require(rep.verdict, tag + " verdict");
    }
    out.note << "4 pairs, degree 4, line-pair formula agrees";
}

void negative_twist(Outcome &out)
{
    std::optional<std::int64_t> found;
    std::size_t dim0 = 0;
    for (std::int64_t order = 0; order <= 4 && !found; ++order) {
        const auto dim = global_do_dimension(2, 0, -1, order).dim;
        if (order == 0) {
            dim0 = dim;
        }
        if (dim > 0) {
            found = order;
        }
    }
    out.require(dim0 == 0, "dim at N=0 is " + std::to_string(dim0));
    out.require(found.has_value(), "no operator up to N=4");
    const auto search = negative_twist_existence(2, 1, 4);
    out.require(search.order == found, "search disagrees with sweep");
    out.note << "dim(0)=" << dim0 << ", first N=" << (found ? std::to_string(*found) : "none");
}

void induced_maps(Outcome &out)
{
    for (std::int64_t n = 1; n <= 3; ++n) {
        const auto m = induced_cohomology_map(n, -n - 1, -n - 1, euler_operator(static_cast<std::size_t>(n) + 1), n);
        out.require(m.matrix.rows() == 1 && m.matrix.cols() == 1 && m.matrix.get(0, 0) == -(n + 1),
                    "Euler on P" + std::to_string(n));
    }
    std::mt19937_64 rng(30102);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = uniform(rng, 1, 3);
        const auto len = static_cast<std::size_t>(n) + 1;
        const auto a = uniform(rng, 0, n == 3 ? 2 : 3);
        const auto d2 = uniform(rng, -1, 1);
        const auto d1 = uniform(rng, -1, 1);
        const WeylElement op2 = random_graded_weyl(rng, len, d2, 2);
        const WeylElement op1 = random_graded_weyl(rng, len, d1, 2);
        const auto m2 = induced_cohomology_map(n, a, a + d2, op2, 0);
        const auto m1 = induced_cohomology_map(n, a + d2, a + d2 + d1, op1, 0);
        const auto m12 = induced_cohomology_map(n, a, a + d2 + d1, compose(op1, op2), 0);
        out.require(same_matrix(m12.matrix, matrix_product(m1.matrix, m2.matrix)),
                    op1.to_string() + " o " + op2.to_string());
    }
    out.note << "Euler -2,-3,-4; 100 H^0 pairs";
}

void jet_suite(Outcome &out)
{
    for (std::int64_t m = 1; m <= 5; ++m) {
        for (std::int64_t order = 0; order <= 10; ++order) {
            std::size_t counted = 0;
            for (std::int64_t k = 0; k <= order; ++k) {
                counted += compositions(static_cast<std::size_t>(m), k).size();
            }
            out.require(jet_free_rank(m, order, 1) == binomial(m + order, order)
                            && as_size(jet_free_rank(m, order, 1)) == counted,
                        "free rank m=" + std::to_string(m) + " N=" + std::to_string(order));
        }
    }

    std::mt19937_64 rng(404404);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = static_cast<std::size_t>(uniform(rng, 1, 3));
        const std::int64_t order = uniform(rng, 0, 4);
        const LaurentPoly f = random_laurent(rng, m, 3, 0, 3), g = random_laurent(rng, m, 3, 0, 3);
        out.require(universal_derivation(f * g, order) == universal_derivation(f, order) * universal_derivation(g, order),
                    "multiplicativity for " + f.to_string() + ", " + g.to_string());
    }

    for (int trial = 0; trial < 50; ++trial) {
        const auto gens = static_cast<std::size_t>(uniform(rng, 1, 3));
        const auto rels = static_cast<std::size_t>(uniform(rng, 0, 3));
        PolyMatrix rel(gens, std::vector<UniPoly>(rels));
        for (auto &row : rel) {
            for (auto &e : row) {
                e = uniform(rng, 0, 3) == 0 ? UniPoly() : random_unipoly(rng, 3);
            }
        }
        const PresentedModule pm(gens, rel);
        const std::int64_t top = gens <= 2 && rels <= 2 ? 3 : 2;
        for (std::int64_t order = 0; order <= top; ++order) {
            out.require(structure(jet_of_presented(pm, order)) == jet_oracle(pm, order),
                        "right exactness trial " + std::to_string(trial));
        }
    }

    const PresentedModule j1 = jet_of_presented(PresentedModule::cyclic(t_pow(2)), 1);
    const auto len = length(j1);
    out.require(is_torsion(j1) && len == 4, "J^1(k[t]/t^2)");
    out.note << "ranks m<=5 N<=10, 200 products, 50 presentations, J^1(k[t]/t^2) length "
             << (len ? std::to_string(*len) : "inf");
}

void symbol_suite(Outcome &out)
{
    std::mt19937_64 rng(2512);
    for (int trial = 0; trial < 60; ++trial) {
        const auto m = static_cast<std::size_t>(uniform(rng, 1, 3));
        const auto r = static_cast<std::size_t>(uniform(rng, 1, 2));
        const auto n1 = uniform(rng, 0, 3), n2 = uniform(rng, 0, 3);
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
        out.require(symbol_of(compose_matrices(a, b), n1 + n2) == symbol_of(a, n1) * symbol_of(b, n2),
                    "symbol multiplicativity");
    }

    out.require(elliptic_real(symbol_of(laplacian(2), 2)).elliptic == Tri::yes, "Laplacian in 2 variables");
    out.require(elliptic_real(symbol_of(laplacian(4), 2)).elliptic == Tri::yes, "Laplacian in 4 variables");
    for (const LaurentPoly &p : {xi(2, 0) * xi(2, 1), xi(2, 0, 2) - xi(2, 1, 2)}) {
        const auto v = elliptic_real(scalar_symbol(2, 2, p));
        const bool witnessed = v.zero && std::any_of(v.zero->begin(), v.zero->end(), [](const Rational &x) {
                                   return x != 0;
                               }) && v.determinant.evaluate(*v.zero) == 0;
        out.require(v.elliptic == Tri::no && witnessed, "real witness for " + p.to_string());
    }

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
        const auto v = elliptic_algebraic(symbol_of(op, order));
        out.require(!v.elliptic && v.witness.has_value(), "algebraic verdict");
        if (v.witness && v.witness->is_rational()) {
            out.require(v.determinant.evaluate(v.witness->point) == 0, "rational witness is a zero");
        }
    }

    std::size_t blocks = 0;
    for (int trial = 0; trial < 40 && blocks < 20; ++trial) {
        const auto n = uniform(rng, 1, 2);
        const auto d = uniform(rng, 0, 2);
        const WeylElement d12 = random_graded_weyl(rng, static_cast<std::size_t>(n) + 1, d, 3, 2);
        if (!d12.order() || *d12.order() < 1) {
            continue;
        }
        const auto b = block_operator(n, 0, d, d12);
        out.require(symbol_of(b.entries(), *d12.order()).determinant().is_zero(), "block determinant");
        ++blocks;
    }
    out.note << "60 products, Laplacians yes, 2 real witnesses, 80 algebraic, " << blocks << " block symbols";
}

void block_suite(Outcome &out)
{
    std::mt19937_64 rng(108108);
    for (int trial = 0; trial < 20; ++trial) {
        const std::int64_t n = trial < 10 ? 1 : 2;
        const auto d = uniform(rng, 0, 2);
        const auto m = uniform(rng, -1, 1);
        const WeylElement d12 = random_graded_weyl(rng, static_cast<std::size_t>(n) + 1, d, 2, 2);
        const auto rep = verify(block_operator(n, m, d, d12));
        const auto eff = effective_order(n, m, d12).value_or(0);
        out.require(rep.ok() && rep.expected_order == eff, d12.to_string());
    }
    out.note << "10 on P1, 10 on P2";
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "Weyl faithfulness", 30, weyl_faithfulness},
        {2, "P1 baseline", 10, p1_baseline},
        {3, "vector field dimensions", 10, vector_fields},
        {4, "difference law on P2", 300, difference_law},
        {5, "growth formula", 300, growth_formula},
        {6, "negative twist existence", 300, negative_twist},
        {7, "induced cohomology maps", 30, induced_maps},
        {8, "jet module suite", 60, jet_suite},
        {9, "symbol and ellipticity suite", 10, symbol_suite},
        {10, "block operator", 30, block_suite},
    };
    int failed = 0;
    double growth_elapsed = 0;
    for (const auto &c : criteria) {
        Outcome out;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(out);
        } catch (const std::exception &e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        double elapsed = seconds_since(t0);
        double spent = elapsed;
        // 4 and 5 share one budget
        if (c.id == 4 || c.id == 5) {
            growth_elapsed += elapsed;
            spent = growth_elapsed;
        }
        const bool in_time = spent <= c.budget;
        const bool pass = out.ok && in_time;
        failed += pass ? 0 : 1;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2f s / %.0f s", spent, c.budget);
        std::cout << (pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << out.note.str() << " ("
                  << timing << (in_time ? "" : ", over budget") << ")" << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
