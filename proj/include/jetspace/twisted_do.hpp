#ifndef JETSPACE_TWISTED_DO_HPP
#define JETSPACE_TWISTED_DO_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <jetspace/cohomology.hpp>
#include <jetspace/errors.hpp>
#include <jetspace/exact_matrix.hpp>
#include <jetspace/laurent_poly.hpp>
#include <jetspace/multi_index.hpp>
#include <jetspace/rational.hpp>
#include <jetspace/weyl.hpp>

// Global differential operators between line bundles on P^n, modelled on the
// cone: a Weyl element in x_0..x_n that is graded of degree b - a maps
// degree-a Laurent monomials regular off one coordinate (chart sections of
// O(a)) to chart sections of O(b). The space of global operators is the
// image of this action, measured as the rank of the action on a finite box
// of test sections.

namespace jetspace
{

// (alpha, beta) with |beta| <= N and |alpha| = |beta| + b - a, ordered by
// |beta|, then beta, then alpha (lexicographically).
inline std::vector<WeylMonomial> candidate_monomials(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t order)
{
    detail::require(n >= 1 && order >= 0, "candidate_monomials needs n >= 1, N >= 0");
    const auto len = static_cast<std::size_t>(n) + 1;
    std::vector<WeylMonomial> out;
    for (std::int64_t k = std::max<std::int64_t>(0, a - b); k <= order; ++k) {
        auto betas = compositions(len, k);
        auto alphas = compositions(len, k + b - a);
        std::sort(betas.begin(), betas.end());
        std::sort(alphas.begin(), alphas.end());
        for (const auto &beta : betas) {
            for (const auto &alpha : alphas) {
                out.push_back(WeylMonomial{alpha, beta});
            }
        }
    }
    return out;
}

inline Integer candidate_count(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t order)
{
    Integer c = 0;
    for (std::int64_t k = std::max<std::int64_t>(0, a - b); k <= order; ++k) {
        c += binomial(k + n, n) * binomial(k + b - a + n, n);
    }
    return c;
}

// Degree-`degree` Laurent monomials in n+1 variables with entries in
// [-box, box] and at most one negative entry.
inline std::vector<MultiIndex> chart_test_monomials(std::int64_t n, std::int64_t degree, std::int64_t box)
{
    const auto len = static_cast<std::size_t>(n) + 1;
    std::vector<MultiIndex> out;
    auto within = [&](const MultiIndex &m) {
        return std::all_of(m.begin(), m.end(), [&](exponent_t e) { return e <= box; });
    };
    for (const auto &m : compositions(len, degree)) {
        if (within(m)) {
            out.push_back(m);
        }
    }
    for (std::size_t i = 0; i < len; ++i) {
        for (std::int64_t v = 1; v <= box; ++v) {
            for (const auto &rest : compositions(len - 1, degree + v)) {
                if (!within(rest)) {
                    continue;
                }
                std::vector<exponent_t> g;
                g.reserve(len);
                for (std::size_t j = 0, r = 0; j < len; ++j) {
                    g.push_back(j == i ? static_cast<exponent_t>(-v) : rest[r++]);
                }
                out.emplace_back(std::move(g));
            }
        }
    }
    return out;
}

namespace detail
{

// Rows are operators; a column is a slot (test monomial, image monomial).
class chart_action
{
public:
    chart_action(std::int64_t n, std::int64_t a, std::int64_t box) : m_tests(chart_test_monomials(n, a, box)) {}

    void add(const WeylElement &op)
    {
        ExactMatrix::row_type row;
        for (std::size_t t = 0; t < m_tests.size(); ++t) {
            const LaurentPoly image = apply(op, m_tests[t]);
            for (const auto &[img, c] : image.terms()) {
                auto [it, inserted] = m_cols.try_emplace({t, img}, m_cols.size());
                row[it->second] += c;
            }
        }
        m_rows.push_back(std::move(row));
    }

    ExactMatrix matrix() const
    {
        ExactMatrix m(m_rows.size(), m_cols.size());
        for (std::size_t i = 0; i < m_rows.size(); ++i) {
            for (const auto &[c, v] : m_rows[i]) {
                m.set(i, c, v);
            }
        }
        return m;
    }

    std::size_t test_count() const
    {
        return m_tests.size();
    }

private:
    std::vector<MultiIndex> m_tests;
    std::map<std::pair<std::size_t, MultiIndex>, std::size_t> m_cols;
    std::vector<ExactMatrix::row_type> m_rows;
};

inline ExactMatrix candidate_action(const std::vector<WeylMonomial> &cands, std::int64_t n, std::int64_t a, std::int64_t box)
{
    chart_action act(n, a, box);
    for (const auto &c : cands) {
        act.add(WeylElement::monomial(c.x, c.d));
    }
    return act.matrix();
}

} // namespace detail

struct TwistedDOSpace {
    std::int64_t n = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t order = 0;
    std::vector<WeylMonomial> candidates;
    // Action matrix at the reported box.
    ExactMatrix action;
    std::size_t dim = 0;
    std::int64_t box = 0;
    // (box, rank) for every box evaluated, in increasing box order.
    std::vector<std::pair<std::int64_t, std::size_t>> rank_by_box;
};

inline std::int64_t initial_box(std::int64_t a, std::int64_t b, std::int64_t order)
{
    return order + std::abs(a) + std::abs(b) + 2;
}

// Rank of the candidate action on the test box.
inline std::size_t action_rank(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t order, std::int64_t box)
{
    return rank(detail::candidate_action(candidate_monomials(n, a, b, order), n, a, box));
}

// dim Gamma(P^n, DO^N(O(a), O(b))). The box starts at N + |a| + |b| + 2 and
// grows by 2 until the rank is unchanged over two consecutive increments.
inline TwistedDOSpace global_do_dimension(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t order)
{
    detail::require(n >= 1 && order >= 0, "global_do_dimension needs n >= 1, N >= 0");
    TwistedDOSpace out;
    out.n = n;
    out.a = a;
    out.b = b;
    out.order = order;
    out.candidates = candidate_monomials(n, a, b, order);

    std::vector<ExactMatrix> mats;
    std::int64_t box = initial_box(a, b, order);
    while (true) {
        mats.push_back(detail::candidate_action(out.candidates, n, a, box));
        out.rank_by_box.emplace_back(box, rank(mats.back()));
        const std::size_t k = out.rank_by_box.size();
        if (k >= 3 && out.rank_by_box[k - 1].second == out.rank_by_box[k - 2].second
            && out.rank_by_box[k - 2].second == out.rank_by_box[k - 3].second) {
            out.box = out.rank_by_box[k - 3].first;
            out.dim = out.rank_by_box[k - 3].second;
            out.action = std::move(mats[k - 3]);
            break;
        }
        box += 2;
    }
    return out;
}

inline bool strictness_check(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t order)
{
    detail::require(order >= 1, "strictness_check needs N >= 1");
    return global_do_dimension(n, a, b, order).dim > global_do_dimension(n, a, b, order - 1).dim;
}

struct NegativeTwistSearch {
    std::int64_t n = 0;
    std::int64_t d = 0;
    std::int64_t cap = 0;
    // Least N with a nonzero operator O -> O(-d); nullopt if the cap ran out.
    std::optional<std::int64_t> order;
    // dim Gamma(DO^N(O, O(-d))) for N = 0 .. last N examined.
    std::vector<std::size_t> dims;
};

inline NegativeTwistSearch negative_twist_existence(std::int64_t n, std::int64_t d, std::int64_t cap)
{
    detail::require(n >= 1 && d >= 0 && cap >= 0, "negative_twist_existence needs n >= 1, d >= 0, cap >= 0");
    NegativeTwistSearch out{n, d, cap, std::nullopt, {}};
    for (std::int64_t order = 0; order <= cap; ++order) {
        out.dims.push_back(global_do_dimension(n, 0, -d, order).dim);
        if (out.dims.back() > 0) {
            out.order = order;
            break;
        }
    }
    return out;
}

// Monomials x^g with every g_j <= -1 and |g| = total: the Cech basis of
// H^n(P^n, O(total)).
inline std::vector<MultiIndex> all_negative_monomials(std::int64_t n, std::int64_t total)
{
    const auto len = static_cast<std::size_t>(n) + 1;
    std::vector<MultiIndex> out;
    // h = -g - 1 >= 0 with |h| = -total - (n + 1).
    const std::int64_t shifted = -total - static_cast<std::int64_t>(len);
    if (shifted < 0) {
        return out;
    }
    for (const auto &h : compositions(len, shifted)) {
        std::vector<exponent_t> g;
        g.reserve(len);
        for (std::size_t j = 0; j < len; ++j) {
            g.push_back(-h[j] - 1);
        }
        out.emplace_back(std::move(g));
    }
    return out;
}

struct InducedMap {
    std::vector<MultiIndex> source_basis;
    std::vector<MultiIndex> target_basis;
    // rows index the target basis, columns the source basis
    ExactMatrix matrix;
};

// The map H^i(O(a)) -> H^i(O(b)) induced by a graded operator, i in {0, n}.
// On H^n the image is projected onto all-negative monomials; monomials with
// some exponent >= 0 are Cech coboundaries and the operator preserves them.
inline InducedMap induced_cohomology_map(std::int64_t n, std::int64_t a, std::int64_t b, const WeylElement &op, std::int64_t i)
{
    detail::require(n >= 1, "induced_cohomology_map needs n >= 1");
    detail::require(i == 0 || i == n, "induced_cohomology_map supports i = 0 or i = n only");
    detail::require(op.nvars() == static_cast<std::size_t>(n) + 1, "operator must act on n+1 homogeneous variables");
    detail::require(op.is_graded_of(b - a), "operator must be graded of degree b - a");
    const auto len = static_cast<std::size_t>(n) + 1;

    InducedMap out;
    if (i == 0) {
        out.source_basis = a >= 0 ? compositions(len, a) : std::vector<MultiIndex>{};
        out.target_basis = b >= 0 ? compositions(len, b) : std::vector<MultiIndex>{};
    } else {
        out.source_basis = all_negative_monomials(n, a);
        out.target_basis = all_negative_monomials(n, b);
    }
    std::map<MultiIndex, std::size_t> index;
    for (std::size_t t = 0; t < out.target_basis.size(); ++t) {
        index.emplace(out.target_basis[t], t);
    }
    out.matrix = ExactMatrix(out.target_basis.size(), out.source_basis.size());
    for (std::size_t s = 0; s < out.source_basis.size(); ++s) {
        const LaurentPoly image = apply(op, out.source_basis[s]);
        for (const auto &[img, c] : image.terms()) {
            auto it = index.find(img);
            if (it != index.end()) {
                out.matrix.add_to(it->second, s, c);
            } else if (i == 0) {
                throw inconsistency_error("operator image left the space of global sections");
            }
        }
    }
    return out;
}

// Least k such that op, acting on chart sections of O(a), is in the span of
// the order-<=k candidates; nullopt for the zero action. This is the order
// of op as an operator on P^n, which can be smaller than its Weyl order
// (E acts on O(a) as the scalar a).
inline std::optional<std::int64_t> effective_order(std::int64_t n, std::int64_t a, const WeylElement &op)
{
    detail::require(op.nvars() == static_cast<std::size_t>(n) + 1, "operator must act on n+1 homogeneous variables");
    const auto deg = op.degree();
    if (op.is_zero()) {
        return std::nullopt;
    }
    detail::require(deg.has_value(), "effective_order needs a graded operator");
    const std::int64_t top = *op.order();
    const std::int64_t box = initial_box(a, a + *deg, top) + 4;
    for (std::int64_t k = 0; k <= top; ++k) {
        detail::chart_action act(n, a, box);
        for (const auto &c : candidate_monomials(n, a, a + *deg, k)) {
            act.add(WeylElement::monomial(c.x, c.d));
        }
        act.add(op);
        const ExactMatrix m = act.matrix();
        const std::size_t last = m.rows() - 1;
        if (m.row(last).empty()) {
            return std::nullopt;
        }
        ExactMatrix cands(last, m.cols());
        for (std::size_t r = 0; r < last; ++r) {
            for (const auto &[c, v] : m.row(r)) {
                cands.set(r, c, v);
            }
        }
        RationalVector v(m.cols(), Rational(0));
        for (const auto &[c, x] : m.row(last)) {
            v[c] = x;
        }
        if (in_row_space(cands, v)) {
            return k;
        }
    }
    return top;
}

// A pair of chart sections (s, t) of O(m) (+) O(m + d).
struct SectionPair {
    LaurentPoly first;
    LaurentPoly second;

    friend bool operator==(const SectionPair &, const SectionPair &) = default;
};

// The operator (s, t) |-> (s, D12 s + t) on O(m) (+) O(m + d). It preserves
// the summand O(m + d) and is the identity on it and on the quotient O(m).
class BlockOperator
{
public:
    BlockOperator(std::int64_t n, std::int64_t m, std::int64_t d, WeylElement d12)
        : m_n(n), m_m(m), m_d(d), m_d12(std::move(d12))
    {
        detail::require(n >= 1, "block operator needs n >= 1");
        detail::require(m_d12.nvars() == static_cast<std::size_t>(n) + 1, "D12 must act on n+1 homogeneous variables");
        detail::require(m_d12.is_graded_of(d), "D12 must be graded of degree d");
    }

    std::int64_t n() const
    {
        return m_n;
    }
    std::int64_t m() const
    {
        return m_m;
    }
    std::int64_t d() const
    {
        return m_d;
    }
    const WeylElement &off_diagonal() const
    {
        return m_d12;
    }

    SectionPair operator()(const SectionPair &st) const
    {
        return {st.first, apply(m_d12, st.first) + st.second};
    }

    // Entries as a 2x2 operator matrix acting on column vectors (s, t).
    std::vector<std::vector<WeylElement>> entries() const
    {
        const auto len = static_cast<std::size_t>(m_n) + 1;
        const WeylElement one = WeylElement::constant(len, 1);
        return {{one, WeylElement(len)}, {m_d12, one}};
    }

private:
    std::int64_t m_n, m_m, m_d;
    WeylElement m_d12;
};

inline BlockOperator block_operator(std::int64_t n, std::int64_t m, std::int64_t d, WeylElement d12)
{
    return BlockOperator(n, m, d, std::move(d12));
}

struct BlockReport {
    bool sub_preserved = false;
    bool graded_identity = false;
    // Least k with every (k+1)-fold commutator [..[B, f_0], .., f_k] zero,
    // f_i among the chart coordinates x_i / x_0.
    std::int64_t order = 0;
    // Order of D12 as an operator O(m) -> O(m + d).
    std::int64_t expected_order = 0;
    std::size_t sections_tested = 0;

    bool ok() const
    {
        return sub_preserved && graded_identity && order == expected_order;
    }
};

namespace detail
{

// [..[B, f_0], .., f_{k-1}](st) with f_i multiplication by x_{idx_i} / x_0.
inline SectionPair nested_commutator(const BlockOperator &op, const std::vector<std::size_t> &idx, std::size_t depth,
                                     const SectionPair &st)
{
    if (depth == 0) {
        return op(st);
    }
    const auto len = static_cast<std::size_t>(op.n()) + 1;
    MultiIndex ratio(std::vector<exponent_t>(len, 0));
    ratio[idx[depth - 1]] += 1;
    ratio[0] -= 1;
    const LaurentPoly f = LaurentPoly::monomial(ratio);
    const SectionPair shifted{f * st.first, f * st.second};
    const SectionPair a = nested_commutator(op, idx, depth - 1, shifted);
    const SectionPair b = nested_commutator(op, idx, depth - 1, st);
    return {a.first - f * b.first, a.second - f * b.second};
}

// Sections on the chart x_0 != 0: monomials of the given degree with
// x_1..x_n exponents nonnegative and summing to at most box.
inline std::vector<MultiIndex> chart0_monomials(std::int64_t n, std::int64_t degree, std::int64_t box)
{
    std::vector<MultiIndex> out;
    const auto len = static_cast<std::size_t>(n);
    for (std::int64_t t = 0; t <= box; ++t) {
        for (const auto &rest : compositions(len, t)) {
            std::vector<exponent_t> e{static_cast<exponent_t>(degree - t)};
            e.insert(e.end(), rest.begin(), rest.end());
            out.emplace_back(std::move(e));
        }
    }
    return out;
}

inline std::int64_t block_grothendieck_order(const BlockOperator &op, std::int64_t cap, std::int64_t box)
{
    const auto len = static_cast<std::size_t>(op.n()) + 1;
    const LaurentPoly zero(len);
    std::vector<SectionPair> tests;
    for (const auto &g : chart0_monomials(op.n(), op.m(), box)) {
        tests.push_back({LaurentPoly::monomial(g), zero});
    }
    for (const auto &g : chart0_monomials(op.n(), op.m() + op.d(), box)) {
        tests.push_back({zero, LaurentPoly::monomial(g)});
    }
    for (std::int64_t k = 0; k <= cap; ++k) {
        const auto depth = static_cast<std::size_t>(k) + 1;
        std::vector<std::size_t> idx(depth, 1);
        bool vanishes = true;
        while (vanishes) {
            for (const auto &st : tests) {
                const SectionPair c = nested_commutator(op, idx, depth, st);
                if (!c.first.is_zero() || !c.second.is_zero()) {
                    vanishes = false;
                    break;
                }
            }
            std::size_t p = 0;
            while (p < depth && ++idx[p] > static_cast<std::size_t>(op.n())) {
                idx[p++] = 1;
            }
            if (p == depth) {
                break;
            }
        }
        if (vanishes) {
            return k;
        }
    }
    throw inconsistency_error("block operator order exceeds the Weyl order of D12");
}

} // namespace detail

inline BlockReport verify(const BlockOperator &op)
{
    BlockReport rep;
    const auto len = static_cast<std::size_t>(op.n()) + 1;
    const auto weyl_order = op.off_diagonal().order();
    const std::int64_t cap = weyl_order ? *weyl_order : 0;
    const std::int64_t box = initial_box(op.m(), op.m() + op.d(), cap);

    rep.sub_preserved = true;
    rep.graded_identity = true;
    const LaurentPoly zero(len);
    for (const auto &g : chart_test_monomials(op.n(), op.m() + op.d(), box)) {
        const SectionPair in{zero, LaurentPoly::monomial(g)};
        const SectionPair img = op(in);
        rep.sub_preserved = rep.sub_preserved && img.first.is_zero();
        rep.graded_identity = rep.graded_identity && img.second == in.second;
        ++rep.sections_tested;
    }
    for (const auto &g : chart_test_monomials(op.n(), op.m(), box)) {
        const SectionPair in{LaurentPoly::monomial(g), zero};
        rep.graded_identity = rep.graded_identity && op(in).first == in.first;
        ++rep.sections_tested;
    }
    const auto eff = effective_order(op.n(), op.m(), op.off_diagonal());
    rep.expected_order = std::max<std::int64_t>(0, eff ? *eff : 0);
    rep.order = detail::block_grothendieck_order(op, cap, std::min<std::int64_t>(box, cap + 3));
    return rep;
}

} // namespace jetspace

#endif
