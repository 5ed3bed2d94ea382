#ifndef JETSPACE_WEYL_HPP
#define JETSPACE_WEYL_HPP

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <jetspace/errors.hpp>
#include <jetspace/laurent_poly.hpp>
#include <jetspace/multi_index.hpp>
#include <jetspace/rational.hpp>

namespace jetspace
{

// A normal-ordered monomial x^alpha d^beta (all x's to the left).
struct WeylMonomial {
    MultiIndex x;
    MultiIndex d;

    friend bool operator==(const WeylMonomial &, const WeylMonomial &) = default;
    friend auto operator<=>(const WeylMonomial &, const WeylMonomial &) = default;
};

// Element of the Weyl algebra Q<x_0..x_{n}, d_0..d_{n}> stored in normal
// order. The normal form is unique, so equality is equality of term maps.
class WeylElement
{
public:
    using term_map = std::map<WeylMonomial, Rational>;

    WeylElement() = default;
    explicit WeylElement(std::size_t nvars) : m_nvars(nvars) {}

    static WeylElement constant(std::size_t nvars, const Rational &c)
    {
        WeylElement w(nvars);
        w.add_term(MultiIndex(nvars), MultiIndex(nvars), c);
        return w;
    }
    static WeylElement monomial(const MultiIndex &alpha, const MultiIndex &beta, const Rational &c = 1)
    {
        detail::require(alpha.size() == beta.size(), "x and d exponents differ in length");
        WeylElement w(alpha.size());
        w.add_term(alpha, beta, c);
        return w;
    }
    // Multiplication by x_i.
    static WeylElement x(std::size_t nvars, std::size_t i)
    {
        return monomial(MultiIndex::unit(nvars, i), MultiIndex(nvars));
    }
    // Partial derivative d/dx_i.
    static WeylElement d(std::size_t nvars, std::size_t i)
    {
        return monomial(MultiIndex(nvars), MultiIndex::unit(nvars, i));
    }

    std::size_t nvars() const
    {
        return m_nvars;
    }
    const term_map &terms() const
    {
        return m_terms;
    }
    bool is_zero() const
    {
        return m_terms.empty();
    }

    void add_term(const MultiIndex &alpha, const MultiIndex &beta, const Rational &c)
    {
        detail::require(alpha.size() == m_nvars && beta.size() == m_nvars,
                        "Weyl monomial length does not match variable count");
        detail::require(alpha.is_nonnegative() && beta.is_nonnegative(), "Weyl exponents must be nonnegative");
        if (c == 0) {
            return;
        }
        auto [it, inserted] = m_terms.try_emplace(WeylMonomial{alpha, beta}, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                m_terms.erase(it);
            }
        }
    }

    // Order: max |beta|; nullopt stands for -infinity (the zero element).
    std::optional<std::int64_t> order() const
    {
        std::optional<std::int64_t> o;
        for (const auto &[m, c] : m_terms) {
            const auto b = m.d.total();
            if (!o || b > *o) {
                o = b;
            }
        }
        return o;
    }

    // d if every term has |alpha| - |beta| = d; nullopt if not graded or zero.
    std::optional<std::int64_t> degree() const
    {
        std::optional<std::int64_t> g;
        for (const auto &[m, c] : m_terms) {
            const auto e = m.x.total() - m.d.total();
            if (g && *g != e) {
                return std::nullopt;
            }
            g = e;
        }
        return g;
    }

    // Zero is graded of every degree.
    bool is_graded_of(std::int64_t d) const
    {
        return is_zero() || degree() == d;
    }

    // Terms with |beta| == k.
    WeylElement homogeneous_order_part(std::int64_t k) const
    {
        WeylElement r(m_nvars);
        for (const auto &[m, c] : m_terms) {
            if (m.d.total() == k) {
                r.m_terms.emplace(m, c);
            }
        }
        return r;
    }

    bool has_constant_coefficients() const
    {
        for (const auto &[m, c] : m_terms) {
            if (m.x.total() != 0) {
                return false;
            }
        }
        return true;
    }

    WeylElement &operator+=(const WeylElement &o)
    {
        check_vars(o);
        for (const auto &[m, c] : o.m_terms) {
            add_term(m.x, m.d, c);
        }
        return *this;
    }
    WeylElement &operator-=(const WeylElement &o)
    {
        check_vars(o);
        for (const auto &[m, c] : o.m_terms) {
            add_term(m.x, m.d, -c);
        }
        return *this;
    }
    friend WeylElement operator+(WeylElement a, const WeylElement &b)
    {
        a += b;
        return a;
    }
    friend WeylElement operator-(WeylElement a, const WeylElement &b)
    {
        a -= b;
        return a;
    }
    friend WeylElement operator*(const Rational &s, WeylElement a)
    {
        if (s == 0) {
            a.m_terms.clear();
        }
        for (auto &[m, c] : a.m_terms) {
            c *= s;
        }
        return a;
    }

    friend bool operator==(const WeylElement &, const WeylElement &) = default;

    std::string to_string() const;

private:
    void check_vars(const WeylElement &o) const
    {
        detail::require(o.m_nvars == m_nvars, "variable-count mismatch in Weyl algebra");
    }

    std::size_t m_nvars = 0;
    term_map m_terms;
};

// E = sum_i x_i d_i. Acts on a homogeneous (Laurent) polynomial of degree k
// as multiplication by k.
inline WeylElement euler_operator(std::size_t nvars)
{
    WeylElement e(nvars);
    for (std::size_t i = 0; i < nvars; ++i) {
        e.add_term(MultiIndex::unit(nvars, i), MultiIndex::unit(nvars, i), 1);
    }
    return e;
}

// Normal-ordered product D1 o D2. Uses the Leibniz rule
//   d^b x^c = sum_{k <= b} binom(b,k) (c)_k x^{c-k} d^{b-k}
// coordinatewise, with (c)_k the falling factorial.
inline WeylElement compose(const WeylElement &lhs, const WeylElement &rhs)
{
    detail::require(lhs.nvars() == rhs.nvars(), "variable-count mismatch in Weyl composition");
    const std::size_t n = lhs.nvars();
    WeylElement out(n);
    for (const auto &[m1, c1] : lhs.terms()) {
        for (const auto &[m2, c2] : rhs.terms()) {
            // Enumerate k with 0 <= k_i <= min(b_i, c_i).
            MultiIndex k(n);
            const auto recurse = [&](const auto &self, std::size_t pos, const Rational &coef) -> void {
                if (pos == n) {
                    out.add_term(m1.x + m2.x - k, m1.d - k + m2.d, c1 * c2 * coef);
                    return;
                }
                const exponent_t top = std::min(m1.d[pos], m2.x[pos]);
                for (exponent_t j = 0; j <= top; ++j) {
                    k[pos] = j;
                    const Rational f = coef * binomial(m1.d[pos], j) * falling_factorial(m2.x[pos], j);
                    self(self, pos + 1, f);
                }
                k[pos] = 0;
            };
            recurse(recurse, 0, Rational(1));
        }
    }
    return out;
}

// Action on a single Laurent monomial: x^a d^b . x^g = prod (g_j)_{b_j} x^{g+a-b}.
inline LaurentPoly apply(const WeylElement &op, const MultiIndex &gamma)
{
    detail::require(op.nvars() == gamma.size(), "variable-count mismatch in operator application");
    LaurentPoly out(op.nvars());
    for (const auto &[m, c] : op.terms()) {
        Integer coef = 1;
        for (std::size_t j = 0; j < gamma.size() && coef != 0; ++j) {
            coef *= falling_factorial(gamma[j], m.d[j]);
        }
        if (coef != 0) {
            out.add_term(gamma + m.x - m.d, c * Rational(coef));
        }
    }
    return out;
}

inline LaurentPoly apply(const WeylElement &op, const LaurentPoly &f)
{
    detail::require(op.nvars() == f.nvars(), "variable-count mismatch in operator application");
    LaurentPoly out(op.nvars());
    for (const auto &[g, c] : f.terms()) {
        out += c * apply(op, g);
    }
    return out;
}

// Text form: "c * x^(a0,..,an) d^(b0,..,bn)" terms joined by " + ".
inline std::string WeylElement::to_string() const
{
    if (m_terms.empty()) {
        return "0";
    }
    std::string s;
    for (const auto &[m, c] : m_terms) {
        if (!s.empty()) {
            s += " + ";
        }
        s += c.get_str() + " * x^" + m.x.to_string() + " d^" + m.d.to_string();
    }
    return s;
}

namespace detail
{

class weyl_parser
{
public:
    explicit weyl_parser(const std::string &s) : m_s(s) {}

    WeylElement parse()
    {
        skip_ws();
        if (m_pos < m_s.size() && m_s[m_pos] == '0' && rest_is_blank(m_pos + 1)) {
            throw precondition_error("the zero operator needs an explicit variable count; "
                                     "write 0 * x^(0,..,0) d^(0,..,0)");
        }
        std::vector<std::pair<WeylMonomial, Rational>> terms;
        while (true) {
            skip_ws();
            Rational c = parse_coefficient();
            skip_ws();
            expect('*');
            skip_ws();
            expect('x');
            expect('^');
            MultiIndex a = parse_tuple();
            skip_ws();
            expect('d');
            expect('^');
            MultiIndex b = parse_tuple();
            terms.push_back({WeylMonomial{std::move(a), std::move(b)}, std::move(c)});
            skip_ws();
            if (m_pos == m_s.size()) {
                break;
            }
            expect('+');
        }
        const std::size_t n = terms.front().first.x.size();
        WeylElement w(n);
        for (const auto &[m, c] : terms) {
            require(m.x.size() == n && m.d.size() == n, "inconsistent variable counts in operator text");
            w.add_term(m.x, m.d, c);
        }
        return w;
    }

private:
    bool rest_is_blank(std::size_t from) const
    {
        for (std::size_t i = from; i < m_s.size(); ++i) {
            if (!std::isspace(static_cast<unsigned char>(m_s[i]))) {
                return false;
            }
        }
        return true;
    }
    void skip_ws()
    {
        while (m_pos < m_s.size() && std::isspace(static_cast<unsigned char>(m_s[m_pos]))) {
            ++m_pos;
        }
    }
    void fail(const std::string &what) const
    {
        throw precondition_error("malformed operator text at offset " + std::to_string(m_pos) + ": " + what);
    }
    void expect(char c)
    {
        if (m_pos >= m_s.size() || m_s[m_pos] != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++m_pos;
    }
    Rational parse_coefficient()
    {
        const std::size_t start = m_pos;
        if (m_pos < m_s.size() && (m_s[m_pos] == '-' || m_s[m_pos] == '+')) {
            ++m_pos;
        }
        while (m_pos < m_s.size() && (std::isdigit(static_cast<unsigned char>(m_s[m_pos])) || m_s[m_pos] == '/')) {
            ++m_pos;
        }
        if (m_pos == start) {
            fail("expected coefficient");
        }
        std::string tok = m_s.substr(start, m_pos - start);
        if (tok.front() == '+') {
            tok.erase(0, 1);
        }
        return parse_rational(tok);
    }
    MultiIndex parse_tuple()
    {
        expect('(');
        std::vector<exponent_t> v;
        while (true) {
            skip_ws();
            const std::size_t start = m_pos;
            if (m_pos < m_s.size() && m_s[m_pos] == '-') {
                ++m_pos;
            }
            while (m_pos < m_s.size() && std::isdigit(static_cast<unsigned char>(m_s[m_pos]))) {
                ++m_pos;
            }
            if (m_pos == start) {
                fail("expected exponent");
            }
            v.push_back(static_cast<exponent_t>(std::stol(m_s.substr(start, m_pos - start))));
            skip_ws();
            if (m_pos < m_s.size() && m_s[m_pos] == ',') {
                ++m_pos;
                continue;
            }
            expect(')');
            break;
        }
        return MultiIndex(std::move(v));
    }

    const std::string &m_s;
    std::size_t m_pos = 0;
};

} // namespace detail

inline WeylElement parse_weyl(const std::string &text)
{
    return detail::weyl_parser(text).parse();
}

} // namespace jetspace

#endif
