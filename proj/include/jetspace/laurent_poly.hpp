#ifndef JETSPACE_LAURENT_POLY_HPP
#define JETSPACE_LAURENT_POLY_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <jetspace/errors.hpp>
#include <jetspace/multi_index.hpp>
#include <jetspace/rational.hpp>

namespace jetspace
{

// Sparse multivariate Laurent polynomial with rational coefficients.
// Zero coefficients are never stored.
class LaurentPoly
{
public:
    using term_map = std::map<MultiIndex, Rational>;

    LaurentPoly() = default;
    explicit LaurentPoly(std::size_t nvars) : m_nvars(nvars) {}

    static LaurentPoly constant(std::size_t nvars, const Rational &c)
    {
        LaurentPoly p(nvars);
        p.add_term(MultiIndex(nvars), c);
        return p;
    }
    static LaurentPoly monomial(const MultiIndex &m, const Rational &c = 1)
    {
        LaurentPoly p(m.size());
        p.add_term(m, c);
        return p;
    }
    static LaurentPoly variable(std::size_t nvars, std::size_t i)
    {
        return monomial(MultiIndex::unit(nvars, i));
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
    std::size_t size() const
    {
        return m_terms.size();
    }

    Rational coefficient(const MultiIndex &m) const
    {
        auto it = m_terms.find(m);
        return it == m_terms.end() ? Rational(0) : it->second;
    }

    void add_term(const MultiIndex &m, const Rational &c)
    {
        detail::require(m.size() == m_nvars, "monomial length does not match variable count");
        if (c == 0) {
            return;
        }
        auto [it, inserted] = m_terms.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                m_terms.erase(it);
            }
        }
    }

    LaurentPoly &operator+=(const LaurentPoly &o)
    {
        check_vars(o);
        for (const auto &[m, c] : o.m_terms) {
            add_term(m, c);
        }
        return *this;
    }
    LaurentPoly &operator-=(const LaurentPoly &o)
    {
        check_vars(o);
        for (const auto &[m, c] : o.m_terms) {
            add_term(m, -c);
        }
        return *this;
    }
    LaurentPoly &operator*=(const Rational &s)
    {
        if (s == 0) {
            m_terms.clear();
            return *this;
        }
        for (auto &[m, c] : m_terms) {
            c *= s;
        }
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly &b)
    {
        a += b;
        return a;
    }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly &b)
    {
        a -= b;
        return a;
    }
    friend LaurentPoly operator-(LaurentPoly a)
    {
        a *= Rational(-1);
        return a;
    }
    friend LaurentPoly operator*(LaurentPoly a, const Rational &s)
    {
        a *= s;
        return a;
    }
    friend LaurentPoly operator*(const Rational &s, LaurentPoly a)
    {
        a *= s;
        return a;
    }
    friend LaurentPoly operator*(const LaurentPoly &a, const LaurentPoly &b)
    {
        a.check_vars(b);
        LaurentPoly r(a.m_nvars);
        for (const auto &[ma, ca] : a.m_terms) {
            for (const auto &[mb, cb] : b.m_terms) {
                r.add_term(ma + mb, ca * cb);
            }
        }
        return r;
    }
    LaurentPoly &operator*=(const LaurentPoly &o)
    {
        *this = *this * o;
        return *this;
    }

    friend bool operator==(const LaurentPoly &, const LaurentPoly &) = default;

    // Total degree if every term has the same one; nullopt for zero or
    // inhomogeneous polynomials.
    std::optional<std::int64_t> homogeneous_degree() const
    {
        std::optional<std::int64_t> d;
        for (const auto &[m, c] : m_terms) {
            if (d && *d != m.total()) {
                return std::nullopt;
            }
            d = m.total();
        }
        return d;
    }

    bool is_polynomial() const
    {
        for (const auto &[m, c] : m_terms) {
            if (!m.is_nonnegative()) {
                return false;
            }
        }
        return true;
    }

    Rational evaluate(const RationalVector &pt) const
    {
        detail::require(pt.size() == m_nvars, "evaluation point has wrong length");
        Rational acc = 0;
        for (const auto &[m, c] : m_terms) {
            Rational t = c;
            for (std::size_t i = 0; i < m_nvars; ++i) {
                if (m[i] == 0) {
                    continue;
                }
                detail::require(pt[i] != 0 || m[i] > 0, "negative power of zero in evaluation");
                Rational base = m[i] > 0 ? pt[i] : Rational(1 / pt[i]);
                Rational pw = 1;
                for (exponent_t e = 0; e < (m[i] > 0 ? m[i] : -m[i]); ++e) {
                    pw *= base;
                }
                t *= pw;
            }
            acc += t;
        }
        return acc;
    }

    // Human-readable form, e.g. "2*x0^2*x1^-1 - 1/3". Variables are named
    // prefix + index.
    std::string to_string(const std::string &prefix = "x") const
    {
        if (m_terms.empty()) {
            return "0";
        }
        std::string s;
        bool first = true;
        // Highest monomials first.
        for (auto it = m_terms.rbegin(); it != m_terms.rend(); ++it) {
            const auto &[m, c] = *it;
            Rational a = c;
            if (first) {
                if (a < 0) {
                    s += "-";
                    a = -a;
                }
            } else {
                s += a < 0 ? " - " : " + ";
                if (a < 0) {
                    a = -a;
                }
            }
            first = false;
            std::string mono;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) {
                    continue;
                }
                if (!mono.empty()) {
                    mono += "*";
                }
                mono += prefix + std::to_string(i);
                if (m[i] != 1) {
                    mono += "^" + std::to_string(m[i]);
                }
            }
            if (mono.empty()) {
                s += a.get_str();
            } else if (a == 1) {
                s += mono;
            } else {
                s += a.get_str() + "*" + mono;
            }
        }
        return s;
    }

private:
    void check_vars(const LaurentPoly &o) const
    {
        detail::require(o.m_nvars == m_nvars, "variable-count mismatch in polynomial arithmetic");
    }

    std::size_t m_nvars = 0;
    term_map m_terms;
};

} // namespace jetspace

#endif
