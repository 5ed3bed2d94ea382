#ifndef JETSPACE_UNIVARIATE_HPP
#define JETSPACE_UNIVARIATE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <jetspace/errors.hpp>
#include <jetspace/rational.hpp>

namespace jetspace
{

// Dense univariate polynomial over Q, coefficients from the constant term up.
// The coefficient vector never has a trailing zero.
class UniPoly
{
public:
    UniPoly() = default;
    UniPoly(std::initializer_list<Rational> il) : m_c(il)
    {
        trim();
    }
    explicit UniPoly(RationalVector c) : m_c(std::move(c))
    {
        trim();
    }

    static UniPoly constant(const Rational &c)
    {
        return UniPoly(RationalVector{c});
    }
    // c * t^k
    static UniPoly monomial(std::size_t k, const Rational &c = 1)
    {
        RationalVector v(k + 1, Rational(0));
        v[k] = c;
        return UniPoly(std::move(v));
    }

    // -1 for the zero polynomial.
    std::int64_t degree() const
    {
        return static_cast<std::int64_t>(m_c.size()) - 1;
    }
    bool is_zero() const
    {
        return m_c.empty();
    }
    const RationalVector &coefficients() const
    {
        return m_c;
    }
    Rational coefficient(std::size_t k) const
    {
        return k < m_c.size() ? m_c[k] : Rational(0);
    }
    Rational leading() const
    {
        return m_c.empty() ? Rational(0) : m_c.back();
    }

    UniPoly monic() const
    {
        if (is_zero()) {
            return *this;
        }
        UniPoly r = *this;
        const Rational inv = 1 / leading();
        for (auto &c : r.m_c) {
            c *= inv;
        }
        return r;
    }

    Rational evaluate(const Rational &t) const
    {
        Rational acc = 0;
        for (auto it = m_c.rbegin(); it != m_c.rend(); ++it) {
            acc = acc * t + *it;
        }
        return acc;
    }

    UniPoly derivative() const
    {
        RationalVector d;
        for (std::size_t k = 1; k < m_c.size(); ++k) {
            d.push_back(m_c[k] * static_cast<long>(k));
        }
        return UniPoly(std::move(d));
    }

    UniPoly &operator+=(const UniPoly &o)
    {
        if (o.m_c.size() > m_c.size()) {
            m_c.resize(o.m_c.size(), Rational(0));
        }
        for (std::size_t k = 0; k < o.m_c.size(); ++k) {
            m_c[k] += o.m_c[k];
        }
        trim();
        return *this;
    }
    UniPoly &operator-=(const UniPoly &o)
    {
        if (o.m_c.size() > m_c.size()) {
            m_c.resize(o.m_c.size(), Rational(0));
        }
        for (std::size_t k = 0; k < o.m_c.size(); ++k) {
            m_c[k] -= o.m_c[k];
        }
        trim();
        return *this;
    }
    friend UniPoly operator+(UniPoly a, const UniPoly &b)
    {
        a += b;
        return a;
    }
    friend UniPoly operator-(UniPoly a, const UniPoly &b)
    {
        a -= b;
        return a;
    }
    friend UniPoly operator-(UniPoly a)
    {
        for (auto &c : a.m_c) {
            c = -c;
        }
        return a;
    }
    friend UniPoly operator*(const UniPoly &a, const UniPoly &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        RationalVector r(a.m_c.size() + b.m_c.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.m_c.size(); ++i) {
            for (std::size_t j = 0; j < b.m_c.size(); ++j) {
                r[i + j] += a.m_c[i] * b.m_c[j];
            }
        }
        return UniPoly(std::move(r));
    }
    friend UniPoly operator*(const Rational &s, const UniPoly &a)
    {
        return UniPoly::constant(s) * a;
    }
    UniPoly &operator*=(const UniPoly &o)
    {
        *this = *this * o;
        return *this;
    }

    friend bool operator==(const UniPoly &, const UniPoly &) = default;

    // Euclidean division: a = q b + r with deg r < deg b.
    friend std::pair<UniPoly, UniPoly> divmod(const UniPoly &a, const UniPoly &b)
    {
        detail::require(!b.is_zero(), "polynomial division by zero");
        UniPoly q, r = a;
        const Rational inv = 1 / b.leading();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            const auto shift = static_cast<std::size_t>(r.degree() - b.degree());
            const UniPoly t = monomial(shift, r.leading() * inv);
            q += t;
            r -= t * b;
        }
        return {std::move(q), std::move(r)};
    }

    std::string to_string(const std::string &var = "t") const
    {
        if (is_zero()) {
            return "0";
        }
        std::string s;
        for (std::size_t k = m_c.size(); k-- > 0;) {
            if (m_c[k] == 0) {
                continue;
            }
            Rational a = m_c[k];
            if (!s.empty()) {
                s += a < 0 ? " - " : " + ";
                if (a < 0) {
                    a = -a;
                }
            } else if (a < 0) {
                s += "-";
                a = -a;
            }
            if (k == 0) {
                s += a.get_str();
                continue;
            }
            if (a != 1) {
                s += a.get_str() + "*";
            }
            s += var;
            if (k > 1) {
                s += "^" + std::to_string(k);
            }
        }
        return s;
    }

private:
    void trim()
    {
        while (!m_c.empty() && m_c.back() == 0) {
            m_c.pop_back();
        }
    }

    RationalVector m_c;
};

// p(s + c) as a polynomial in s.
inline UniPoly taylor_shift(const UniPoly &p, const Rational &c)
{
    UniPoly acc;
    const UniPoly lin{c, Rational(1)};
    for (std::size_t k = p.coefficients().size(); k-- > 0;) {
        acc = acc * lin + UniPoly::constant(p.coefficients()[k]);
    }
    return acc;
}

} // namespace jetspace

#endif
