#ifndef JETSPACE_MULTI_INDEX_HPP
#define JETSPACE_MULTI_INDEX_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include <jetspace/errors.hpp>

namespace jetspace
{

using exponent_t = std::int32_t;

// Exponent vector. Signed so that the same type serves polynomial and
// Laurent contexts; callers that need nonnegativity check is_nonnegative().
class MultiIndex
{
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t n) : m_exp(n, 0) {}
    MultiIndex(std::initializer_list<exponent_t> il) : m_exp(il) {}
    explicit MultiIndex(std::vector<exponent_t> v) : m_exp(std::move(v)) {}

    static MultiIndex unit(std::size_t n, std::size_t i)
    {
        MultiIndex r(n);
        r.m_exp.at(i) = 1;
        return r;
    }

    std::size_t size() const
    {
        return m_exp.size();
    }
    exponent_t operator[](std::size_t i) const
    {
        return m_exp[i];
    }
    exponent_t &operator[](std::size_t i)
    {
        return m_exp[i];
    }
    const std::vector<exponent_t> &exponents() const
    {
        return m_exp;
    }
    auto begin() const
    {
        return m_exp.begin();
    }
    auto end() const
    {
        return m_exp.end();
    }

    // |m| = m_1 + ... + m_n.
    std::int64_t total() const
    {
        return std::accumulate(m_exp.begin(), m_exp.end(), std::int64_t{0});
    }
    bool is_nonnegative() const
    {
        return std::all_of(m_exp.begin(), m_exp.end(), [](exponent_t e) { return e >= 0; });
    }
    std::size_t negative_count() const
    {
        return static_cast<std::size_t>(
            std::count_if(m_exp.begin(), m_exp.end(), [](exponent_t e) { return e < 0; }));
    }
    // Componentwise a <= b.
    bool divides(const MultiIndex &other) const
    {
        check_size(other);
        for (std::size_t i = 0; i < m_exp.size(); ++i) {
            if (m_exp[i] > other.m_exp[i]) {
                return false;
            }
        }
        return true;
    }

    MultiIndex &operator+=(const MultiIndex &o)
    {
        check_size(o);
        for (std::size_t i = 0; i < m_exp.size(); ++i) {
            m_exp[i] += o.m_exp[i];
        }
        return *this;
    }
    MultiIndex &operator-=(const MultiIndex &o)
    {
        check_size(o);
        for (std::size_t i = 0; i < m_exp.size(); ++i) {
            m_exp[i] -= o.m_exp[i];
        }
        return *this;
    }
    friend MultiIndex operator+(MultiIndex a, const MultiIndex &b)
    {
        a += b;
        return a;
    }
    friend MultiIndex operator-(MultiIndex a, const MultiIndex &b)
    {
        a -= b;
        return a;
    }

    friend bool operator==(const MultiIndex &, const MultiIndex &) = default;
    friend auto operator<=>(const MultiIndex &, const MultiIndex &) = default;

    std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < m_exp.size(); ++i) {
            if (i) {
                s += ",";
            }
            s += std::to_string(m_exp[i]);
        }
        return s + ")";
    }

private:
    void check_size(const MultiIndex &o) const
    {
        detail::require(o.size() == size(), "multi-index length mismatch");
    }

    std::vector<exponent_t> m_exp;
};

// Calls f on every nonnegative multi-index of length n and total degree d,
// in lexicographically decreasing order ((d,0,..,0) first).
template <typename F>
void for_each_composition(std::size_t n, std::int64_t d, F &&f)
{
    if (n == 0 || d < 0) {
        if (n == 0 && d == 0) {
            f(MultiIndex{});
        }
        return;
    }
    MultiIndex cur(n);
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t pos, std::int64_t left) {
        if (pos + 1 == n) {
            cur[pos] = static_cast<exponent_t>(left);
            f(static_cast<const MultiIndex &>(cur));
            return;
        }
        for (std::int64_t e = left; e >= 0; --e) {
            cur[pos] = static_cast<exponent_t>(e);
            rec(pos + 1, left - e);
        }
    };
    rec(0, d);
}

inline std::vector<MultiIndex> compositions(std::size_t n, std::int64_t d)
{
    std::vector<MultiIndex> out;
    for_each_composition(n, d, [&](const MultiIndex &m) { out.push_back(m); });
    return out;
}

} // namespace jetspace

#endif
