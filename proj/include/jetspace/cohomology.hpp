#ifndef JETSPACE_COHOMOLOGY_HPP
#define JETSPACE_COHOMOLOGY_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include <jetspace/errors.hpp>
#include <jetspace/exact_matrix.hpp>
#include <jetspace/multi_index.hpp>
#include <jetspace/rational.hpp>

namespace jetspace
{

struct LineBundleCohomology {
    std::int64_t n = 0;
    std::int64_t k = 0;
    // h^0 .. h^n
    std::vector<Integer> dims;
    Integer chi;
};

// chi(P^n, O(k)) = binom(n + k, n) read as a polynomial in k.
inline Integer euler_characteristic(std::int64_t n, std::int64_t k)
{
    return binomial(n + k, n);
}

inline LineBundleCohomology line_cohomology(std::int64_t n, std::int64_t k)
{
    detail::require(n >= 1, "line_cohomology needs n >= 1");
    LineBundleCohomology out{n, k, std::vector<Integer>(static_cast<std::size_t>(n) + 1, Integer(0)), 0};
    if (k >= 0) {
        out.dims.front() = binomial(n + k, n);
    }
    if (k <= -n - 1) {
        out.dims.back() = binomial(-k - 1, n);
    }
    out.chi = euler_characteristic(n, k);
    return out;
}

inline Integer h0_line(std::int64_t n, std::int64_t k)
{
    return k >= 0 ? binomial(n + k, n) : Integer(0);
}

namespace detail
{

// Number of integer vectors of length len with entries <= -1 summing to total.
inline std::int64_t count_all_negative(std::size_t len, std::int64_t total)
{
    if (len == 0) {
        return total == 0 ? 1 : 0;
    }
    std::int64_t count = 0;
    // Remaining len-1 entries are each <= -1, so this entry is >= total + (len-1).
    const std::int64_t lo = total + static_cast<std::int64_t>(len) - 1;
    for (std::int64_t e = -1; e >= lo; --e) {
        count += count_all_negative(len - 1, total - e);
    }
    return count;
}

} // namespace detail

// Cech-style count of monomial bases: i = 0 counts x^g with g >= 0, |g| = k;
// i = n counts x^g with every g_j <= -1, |g| = k.
inline std::int64_t cech_line_oracle(std::int64_t n, std::int64_t k, std::int64_t i)
{
    detail::require(n >= 1 && n <= 4, "cech_line_oracle needs 1 <= n <= 4");
    detail::require(k >= -12 && k <= 12, "cech_line_oracle needs |k| <= 12");
    detail::require(i == 0 || i == n, "cech_line_oracle supports i = 0 or i = n only");
    const auto len = static_cast<std::size_t>(n) + 1;
    if (i == 0) {
        std::int64_t c = 0;
        for_each_composition(len, k, [&](const MultiIndex &) { ++c; });
        return c;
    }
    return detail::count_all_negative(len, k);
}

struct SymTangentH0 {
    std::int64_t n = 0;
    std::int64_t k = 0;
    std::int64_t j = 0;
    Integer h0;
    Integer chi;
    // Dimensions of S^{k-1}V (x) H^0(O(j+k-1)) and S^kV (x) H^0(O(j+k)), and
    // the rank of the Euler-section map between them.
    std::size_t source_dim = 0;
    std::size_t target_dim = 0;
    std::size_t map_rank = 0;
};

// chi(S^k T(j)) from the symmetric Euler sequence
//   0 -> S^{k-1}V (x) O(k-1) -> S^k V (x) O(k) -> S^k T -> 0.
inline Integer chi_sym_tangent(std::int64_t n, std::int64_t k, std::int64_t j)
{
    return binomial(n + k, k) * euler_characteristic(n, j + k)
           - binomial(n + k - 1, k - 1) * euler_characteristic(n, j + k - 1);
}

// Matrix of e^mu (x) f |-> sum_i (e^mu e_i) (x) x_i f from
// S^{k-1}V (x) H^0(O(j+k-1)) to S^k V (x) H^0(O(j+k)); rows index the target.
// Bases are monomial, ordered as produced by compositions().
inline ExactMatrix euler_section_map(std::int64_t n, std::int64_t k, std::int64_t j)
{
    const auto len = static_cast<std::size_t>(n) + 1;
    std::vector<std::pair<MultiIndex, MultiIndex>> src, tgt;
    if (k >= 1 && j + k - 1 >= 0) {
        for (const auto &mu : compositions(len, k - 1)) {
            for (const auto &f : compositions(len, j + k - 1)) {
                src.emplace_back(mu, f);
            }
        }
    }
    if (k >= 0 && j + k >= 0) {
        for (const auto &mu : compositions(len, k)) {
            for (const auto &f : compositions(len, j + k)) {
                tgt.emplace_back(mu, f);
            }
        }
    }
    std::map<std::pair<MultiIndex, MultiIndex>, std::size_t> index;
    for (std::size_t t = 0; t < tgt.size(); ++t) {
        index.emplace(tgt[t], t);
    }
    ExactMatrix m(tgt.size(), src.size());
    for (std::size_t s = 0; s < src.size(); ++s) {
        for (std::size_t i = 0; i < len; ++i) {
            const auto e = MultiIndex::unit(len, i);
            m.add_to(index.at({src[s].first + e, src[s].second + e}), s, 1);
        }
    }
    return m;
}

// h^0(P^n, S^k T (x) O(j)) as the cokernel dimension of the Euler-section map
// on global sections (exact because H^1 of line bundles vanishes for n >= 2).
inline SymTangentH0 h0_sym_tangent(std::int64_t n, std::int64_t k, std::int64_t j)
{
    detail::require(n >= 2, "h0_sym_tangent needs n >= 2; on P^1 use T = O(2)");
    detail::require(k >= 0, "h0_sym_tangent needs k >= 0");
    const ExactMatrix m = euler_section_map(n, k, j);
    SymTangentH0 out;
    out.n = n;
    out.k = k;
    out.j = j;
    out.source_dim = m.cols();
    out.target_dim = m.rows();
    out.map_rank = rank(m);
    out.h0 = Integer(static_cast<unsigned long>(out.target_dim - out.map_rank));
    out.chi = chi_sym_tangent(n, k, j);
    return out;
}

// Same quantity for every n >= 1; P^1 routes through T = O(2).
inline Integer h0_sym_tangent_any(std::int64_t n, std::int64_t k, std::int64_t j)
{
    if (n == 1) {
        detail::require(k >= 0, "h0_sym_tangent needs k >= 0");
        return h0_line(1, 2 * k + j);
    }
    return h0_sym_tangent(n, k, j).h0;
}

} // namespace jetspace

#endif
