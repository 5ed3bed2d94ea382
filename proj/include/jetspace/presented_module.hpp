#ifndef JETSPACE_PRESENTED_MODULE_HPP
#define JETSPACE_PRESENTED_MODULE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <jetspace/errors.hpp>
#include <jetspace/rational.hpp>
#include <jetspace/smith.hpp>
#include <jetspace/univariate.hpp>

namespace jetspace
{

// M = coker(R : Q[t]^r -> Q[t]^g). Rows of R index generators, columns index
// relations.
class PresentedModule
{
public:
    PresentedModule(std::size_t generators, PolyMatrix relations)
        : m_gens(generators), m_rel(std::move(relations))
    {
        detail::require(m_rel.size() == m_gens, "relation matrix must have one row per generator");
        m_nrel = m_rel.empty() ? 0 : m_rel.front().size();
        for (const auto &r : m_rel) {
            detail::require(r.size() == m_nrel, "ragged relation matrix");
        }
    }

    static PresentedModule free(std::size_t rank)
    {
        return PresentedModule(rank, PolyMatrix(rank));
    }
    // Q[t] / (p).
    static PresentedModule cyclic(const UniPoly &p)
    {
        return PresentedModule(1, PolyMatrix{{p}});
    }

    std::size_t generators() const
    {
        return m_gens;
    }
    std::size_t relation_count() const
    {
        return m_nrel;
    }
    const PolyMatrix &relations() const
    {
        return m_rel;
    }

    SmithForm smith() const
    {
        return smith_form(m_rel, m_nrel);
    }

private:
    std::size_t m_gens;
    std::size_t m_nrel = 0;
    PolyMatrix m_rel;
};

// Decomposition Q[t]^free_rank (+) (+)_i Q[t]/(torsion_i); unit invariant
// factors are dropped.
struct ModuleStructure {
    std::size_t free_rank = 0;
    std::vector<UniPoly> torsion;

    friend bool operator==(const ModuleStructure &, const ModuleStructure &) = default;
};

inline ModuleStructure structure(const PresentedModule &m)
{
    const SmithForm s = m.smith();
    ModuleStructure out;
    out.free_rank = m.generators() - s.invariants.size();
    for (const auto &d : s.invariants) {
        if (d.degree() > 0) {
            out.torsion.push_back(d);
        }
    }
    return out;
}

inline bool is_torsion(const PresentedModule &m)
{
    return structure(m).free_rank == 0;
}

// Length over Q[t] (= dimension over Q); nullopt when the module has a free part.
inline std::optional<std::int64_t> length(const PresentedModule &m)
{
    const ModuleStructure s = structure(m);
    if (s.free_rank != 0) {
        return std::nullopt;
    }
    std::int64_t len = 0;
    for (const auto &d : s.torsion) {
        len += d.degree();
    }
    return len;
}

// J^N(M) with its first Q[t]-structure. J^N(Q[t]^g) is free on e_i dt^s,
// s <= N; right exactness gives J^N(M) = coker of the jet of the
// presentation, whose columns are dt^u * p(t + dt) truncated at dt^{N+1}
// for every relation p and every u <= N.
inline PresentedModule jet_of_presented(const PresentedModule &m, std::int64_t order)
{
    detail::require(order >= 0, "jet order must be nonnegative");
    const auto blocks = static_cast<std::size_t>(order) + 1;
    const std::size_t g = m.generators();
    const std::size_t r = m.relation_count();

    // Taylor coefficients p^{(s)}/s! for every relation entry.
    std::vector<std::vector<std::vector<UniPoly>>> taylor(g, std::vector<std::vector<UniPoly>>(r));
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            UniPoly d = m.relations()[i][j];
            for (std::size_t s = 0; s < blocks; ++s) {
                const Rational inv = Rational(1) / Rational(factorial(static_cast<std::int64_t>(s)));
                taylor[i][j].push_back(inv * d);
                d = d.derivative();
            }
        }
    }

    PolyMatrix rel(g * blocks, std::vector<UniPoly>(r * blocks));
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t u = 0; u < blocks; ++u) {
            const std::size_t col = j * blocks + u;
            for (std::size_t i = 0; i < g; ++i) {
                for (std::size_t s = 0; s + u < blocks; ++s) {
                    rel[i * blocks + s + u][col] = taylor[i][j][s];
                }
            }
        }
    }
    return PresentedModule(g * blocks, std::move(rel));
}

} // namespace jetspace

#endif
