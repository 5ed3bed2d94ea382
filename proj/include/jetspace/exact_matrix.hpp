#ifndef JETSPACE_EXACT_MATRIX_HPP
#define JETSPACE_EXACT_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <jetspace/errors.hpp>
#include <jetspace/rational.hpp>

namespace jetspace
{

// Sparse rational matrix, row-major. Explicit zeros are never stored.
class ExactMatrix
{
public:
    using row_type = std::map<std::size_t, Rational>;

    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols) : m_cols(cols), m_data(rows) {}

    static ExactMatrix identity(std::size_t n)
    {
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m.set(i, i, 1);
        }
        return m;
    }

    static ExactMatrix from_dense(const std::vector<RationalVector> &rows)
    {
        const std::size_t cols = rows.empty() ? 0 : rows.front().size();
        ExactMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            detail::require(rows[i].size() == cols, "ragged dense matrix");
            for (std::size_t j = 0; j < cols; ++j) {
                m.set(i, j, rows[i][j]);
            }
        }
        return m;
    }

    std::size_t rows() const
    {
        return m_data.size();
    }
    std::size_t cols() const
    {
        return m_cols;
    }

    Rational get(std::size_t r, std::size_t c) const
    {
        check_index(r, c);
        auto it = m_data[r].find(c);
        return it == m_data[r].end() ? Rational(0) : it->second;
    }

    void set(std::size_t r, std::size_t c, const Rational &v)
    {
        check_index(r, c);
        if (v == 0) {
            m_data[r].erase(c);
        } else {
            m_data[r][c] = v;
        }
    }

    void add_to(std::size_t r, std::size_t c, const Rational &v)
    {
        check_index(r, c);
        if (v == 0) {
            return;
        }
        auto [it, inserted] = m_data[r].try_emplace(c, v);
        if (!inserted) {
            it->second += v;
            if (it->second == 0) {
                m_data[r].erase(it);
            }
        }
    }

    const row_type &row(std::size_t r) const
    {
        return m_data.at(r);
    }

    std::size_t nonzeros() const
    {
        std::size_t n = 0;
        for (const auto &r : m_data) {
            n += r.size();
        }
        return n;
    }

    ExactMatrix transpose() const
    {
        ExactMatrix t(m_cols, rows());
        for (std::size_t i = 0; i < rows(); ++i) {
            for (const auto &[j, v] : m_data[i]) {
                t.m_data[j].emplace(i, v);
            }
        }
        return t;
    }

    RationalVector operator*(const RationalVector &v) const
    {
        detail::require(v.size() == m_cols, "matrix-vector dimension mismatch");
        RationalVector out(rows(), Rational(0));
        for (std::size_t i = 0; i < rows(); ++i) {
            for (const auto &[j, a] : m_data[i]) {
                out[i] += a * v[j];
            }
        }
        return out;
    }

    friend ExactMatrix operator*(const ExactMatrix &a, const ExactMatrix &b)
    {
        detail::require(a.cols() == b.rows(), "matrix product dimension mismatch");
        ExactMatrix out(a.rows(), b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (const auto &[k, av] : a.m_data[i]) {
                for (const auto &[j, bv] : b.m_data[k]) {
                    out.add_to(i, j, av * bv);
                }
            }
        }
        return out;
    }

    friend bool operator==(const ExactMatrix &, const ExactMatrix &) = default;

    std::vector<RationalVector> to_dense() const
    {
        std::vector<RationalVector> out(rows(), RationalVector(m_cols, Rational(0)));
        for (std::size_t i = 0; i < rows(); ++i) {
            for (const auto &[j, v] : m_data[i]) {
                out[i][j] = v;
            }
        }
        return out;
    }

private:
    void check_index(std::size_t r, std::size_t c) const
    {
        detail::require(r < rows() && c < m_cols, "matrix index out of range");
    }

    std::size_t m_cols = 0;
    std::vector<row_type> m_data;
};

namespace detail
{

using sparse_row = std::vector<std::pair<std::size_t, Rational>>;

// row <- row - f * piv, both sorted by column.
inline void axpy(sparse_row &row, const Rational &f, const sparse_row &piv)
{
    sparse_row out;
    out.reserve(row.size() + piv.size());
    auto a = row.begin();
    auto b = piv.begin();
    while (a != row.end() || b != piv.end()) {
        if (b == piv.end() || (a != row.end() && a->first < b->first)) {
            out.push_back(std::move(*a++));
        } else if (a == row.end() || b->first < a->first) {
            out.emplace_back(b->first, -f * b->second);
            ++b;
        } else {
            Rational v = a->second - f * b->second;
            if (v != 0) {
                out.emplace_back(a->first, std::move(v));
            }
            ++a;
            ++b;
        }
    }
    row = std::move(out);
}

// Incremental row echelon form: pivot rows are normalized to leading
// coefficient 1 and keyed by their leading column.
class echelon
{
public:
    // Reduces row against the stored pivots; returns true if it was
    // independent (and is now stored).
    bool insert(sparse_row row)
    {
        while (!row.empty()) {
            auto it = m_pivots.find(row.front().first);
            if (it == m_pivots.end()) {
                break;
            }
            const Rational f = row.front().second;
            axpy(row, f, it->second);
        }
        if (row.empty()) {
            return false;
        }
        const Rational inv = 1 / row.front().second;
        for (auto &[c, v] : row) {
            v *= inv;
        }
        const std::size_t lead = row.front().first;
        m_pivots.emplace(lead, std::move(row));
        return true;
    }

    std::size_t rank() const
    {
        return m_pivots.size();
    }

    // Turns the stored echelon form into reduced row echelon form.
    void back_substitute()
    {
        for (auto it = m_pivots.rbegin(); it != m_pivots.rend(); ++it) {
            const std::size_t pc = it->first;
            for (auto jt = m_pivots.begin(); jt->first != pc; ++jt) {
                auto &r = jt->second;
                auto pos = std::lower_bound(r.begin(), r.end(), pc,
                                            [](const auto &e, std::size_t c) { return e.first < c; });
                if (pos != r.end() && pos->first == pc) {
                    const Rational f = pos->second;
                    axpy(r, f, it->second);
                }
            }
        }
    }

    const std::map<std::size_t, sparse_row> &pivots() const
    {
        return m_pivots;
    }

private:
    std::map<std::size_t, sparse_row> m_pivots;
};

inline sparse_row to_sparse(const ExactMatrix::row_type &r)
{
    return sparse_row(r.begin(), r.end());
}

// Groups the nonzero rows of m into connected components of the bipartite
// row/column incidence graph. Components are ordered by their smallest row.
inline std::vector<std::vector<std::size_t>> row_components(const ExactMatrix &m)
{
    std::vector<std::size_t> parent(m.cols());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto &r = m.row(i);
        if (r.empty()) {
            continue;
        }
        const std::size_t root = find(r.begin()->first);
        for (const auto &[c, v] : r) {
            const std::size_t rc = find(c);
            if (rc != root) {
                parent[rc] = root;
            }
        }
    }
    std::map<std::size_t, std::size_t> slot;
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto &r = m.row(i);
        if (r.empty()) {
            continue;
        }
        const std::size_t root = find(r.begin()->first);
        auto [it, inserted] = slot.try_emplace(root, out.size());
        if (inserted) {
            out.emplace_back();
        }
        out[it->second].push_back(i);
    }
    return out;
}

} // namespace detail

// Rank over Q. The matrix is split into independent blocks (rows sharing no
// column) which are eliminated separately; the result does not depend on the
// split.
inline std::size_t rank(const ExactMatrix &m)
{
    std::size_t r = 0;
    for (const auto &comp : detail::row_components(m)) {
        detail::echelon ech;
        for (std::size_t i : comp) {
            ech.insert(detail::to_sparse(m.row(i)));
        }
        r += ech.rank();
    }
    return r;
}

// Basis of the right kernel {v : M v = 0}, one vector per free column of the
// reduced row echelon form, with a 1 in that free position.
inline std::vector<RationalVector> kernel_basis(const ExactMatrix &m)
{
    detail::echelon ech;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ech.insert(detail::to_sparse(m.row(i)));
    }
    ech.back_substitute();
    const auto &piv = ech.pivots();
    std::vector<RationalVector> out;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (piv.count(f)) {
            continue;
        }
        RationalVector v(m.cols(), Rational(0));
        v[f] = 1;
        for (const auto &[pc, row] : piv) {
            auto pos = std::lower_bound(row.begin(), row.end(), f,
                                        [](const auto &e, std::size_t c) { return e.first < c; });
            if (pos != row.end() && pos->first == f) {
                v[pc] = -pos->second;
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

// True iff v lies in the row space of m.
inline bool in_row_space(const ExactMatrix &m, const RationalVector &v)
{
    detail::require(v.size() == m.cols(), "vector length does not match column count");
    detail::echelon ech;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ech.insert(detail::to_sparse(m.row(i)));
    }
    detail::sparse_row r;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] != 0) {
            r.emplace_back(j, v[j]);
        }
    }
    return !ech.insert(std::move(r));
}

} // namespace jetspace

#endif
