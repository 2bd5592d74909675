#pragma once

// Exact Gaussian elimination over a templated coefficient field.
//
// Rows are sparse: sorted (column, value) pairs with nonzero values.  The
// eliminator keeps a reduced echelon basis keyed by leading column, so rows
// can be fed incrementally and rank / nullity / nullspace queries are cheap.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qfa {

template <class Field>
class Eliminator {
  public:
    using S = typename Field::S;
    using Row = std::vector<std::pair<int, S>>;  // sorted by column, values nonzero

    explicit Eliminator(const Field& fld, bool keep_reduced = true)
        : fld_(fld), keep_reduced_(keep_reduced) {}

    // r1 + c*r2, merging sparse supports.
    Row axpy(const Row& r1, const S& c, const Row& r2) const {
        Row out;
        out.reserve(r1.size() + r2.size());
        size_t i = 0, j = 0;
        while (i < r1.size() || j < r2.size()) {
            if (j == r2.size() || (i < r1.size() && r1[i].first < r2[j].first)) {
                out.push_back(r1[i++]);
            } else if (i == r1.size() || r2[j].first < r1[i].first) {
                S v = fld_.mul(c, r2[j].second);
                if (!fld_.is_zero(v)) out.emplace_back(r2[j].first, std::move(v));
                ++j;
            } else {
                S v = r1[i].second;
                fld_.madd(v, c, r2[j].second);
                if (!fld_.is_zero(v)) out.emplace_back(r1[i].first, std::move(v));
                ++i, ++j;
            }
        }
        return out;
    }

    // Reduce a row against the stored echelon basis (eliminating every stored
    // leading column present in it).
    Row reduce(Row r) const {
        size_t i = 0;
        while (i < r.size()) {
            auto it = rows_.find(r[i].first);
            if (it == rows_.end()) {
                ++i;
                continue;
            }
            int col = r[i].first;
            r = axpy(r, fld_.neg(r[i].second), it->second);
            // the eliminated column is gone; restart scan at the same sparse
            // position (everything before it has no stored leading column)
            while (i < r.size() && r[i].first < col) ++i;
        }
        return r;
    }

    // Insert a row.  Returns true if it enlarged the row space.
    bool insert(Row r) {
        r = reduce(std::move(r));
        if (r.empty()) return false;
        S inv = fld_.inv(r.front().second);
        for (auto& [c, v] : r) v = fld_.mul(inv, v);
        int lead = r.front().first;
        if (keep_reduced_) {
            for (auto& [lc, row] : rows_) {
                auto pos = find_col(row, lead);
                if (pos) row = axpy(row, fld_.neg(*pos), r);
            }
        }
        rows_.emplace(lead, std::move(r));
        return true;
    }

    long rank() const { return static_cast<long>(rows_.size()); }
    long nullity(long ncols) const { return ncols - rank(); }
    const std::map<int, Row>& rows() const { return rows_; }

    // Basis of the right nullspace of the accumulated rows, seen as a matrix
    // with `ncols` columns.  Requires keep_reduced = true.
    std::vector<Row> nullspace(int ncols) const {
        if (!keep_reduced_) throw std::logic_error("nullspace needs reduced echelon form");
        std::vector<Row> basis;
        for (int f = 0; f < ncols; ++f) {
            if (rows_.count(f)) continue;
            Row v;
            for (const auto& [lead, row] : rows_) {
                auto c = find_col(row, f);
                if (c) v.emplace_back(lead, fld_.neg(*c));
            }
            v.emplace_back(f, fld_.one());
            std::sort(v.begin(), v.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            basis.push_back(std::move(v));
        }
        return basis;
    }

  private:
    static std::optional<S> find_col(const Row& row, int col) {
        auto it = std::lower_bound(row.begin(), row.end(), col,
                                   [](const auto& p, int c) { return p.first < c; });
        if (it != row.end() && it->first == col) return it->second;
        return std::nullopt;
    }

    const Field& fld_;
    bool keep_reduced_;
    std::map<int, Row> rows_;
};

// Outcome of an inhomogeneous solve.
template <class Field>
struct SolveResult {
    bool consistent = true;
    bool unique = false;
    std::vector<typename Field::S> solution;  // dense, present when unique
};

// Solve a linear system fed as homogeneous rows over the extended vector
// (x_0, ..., x_{ncols-1}, 1): each row means  sum_c coeff_c * x_c  +
// coeff_{ncols} * 1 = 0.  Callers encode "A x = b" by storing -b at column
// `ncols`.
template <class Field>
SolveResult<Field> solve_inhomogeneous(
    const Field& fld, int ncols,
    const std::vector<typename Eliminator<Field>::Row>& rows) {
    Eliminator<Field> elim(fld, /*keep_reduced=*/true);
    for (const auto& r : rows) elim.insert(r);
    SolveResult<Field> res;
    for (const auto& [lead, row] : elim.rows()) {
        if (lead == ncols) {
            res.consistent = false;  // some row reduced to 0 = nonzero constant
            return res;
        }
    }
    res.unique = (elim.rank() == ncols);
    if (res.unique) {
        res.solution.assign(ncols, fld.zero());
        for (const auto& [lead, row] : elim.rows())
            for (const auto& [c, v] : row)
                if (c == ncols) res.solution[lead] = fld.neg(v);
    }
    return res;
}

}  // namespace qfa
