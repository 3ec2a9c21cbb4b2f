#pragma once

// Dense linear algebra over the rational-function field. Rank and nullspace
// run fraction-free (Bareiss) elimination on denominator-cleared rows;
// inverse and solve use exact Gauss-Jordan over the field. Pivoting is
// deterministic: first symbolically nonzero entry, scanning top-down.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gla/scalar.hpp"

namespace gla {

class FieldMatrix {
public:
    FieldMatrix() = default;

    FieldMatrix(std::size_t rows, std::size_t cols, const ScalarExpr& fill)
        : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

    static FieldMatrix zero(std::size_t rows, std::size_t cols,
                            std::shared_ptr<const CoordinateSet> coords) {
        return FieldMatrix(rows, cols, ScalarExpr::constant(std::move(coords), Rational(0)));
    }

    static FieldMatrix identity(std::size_t n, std::shared_ptr<const CoordinateSet> coords) {
        FieldMatrix m = zero(n, n, coords);
        for (std::size_t i = 0; i < n; ++i)
            m.at(i, i) = ScalarExpr::constant(coords, Rational(1));
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    ScalarExpr& at(std::size_t r, std::size_t c) { return entries_.at(r * cols_ + c); }
    const ScalarExpr& at(std::size_t r, std::size_t c) const {
        return entries_.at(r * cols_ + c);
    }

    FieldMatrix transpose() const {
        FieldMatrix t(cols_, rows_, entries_.front());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    friend FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
        if (a.cols_ != b.rows_) throw std::logic_error("matrix shape mismatch");
        auto coords = !a.entries_.empty() ? a.entries_.front().coords_ptr()
                                          : b.entries_.front().coords_ptr();
        FieldMatrix r(a.rows_, b.cols_, ScalarExpr::constant(coords, Rational(0)));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a.at(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    r.at(i, j) += a.at(i, k) * b.at(k, j);
            }
        return r;
    }

    std::vector<ScalarExpr> apply(const std::vector<ScalarExpr>& v) const {
        if (v.size() != cols_) throw std::logic_error("matrix/vector shape mismatch");
        if (rows_ == 0) return {};
        auto coords = !entries_.empty() ? entries_.front().coords_ptr() : v.front().coords_ptr();
        std::vector<ScalarExpr> r(rows_, ScalarExpr::constant(coords, Rational(0)));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }

    friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<ScalarExpr> entries_;
};

namespace detail {

// Multiply each row through by its denominators so that all entries are
// polynomial. Row scaling by nonzero factors preserves rank and right
// nullspace.
inline FieldMatrix clear_row_denominators(FieldMatrix m) {
    auto coords = m.rows() && m.cols() ? m.at(0, 0).coords_ptr() : nullptr;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const Polynomial& d = m.at(r, c).den();
            if (d.is_constant()) continue;
            ScalarExpr factor(coords, d);
            for (std::size_t c2 = 0; c2 < m.cols(); ++c2) m.at(r, c2) *= factor;
        }
    }
    return m;
}

struct Echelon {
    FieldMatrix mat;                 // upper echelon, rows permuted in place
    std::vector<std::size_t> pivot_cols;
};

// Fraction-free (Bareiss) row echelon on a denominator-cleared matrix.
inline Echelon bareiss_echelon(const FieldMatrix& input) {
    FieldMatrix m = clear_row_denominators(input);
    std::size_t rows = m.rows(), cols = m.cols();
    Echelon e{m, {}};
    if (rows == 0 || cols == 0) return e;
    auto coords = m.at(0, 0).coords_ptr();
    ScalarExpr prev = ScalarExpr::constant(coords, Rational(1));
    std::size_t lead = 0;
    for (std::size_t col = 0; col < cols && lead < rows; ++col) {
        std::size_t pivot = lead;
        while (pivot < rows && e.mat.at(pivot, col).is_zero()) ++pivot;
        if (pivot == rows) continue;
        if (pivot != lead)
            for (std::size_t c = 0; c < cols; ++c)
                std::swap(e.mat.at(lead, c), e.mat.at(pivot, c));
        const ScalarExpr p = e.mat.at(lead, col);
        for (std::size_t r = lead + 1; r < rows; ++r) {
            const ScalarExpr head = e.mat.at(r, col);
            for (std::size_t c = 0; c < cols; ++c) {
                ScalarExpr v = e.mat.at(r, c) * p - head * e.mat.at(lead, c);
                e.mat.at(r, c) = v / prev;  // exact by Bareiss
            }
        }
        prev = p;
        e.pivot_cols.push_back(col);
        ++lead;
    }
    return e;
}

}  // namespace detail

// Exact determinant by expansion along the first row, skipping zeros.
// Intended for the small matrices arising from form evaluation.
inline ScalarExpr determinant(const FieldMatrix& a) {
    if (a.rows() != a.cols()) throw std::logic_error("determinant: matrix not square");
    std::size_t n = a.rows();
    if (n == 0) throw std::logic_error("determinant: empty matrix");
    auto coords = a.at(0, 0).coords_ptr();
    std::vector<std::size_t> cols(n);
    for (std::size_t j = 0; j < n; ++j) cols[j] = j;
    std::function<ScalarExpr(std::size_t, std::vector<std::size_t>&)> rec =
        [&](std::size_t row, std::vector<std::size_t>& cs) -> ScalarExpr {
        if (cs.size() == 1) return a.at(row, cs[0]);
        ScalarExpr acc = ScalarExpr::constant(coords, Rational(0));
        for (std::size_t j = 0; j < cs.size(); ++j) {
            const ScalarExpr& head = a.at(row, cs[j]);
            if (head.is_zero()) continue;
            std::size_t cj = cs[j];
            cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(j));
            ScalarExpr sub = rec(row + 1, cs);
            cs.insert(cs.begin() + static_cast<std::ptrdiff_t>(j), cj);
            if (sub.is_zero()) continue;
            if (j % 2 == 0) acc += head * sub;
            else acc -= head * sub;
        }
        return acc;
    };
    return rec(0, cols);
}

inline std::size_t rank(const FieldMatrix& a) {
    return detail::bareiss_echelon(a).pivot_cols.size();
}

// Basis of the right nullspace; vectors denominator-cleared with the first
// nonzero entry's leading coefficient positive, ordered by free column.
inline std::vector<std::vector<ScalarExpr>> nullspace(const FieldMatrix& a) {
    auto coords = a.at(0, 0).coords_ptr();
    detail::Echelon e = detail::bareiss_echelon(a);
    const auto& piv = e.pivot_cols;
    std::vector<std::vector<ScalarExpr>> basis;
    const ScalarExpr zero = ScalarExpr::constant(coords, Rational(0));
    const ScalarExpr one = ScalarExpr::constant(coords, Rational(1));
    std::vector<bool> is_pivot(a.cols(), false);
    for (std::size_t c : piv) is_pivot[c] = true;
    for (std::size_t free_col = 0; free_col < a.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<ScalarExpr> v(a.cols(), zero);
        v[free_col] = one;
        // Back-substitute through the echelon rows above.
        for (std::size_t i = piv.size(); i-- > 0;) {
            std::size_t pc = piv[i];
            if (pc > free_col) continue;
            ScalarExpr acc = zero;
            for (std::size_t c = pc + 1; c < a.cols(); ++c)
                if (!v[c].is_zero()) acc += e.mat.at(i, c) * v[c];
            v[pc] = -acc / e.mat.at(i, pc);
        }
        // Clear denominators, normalize sign.
        for (const ScalarExpr& x : v) {
            if (x.den().is_constant()) continue;
            ScalarExpr f(coords, x.den());
            for (ScalarExpr& y : v) y *= f;
        }
        for (const ScalarExpr& x : v) {
            if (x.is_zero()) continue;
            if (x.num().leading().second < 0)
                for (ScalarExpr& y : v) y = -y;
            break;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// Exact inverse; throws on a field-singular matrix.
inline FieldMatrix invert(const FieldMatrix& a) {
    if (a.rows() != a.cols()) throw std::logic_error("invert: matrix not square");
    std::size_t n = a.rows();
    auto coords = a.at(0, 0).coords_ptr();
    FieldMatrix m = a;
    FieldMatrix inv = FieldMatrix::identity(n, coords);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m.at(pivot, col).is_zero()) ++pivot;
        if (pivot == n) throw std::domain_error("invert: matrix is singular over the field");
        if (pivot != col)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(m.at(col, c), m.at(pivot, c));
                std::swap(inv.at(col, c), inv.at(pivot, c));
            }
        ScalarExpr p = m.at(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            m.at(col, c) /= p;
            inv.at(col, c) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m.at(r, col).is_zero()) continue;
            ScalarExpr f = m.at(r, col);
            for (std::size_t c = 0; c < n; ++c) {
                m.at(r, c) -= f * m.at(col, c);
                inv.at(r, c) -= f * inv.at(col, c);
            }
        }
    }
    return inv;
}

// One exact solution of A x = b; free variables set to zero. Returns nullopt
// on an inconsistent system.
inline std::optional<std::vector<ScalarExpr>> solve(const FieldMatrix& a,
                                                    const std::vector<ScalarExpr>& b) {
    if (b.size() != a.rows()) throw std::logic_error("solve: shape mismatch");
    auto coords = a.at(0, 0).coords_ptr();
    FieldMatrix aug = FieldMatrix::zero(a.rows(), a.cols() + 1, coords);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols()) = b[r];
    }
    detail::Echelon e = detail::bareiss_echelon(aug);
    for (std::size_t c : e.pivot_cols)
        if (c == a.cols()) return std::nullopt;  // pivot in the RHS column
    const ScalarExpr zero = ScalarExpr::constant(coords, Rational(0));
    std::vector<ScalarExpr> x(a.cols(), zero);
    for (std::size_t i = e.pivot_cols.size(); i-- > 0;) {
        std::size_t pc = e.pivot_cols[i];
        ScalarExpr acc = e.mat.at(i, a.cols());
        for (std::size_t c = pc + 1; c < a.cols(); ++c)
            if (!x[c].is_zero()) acc -= e.mat.at(i, c) * x[c];
        x[pc] = acc / e.mat.at(i, pc);
    }
    return x;
}

}  // namespace gla
