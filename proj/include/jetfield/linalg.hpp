#pragma once

#include "jetfield/charts.hpp"
#include "jetfield/expr.hpp"
#include "jetfield/rational.hpp"

#include <optional>
#include <vector>

namespace jetfield {

/// Exact field operations used by the elimination routines below.
template <class Scalar>
struct FieldOps;

template <>
struct FieldOps<Rational> {
    static Rational simplify(const Rational& x) { return x; }
    static bool is_zero(const Rational& x) { return x.is_zero(); }
};

template <>
struct FieldOps<Expr> {
    static Expr simplify(const Expr& x) { return normalize(x); }
    static bool is_zero(const Expr& x) { return normalize(x).is_zero(); }
};

template <class Scalar>
struct RowEchelon {
    DenseMatrix<Scalar> reduced;  // reduced row echelon form
    std::vector<Eigen::Index> pivot_columns;

    [[nodiscard]] Eigen::Index rank() const { return static_cast<Eigen::Index>(pivot_columns.size()); }
};

/// Gauss-Jordan elimination with exact zero tests; the first nonzero entry
/// of each column is taken as pivot.
template <class Scalar>
RowEchelon<Scalar> row_reduce(DenseMatrix<Scalar> a)
{
    using Ops = FieldOps<Scalar>;
    RowEchelon<Scalar> out;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Eigen::Index pivot = -1;
        for (Eigen::Index r = row; r < a.rows(); ++r) {
            a(r, col) = Ops::simplify(a(r, col));
            if (!Ops::is_zero(a(r, col))) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != row) a.row(pivot).swap(a.row(row));
        const Scalar inv = Ops::simplify(Scalar(1) / a(row, col));
        for (Eigen::Index c = col; c < a.cols(); ++c) a(row, c) = Ops::simplify(a(row, c) * inv);
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            if (r == row) continue;
            const Scalar factor = Ops::simplify(a(r, col));
            if (Ops::is_zero(factor)) continue;
            for (Eigen::Index c = col; c < a.cols(); ++c) a(r, c) = Ops::simplify(a(r, c) - factor * a(row, c));
        }
        out.pivot_columns.push_back(col);
        ++row;
    }
    out.reduced = std::move(a);
    return out;
}

/// Inverse of a square matrix, or nullopt when singular.
template <class Scalar>
std::optional<DenseMatrix<Scalar>> inverse(const DenseMatrix<Scalar>& a)
{
    const Eigen::Index n = a.rows();
    DenseMatrix<Scalar> aug(n, 2 * n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            aug(r, c) = a(r, c);
            aug(r, n + c) = Scalar(r == c ? 1 : 0);
        }
    auto ech = row_reduce<Scalar>(std::move(aug));
    if (ech.rank() < n || ech.pivot_columns.back() >= n) return std::nullopt;
    return DenseMatrix<Scalar>(ech.reduced.rightCols(n));
}

/// Basis of the kernel, one column per free variable.
template <class Scalar>
DenseMatrix<Scalar> null_space(const DenseMatrix<Scalar>& a)
{
    auto ech = row_reduce<Scalar>(a);
    std::vector<Eigen::Index> free;
    for (Eigen::Index c = 0, p = 0; c < a.cols(); ++c) {
        if (p < ech.rank() && ech.pivot_columns[p] == c)
            ++p;
        else
            free.push_back(c);
    }
    DenseMatrix<Scalar> basis(a.cols(), static_cast<Eigen::Index>(free.size()));
    for (Eigen::Index r = 0; r < basis.rows(); ++r)
        for (Eigen::Index c = 0; c < basis.cols(); ++c) basis(r, c) = Scalar(0);
    for (std::size_t f = 0; f < free.size(); ++f) {
        const auto col = static_cast<Eigen::Index>(f);
        basis(free[f], col) = Scalar(1);
        for (Eigen::Index p = 0; p < ech.rank(); ++p)
            basis(ech.pivot_columns[p], col) = FieldOps<Scalar>::simplify(-ech.reduced(p, free[f]));
    }
    return basis;
}

}  // namespace jetfield
