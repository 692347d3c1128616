#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "gkforge/scalar.hpp"

namespace gkforge {

template <class S>
using Vec = std::vector<S>;

template <class S>
Vec<S> zeros(std::size_t n) { return Vec<S>(n, S(0)); }

template <class S>
Vec<S> unit(std::size_t n, std::size_t i)
{
    Vec<S> v(n, S(0));
    v[i] = S(1);
    return v;
}

template <class S>
S dot(const Vec<S>& a, const Vec<S>& b)
{
    S s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class S>
Vec<S> add(Vec<S> a, const Vec<S>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

template <class S>
Vec<S> sub(Vec<S> a, const Vec<S>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

template <class S>
Vec<S> scale(Vec<S> a, const S& c)
{
    for (auto& x : a) x *= c;
    return a;
}

template <class S>
bool all_zero(const Vec<S>& v, double tol = kDefaultTol)
{
    for (const auto& x : v)
        if (!is_zero(x, tol)) return false;
    return true;
}

template <class S>
double max_abs(const Vec<S>& v)
{
    double m = 0;
    for (const auto& x : v) m = std::max(m, std::fabs(to_double(x)));
    return m;
}

/// Dense row-major matrix.
template <class S>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, S(0)) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Vec<S> col(std::size_t j) const
    {
        Vec<S> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        assert(a.cols_ == b.rows_);
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& x = a(i, k);
                if (x == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
            }
        return c;
    }

    friend Vec<S> operator*(const Matrix& a, const Vec<S>& v)
    {
        Vec<S> out(a.rows_, S(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j)
                if (v[j] != 0) out[i] += a(i, j) * v[j];
        return out;
    }

    friend Matrix operator+(Matrix a, const Matrix& b)
    {
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b)
    {
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
        return a;
    }

    friend Matrix operator*(const S& c, Matrix a)
    {
        for (auto& x : a.a_) x *= c;
        return a;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    const std::vector<S>& data() const { return a_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<S> a_;
};

template <class S>
bool is_zero_matrix(const Matrix<S>& m, double tol = kDefaultTol)
{
    for (const auto& x : m.data())
        if (!is_zero(x, tol)) return false;
    return true;
}

template <class S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) { return a * b - b * a; }

template <class S>
S trace(const Matrix<S>& m)
{
    S s(0);
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i);
    return s;
}

/// Frobenius pairing sum_ij a_ij b_ij.
template <class S>
S frobenius(const Matrix<S>& a, const Matrix<S>& b)
{
    S s(0);
    for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

namespace detail {

template <class S>
std::optional<std::size_t> pick_pivot(const Matrix<S>& a, std::size_t col, std::size_t from, double tol)
{
    if constexpr (ScalarTraits<S>::exact) {
        for (std::size_t r = from; r < a.rows(); ++r)
            if (sgn(a(r, col)) != 0) return r;
        return std::nullopt;
    } else {
        std::size_t best = from;
        double bv = -1;
        for (std::size_t r = from; r < a.rows(); ++r) {
            double v = std::fabs(a(r, col));
            if (v > bv) { bv = v; best = r; }
        }
        if (bv <= tol) return std::nullopt;
        return best;
    }
}

template <class S>
void swap_rows(Matrix<S>& a, std::size_t r1, std::size_t r2)
{
    if (r1 == r2) return;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r1, j), a(r2, j));
}

}  // namespace detail

/// Gauss-Jordan inverse; nullopt when singular (float: pivot below tol).
template <class S>
std::optional<Matrix<S>> inverse(const Matrix<S>& m, double tol = 1e-12)
{
    const std::size_t n = m.rows();
    Matrix<S> a = m, inv = Matrix<S>::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        auto p = detail::pick_pivot(a, c, c, tol);
        if (!p) return std::nullopt;
        detail::swap_rows(a, c, *p);
        detail::swap_rows(inv, c, *p);
        S pv = a(c, c);
        for (std::size_t j = 0; j < n; ++j) { a(c, j) /= pv; inv(c, j) /= pv; }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a(r, c) == 0) continue;
            S f = a(r, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

template <class S>
S determinant(Matrix<S> a)
{
    const std::size_t n = a.rows();
    S det(1);
    for (std::size_t c = 0; c < n; ++c) {
        auto p = detail::pick_pivot(a, c, c, 0.0);
        if (!p) return S(0);
        if (*p != c) { detail::swap_rows(a, c, *p); det = -det; }
        det *= a(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a(r, c) == 0) continue;
            S f = a(r, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return det;
}

/// Positive definiteness. Exact: elimination without pivoting, whose pivots are ratios of
/// consecutive leading principal minors. Float: Cholesky with pivot floor tol.
template <class S>
bool positive_definite(const Matrix<S>& m, double tol = 1e-12)
{
    const std::size_t n = m.rows();
    Matrix<S> a = m;
    for (std::size_t c = 0; c < n; ++c) {
        if constexpr (ScalarTraits<S>::exact) {
            if (sgn(a(c, c)) <= 0) return false;
        } else {
            if (!(a(c, c) > tol)) return false;
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a(r, c) == 0) continue;
            S f = a(r, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return true;
}

/// Basis of the right null space of m (rows are equations), via reduced row echelon form.
template <class S>
std::vector<Vec<S>> nullspace(Matrix<S> a, double tol = kDefaultTol)
{
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::size_t> pivcols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        auto p = detail::pick_pivot(a, c, r, tol);
        if (!p) continue;
        detail::swap_rows(a, r, *p);
        S pv = a(r, c);
        for (std::size_t j = 0; j < cols; ++j) a(r, j) /= pv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a(i, c) == 0) continue;
            S f = a(i, c);
            for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
        }
        pivcols.push_back(c);
        ++r;
    }
    std::vector<bool> is_piv(cols, false);
    for (auto c : pivcols) is_piv[c] = true;
    std::vector<Vec<S>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        Vec<S> v(cols, S(0));
        v[f] = S(1);
        for (std::size_t i = 0; i < pivcols.size(); ++i) v[pivcols[i]] = -a(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class S>
std::size_t rank(const Matrix<S>& a, double tol = kDefaultTol)
{
    return a.cols() - nullspace(a, tol).size();
}

}  // namespace gkforge
