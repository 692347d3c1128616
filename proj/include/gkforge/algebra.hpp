#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkforge/error.hpp"
#include "gkforge/tensor.hpp"

namespace gkforge {

template <class S>
struct SparseEntry {
    std::size_t k;
    S v;
};

template <class S>
using SparseTable = std::vector<std::vector<SparseEntry<S>>>;  // indexed by i*n+j

namespace detail {

template <class S>
SparseTable<S> sparsify(const Tensor3<S>& t)
{
    const std::size_t n = t.dim();
    SparseTable<S> out(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (t(i, j, k) != 0) out[i * n + j].push_back({k, t(i, j, k)});
    return out;
}

// u = e_i * v (left action by a basis vector) using a sparse table
template <class S>
void act_add(const SparseTable<S>& tab, std::size_t n, std::size_t i, const Vec<S>& v, const S& c, Vec<S>& out)
{
    for (std::size_t j = 0; j < n; ++j) {
        if (v[j] == 0) continue;
        S cv = c * v[j];
        for (const auto& e : tab[i * n + j]) out[e.k] += cv * e.v;
    }
}

template <class S>
Vec<S> table_vec(const SparseTable<S>& tab, std::size_t n, std::size_t i, std::size_t j)
{
    Vec<S> v(n, S(0));
    for (const auto& e : tab[i * n + j]) v[e.k] = e.v;
    return v;
}

// x * y with x given as vector, y as vector
template <class S>
Vec<S> table_apply(const SparseTable<S>& tab, std::size_t n, const Vec<S>& x, const Vec<S>& y)
{
    Vec<S> out(n, S(0));
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] != 0) act_add(tab, n, i, y, x[i], out);
    return out;
}

}  // namespace detail

/// Finite-dimensional algebra given by structure constants, e_i . e_j = sum_k C(i,j,k) e_k.
/// Flags and bracket are computed once at validation.
template <class S>
class Algebra {
public:
    using Triple = std::array<std::size_t, 3>;

    static Algebra validate(Tensor3<S> c, double tol = kDefaultTol)
    {
        const std::size_t n = c.dim();
        if (n == 0) throw Error(ErrorKind::Schema, "algebra dimension must be positive");
        for (const auto& x : c.data())
            if (!ScalarTraits<S>::finite(x)) throw Error(ErrorKind::NonFinite, "structure constant is not finite");
        Algebra a;
        a.tol_ = tol;
        a.c_ = std::move(c);
        a.b_ = Tensor3<S>(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) a.b_(i, j, k) = a.c_(i, j, k) - a.c_(j, i, k);
        a.cs_ = detail::sparsify(a.c_);
        a.bs_ = detail::sparsify(a.b_);
        a.check_flags();
        return a;
    }

    std::size_t dim() const { return c_.dim(); }
    double tol() const { return tol_; }
    const Tensor3<S>& product() const { return c_; }
    const Tensor3<S>& bracket() const { return b_; }
    const SparseTable<S>& product_sparse() const { return cs_; }
    const SparseTable<S>& bracket_sparse() const { return bs_; }

    bool left_symmetric() const { return !ls_defect_; }
    bool novikov() const { return left_symmetric() && !nov_defect_; }
    bool jacobi() const { return !jac_defect_; }
    /// First basis triple (a,b,c) in lexicographic order with ass(a,b,c) != ass(b,a,c).
    const std::optional<Triple>& associator_defect() const { return ls_defect_; }
    const std::optional<Triple>& novikov_defect() const { return nov_defect_; }
    const std::optional<Triple>& jacobi_defect() const { return jac_defect_; }

    Vec<S> mul(const Vec<S>& x, const Vec<S>& y) const { return detail::table_apply(cs_, dim(), x, y); }
    Vec<S> br(const Vec<S>& x, const Vec<S>& y) const { return detail::table_apply(bs_, dim(), x, y); }
    Vec<S> mul_basis(std::size_t i, std::size_t j) const { return detail::table_vec(cs_, dim(), i, j); }
    Vec<S> br_basis(std::size_t i, std::size_t j) const { return detail::table_vec(bs_, dim(), i, j); }

    /// ass(x,y,z) = (x.y).z - x.(y.z)
    Vec<S> associator(const Vec<S>& x, const Vec<S>& y, const Vec<S>& z) const
    {
        return sub(mul(mul(x, y), z), mul(x, mul(y, z)));
    }

    /// Same algebra in the basis e'_i = sum_a P(a,i) e_a.
    Algebra change_basis(const Matrix<S>& p) const
    {
        const std::size_t n = dim();
        auto pinv = inverse(p);
        if (!pinv) throw Error(ErrorKind::Schema, "change of basis is singular");
        Tensor3<S> c(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Vec<S> w = *pinv * mul(p.col(i), p.col(j));
                for (std::size_t k = 0; k < n; ++k) c(i, j, k) = w[k];
            }
        return validate(std::move(c), tol_);
    }

private:
    void check_flags()
    {
        const std::size_t n = dim();
        for (std::size_t a = 0; a < n && !ls_defect_; ++a)
            for (std::size_t b = 0; b < n && !ls_defect_; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    // [a,b].c - a.(b.c) + b.(a.c)
                    Vec<S> r(n, S(0));
                    Vec<S> ab = br_basis(a, b);
                    for (std::size_t k = 0; k < n; ++k)
                        if (ab[k] != 0)
                            for (const auto& e : cs_[k * n + c]) r[e.k] += ab[k] * e.v;
                    detail::act_add(cs_, n, a, mul_basis(b, c), S(-1), r);
                    detail::act_add(cs_, n, b, mul_basis(a, c), S(1), r);
                    if (!all_zero(r, tol_)) { ls_defect_ = Triple{a, b, c}; break; }
                }
        for (std::size_t a = 0; a < n && !nov_defect_; ++a)
            for (std::size_t b = 0; b < n && !nov_defect_; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    // (a.b).c - (a.c).b
                    Vec<S> r(n, S(0));
                    Vec<S> ab = mul_basis(a, b), ac = mul_basis(a, c);
                    for (std::size_t k = 0; k < n; ++k) {
                        if (ab[k] != 0)
                            for (const auto& e : cs_[k * n + c]) r[e.k] += ab[k] * e.v;
                        if (ac[k] != 0)
                            for (const auto& e : cs_[k * n + b]) r[e.k] -= ac[k] * e.v;
                    }
                    if (!all_zero(r, tol_)) { nov_defect_ = Triple{a, b, c}; break; }
                }
        for (std::size_t a = 0; a < n && !jac_defect_; ++a)
            for (std::size_t b = a + 1; b < n && !jac_defect_; ++b)
                for (std::size_t c = b + 1; c < n; ++c) {
                    Vec<S> r(n, S(0));
                    detail::act_add(bs_, n, a, br_basis(b, c), S(1), r);
                    detail::act_add(bs_, n, b, br_basis(c, a), S(1), r);
                    detail::act_add(bs_, n, c, br_basis(a, b), S(1), r);
                    if (!all_zero(r, tol_)) { jac_defect_ = Triple{a, b, c}; break; }
                }
    }

    double tol_ = kDefaultTol;
    Tensor3<S> c_, b_;
    SparseTable<S> cs_, bs_;
    std::optional<Triple> ls_defect_, nov_defect_, jac_defect_;
};

template <class S>
Algebra<S> abelian(std::size_t n) { return Algebra<S>::validate(Tensor3<S>(n)); }

}  // namespace gkforge
