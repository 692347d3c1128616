#pragma once

#include <cstddef>
#include <vector>

#include "gkforge/linalg.hpp"

namespace gkforge {

/// Rank-(2,1) tensor T on an n-dim space: T(i,j,k) is the e_k component of T_{e_i} e_j.
template <class S>
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(std::size_t n) : n_(n), a_(n * n * n, S(0)) {}

    std::size_t dim() const { return n_; }
    S& operator()(std::size_t i, std::size_t j, std::size_t k) { return a_[(i * n_ + j) * n_ + k]; }
    const S& operator()(std::size_t i, std::size_t j, std::size_t k) const { return a_[(i * n_ + j) * n_ + k]; }

    /// T_{e_i} e_j as a vector.
    Vec<S> at(std::size_t i, std::size_t j) const
    {
        Vec<S> v(n_);
        for (std::size_t k = 0; k < n_; ++k) v[k] = (*this)(i, j, k);
        return v;
    }

    /// T_u v for arbitrary vectors.
    Vec<S> apply(const Vec<S>& u, const Vec<S>& v) const
    {
        Vec<S> out(n_, S(0));
        for (std::size_t i = 0; i < n_; ++i) {
            if (u[i] == 0) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (v[j] == 0) continue;
                S c = u[i] * v[j];
                const S* row = &a_[(i * n_ + j) * n_];
                for (std::size_t k = 0; k < n_; ++k)
                    if (row[k] != 0) out[k] += c * row[k];
            }
        }
        return out;
    }

    /// T_{e_i} applied to v.
    Vec<S> apply_basis(std::size_t i, const Vec<S>& v) const
    {
        Vec<S> out(n_, S(0));
        for (std::size_t j = 0; j < n_; ++j) {
            if (v[j] == 0) continue;
            const S* row = &a_[(i * n_ + j) * n_];
            for (std::size_t k = 0; k < n_; ++k)
                if (row[k] != 0) out[k] += v[j] * row[k];
        }
        return out;
    }

    /// Matrix of T_u, columns are images of basis vectors.
    Matrix<S> op(const Vec<S>& u) const
    {
        Matrix<S> m(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (u[i] == 0) continue;
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k) m(k, j) += u[i] * (*this)(i, j, k);
        }
        return m;
    }

    Matrix<S> op_basis(std::size_t i) const
    {
        Matrix<S> m(n_, n_);
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t k = 0; k < n_; ++k) m(k, j) = (*this)(i, j, k);
        return m;
    }

    friend Tensor3 operator-(Tensor3 a, const Tensor3& b)
    {
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
        return a;
    }
    friend Tensor3 operator+(Tensor3 a, const Tensor3& b)
    {
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
        return a;
    }
    friend Tensor3 operator*(const S& c, Tensor3 a)
    {
        for (auto& x : a.a_) x *= c;
        return a;
    }
    friend bool operator==(const Tensor3& a, const Tensor3& b) { return a.n_ == b.n_ && a.a_ == b.a_; }

    const std::vector<S>& data() const { return a_; }

private:
    std::size_t n_ = 0;
    std::vector<S> a_;
};

template <class S>
bool is_zero_tensor(const Tensor3<S>& t, double tol = kDefaultTol)
{
    for (const auto& x : t.data())
        if (!is_zero(x, tol)) return false;
    return true;
}

}  // namespace gkforge
