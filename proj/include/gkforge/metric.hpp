#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "gkforge/error.hpp"
#include "gkforge/linalg.hpp"

namespace gkforge {

/// Symmetric positive-definite scalar product with cached inverse.
template <class S>
class Metric {
public:
    static Metric make(Matrix<S> g, double tol = kDefaultTol)
    {
        const std::size_t n = g.rows();
        if (n == 0 || g.cols() != n) throw Error(ErrorKind::Schema, "metric must be a nonempty square matrix");
        for (const auto& x : g.data())
            if (!ScalarTraits<S>::finite(x)) throw Error(ErrorKind::NonFinite, "metric entry is not finite");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (g(i, j) != g(j, i))
                    throw Error(ErrorKind::Schema, "metric is not symmetric at (" + std::to_string(i + 1) + "," +
                                                       std::to_string(j + 1) + ")");
        if (!positive_definite(g, 1e-12)) throw Error(ErrorKind::NotPositiveDefinite, "metric is not positive definite");
        auto inv = inverse(g, 1e-12);
        if (!inv) throw Error(ErrorKind::SingularMetric, "metric is singular");
        Metric m;
        m.tol_ = tol;
        m.g_ = std::move(g);
        m.ginv_ = std::move(*inv);
        if constexpr (!ScalarTraits<S>::exact) {
            auto id = m.g_ * m.ginv_;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (std::fabs(id(i, j) - (i == j ? 1.0 : 0.0)) > 1e-12)
                        throw Error(ErrorKind::SingularMetric, "metric inverse is ill-conditioned");
        }
        return m;
    }

    static Metric identity(std::size_t n) { return make(Matrix<S>::identity(n)); }

    std::size_t dim() const { return g_.rows(); }
    double tol() const { return tol_; }
    const Matrix<S>& G() const { return g_; }
    const Matrix<S>& Ginv() const { return ginv_; }

    S ip(const Vec<S>& a, const Vec<S>& b) const
    {
        const std::size_t n = dim();
        S s(0);
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (b[j] != 0 && g_(i, j) != 0) s += a[i] * g_(i, j) * b[j];
        }
        return s;
    }

    /// Covector components w(e_j) = <v, e_j>.
    Vec<S> lower(const Vec<S>& v) const { return g_ * v; }
    /// Vector dual to a covector.
    Vec<S> raise(const Vec<S>& w) const { return ginv_ * w; }

    /// Metric in the basis e'_i = sum_a P(a,i) e_a.
    Metric change_basis(const Matrix<S>& p) const { return make(p.transpose() * g_ * p, tol_); }

    Metric scaled(const S& lambda) const { return make(lambda * g_, tol_); }

private:
    double tol_ = kDefaultTol;
    Matrix<S> g_, ginv_;
};

}  // namespace gkforge
