#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "gkforge/algebra.hpp"
#include "gkforge/metric.hpp"

namespace gkforge {

/// <T(i,j,.), e_w> for all i,j,w.
template <class S>
Tensor3<S> lower_last(const Tensor3<S>& t, const Metric<S>& g)
{
    const std::size_t n = t.dim();
    Tensor3<S> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (t(i, j, k) == 0) continue;
                for (std::size_t w = 0; w < n; ++w)
                    if (g.G()(k, w) != 0) out(i, j, w) += t(i, j, k) * g.G()(k, w);
            }
    return out;
}

/// Inverse of lower_last.
template <class S>
Tensor3<S> raise_last(const Tensor3<S>& t, const Metric<S>& g)
{
    const std::size_t n = t.dim();
    Tensor3<S> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t w = 0; w < n; ++w) {
                if (t(i, j, w) == 0) continue;
                for (std::size_t k = 0; k < n; ++k)
                    if (g.Ginv()(k, w) != 0) out(i, j, k) += g.Ginv()(k, w) * t(i, j, w);
            }
    return out;
}

/// Levi-Civita product from the Koszul formula
/// 2<L_u v, w> = <[u,v],w> + <[w,v],u> + <[w,u],v>.
template <class S>
Tensor3<S> levi_civita(const Algebra<S>& alg, const Metric<S>& g)
{
    const std::size_t n = alg.dim();
    if (g.dim() != n) throw Error(ErrorKind::Schema, "metric and algebra dimensions differ");
    Tensor3<S> bl = lower_last(alg.bracket(), g);
    Tensor3<S> cov(n);
    const S half = from_rational<S>(Rational(1, 2));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = 0; w < n; ++w) {
                S s = bl(u, v, w) + bl(w, v, u) + bl(w, u, v);
                if (s != 0) cov(u, v, w) = half * s;
            }
    return raise_last(cov, g);
}

/// sum_ij g^{ij} T_{e_i} e_j
template <class S>
Vec<S> contract_trace(const Tensor3<S>& t, const Metric<S>& g)
{
    const std::size_t n = t.dim();
    Vec<S> out(n, S(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const S& gij = g.Ginv()(i, j);
            if (gij == 0) continue;
            for (std::size_t k = 0; k < n; ++k)
                if (t(i, j, k) != 0) out[k] += gij * t(i, j, k);
        }
    return out;
}

/// First (u,v) with L_u v - L_v u != [u,v].
template <class S>
std::optional<std::array<std::size_t, 2>> torsion_defect(const Algebra<S>& alg, const Tensor3<S>& l)
{
    const std::size_t n = alg.dim();
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t k = 0; k < n; ++k)
                if (!is_zero(S(l(u, v, k) - l(v, u, k) - alg.bracket()(u, v, k)), alg.tol()))
                    return std::array<std::size_t, 2>{u, v};
    return std::nullopt;
}

/// First (u,v,w) with <L_u v, w> + <v, L_u w> != 0.
template <class S>
std::optional<std::array<std::size_t, 3>> metric_defect(const Tensor3<S>& l, const Metric<S>& g)
{
    const std::size_t n = l.dim();
    Tensor3<S> ll = lower_last(l, g);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = 0; w < n; ++w)
                if (!is_zero(S(ll(u, v, w) + ll(u, w, v)), g.tol())) return std::array<std::size_t, 3>{u, v, w};
    return std::nullopt;
}

}  // namespace gkforge
