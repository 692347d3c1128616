#pragma once

#include <cstddef>
#include <vector>

#include "gkforge/levi_civita.hpp"

namespace gkforge {

/// gamma_u v = L_u v - u.v together with its adjoint, traces and the Koszul covectors.
template <class S>
struct DifferenceTensor {
    Tensor3<S> L;
    Tensor3<S> gamma;
    Tensor3<S> gamma_star;
    Vec<S> tr_gamma;
    Vec<S> tr_gamma_star;
    Vec<S> alpha;  // <tr gamma*, .>
    Vec<S> xi;     // <tr gamma, .>
};

/// Adjoint: <T*_u v, w> = <v, T_u w>.
template <class S>
Tensor3<S> adjoint(const Tensor3<S>& t, const Metric<S>& g)
{
    const std::size_t n = t.dim();
    Tensor3<S> tl = lower_last(t, g), sw(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = 0; w < n; ++w) sw(u, v, w) = tl(u, w, v);
    return raise_last(sw, g);
}

template <class S>
DifferenceTensor<S> difference_tensor(const Algebra<S>& alg, const Metric<S>& g)
{
    if (!alg.left_symmetric()) {
        const auto& t = *alg.associator_defect();
        throw Error(ErrorKind::NotLeftSymmetric, "ass(e" + std::to_string(t[0] + 1) + ",e" + std::to_string(t[1] + 1) +
                                                     ",e" + std::to_string(t[2] + 1) + ") != ass(e" +
                                                     std::to_string(t[1] + 1) + ",e" + std::to_string(t[0] + 1) +
                                                     ",e" + std::to_string(t[2] + 1) + ")");
    }
    DifferenceTensor<S> d;
    d.L = levi_civita(alg, g);
    d.gamma = d.L - alg.product();
    d.gamma_star = adjoint(d.gamma, g);
    d.tr_gamma = contract_trace(d.gamma, g);
    d.tr_gamma_star = contract_trace(d.gamma_star, g);
    d.alpha = g.lower(d.tr_gamma_star);
    d.xi = g.lower(d.tr_gamma);
    return d;
}

/// D(T)[x] holds (y,z) -> D_x(T)(y,z) = L_x(T_y z) - T_{L_x y} z - T_y(L_x z).
template <class S>
std::vector<Tensor3<S>> covariant_derivative(const Tensor3<S>& t, const Tensor3<S>& l)
{
    const std::size_t n = t.dim();
    std::vector<Matrix<S>> top(n), lop(n);
    for (std::size_t i = 0; i < n; ++i) {
        top[i] = t.op_basis(i);
        lop[i] = l.op_basis(i);
    }
    std::vector<Tensor3<S>> out(n, Tensor3<S>(n));
    for (std::size_t x = 0; x < n; ++x) {
        const Matrix<S>& lx = lop[x];
        for (std::size_t y = 0; y < n; ++y) {
            Matrix<S> m = lx * top[y] - top[y] * lx;
            for (std::size_t q = 0; q < n; ++q) {
                const S& c = lx(q, y);
                if (c == 0) continue;
                m = m - c * top[q];
            }
            for (std::size_t z = 0; z < n; ++z)
                for (std::size_t k = 0; k < n; ++k) out[x](y, z, k) = m(k, z);
        }
    }
    return out;
}

/// K(u,v) = L_{[u,v]} - [L_u, L_v] for basis u, v.
template <class S>
Matrix<S> curvature_op(const Algebra<S>& alg, const Tensor3<S>& l, std::size_t u, std::size_t v)
{
    return l.op(alg.br_basis(u, v)) - commutator(l.op_basis(u), l.op_basis(v));
}

/// All K(e_u, e_v) as matrices, index u*n+v.
template <class S>
std::vector<Matrix<S>> curvature(const Algebra<S>& alg, const Tensor3<S>& l)
{
    const std::size_t n = alg.dim();
    std::vector<Matrix<S>> lop(n);
    for (std::size_t i = 0; i < n; ++i) lop[i] = l.op_basis(i);
    std::vector<Matrix<S>> k(n * n, Matrix<S>(n, n));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            Matrix<S> m = l.op(alg.br_basis(u, v)) - commutator(lop[u], lop[v]);
            k[v * n + u] = S(-1) * m;
            k[u * n + v] = std::move(m);
        }
    return k;
}

/// 2-form (a,b) -> -eta([a,b]) for a covector eta.
template <class S>
Matrix<S> d_covector(const Algebra<S>& alg, const Vec<S>& eta)
{
    const std::size_t n = alg.dim();
    Matrix<S> m(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) m(a, b) = -dot(eta, alg.br_basis(a, b));
    return m;
}

template <class S>
struct KoszulClosedness {
    Matrix<S> d_alpha;
    Matrix<S> d_xi;
};

template <class S>
KoszulClosedness<S> koszul_closedness(const DifferenceTensor<S>& dt, const Algebra<S>& alg)
{
    return {d_covector(alg, dt.alpha), d_covector(alg, dt.xi)};
}

/// sum_ij g^{ij} D_x(T)(e_i,e_j) for every basis x; row x of the result.
template <class S>
std::vector<Vec<S>> trace_derivative(const std::vector<Tensor3<S>>& dT, const Metric<S>& g)
{
    std::vector<Vec<S>> out;
    out.reserve(dT.size());
    for (const auto& t : dT) out.push_back(contract_trace(t, g));
    return out;
}

namespace detail {

template <class S>
Matrix<S> canonical_ricci(const Tensor3<S>& gamma, const Tensor3<S>& tdiff, const Vec<S>& tr, const Metric<S>& g,
                          const Tensor3<S>& l)
{
    const std::size_t n = gamma.dim();
    auto trd = trace_derivative(covariant_derivative(tdiff, l), g);
    Matrix<S> r(n, n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            r(u, v) = -g.ip(gamma.at(u, v), tr) - g.ip(trd[u], unit<S>(n, v));
    return r;
}

}  // namespace detail

/// rho^B(u^h, v^v) = -<gamma_u v, tr gamma> - <tr D_u(gamma), v>; rows u, columns v.
template <class S>
Matrix<S> ricci_bismut(const Algebra<S>&, const Metric<S>& g, const DifferenceTensor<S>& dt)
{
    return detail::canonical_ricci(dt.gamma, dt.gamma, dt.tr_gamma, g, dt.L);
}

/// rho^C(u^h, v^v) = -<gamma_u v, tr gamma*> - <tr D_u(gamma*), v>.
template <class S>
Matrix<S> ricci_chern(const Algebra<S>&, const Metric<S>& g, const DifferenceTensor<S>& dt)
{
    return detail::canonical_ricci(dt.gamma, dt.gamma_star, dt.tr_gamma_star, g, dt.L);
}

/// ric(u,u) = trace(gamma*_u gamma_u).
template <class S>
S ricci_quadratic(const DifferenceTensor<S>& dt, const Vec<S>& u)
{
    return trace(dt.gamma_star.op(u) * dt.gamma.op(u));
}

}  // namespace gkforge
