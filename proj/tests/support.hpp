#pragma once

// Shared fixtures and independent float oracles for the unit suites.

#include <cmath>
#include <vector>

#include "gkforge/catalog/builtin.hpp"
#include "gkforge/difference.hpp"
#include "gkforge/random_instance.hpp"

namespace gkt {

using namespace gkforge;
using Q = Rational;
using D3 = std::vector<std::vector<std::vector<double>>>;
using DM = std::vector<std::vector<double>>;

inline Algebra<Q> n5g3()
{
    Tensor3<Q> c(3);
    c(0, 1, 2) = Q(1, 2);
    c(1, 0, 2) = Q(-1, 2);
    return Algebra<Q>::validate(c);
}

inline Algebra<Q> entry(const std::string& id, const catalog::Assignment& p = {})
{
    return catalog::instantiate(catalog::builtin().entry(id), p);
}

inline Metric<Q> metric(std::initializer_list<std::initializer_list<long>> rows)
{
    std::size_t n = rows.size();
    Matrix<Q> m(n, n);
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (long v : r) m(i, j++) = v;
        ++i;
    }
    return Metric<Q>::make(m);
}

inline Metric<Q> diag(std::initializer_list<Q> d)
{
    Matrix<Q> m(d.size(), d.size());
    std::size_t i = 0;
    for (const auto& v : d) { m(i, i) = v; ++i; }
    return Metric<Q>::make(m);
}

inline std::vector<RandomInstance> instances(std::size_t count, std::uint64_t seed)
{
    InstanceGenerator gen(seed);
    std::vector<RandomInstance> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(gen.next());
    return out;
}

// --- float oracles, written against plain arrays -----------------------------------------------

inline D3 to_d3(const Tensor3<Q>& t)
{
    std::size_t n = t.dim();
    D3 out(n, DM(n, std::vector<double>(n)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) out[i][j][k] = t(i, j, k).get_d();
    return out;
}

inline DM to_dm(const Matrix<Q>& m)
{
    DM out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).get_d();
    return out;
}

inline double ipd(const DM& g, const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * g[i][j] * b[j];
    return s;
}

/// Gauss-Jordan solve G x = b.
inline std::vector<double> solve(DM a, std::vector<double> b)
{
    std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

/// L[u][v] from the Koszul formula 2<L_u v, w> = <[u,v],w> - <[v,w],u> + <[w,u],v>.
inline D3 koszul_oracle(const D3& c, const DM& g)
{
    std::size_t n = g.size();
    auto br = [&](std::size_t a, std::size_t b) {
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = c[a][b][k] - c[b][a][k];
        return v;
    };
    auto e = [&](std::size_t i) {
        std::vector<double> v(n, 0);
        v[i] = 1;
        return v;
    };
    D3 l(n, DM(n));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            std::vector<double> rhs(n);
            for (std::size_t w = 0; w < n; ++w)
                rhs[w] = 0.5 * (ipd(g, br(u, v), e(w)) - ipd(g, br(v, w), e(u)) + ipd(g, br(w, u), e(v)));
            l[u][v] = solve(g, rhs);
        }
    return l;
}

/// Orthonormal frame of g by Gram-Schmidt on the standard basis.
inline DM gram_schmidt(const DM& g)
{
    std::size_t n = g.size();
    DM f;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> v(n, 0);
        v[i] = 1;
        for (const auto& q : f) {
            double p = ipd(g, v, q);
            for (std::size_t k = 0; k < n; ++k) v[k] -= p * q[k];
        }
        double nv = std::sqrt(ipd(g, v, v));
        for (auto& x : v) x /= nv;
        f.push_back(v);
    }
    return f;
}

/// sum_a T_{f_a} f_a over an orthonormal frame, T given on the basis.
inline std::vector<double> frame_trace(const D3& t, const DM& g)
{
    std::size_t n = g.size();
    std::vector<double> out(n, 0);
    for (const auto& f : gram_schmidt(g))
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) out[k] += f[i] * f[j] * t[i][j][k];
    return out;
}

/// gamma = L - product and its adjoint, both as plain arrays.
inline std::pair<D3, D3> gamma_oracle(const D3& c, const DM& g)
{
    std::size_t n = g.size();
    D3 l = koszul_oracle(c, g), gm(n, DM(n, std::vector<double>(n))), gs = gm;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t k = 0; k < n; ++k) gm[u][v][k] = l[u][v][k] - c[u][v][k];
    // <gs_u v, w> = <v, gm_u w>
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            std::vector<double> rhs(n), ev(n, 0);
            ev[v] = 1;
            for (std::size_t w = 0; w < n; ++w) rhs[w] = ipd(g, ev, gm[u][w]);
            gs[u][v] = solve(g, rhs);
        }
    return {gm, gs};
}

inline double max_diff(const std::vector<double>& a, const Vec<Q>& b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i].get_d()));
    return m;
}

}  // namespace gkt
