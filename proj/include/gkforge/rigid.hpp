#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gkforge/classify.hpp"

namespace gkforge {

struct RigidReport {
    bool holds = true;
    std::optional<Witness> parallel_defect;   // D_u(gamma)(v, w) != 0
    std::optional<Witness> curvature_defect;  // K(u, v) != [gamma_u, gamma_v]
};

/// D(gamma) = 0 and K(u,v) = [gamma_u, gamma_v] on the basis.
template <class S>
RigidReport rigid_verify(const Algebra<S>& alg, const Metric<S>& g, const DifferenceTensor<S>& dt,
                         double tol = kDefaultTol)
{
    (void)g;
    const std::size_t n = alg.dim();
    RigidReport rep;
    detail::FlagBuilder<S> fd(tol), fk(tol);
    auto dg = covariant_derivative(dt.gamma, dt.L);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z)
                for (std::size_t k = 0; k < n; ++k) fd.check({x, y, z, k}, dg[x](y, z, k));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            Matrix<S> r = curvature_op(alg, dt.L, u, v) - commutator(dt.gamma.op_basis(u), dt.gamma.op_basis(v));
            for (std::size_t w = 0; w < n; ++w)
                for (std::size_t k = 0; k < n; ++k) fk.check({u, v, w, k}, r(k, w));
        }
    rep.parallel_defect = fd.done().witness;
    rep.curvature_defect = fk.done().witness;
    rep.holds = !rep.parallel_defect && !rep.curvature_defect;
    return rep;
}

/// Three-dimensional rigid structure with brackets [e3,e1] = e2, [e3,e2] = 2e2 and
/// metric [[1,1/2,0],[1/2,1,0],[0,0,nu]]; the product is L - gamma for the explicit gamma below.
struct PrgInstance {
    Algebra<Rational> algebra;
    Metric<Rational> metric;
    Tensor3<Rational> gamma;  // gamma(u, v, k): component k of gamma_{e_u} e_v
};

inline PrgInstance prg_instance(const Rational& r, const Rational& nu)
{
    using Q = Rational;
    if (sgn(r) == 0 || sgn(nu) <= 0) throw Error(ErrorKind::InadmissibleParams, "need r != 0 and nu > 0");
    Matrix<Q> gm(3, 3);
    gm(0, 0) = 1; gm(0, 1) = Q(1, 2); gm(1, 0) = Q(1, 2); gm(1, 1) = 1; gm(2, 2) = nu;
    Metric<Q> g = Metric<Q>::make(gm);

    Q nr = nu * r, nr2 = nu * r * r;
    // rows k, columns v of gamma_{e_u}
    Q m[3][3][3] = {
        {{(nr2 + 1) / nr, Q(2) / nr, 0}, {(nr2 - 1) / (2 * nr), (nr2 - 1) / nr, 0}, {0, 0, r}},
        {{Q(2) / nr, Q(4) / nr, 0}, {(nr2 - 1) / nr, Q(-2) / nr, 0}, {0, 0, 0}},
        {{0, 0, Q(4) / r}, {0, 0, Q(-2) / r}, {r, 0, 0}},
    };
    Tensor3<Q> gamma(3);
    for (std::size_t u = 0; u < 3; ++u)
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t v = 0; v < 3; ++v) gamma(u, v, k) = m[u][k][v];

    // skew product with the required bracket, only used to get the Levi-Civita connection
    Tensor3<Q> half(3);
    half(2, 0, 1) = Q(1, 2); half(0, 2, 1) = Q(-1, 2);
    half(2, 1, 1) = 1; half(1, 2, 1) = -1;
    Tensor3<Q> l = levi_civita(Algebra<Q>::validate(half), g);
    return {Algebra<Q>::validate(l - gamma), g, gamma};
}

/// nu at which tr gamma = (2^k - 1) tr gamma* for the prg instance.
inline Rational prg_balanced_nu(int k, const Rational& r)
{
    if (k < 1) throw Error(ErrorKind::InadmissibleParams, "k must be at least 1");
    return Rational(3) / ((3 * Rational(mpz_class(1) << (k - 1)) - 2) * r * r);
}

// ---------------------------------------------------------------------------------------------
// Equivariant symmetric products and the curvature filter.

/// Quadratic polynomial in the nullspace coordinates; keys (-1,-1) constant, (-1,i) linear, (i,j) i<=j.
using QuadPoly = std::map<std::pair<int, int>, Rational>;

struct RigidCandidates {
    std::vector<Tensor3<Rational>> basis;      // spans the equivariant symmetric products
    std::vector<QuadPoly> filter_equations;    // K(u,v) = [gamma_u, gamma_v] in basis coordinates
    std::vector<std::vector<Rational>> samples;  // rational points of the filtered variety
    std::vector<Tensor3<Rational>> solutions;  // the corresponding products
};

namespace detail {

inline std::size_t sym_index(std::size_t u, std::size_t v, std::size_t n)
{
    if (u > v) std::swap(u, v);
    return u * n - u * (u + 1) / 2 + v;
}

inline Tensor3<Rational> product_from_vector(const std::vector<Rational>& x, std::size_t n)
{
    const std::size_t pairs = n * (n + 1) / 2;
    Tensor3<Rational> t(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t k = 0; k < n; ++k) t(u, v, k) = x[k * pairs + sym_index(u, v, n)];
    return t;
}

inline Rational eval_poly(const QuadPoly& p, const std::vector<std::optional<Rational>>& x, bool& complete)
{
    Rational s(0);
    complete = true;
    for (const auto& [key, c] : p) {
        Rational t = c;
        for (int v : {key.first, key.second}) {
            if (v < 0) continue;
            if (!x[v]) { complete = false; return 0; }
            t *= *x[v];
        }
        s += t;
    }
    return s;
}

/// Substitutes the known coordinates.
inline QuadPoly reduce_poly(const QuadPoly& p, const std::vector<std::optional<Rational>>& x)
{
    QuadPoly out;
    for (const auto& [key, c] : p) {
        int a = key.first, b = key.second;
        Rational t = c;
        if (a >= 0 && x[a]) { t *= *x[a]; a = -1; }
        if (b >= 0 && x[b]) { t *= *x[b]; b = -1; }
        if (a > b) std::swap(a, b);
        out[{a, b}] += t;
    }
    for (auto it = out.begin(); it != out.end();)
        it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
    return out;
}

class FilterSolver {
public:
    FilterSolver(const std::vector<QuadPoly>& eqs, std::size_t nvars, std::uint64_t seed)
        : eqs_(eqs), n_(nvars), rng_(seed)
    {
    }

    std::optional<std::vector<Rational>> attempt()
    {
        std::vector<std::optional<Rational>> x(n_);
        if (!solve(x, 0)) return std::nullopt;
        std::vector<Rational> out;
        for (auto& v : x) out.push_back(*v);
        return out;
    }

private:
    bool solve(std::vector<std::optional<Rational>>& x, int depth)
    {
        if (depth > static_cast<int>(4 * n_ + 8)) return false;
        std::vector<QuadPoly> red;
        for (const auto& e : eqs_) {
            QuadPoly r = reduce_poly(e, x);
            if (r.empty()) continue;
            if (r.size() == 1 && r.begin()->first == std::make_pair(-1, -1)) return false;
            red.push_back(std::move(r));
        }
        std::size_t unknown = n_;
        for (std::size_t i = 0; i < n_; ++i)
            if (!x[i]) { unknown = i; break; }
        if (unknown == n_) return red.empty();

        for (const auto& r : red) {
            int var = -2;
            bool single = true;
            for (const auto& [key, c] : r)
                for (int v : {key.first, key.second}) {
                    if (v < 0) continue;
                    if (var == -2) var = v;
                    else if (v != var) single = false;
                }
            if (!single || var < 0) continue;
            Rational a = get(r, var, var), b = get(r, -1, var), c = get(r, -1, -1);
            std::vector<Rational> roots;
            if (sgn(a) == 0) {
                roots.push_back(-c / b);
            } else {
                Rational disc = b * b - 4 * a * c, s;
                if (sgn(disc) < 0 || !rational_sqrt(disc, s)) return false;
                roots.push_back((-b + s) / (2 * a));
                if (sgn(s) != 0) roots.push_back((-b - s) / (2 * a));
                std::shuffle(roots.begin(), roots.end(), rng_);
            }
            for (const auto& root : roots) {
                x[var] = root;
                if (solve(x, depth + 1)) return true;
            }
            x[var].reset();
            return false;
        }
        // no univariate equation: pin a random unknown to a random small rational
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n_; ++i)
            if (!x[i]) free.push_back(i);
        std::size_t v = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng_)];
        long num = 0;
        while (num == 0) num = std::uniform_int_distribution<long>(-7, 7)(rng_);
        Rational val(num, std::uniform_int_distribution<long>(1, 5)(rng_));
        val.canonicalize();
        x[v] = val;
        if (solve(x, depth + 1)) return true;
        x[v].reset();
        return false;
    }

    static Rational get(const QuadPoly& p, int a, int b)
    {
        auto it = p.find({a, b});
        return it == p.end() ? Rational(0) : it->second;
    }

    const std::vector<QuadPoly>& eqs_;
    std::size_t n_;
    std::mt19937_64 rng_;
};

}  // namespace detail

/// Symmetric products gamma0 with h.gamma0_u v = gamma0_{h.u} v + gamma0_u(h.v) for every generator h,
/// then the rational points of that space with K(u,v) = [gamma0_u, gamma0_v].
/// k_point[u*n+v] is the curvature operator K(e_u, e_v).
inline RigidCandidates rigid_candidates(const std::vector<Matrix<Rational>>& hol_gens, const Metric<Rational>& g,
                                        const std::vector<Matrix<Rational>>& k_point, std::size_t samples = 4,
                                        std::uint64_t seed = 0, std::size_t max_attempts = 400)
{
    const std::size_t n = g.dim();
    for (const auto& h : hol_gens) {
        Matrix<Rational> s = g.G() * h;
        if (!(s + s.transpose() == Matrix<Rational>(n, n)))
            throw Error(ErrorKind::Schema, "holonomy generator is not skew-adjoint");
    }
    if (k_point.size() != n * n) throw Error(ErrorKind::Schema, "curvature needs n*n operators");
    const std::size_t pairs = n * (n + 1) / 2, nv = n * pairs;

    // equivariance rows: coefficients of the unknowns x[k*pairs + sym(u,v)]
    std::vector<std::vector<Rational>> rows;
    for (const auto& h : hol_gens)
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u; v < n; ++v)
                for (std::size_t k = 0; k < n; ++k) {
                    std::vector<Rational> row(nv, Rational(0));
                    for (std::size_t m = 0; m < n; ++m) row[m * pairs + detail::sym_index(u, v, n)] += h(k, m);
                    for (std::size_t a = 0; a < n; ++a) {
                        row[k * pairs + detail::sym_index(a, v, n)] -= h(a, u);
                        row[k * pairs + detail::sym_index(u, a, n)] -= h(a, v);
                    }
                    rows.push_back(std::move(row));
                }
    std::vector<Vec<Rational>> null;
    if (rows.empty()) {
        for (std::size_t i = 0; i < nv; ++i) null.push_back(unit<Rational>(nv, i));
    } else {
        Matrix<Rational> a(rows.size(), nv);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < nv; ++j) a(i, j) = rows[i][j];
        null = nullspace(a);
    }

    RigidCandidates out;
    for (const auto& b : null) out.basis.push_back(detail::product_from_vector(b, n));
    const std::size_t d = out.basis.size();

    std::vector<std::vector<Matrix<Rational>>> ops(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t u = 0; u < n; ++u) ops[i].push_back(out.basis[i].op_basis(u));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c) {
                    QuadPoly p;
                    Rational k0 = k_point[u * n + v](r, c);
                    if (sgn(k0) != 0) p[{-1, -1}] = -k0;
                    for (std::size_t a = 0; a < d; ++a)
                        for (std::size_t b = 0; b < d; ++b) {
                            Rational t = (ops[a][u] * ops[b][v])(r, c) - (ops[b][v] * ops[a][u])(r, c);
                            if (sgn(t) == 0) continue;
                            int i = static_cast<int>(std::min(a, b)), j = static_cast<int>(std::max(a, b));
                            p[{i, j}] += t;
                        }
                    for (auto it = p.begin(); it != p.end();)
                        it = sgn(it->second) == 0 ? p.erase(it) : std::next(it);
                    if (!p.empty()) out.filter_equations.push_back(std::move(p));
                }

    detail::FilterSolver solver(out.filter_equations, d, seed);
    for (std::size_t t = 0; t < max_attempts && out.samples.size() < samples; ++t) {
        auto s = solver.attempt();
        if (!s || std::find(out.samples.begin(), out.samples.end(), *s) != out.samples.end()) continue;
        Tensor3<Rational> prod(n);
        for (std::size_t i = 0; i < d; ++i) prod = prod + (*s)[i] * out.basis[i];
        out.samples.push_back(*s);
        out.solutions.push_back(std::move(prod));
    }
    return out;
}

/// Largest residual of K(u,v) = [gamma_u, gamma_v] for a candidate product.
inline Rational rigid_filter_residual(const Tensor3<Rational>& gamma0, const std::vector<Matrix<Rational>>& k_point)
{
    const std::size_t n = gamma0.dim();
    Rational worst(0);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            Matrix<Rational> r = k_point[u * n + v] - commutator(gamma0.op_basis(u), gamma0.op_basis(v));
            for (const auto& x : r.data()) worst = std::max(worst, Rational(abs(x)));
        }
    return worst;
}

/// Holonomy generator and curvature of R x S^2(r) at p = (1,(0,0,1)) in the basis (e0, e1, e2).
struct CylinderSphereSetup {
    Metric<Rational> metric;
    std::vector<Matrix<Rational>> hol_gens;
    std::vector<Matrix<Rational>> k_point;
};

inline CylinderSphereSetup cylinder_sphere_setup(const Rational& r)
{
    if (sgn(r) <= 0) throw Error(ErrorKind::InadmissibleParams, "radius must be positive");
    CylinderSphereSetup s;
    s.metric = Metric<Rational>::identity(3);
    Matrix<Rational> h(3, 3);
    h(1, 2) = 1;
    h(2, 1) = -1;
    s.hol_gens = {h};
    s.k_point.assign(9, Matrix<Rational>(3, 3));
    Matrix<Rational> k(3, 3);
    k(2, 1) = 1 / (r * r);
    k(1, 2) = -1 / (r * r);
    s.k_point[1 * 3 + 2] = k;
    s.k_point[2 * 3 + 1] = Rational(-1) * k;
    return s;
}

/// Coordinates (a11, a33, c12, c13) of an equivariant product on R x S^2.
struct CylinderParams {
    Rational a11, a33, c12, c13;
};

inline CylinderParams cylinder_params(const Tensor3<Rational>& gamma0)
{
    return {gamma0(0, 0, 0), gamma0(1, 1, 0), gamma0(0, 1, 2), gamma0(0, 1, 1)};
}

/// The filtered product for a given c13 (any nonzero value), in float so irrational c13 can be used.
inline Tensor3<double> cylinder_product(double c13, double r)
{
    Tensor3<double> t(3);
    double a33 = -1 / (c13 * r * r);
    t(0, 0, 0) = c13;
    t(0, 1, 1) = t(1, 0, 1) = c13;
    t(0, 2, 2) = t(2, 0, 2) = c13;
    t(1, 1, 0) = a33;
    t(2, 2, 0) = a33;
    return t;
}

// ---------------------------------------------------------------------------------------------
// Symmetric matrices with <A,B> = tr(AB), gamma0_A B = AB + BA, K(A,B)C = [[A,B],C].

struct Exem5Report {
    bool holds = true;
    std::size_t checks = 0;
    std::string failure;
};

namespace detail {

inline std::vector<Matrix<Rational>> sym_basis(std::size_t n)
{
    std::vector<Matrix<Rational>> b;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Matrix<Rational> m(n, n);
            m(i, j) = 1;
            m(j, i) = 1;
            b.push_back(m);
        }
    return b;
}

inline Matrix<Rational> jordan(const Matrix<Rational>& a, const Matrix<Rational>& b) { return a * b + b * a; }
inline Matrix<Rational> sym_curv(const Matrix<Rational>& a, const Matrix<Rational>& b, const Matrix<Rational>& c)
{
    return commutator(commutator(a, b), c);
}
inline Rational tr_ip(const Matrix<Rational>& a, const Matrix<Rational>& b) { return trace(Matrix<Rational>(a * b)); }

}  // namespace detail

/// The three identities on the given matrices: K(A,B)C = [gamma_A, gamma_B]C, the derivation rule on (C,E),
/// and <gamma_A C, E> = <C, gamma_A E>.
inline bool exem5_identities(const Matrix<Rational>& a, const Matrix<Rational>& b, const Matrix<Rational>& c,
                             const Matrix<Rational>& e, std::string* which = nullptr)
{
    using detail::jordan;
    using detail::sym_curv;
    Matrix<Rational> lhs = sym_curv(a, b, c);
    Matrix<Rational> rhs = jordan(a, jordan(b, c)) - jordan(b, jordan(a, c));
    if (!(lhs == rhs)) {
        if (which) *which = "curvature";
        return false;
    }
    Matrix<Rational> d1 = sym_curv(a, b, jordan(c, e));
    Matrix<Rational> d2 = jordan(sym_curv(a, b, c), e) + jordan(c, sym_curv(a, b, e));
    if (!(d1 == d2)) {
        if (which) *which = "derivation";
        return false;
    }
    if (detail::tr_ip(jordan(a, c), e) != detail::tr_ip(c, jordan(a, e))) {
        if (which) *which = "self-adjoint";
        return false;
    }
    return true;
}

/// Runs the identities on every basis 4-tuple of Sym(n) and on `random` random rational 4-tuples.
inline Exem5Report exem5_pointwise_check(std::size_t n, std::size_t random = 8, std::uint64_t seed = 0)
{
    if (n < 2) throw Error(ErrorKind::InadmissibleParams, "n must be at least 2");
    Exem5Report rep;
    auto basis = detail::sym_basis(n);
    auto run = [&](const Matrix<Rational>& a, const Matrix<Rational>& b, const Matrix<Rational>& c,
                   const Matrix<Rational>& e, const std::string& where) {
        ++rep.checks;
        std::string which;
        if (rep.holds && !exem5_identities(a, b, c, e, &which)) {
            rep.holds = false;
            rep.failure = which + " identity fails at " + where;
        }
    };
    const std::size_t m = basis.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l)
                    run(basis[i], basis[j], basis[k], basis[l],
                        "basis (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                            "," + std::to_string(l + 1) + ")");
    std::mt19937_64 rng(seed);
    auto rnd = [&]() {
        Matrix<Rational> x(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                Rational q(std::uniform_int_distribution<long>(-9, 9)(rng), std::uniform_int_distribution<long>(1, 6)(rng));
                q.canonicalize();
                x(i, j) = q;
                x(j, i) = q;
            }
        return x;
    };
    for (std::size_t t = 0; t < random; ++t) {
        auto a = rnd(), b = rnd(), c = rnd(), e = rnd();
        run(a, b, c, e, "random sample " + std::to_string(t + 1));
    }
    return rep;
}

}  // namespace gkforge
