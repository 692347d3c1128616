#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkforge/difference.hpp"

namespace gkforge {

struct Witness {
    std::vector<std::size_t> indices;  // 1-based basis indices, last entry is the component
    std::string residual;
};

struct Flag {
    bool holds = true;
    std::optional<Witness> witness;
    std::optional<double> residual_norm;
};

/// Unique real k with tr gamma = (2^k - 1) tr gamma*, when the traces are parallel.
struct BalancedSolution {
    bool exists = false;
    std::string lambda;  // tr gamma = lambda tr gamma*
    double k_real = 0;
    std::optional<long> k_integer;
};

struct ClassificationReport {
    std::string backend;
    std::size_t dim = 0;
    int kmax = 0;
    bool degenerate = false;  // gamma == 0
    std::vector<std::pair<std::string, Flag>> flags;
    BalancedSolution balanced_solution;

    const Flag& flag(const std::string& name) const
    {
        for (const auto& f : flags)
            if (f.first == name) return f.second;
        throw Error(ErrorKind::Schema, "no flag named " + name);
    }
    bool holds(const std::string& name) const { return flag(name).holds; }
};

namespace detail {

/// Accumulates residual components visited in lexicographic order.
template <class S>
class FlagBuilder {
public:
    explicit FlagBuilder(double tol) : tol_(tol) {}

    void check(std::vector<std::size_t> idx, const S& r)
    {
        double a = std::fabs(to_double(r));
        norm_ = std::max(norm_, a);
        if (!f_.witness && !is_zero(r, tol_)) {
            for (auto& i : idx) ++i;
            f_.holds = false;
            f_.witness = Witness{std::move(idx), to_string(r)};
        }
    }

    void check_vec(std::vector<std::size_t> idx, const Vec<S>& r)
    {
        idx.push_back(0);
        for (std::size_t k = 0; k < r.size(); ++k) {
            idx.back() = k;
            check(idx, r[k]);
        }
    }

    Flag done()
    {
        f_.residual_norm = norm_;
        return f_;
    }

private:
    double tol_;
    double norm_ = 0;
    Flag f_;
};

inline Flag trivially_true()
{
    Flag f;
    f.residual_norm = 0.0;
    return f;
}

}  // namespace detail

/// Gauduchon residual d*(alpha - xi) - |tr gamma*|^2 + <tr gamma*, tr gamma>, with the
/// left-invariant codifferential d*eta = sum_ij g^{ij} eta(L_{e_i} e_j).
template <class S>
S gauduchon_residual(const Metric<S>& g, const DifferenceTensor<S>& dt)
{
    Vec<S> trl = contract_trace(dt.L, g);
    S lhs = dot(sub(dt.alpha, dt.xi), trl);
    S rhs = g.ip(dt.tr_gamma_star, dt.tr_gamma_star) - g.ip(dt.tr_gamma_star, dt.tr_gamma);
    return lhs - rhs;
}

/// Codifferential of a left-invariant 1-form, d*eta = sum_ij g^{ij} eta(L_{e_i} e_j).
template <class S>
S codifferential_1form(const Tensor3<S>& l, const Metric<S>& g, const Vec<S>& eta)
{
    return dot(eta, contract_trace(l, g));
}

template <class S>
BalancedSolution balanced_solution(const Vec<S>& trg, const Vec<S>& trgs, double tol)
{
    BalancedSolution out;
    std::size_t piv = trgs.size();
    for (std::size_t i = 0; i < trgs.size(); ++i)
        if (!is_zero(trgs[i], tol)) { piv = i; break; }
    if (piv == trgs.size()) return out;
    S lambda = trg[piv] / trgs[piv];
    for (std::size_t i = 0; i < trgs.size(); ++i)
        if (!is_zero(S(trg[i] - lambda * trgs[i]), tol)) return out;
    out.lambda = to_string(lambda);
    S lp1 = lambda + S(1);
    if (to_double(lp1) <= 0) return out;
    out.exists = true;
    out.k_real = std::log2(to_double(lp1));
    long kr = std::lround(out.k_real);
    if (kr >= 0 && kr < 62) {
        if constexpr (ScalarTraits<S>::exact) {
            if (lp1 == Rational(mpz_class(1) << kr)) out.k_integer = kr;
        } else {
            if (std::fabs(lp1 - std::ldexp(1.0, static_cast<int>(kr))) <= tol) out.k_integer = kr;
        }
    }
    return out;
}

template <class S>
ClassificationReport classify(const Algebra<S>& alg, const Metric<S>& g, int kmax = 5, double tol = kDefaultTol)
{
    if (kmax < 1) throw Error(ErrorKind::Schema, "kmax must be at least 1");
    const std::size_t n = alg.dim();
    DifferenceTensor<S> dt = difference_tensor(alg, g);
    ClassificationReport rep;
    rep.backend = ScalarTraits<S>::name;
    rep.dim = n;
    rep.kmax = kmax;
    rep.degenerate = is_zero_tensor(dt.gamma, tol);

    std::vector<std::string> names{"kahler", "hessian"};
    for (int k = 1; k <= kmax; ++k) names.push_back("balanced_" + std::to_string(k));
    for (const char* s : {"lcb", "gauduchon", "lck", "vaisman", "pluriclosed", "rigid", "infinitely_balanced", "cyt",
                          "chern_ricci_flat"})
        names.push_back(s);

    if (rep.degenerate) {
        for (const auto& nm : names) rep.flags.emplace_back(nm, detail::trivially_true());
        return rep;
    }

    using FB = detail::FlagBuilder<S>;

    {
        FB f(tol);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                for (std::size_t k = 0; k < n; ++k) f.check({u, v, k}, S(dt.gamma(u, v, k) - dt.gamma_star(u, v, k)));
        rep.flags.emplace_back("kahler", f.done());
    }
    {
        // Codazzi: nabla_u(g)(v,w) = -<u.v,w> - <v,u.w> symmetric in (u,v)
        Tensor3<S> pl = lower_last(alg.product(), g);
        FB f(tol);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                for (std::size_t w = 0; w < n; ++w) {
                    S a = -pl(u, v, w) - pl(u, w, v);
                    S b = -pl(v, u, w) - pl(v, w, u);
                    f.check({u, v, w}, S(a - b));
                }
        rep.flags.emplace_back("hessian", f.done());
    }
    for (int k = 1; k <= kmax; ++k) {
        S c = from_rational<S>(Rational(mpz_class(1) << k) - 1);
        FB f(tol);
        f.check_vec({}, sub(dt.tr_gamma, scale(dt.tr_gamma_star, c)));
        rep.flags.emplace_back("balanced_" + std::to_string(k), f.done());
    }
    {
        FB f(tol);
        Matrix<S> dxi = d_covector(alg, dt.xi);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) f.check({a, b}, dxi(a, b));
        rep.flags.emplace_back("lcb", f.done());
    }
    {
        FB f(tol);
        f.check({}, gauduchon_residual(g, dt));
        rep.flags.emplace_back("gauduchon", f.done());
    }
    Vec<S> theta0 = sub(dt.alpha, dt.xi);
    Flag lck;
    {
        FB f(tol);
        S nm1 = from_rational<S>(Rational(static_cast<long>(n) - 1));
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v) {
                Vec<S> lhs = scale(sub(dt.gamma_star.at(u, v), dt.gamma_star.at(v, u)), nm1);
                Vec<S> rhs = sub(scale(unit<S>(n, v), theta0[u]), scale(unit<S>(n, u), theta0[v]));
                f.check_vec({u, v}, sub(lhs, rhs));
            }
        lck = f.done();
        rep.flags.emplace_back("lck", lck);
    }
    {
        Vec<S> pi = sub(dt.tr_gamma_star, dt.tr_gamma);
        FB f(tol);
        for (std::size_t u = 0; u < n; ++u) f.check_vec({u}, dt.L.apply_basis(u, pi));
        for (std::size_t u = 0; u < n; ++u) f.check_vec({u}, alg.mul(unit<S>(n, u), pi));
        Flag par = f.done();
        Flag v = lck.holds ? par : lck;
        if (lck.holds && par.holds) v.residual_norm = std::max(*lck.residual_norm, *par.residual_norm);
        rep.flags.emplace_back("vaisman", v);
    }
    {
        FB f(tol);
        for (std::size_t u = 0; u < n; ++u) {
            Matrix<S> gsu = dt.gamma_star.op_basis(u), gu = dt.gamma.op_basis(u);
            for (std::size_t v = u + 1; v < n; ++v) {
                Matrix<S> r = curvature_op(alg, dt.L, u, v) -
                              (gsu * dt.gamma.op_basis(v) - dt.gamma_star.op_basis(v) * gu);
                for (std::size_t w = 0; w < n; ++w)
                    for (std::size_t k = 0; k < n; ++k) f.check({u, v, w, k}, r(k, w));
            }
        }
        rep.flags.emplace_back("pluriclosed", f.done());
    }
    {
        auto dg = covariant_derivative(dt.gamma, dt.L);
        FB f(tol);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t z = 0; z < n; ++z)
                    for (std::size_t k = 0; k < n; ++k) f.check({x, y, z, k}, dg[x](y, z, k));
        rep.flags.emplace_back("rigid", f.done());
    }
    {
        FB f(tol);
        f.check_vec({0}, dt.tr_gamma);
        f.check_vec({1}, dt.tr_gamma_star);
        rep.flags.emplace_back("infinitely_balanced", f.done());
    }
    for (int which = 0; which < 2; ++which) {
        Matrix<S> r = which == 0 ? ricci_bismut(alg, g, dt) : ricci_chern(alg, g, dt);
        FB f(tol);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v) f.check({u, v}, r(u, v));
        rep.flags.emplace_back(which == 0 ? "cyt" : "chern_ricci_flat", f.done());
    }
    rep.balanced_solution = balanced_solution(dt.tr_gamma, dt.tr_gamma_star, tol);
    return rep;
}

}  // namespace gkforge
