#pragma once

#include <string>
#include <vector>

#include "gkforge/chart/chart.hpp"

namespace gkforge::chart {

namespace detail {

inline std::vector<std::string> coord_names(std::size_t n)
{
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("x" + std::to_string(i + 1));
    return v;
}

inline std::string paren(const std::string& s) { return "(" + s + ")"; }

/// Substitutes a coordinate name for the variable t of a one-variable expression.
inline std::string in_t(const std::string& f, const std::string& x)
{
    Expr::parse(f, {"t"});  // validates
    std::string out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        bool word_start = i == 0 || !(std::isalnum(static_cast<unsigned char>(f[i - 1])) || f[i - 1] == '_');
        bool word_end = i + 1 == f.size() || !(std::isalnum(static_cast<unsigned char>(f[i + 1])) || f[i + 1] == '_');
        if (f[i] == 't' && word_start && word_end) out += x;
        else out += f[i];
    }
    return paren(out);
}

inline Point filled(std::size_t n, double v) { return Point(n, v); }

}  // namespace detail

inline ChartMetric constant_metric(const Matrix<double>& g, double half_width = 1)
{
    const std::size_t n = g.rows();
    std::vector<std::string> up;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) up.push_back(format_double(g(i, j)));
    return ChartMetric::from_expressions(n, up, detail::filled(n, -half_width), detail::filled(n, half_width));
}

/// [[cosh f, sinh f], [sinh f, cosh f]]; det = 1.
inline ChartMetric exem2_metric(const std::string& f = "x1*x2/2 + x1/3")
{
    std::string p = detail::paren(f);
    return ChartMetric::from_expressions(2, {"cosh" + p, "sinh" + p, "cosh" + p}, {-1, -1}, {1, 1});
}

/// [[e^{x+y} + e^{f(x)}, e^{x+y}], [e^{x+y}, e^{x+y} + e^{h(y)}]] with f, h in t.
inline ChartMetric exem3_metric(const std::string& f = "t/2", const std::string& h = "t^2/3")
{
    std::string e = "exp(x1+x2)";
    return ChartMetric::from_expressions(
        2, {e + "+exp" + detail::in_t(f, "x1"), e, e + "+exp" + detail::in_t(h, "x2")}, {-1, -1}, {1, 1});
}

/// mu12 = nu, mu11 = f(x1) + P, mu22 = h(x2) + Q with P, Q antiderivatives of d1 nu in x2 and d2 nu in x1;
/// integration constants are 0. f and h are the functions themselves (in t), so f = h = 1 gives
/// the exem3 shape with e^0.
struct Dim2Family {
    std::string nu = "exp(x1+x2)";
    std::string p = "exp(x1+x2)";
    std::string q = "exp(x1+x2)";
    std::string f = "1";
    std::string h = "1";
    std::string perturb11 = "0";  // added to mu11, for negative controls
};

inline ChartMetric dim2_metric(const Dim2Family& d = {})
{
    std::string m11 = detail::in_t(d.f, "x1") + "+" + detail::paren(d.p) + "+" + detail::paren(d.perturb11);
    std::string m22 = detail::in_t(d.h, "x2") + "+" + detail::paren(d.q);
    return ChartMetric::from_expressions(2, {m11, d.nu, m22}, {-1, -1}, {1, 1});
}

/// Largest |d2 P - d1 nu| and |d1 Q - d2 nu| over the plan: the family's own hypothesis.
inline double dim2_antiderivative_residual(const Dim2Family& d, const SamplePlan& plan)
{
    auto v = detail::coord_names(2);
    Expr nu = Expr::parse(d.nu, v), p = Expr::parse(d.p, v), q = Expr::parse(d.q, v);
    Expr r1 = p.diff(1) - nu.diff(0), r2 = q.diff(0) - nu.diff(1);
    double r = 0;
    for (const auto& x : plan.points) r = std::max({r, std::fabs(r1.eval(x)), std::fabs(r2.eval(x))});
    return r;
}

/// Diagonal metric mu_j = (f_1...f_n)^{2^{k0-1}} / f_j^{n 2^{k0-1} - 1}, with f_j independent of x_j.
inline ChartMetric dimn_metric(std::size_t k0, const std::vector<std::string>& f)
{
    const std::size_t n = f.size();
    if (k0 < 1 || n < 2) throw Error(ErrorKind::InadmissibleParams, "need k0 >= 1 and n >= 2");
    auto vars = detail::coord_names(n);
    for (std::size_t j = 0; j < n; ++j)
        if (Expr::parse(f[j], vars).depends_on(j))
            throw Error(ErrorKind::InadmissibleParams, "f" + std::to_string(j + 1) + " depends on x" + std::to_string(j + 1));
    const long m = 1L << (k0 - 1);
    const long e = static_cast<long>(n) * m - 1;
    std::string prod;
    for (std::size_t j = 0; j < n; ++j) prod += (j ? "*" : "") + detail::paren(f[j]);
    std::vector<std::string> up;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            up.push_back(i == j ? "(" + prod + ")^" + std::to_string(m) + "/" + detail::paren(f[j]) + "^" +
                                      std::to_string(e)
                                : "0");
    return ChartMetric::from_expressions(n, up, detail::filled(n, -1), detail::filled(n, 1));
}

/// Diagonal mu_i = exp(g_i(x_i)), each g_i an expression in t.
inline ChartMetric diagonal_exp_metric(const std::vector<std::string>& g)
{
    const std::size_t n = g.size();
    std::vector<std::string> up;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            up.push_back(i == j ? "exp" + detail::in_t(g[i], "x" + std::to_string(i + 1)) : "0");
    return ChartMetric::from_expressions(n, up, detail::filled(n, -1), detail::filled(n, 1));
}

/// [[1 + x2^2, 0], [0, 1]]: not pluriclosed, the residual is 2 everywhere.
inline ChartMetric pluriclosed_negative_control()
{
    return ChartMetric::from_expressions(2, {"1+x2^2", "0", "1"}, {-1, -1}, {1, 1});
}

/// Unimodular Hessian metric on R^n minus the origin:
/// mu_ii = (r^{n+2} + c(r^2 - x_i^2)) / D, mu_ij = -c x_i x_j / D, D = r^3 (r^n + c)^{(n-1)/n}.
inline ChartMetric exemple_fixture(std::size_t n, const Rational& c, Point lo = {}, Point hi = {})
{
    if (n < 2) throw Error(ErrorKind::InadmissibleParams, "n must be at least 2");
    if (sgn(c) <= 0) throw Error(ErrorKind::InadmissibleParams, "c must be positive");
    if (lo.empty()) {
        lo.assign(n, -1);
        hi.assign(n, 1);
        lo[0] = 0.5;
        hi[0] = 2;
    }
    if (lo.size() != n || hi.size() != n) throw Error(ErrorKind::Schema, "box dimension mismatch");
    bool contains_origin = true;
    for (std::size_t i = 0; i < n; ++i)
        if (lo[i] > 0 || hi[i] < 0) contains_origin = false;
    if (contains_origin) throw Error(ErrorKind::DomainContainsOrigin, "box contains the origin");

    const std::string cs = detail::paren(c.get_str());
    std::string r2;
    for (std::size_t i = 0; i < n; ++i) r2 += (i ? "+" : "") + std::string("x") + std::to_string(i + 1) + "^2";
    const std::string r = "sqrt(" + r2 + ")";
    const std::string nn = std::to_string(n);
    const std::string den = "(" + r + "^3*(" + r + "^" + nn + "+" + cs + ")^(" + std::to_string(n - 1) + "/" + nn + "))";
    std::vector<std::string> up;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            std::string xi = "x" + std::to_string(i + 1), xj = "x" + std::to_string(j + 1);
            if (i == j)
                up.push_back("(" + r + "^" + std::to_string(n + 2) + "+" + cs + "*(" + r2 + "-" + xi + "^2))/" + den);
            else
                up.push_back("-" + cs + "*" + xi + "*" + xj + "/" + den);
        }
    return ChartMetric::from_expressions(n, up, std::move(lo), std::move(hi));
}

}  // namespace gkforge::chart
