#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gkforge/chart/expr.hpp"
#include "gkforge/linalg.hpp"

namespace gkforge::chart {

using Point = std::vector<double>;
using Mat = Matrix<double>;

/// Metric field G(x) on an axis-aligned box in R^n, with the canonical flat connection.
class ChartMetric {
public:
    using EvalFn = std::function<Mat(const Point&)>;
    using D1Fn = std::function<std::vector<Mat>(const Point&)>;  // [k] = d_k G
    using D2Fn = std::function<std::vector<Mat>(const Point&)>;  // [k*n+l] = d_k d_l G

    ChartMetric(std::size_t n, EvalFn eval, Point lo, Point hi)
        : n_(n), eval_(std::move(eval)), lo_(std::move(lo)), hi_(std::move(hi))
    {
        if (lo_.size() != n_ || hi_.size() != n_) throw Error(ErrorKind::Schema, "box dimension mismatch");
        for (std::size_t i = 0; i < n_; ++i)
            if (!(lo_[i] < hi_[i])) throw Error(ErrorKind::Schema, "empty box along axis " + std::to_string(i + 1));
    }

    /// Metric from upper-triangular entry expressions in x1..xn, with symbolic derivatives.
    static ChartMetric from_expressions(std::size_t n, const std::vector<std::string>& upper, Point lo, Point hi)
    {
        if (upper.size() != n * (n + 1) / 2)
            throw Error(ErrorKind::Schema, "expected " + std::to_string(n * (n + 1) / 2) + " upper-triangle entries");
        std::vector<std::string> vars;
        for (std::size_t i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i + 1));
        std::vector<Expr> e(n * n);
        std::size_t t = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                e[i * n + j] = Expr::parse(upper[t++], vars);
                e[j * n + i] = e[i * n + j];
            }
        return from_exprs(n, std::move(e), std::move(lo), std::move(hi));
    }

    /// e is the full n*n entry table (row-major, symmetric).
    static ChartMetric from_exprs(std::size_t n, std::vector<Expr> e, Point lo, Point hi)
    {
        std::vector<Expr> d1(n * n * n), d2(n * n * n * n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t ij = 0; ij < n * n; ++ij) {
                d1[k * n * n + ij] = e[ij].diff(k);
                for (std::size_t l = 0; l < n; ++l) d2[(k * n + l) * n * n + ij] = d1[k * n * n + ij].diff(l);
            }
        auto table = [n](const std::vector<Expr>& ex, std::size_t off, const Point& x) {
            Mat m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) = ex[off + i * n + j].eval(x);
            return m;
        };
        ChartMetric m(n, [e, table](const Point& x) { return table(e, 0, x); }, std::move(lo), std::move(hi));
        m.d1_ = [n, d1, table](const Point& x) {
            std::vector<Mat> out;
            for (std::size_t k = 0; k < n; ++k) out.push_back(table(d1, k * n * n, x));
            return out;
        };
        m.d2_ = [n, d2, table](const Point& x) {
            std::vector<Mat> out;
            for (std::size_t kl = 0; kl < n * n; ++kl) out.push_back(table(d2, kl * n * n, x));
            return out;
        };
        return m;
    }

    std::size_t dim() const { return n_; }
    const Point& lo() const { return lo_; }
    const Point& hi() const { return hi_; }
    bool analytic() const { return static_cast<bool>(d1_); }

    /// Same metric with analytic derivatives dropped, so every derivative is a finite difference.
    ChartMetric without_derivatives() const
    {
        ChartMetric m(n_, eval_, lo_, hi_);
        m.fd_scale_ = fd_scale_;
        return m;
    }
    void set_fd_scale(double s) { fd_scale_ = s; }

    Mat G(const Point& x) const { return eval_(x); }

    double fd_step(const Point& x, std::size_t k) const
    {
        return fd_scale_ * std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::fabs(x[k]));
    }
    /// Step for second differences; cbrt(eps) would leave roundoff near 1e-5 relative.
    double fd_step2(const Point& x, std::size_t k) const
    {
        return fd_scale_ * std::pow(std::numeric_limits<double>::epsilon(), 0.25) * std::max(1.0, std::fabs(x[k]));
    }
    double max_fd_step() const
    {
        double h = 0;
        for (std::size_t k = 0; k < n_; ++k) {
            Point x(n_, std::max(std::fabs(lo_[k]), std::fabs(hi_[k])));
            h = std::max({h, fd_step(x, k), fd_step2(x, k)});
        }
        return h;
    }

    std::vector<Mat> d1(const Point& x) const
    {
        if (d1_) return d1_(x);
        return d1_fd(x);
    }
    std::vector<Mat> d1_fd(const Point& x) const
    {
        std::vector<Mat> out;
        for (std::size_t k = 0; k < n_; ++k) {
            double h = fd_step(x, k);
            Point p = x, m = x;
            p[k] += h;
            m[k] -= h;
            out.push_back((1.0 / (2 * h)) * (G(p) - G(m)));
        }
        return out;
    }
    std::vector<Mat> d2(const Point& x) const
    {
        if (d2_) return d2_(x);
        return d2_fd(x);
    }
    std::vector<Mat> d2_fd(const Point& x) const
    {
        std::vector<Mat> out(n_ * n_);
        Mat g0 = G(x);
        for (std::size_t k = 0; k < n_; ++k)
            for (std::size_t l = k; l < n_; ++l) {
                double hk = fd_step2(x, k), hl = fd_step2(x, l);
                Mat v;
                if (k == l) {
                    Point p = x, m = x;
                    p[k] += hk;
                    m[k] -= hk;
                    v = (1.0 / (hk * hk)) * (G(p) - 2.0 * g0 + G(m));
                } else {
                    Point pp = x, pm = x, mp = x, mm = x;
                    pp[k] += hk; pp[l] += hl;
                    pm[k] += hk; pm[l] -= hl;
                    mp[k] -= hk; mp[l] += hl;
                    mm[k] -= hk; mm[l] -= hl;
                    v = (1.0 / (4 * hk * hl)) * (G(pp) - G(pm) - G(mp) + G(mm));
                }
                out[k * n_ + l] = v;
                out[l * n_ + k] = v;
            }
        return out;
    }

private:
    std::size_t n_;
    EvalFn eval_;
    D1Fn d1_;
    D2Fn d2_;
    Point lo_, hi_;
    double fd_scale_ = 1.0;
};

/// Deterministic interior sample points: Halton sequence with a seeded rotation.
struct SamplePlan {
    std::vector<Point> points;
    double tolerance = 1e-7;

    static SamplePlan make(const ChartMetric& m, std::size_t count, std::uint64_t seed, double tol)
    {
        static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
        const std::size_t n = m.dim();
        if (n > 16) throw Error(ErrorKind::ResourceCap, "sample plans support at most 16 coordinates");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Point shift(n);
        for (auto& s : shift) s = u(rng);
        double margin = 2 * m.max_fd_step();
        SamplePlan plan;
        plan.tolerance = tol;
        for (std::size_t i = 1; i <= count; ++i) {
            Point x(n);
            for (std::size_t k = 0; k < n; ++k) {
                double h = radical_inverse(i, primes[k]) + shift[k];
                h -= std::floor(h);
                double lo = m.lo()[k] + margin, hi = m.hi()[k] - margin;
                x[k] = lo + (hi - lo) * (0.02 + 0.96 * h);
            }
            plan.points.push_back(std::move(x));
        }
        return plan;
    }

    static double radical_inverse(std::size_t i, int base)
    {
        double f = 1, r = 0;
        while (i > 0) {
            f /= base;
            r += f * static_cast<double>(i % base);
            i /= base;
        }
        return r;
    }
};

struct CheckResult {
    bool holds = true;
    double max_residual = 0;
    Point argmax;
    std::size_t points = 0;
    std::string label = "sampled";
};

inline double default_tolerance(const ChartMetric& m) { return m.analytic() ? 1e-7 : 1e-4; }

namespace detail {

inline Mat checked_inverse(const Mat& g)
{
    if (!positive_definite(g, 1e-12)) throw Error(ErrorKind::SingularMetricAtPoint, "metric not positive definite");
    auto inv = inverse(g, 1e-12);
    if (!inv) throw Error(ErrorKind::SingularMetricAtPoint, "metric singular");
    return *inv;
}

template <class F>
CheckResult run_plan(const SamplePlan& plan, F residual)
{
    CheckResult r;
    for (const auto& x : plan.points) {
        double v = residual(x);
        ++r.points;
        if (r.argmax.empty() || v > r.max_residual || std::isnan(v)) {
            r.max_residual = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
            r.argmax = x;
        }
    }
    r.holds = r.max_residual < plan.tolerance;
    return r;
}

}  // namespace detail

struct Koszul {
    std::vector<double> alpha, xi;
};

/// alpha_j = 1/2 d_j ln det G, xi_j = sum_{h,k} mu^{kh} d_k mu_{jh} - alpha_j.
inline Koszul koszul_at(const ChartMetric& m, const Point& x)
{
    const std::size_t n = m.dim();
    Mat ginv = detail::checked_inverse(m.G(x));
    auto d = m.d1(x);
    Koszul k;
    k.alpha.assign(n, 0);
    k.xi.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) k.alpha[j] = 0.5 * frobenius(ginv, d[j]);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t h = 0; h < n; ++h)
            for (std::size_t kk = 0; kk < n; ++kk) s += ginv(kk, h) * d[kk](j, h);
        k.xi[j] = s - k.alpha[j];
    }
    return k;
}

/// Christoffel symbols of the Levi-Civita connection, gamma[i](k,j) = Gamma^k_{ij}; this is the matrix of
/// gamma_{e_i} because the affine connection has vanishing symbols.
inline std::vector<Mat> christoffel(const ChartMetric& m, const Point& x)
{
    const std::size_t n = m.dim();
    Mat ginv = detail::checked_inverse(m.G(x));
    auto d = m.d1(x);
    std::vector<Mat> out(n, Mat(n, n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double s = 0;
                for (std::size_t l = 0; l < n; ++l) s += ginv(k, l) * (d[i](j, l) + d[j](i, l) - d[l](i, j));
                out[i](k, j) = 0.5 * s;
            }
    return out;
}

inline std::vector<double> trace_gamma(const ChartMetric& m, const Point& x)
{
    const std::size_t n = m.dim();
    Mat ginv = m.G(x);
    ginv = detail::checked_inverse(ginv);
    auto ch = christoffel(m, x);
    std::vector<double> t(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) t[k] += ginv(i, j) * ch[i](k, j);
    return t;
}

inline double hessian_residual_at(const ChartMetric& m, const Point& x)
{
    const std::size_t n = m.dim();
    auto d = m.d1(x);
    double r = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) r = std::max(r, std::fabs(d[i](j, k) - d[j](i, k)));
    return r;
}

/// d_i mu_{jk} totally symmetric.
inline CheckResult hessian_check(const ChartMetric& m, const SamplePlan& plan)
{
    return detail::run_plan(plan, [&](const Point& x) { return hessian_residual_at(m, x); });
}

/// xi = (2^k - 1) alpha at every sample.
inline CheckResult balanced_k_check(const ChartMetric& m, const SamplePlan& plan, int k)
{
    const double c = std::ldexp(1.0, k) - 1;
    return detail::run_plan(plan, [&](const Point& x) {
        Koszul ko = koszul_at(m, x);
        double r = 0;
        for (std::size_t j = 0; j < m.dim(); ++j) r = std::max(r, std::fabs(ko.xi[j] - c * ko.alpha[j]));
        return r;
    });
}

inline double pluriclosed_residual_at(const ChartMetric& m, const Point& x)
{
    const std::size_t n = m.dim();
    auto d = m.d2(x);
    auto dd = [&](std::size_t a, std::size_t b, std::size_t p, std::size_t q) { return d[a * n + b](p, q); };
    double r = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t h = k + 1; h < n; ++h) {
                    double v = dd(j, h, i, k) + dd(i, k, j, h) - dd(i, h, j, k) - dd(j, k, i, h);
                    r = std::max(r, std::fabs(v));
                }
    return r;
}

inline CheckResult pluriclosed_check(const ChartMetric& m, const SamplePlan& plan)
{
    return detail::run_plan(plan, [&](const Point& x) { return pluriclosed_residual_at(m, x); });
}

/// ric(u,u) = trace(gamma_u^2) for a Hessian metric.
inline double ricci_quadratic_at(const ChartMetric& m, const Point& x, const std::vector<double>& u,
                                 double tol = -1)
{
    if (tol < 0) tol = default_tolerance(m);
    if (hessian_residual_at(m, x) > tol) throw Error(ErrorKind::NotHessian, "metric is not Hessian at the point");
    auto ch = christoffel(m, x);
    const std::size_t n = m.dim();
    Mat gu(n, n);
    for (std::size_t i = 0; i < n; ++i) gu = gu + u[i] * ch[i];
    return trace(Mat(gu * gu));
}

/// Ricci tensor from finite differences of the Christoffel symbols:
/// Ric_jk = d_i G^i_jk - d_k G^i_ij + G^i_ip G^p_jk - G^i_kp G^p_ij.
inline Mat ricci_fd(const ChartMetric& m, const Point& x, double h = 1e-5)
{
    const std::size_t n = m.dim();
    auto ch = christoffel(m, x);
    std::vector<std::vector<Mat>> dch(n);  // dch[l][i](k,j) = d_l Gamma^k_ij
    for (std::size_t l = 0; l < n; ++l) {
        Point p = x, q = x;
        p[l] += h;
        q[l] -= h;
        auto a = christoffel(m, p), b = christoffel(m, q);
        for (std::size_t i = 0; i < n; ++i) dch[l].push_back((1.0 / (2 * h)) * (a[i] - b[i]));
    }
    auto G = [&](std::size_t up, std::size_t i, std::size_t j) { return ch[i](up, j); };
    Mat ric(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) {
                s += dch[i][j](i, k) - dch[k][i](i, j);
                for (std::size_t p = 0; p < n; ++p) s += G(i, i, p) * G(p, j, k) - G(i, k, p) * G(p, i, j);
            }
            ric(j, k) = s;
        }
    return ric;
}

/// Largest relative disagreement between analytic and finite-difference first and second derivatives.
inline double derivative_gate(const ChartMetric& m, const SamplePlan& plan)
{
    if (!m.analytic()) return 0;
    double worst = 0;
    for (const auto& x : plan.points) {
        auto a1 = m.d1(x), f1 = m.d1_fd(x);
        auto a2 = m.d2(x), f2 = m.d2_fd(x);
        auto cmp = [&](const std::vector<Mat>& a, const std::vector<Mat>& f) {
            for (std::size_t t = 0; t < a.size(); ++t)
                for (std::size_t i = 0; i < a[t].data().size(); ++i) {
                    double av = a[t].data()[i], fv = f[t].data()[i];
                    worst = std::max(worst, std::fabs(av - fv) / std::max(1.0, std::fabs(av)));
                }
        };
        cmp(a1, f1);
        cmp(a2, f2);
    }
    return worst;
}

}  // namespace gkforge::chart
