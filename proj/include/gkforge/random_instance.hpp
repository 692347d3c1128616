#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "gkforge/algebra.hpp"
#include "gkforge/metric.hpp"

namespace gkforge {

/// Three-dimensional left-symmetric families with two free rationals, used for property tests.
inline Tensor3<Rational> ls_family(int which, const Rational& a, const Rational& b)
{
    using Q = Rational;
    Tensor3<Q> c(3);
    switch (which % 5) {
    case 0:
        c(0, 0, 0) = a; c(0, 1, 1) = 1 + a; c(0, 2, 2) = 1 + a; c(1, 0, 1) = a; c(2, 0, 2) = a;
        break;
    case 1:
        c(0, 0, 0) = a; c(0, 1, 1) = a; c(0, 1, 2) = 1; c(0, 2, 1) = b; c(0, 2, 2) = 1 + a;
        c(1, 0, 1) = a; c(2, 0, 2) = a;
        break;
    case 2:
        c(0, 0, 0) = 3 * a; c(0, 0, 1) = -(3 * a * a + a / 3); c(0, 1, 1) = 6 * a; c(0, 1, 2) = 1 - 9 * a;
        c(0, 2, 1) = a - Q(2, 9); c(0, 2, 2) = 1; c(1, 0, 1) = 6 * a; c(1, 0, 2) = -9 * a; c(1, 1, 1) = -3;
        c(1, 1, 2) = 9; c(1, 2, 1) = -1; c(1, 2, 2) = 3; c(2, 0, 1) = a; c(2, 1, 1) = -1; c(2, 1, 2) = 3;
        c(2, 2, 1) = Q(-1, 3); c(2, 2, 2) = 1;
        break;
    case 3:
        c(0, 0, 2) = 1; c(0, 1, 0) = 1; c(1, 0, 0) = 1; c(1, 0, 2) = -1; c(1, 1, 1) = 1; c(1, 2, 2) = 1;
        c(2, 1, 2) = 1;
        break;
    default:
        c(0, 0, 0) = a; c(0, 1, 1) = a; c(0, 1, 2) = 1; c(0, 2, 2) = 1 + a; c(1, 0, 1) = a; c(1, 1, 1) = -1;
        c(1, 1, 2) = 1; c(2, 0, 2) = a;
        break;
    }
    return c;
}

struct RandomInstance {
    int family = 0;
    Rational a, b;
    Matrix<Rational> basis_change;
    Algebra<Rational> algebra;
    Metric<Rational> metric;
};

/// A family member in a random integer basis with metric A^T A + I.
class InstanceGenerator {
public:
    explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

    RandomInstance next()
    {
        RandomInstance r;
        r.family = static_cast<int>(count_++ % 5);
        r.a = Rational(uniform(-6, 6), uniform(1, 4));
        r.a.canonicalize();
        r.b = Rational(uniform(-6, 6), uniform(1, 4));
        r.b.canonicalize();
        Matrix<Rational> p(3, 3);
        do {
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) p(i, j) = uniform(-2, 2);
        } while (determinant(p) == 0);
        r.basis_change = p;
        r.algebra = Algebra<Rational>::validate(ls_family(r.family, r.a, r.b)).change_basis(p);
        r.metric = random_metric(3);
        return r;
    }

    Metric<Rational> random_metric(std::size_t n)
    {
        Matrix<Rational> a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = uniform(-2, 2);
        return Metric<Rational>::make(a.transpose() * a + Matrix<Rational>::identity(n));
    }

    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

private:
    std::mt19937_64 rng_;
    std::uint64_t count_ = 0;
};

template <class S>
Tensor3<S> convert_tensor(const Tensor3<Rational>& t)
{
    Tensor3<S> out(t.dim());
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j < t.dim(); ++j)
            for (std::size_t k = 0; k < t.dim(); ++k) out(i, j, k) = from_rational<S>(t(i, j, k));
    return out;
}

template <class S>
Matrix<S> convert_matrix(const Matrix<Rational>& m)
{
    Matrix<S> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = from_rational<S>(m(i, j));
    return out;
}

}  // namespace gkforge
