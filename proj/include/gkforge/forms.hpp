#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "gkforge/algebra.hpp"

namespace gkforge {

/// Left-invariant p-form stored densely as an antisymmetric array over basis p-tuples.
template <class S>
class Form {
public:
    Form() = default;
    Form(std::size_t dim, std::size_t p) : n_(dim), p_(p)
    {
        std::size_t sz = 1;
        for (std::size_t i = 0; i < p; ++i) sz *= dim;
        a_.assign(sz, S(0));
    }

    std::size_t dim() const { return n_; }
    std::size_t degree() const { return p_; }

    const S& at(const std::vector<std::size_t>& idx) const { return a_[offset(idx)]; }

    /// Sets the value on idx and on every permutation with the matching sign.
    void set(std::vector<std::size_t> idx, const S& v)
    {
        std::vector<std::size_t> perm(p_);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<std::size_t> t(p_);
            for (std::size_t i = 0; i < p_; ++i) t[i] = idx[perm[i]];
            a_[offset(t)] = permutation_sign(perm) > 0 ? v : S(-v);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    /// Calls f on every strictly increasing index tuple.
    void for_each_increasing(const std::function<void(const std::vector<std::size_t>&)>& f) const
    {
        std::vector<std::size_t> idx(p_);
        if (p_ > n_) return;
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            f(idx);
            std::size_t i = p_;
            while (i > 0 && idx[i - 1] == n_ - p_ + i - 1) --i;
            if (i == 0) return;
            ++idx[i - 1];
            for (std::size_t j = i; j < p_; ++j) idx[j] = idx[j - 1] + 1;
        }
    }

    /// eta(v, e_{rest...}) with a vector in the first slot.
    S eval_first(const Vec<S>& v, std::vector<std::size_t> rest) const
    {
        S s(0);
        rest.insert(rest.begin(), 0);
        for (std::size_t k = 0; k < n_; ++k) {
            if (v[k] == 0) continue;
            rest[0] = k;
            s += v[k] * at(rest);
        }
        return s;
    }

    bool is_zero(double tol = kDefaultTol) const
    {
        for (const auto& x : a_)
            if (!gkforge::is_zero(x, tol)) return false;
        return true;
    }

    const std::vector<S>& data() const { return a_; }

    static int permutation_sign(const std::vector<std::size_t>& perm)
    {
        int s = 1;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) s = -s;
        return s;
    }

private:
    std::size_t offset(const std::vector<std::size_t>& idx) const
    {
        std::size_t o = 0;
        for (auto i : idx) o = o * n_ + i;
        return o;
    }

    std::size_t n_ = 0, p_ = 0;
    std::vector<S> a_;
};

template <class S>
Form<S> form_from_matrix(const Matrix<S>& m)
{
    Form<S> f(m.rows(), 2);
    f.for_each_increasing([&](const std::vector<std::size_t>& idx) { f.set(idx, m(idx[0], idx[1])); });
    return f;
}

template <class S>
Form<S> form_from_covector(const Vec<S>& c)
{
    Form<S> f(c.size(), 1);
    for (std::size_t i = 0; i < c.size(); ++i) f.set({i}, c[i]);
    return f;
}

/// Chevalley-Eilenberg differential: d eta(x_0..x_p) = sum_{i<j} (-1)^{i+j} eta([x_i,x_j], x_0..^i..^j..x_p).
template <class S>
Form<S> d_form(const Algebra<S>& alg, const Form<S>& eta)
{
    const std::size_t n = alg.dim(), p = eta.degree();
    Form<S> out(n, p + 1);
    if (p == 0) return out;
    out.for_each_increasing([&](const std::vector<std::size_t>& x) {
        S s(0);
        for (std::size_t i = 0; i <= p; ++i)
            for (std::size_t j = i + 1; j <= p; ++j) {
                std::vector<std::size_t> rest;
                for (std::size_t m = 0; m <= p; ++m)
                    if (m != i && m != j) rest.push_back(x[m]);
                S v = eta.eval_first(alg.br_basis(x[i], x[j]), rest);
                if ((i + j) % 2 == 0) s += v;
                else s -= v;
            }
        out.set(x, s);
    });
    return out;
}

namespace detail {

template <class S>
S eval_sparse(const Form<S>& f, const std::vector<std::vector<SparseEntry<S>>>& cols,
              const std::vector<std::size_t>& args, std::vector<std::size_t>& idx, std::size_t pos, const S& coeff)
{
    if (pos == args.size()) return coeff * f.at(idx);
    S s(0);
    for (const auto& e : cols[args[pos]]) {
        idx[pos] = e.k;
        s += eval_sparse(f, cols, args, idx, pos + 1, S(coeff * e.v));
    }
    return s;
}

template <class S>
std::vector<std::vector<SparseEntry<S>>> sparse_columns(const Matrix<S>& m)
{
    std::vector<std::vector<SparseEntry<S>>> cols(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (m(i, j) != 0) cols[j].push_back({i, m(i, j)});
    return cols;
}

}  // namespace detail

/// (J eta)(X_1..X_p) = (-1)^p eta(J X_1, .., J X_p); J given by its matrix (columns are images).
template <class S>
Form<S> apply_J(const Form<S>& eta, const Matrix<S>& j)
{
    const std::size_t n = eta.dim(), p = eta.degree();
    auto cols = detail::sparse_columns(j);
    Form<S> out(n, p);
    const S sign = p % 2 == 0 ? S(1) : S(-1);
    out.for_each_increasing([&](const std::vector<std::size_t>& x) {
        std::vector<std::size_t> idx(p);
        out.set(x, sign * detail::eval_sparse(eta, cols, x, idx, 0, S(1)));
    });
    return out;
}

/// theta ^ omega for a 1-form and a 2-form.
template <class S>
Form<S> wedge_1_2(const Vec<S>& theta, const Form<S>& omega)
{
    const std::size_t n = theta.size();
    Form<S> out(n, 3);
    out.for_each_increasing([&](const std::vector<std::size_t>& x) {
        S v = theta[x[0]] * omega.at({x[1], x[2]}) - theta[x[1]] * omega.at({x[0], x[2]}) +
              theta[x[2]] * omega.at({x[0], x[1]});
        out.set(x, v);
    });
    return out;
}

}  // namespace gkforge
