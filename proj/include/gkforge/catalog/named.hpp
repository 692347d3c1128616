#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gkforge/catalog/catalog.hpp"
#include "gkforge/rigid.hpp"

namespace gkforge::catalog {

struct FixtureClaim {
    std::string claim;
    bool holds = false;
    std::string observed;
};

struct FixtureResult {
    std::string name;
    std::vector<FixtureClaim> claims;

    bool passed() const
    {
        for (const auto& c : claims)
            if (!c.holds) return false;
        return true;
    }
};

namespace detail {

inline std::string vec_text(const Vec<Rational>& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
    return s + ")";
}

inline Metric<Rational> metric_from_json(const json& rows)
{
    std::size_t n = rows.size();
    Matrix<Rational> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_rational(rows.at(i).at(j).get<std::string>());
    return Metric<Rational>::make(m);
}

inline Assignment params_from_json(const json& p)
{
    Assignment a;
    for (const auto& [k, v] : p.items()) a[k] = parse_rational(v.get<std::string>());
    return a;
}

}  // namespace detail

/// Levels k in [1, kmax] where theta_k = (2^k - 1) alpha - xi vanishes.
inline std::vector<int> balanced_levels(const DifferenceTensor<Rational>& dt, int kmax)
{
    std::vector<int> out;
    for (int k = 1; k <= kmax; ++k) {
        Rational p(mpz_class(1) << k);
        if (all_zero(sub(scale(dt.alpha, Rational(p - 1)), dt.xi))) out.push_back(k);
    }
    return out;
}

/// Balanced levels of an example, checked by the direct lift up to `direct` and by closed forms up to kmax.
inline FixtureClaim balanced_only_at(const Algebra<Rational>& alg, const Metric<Rational>& g, int k0, int direct,
                                     int kmax)
{
    FixtureClaim c;
    c.claim = "balanced exactly at level " + std::to_string(k0);
    auto levels = iterate_lift(alg, g, direct);
    bool lift_ok = lift_defects(levels).empty();
    std::vector<int> direct_zero;
    for (int k = 1; k <= direct; ++k)
        if (all_zero(levels[static_cast<std::size_t>(k)].theta)) direct_zero.push_back(k);
    auto closed = balanced_levels(levels.front().dt, kmax);
    std::vector<int> closed_low;
    for (int k : closed)
        if (k <= direct) closed_low.push_back(k);

    auto cr = classify(alg, g, kmax);
    std::ostringstream os;
    os << "tr gamma = " << detail::vec_text(levels.front().dt.tr_gamma)
       << ", tr gamma* = " << detail::vec_text(levels.front().dt.tr_gamma_star) << "; balanced levels {";
    for (std::size_t i = 0; i < closed.size(); ++i) os << (i ? "," : "") << closed[i];
    os << "} of 1.." << kmax;
    if (cr.balanced_solution.exists)
        os << "; tr gamma = " << cr.balanced_solution.lambda << " tr gamma*, k = " << cr.balanced_solution.k_real;
    if (!lift_ok || direct_zero != closed_low) os << "; direct lift disagrees with closed forms";
    c.observed = os.str();
    c.holds = lift_ok && direct_zero == closed_low && closed == std::vector<int>{k0};
    return c;
}

inline FixtureResult fixture_exem1a(const Catalog& cat)
{
    const json& f = cat.fixtures().at("exem1a");
    auto alg = instantiate(cat.entry(f.at("entry").get<std::string>()), detail::params_from_json(f.at("params")));
    auto g = detail::metric_from_json(f.at("metric"));
    int k0 = f.at("claimed_balanced_level").get<int>();
    FixtureResult r{"exem1a", {}};
    r.claims.push_back(balanced_only_at(alg, g, k0, 3, 6));

    auto levels = iterate_lift(alg, g, 2);
    const auto& l2 = levels.back();
    Matrix<Rational> rho = ricci_bismut(l2.algebra, l2.metric, l2.dt);
    bool zero = is_zero_matrix(rho);
    r.claims.push_back({"level-3 Bismut Ricci form vanishes", zero, zero ? "rho^B = 0" : "rho^B != 0"});
    return r;
}

inline FixtureResult fixture_exem1b(const Catalog& cat)
{
    const json& f = cat.fixtures().at("exem1b");
    auto alg = instantiate(cat.entry(f.at("entry").get<std::string>()), detail::params_from_json(f.at("params")));
    int k0 = f.at("claimed_balanced_level").get<int>();
    FixtureResult r{"exem1b", {}};
    for (auto d : {std::vector<long>{1, 1, 1}, std::vector<long>{2, 3, 5}}) {
        Matrix<Rational> m(3, 3);
        for (std::size_t i = 0; i < 3; ++i) m(i, i) = d[i];
        FixtureClaim c = balanced_only_at(alg, Metric<Rational>::make(m), k0, 2, 6);
        c.claim += " with diag(" + std::to_string(d[0]) + "," + std::to_string(d[1]) + "," + std::to_string(d[2]) + ")";
        r.claims.push_back(std::move(c));
    }
    return r;
}

/// Two-dimensional example e1.e1 = e2 with metric [[a,b],[b,c]].
inline FixtureResult fixture_exem4(const Rational& a, const Rational& b, const Rational& c)
{
    Tensor3<Rational> t(2);
    t(0, 0, 1) = 1;
    auto alg = Algebra<Rational>::validate(t);
    Matrix<Rational> m(2, 2);
    m(0, 0) = a; m(0, 1) = b; m(1, 0) = b; m(1, 1) = c;
    auto g = Metric<Rational>::make(m);
    auto dt = difference_tensor(alg, g);
    auto cr = classify(alg, g, 3);
    FixtureResult r{"exem4(" + to_string(a) + "," + to_string(b) + "," + to_string(c) + ")", {}};
    r.claims.push_back({"Vaisman and not Kahler", cr.holds("vaisman") && cr.holds("lck") && !cr.holds("kahler"),
                        std::string("vaisman=") + (cr.holds("vaisman") ? "true" : "false") +
                            " kahler=" + (cr.holds("kahler") ? "true" : "false")});
    r.claims.push_back({"tr gamma* = 0", all_zero(dt.tr_gamma_star), detail::vec_text(dt.tr_gamma_star)});
    Rational coef = c / (a * c - b * b);
    bool along = dt.tr_gamma[0] == 0 && (dt.tr_gamma[1] == coef || dt.tr_gamma[1] == -coef);
    r.claims.push_back({"tr gamma = +-c/(ac-b^2) e2", along,
                        detail::vec_text(dt.tr_gamma) + ", c/(ac-b^2) = " + to_string(coef)});
    return r;
}

inline FixtureResult fixture_prg()
{
    FixtureResult r{"prg", {}};
    for (Rational rad : {Rational(1), Rational(2), Rational(1, 3)})
        for (int k = 1; k <= 3; ++k) {
            Rational nu = prg_balanced_nu(k, rad);
            auto inst = prg_instance(rad, nu);
            auto dt = difference_tensor(inst.algebra, inst.metric);
            bool gamma_ok = dt.gamma == inst.gamma;
            bool rigid = rigid_verify(inst.algebra, inst.metric, dt).holds;
            auto lv = balanced_levels(dt, 5);
            bool ok = gamma_ok && rigid && inst.algebra.left_symmetric() && lv == std::vector<int>{k};
            std::string levels;
            for (int l : lv) levels += (levels.empty() ? "" : ",") + std::to_string(l);
            r.claims.push_back({"r=" + to_string(rad) + " nu=" + to_string(nu) + ": rigid, balanced only at k=" +
                                    std::to_string(k),
                                ok,
                                std::string("gamma ") + (gamma_ok ? "matches" : "differs") + ", rigid=" +
                                    (rigid ? "true" : "false") + ", balanced levels {" + levels + "}"});
        }
    return r;
}

inline FixtureResult fixture_cylinder(const Rational& rad)
{
    FixtureResult r{"cylinder r=" + to_string(rad), {}};
    auto setup = cylinder_sphere_setup(rad);
    auto cand = rigid_candidates(setup.hol_gens, setup.metric, setup.k_point, 4, 0);
    r.claims.push_back({"equivariant nullspace has dimension 4", cand.basis.size() == 4,
                        "dimension " + std::to_string(cand.basis.size())});
    bool family = !cand.solutions.empty();
    std::string seen;
    for (const auto& s : cand.solutions) {
        auto p = cylinder_params(s);
        bool ok = p.c12 == 0 && p.a11 == p.c13 && sgn(p.a33) != 0 && p.c13 == Rational(-1) / (p.a33 * rad * rad) &&
                  rigid_filter_residual(s, setup.k_point) == 0;
        family = family && ok;
        seen += (seen.empty() ? "" : "; ") + std::string("a33=") + to_string(p.a33) + " c13=" + to_string(p.c13);
    }
    r.claims.push_back({"filtered family c12=0, a11=c13=-1/(a33 r^2)", family,
                        std::to_string(cand.solutions.size()) + " samples: " + seen});

    double rd = rad.get_d(), worst = 0, trs = 0;
    for (double sgn_c : {1.0, -1.0}) {
        auto t = cylinder_product(sgn_c * std::sqrt(2.0) / rd, rd);
        for (std::size_t k = 0; k < 3; ++k) {
            double tr = 0;
            for (std::size_t i = 0; i < 3; ++i) tr += t(i, i, k);
            worst = std::max(worst, std::fabs(tr));
        }
        double s = 0;
        for (std::size_t i = 0; i < 3; ++i) s += t(0, i, i);
        trs = std::max(trs, std::fabs(s));
    }
    std::ostringstream os;
    os << "|tr gamma| <= " << worst << ", |tr gamma*| = " << trs;
    r.claims.push_back({"tr gamma = 0 at c13 = +-sqrt(2)/r", worst < 1e-12 && trs > 1e-6, os.str()});
    return r;
}

inline FixtureResult fixture_exem5(std::size_t n, std::uint64_t seed = 0)
{
    auto rep = exem5_pointwise_check(n, 8, seed);
    return {"exem5 n=" + std::to_string(n),
            {{"pointwise identities", rep.holds,
              std::to_string(rep.checks) + " checks" + (rep.holds ? "" : ", first failure: " + rep.failure)}}};
}

inline std::vector<FixtureResult> named_fixtures(const Catalog& cat)
{
    std::vector<FixtureResult> out;
    out.push_back(fixture_exem1a(cat));
    out.push_back(fixture_exem1b(cat));
    const json& e4 = cat.fixtures().at("exem4").at("default_metric");
    out.push_back(fixture_exem4(parse_rational(e4.at(0).get<std::string>()), parse_rational(e4.at(1).get<std::string>()),
                                parse_rational(e4.at(2).get<std::string>())));
    out.push_back(fixture_exem4(1, 0, 2));
    out.push_back(fixture_prg());
    out.push_back(fixture_cylinder(1));
    out.push_back(fixture_cylinder(2));
    out.push_back(fixture_exem5(2));
    out.push_back(fixture_exem5(3));
    return out;
}

}  // namespace gkforge::catalog
