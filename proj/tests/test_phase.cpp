#include <gtest/gtest.h>

#include "gkforge/classify.hpp"
#include "gkforge/phase.hpp"
#include "support.hpp"

using namespace gkt;

namespace {

Metric<Q> table7_metric(const std::string& entry_id, catalog::Assignment& params)
{
    const auto& cat = catalog::builtin();
    for (const auto& row : cat.rows())
        if (row.table == 7 && row.entry == entry_id) {
            auto s = catalog::sample_row(cat, row, 1, 3);
            params = s.samples.at(0);
            return Metric<Q>::make(catalog::metric_matrix(params));
        }
    throw std::runtime_error("no table 7 row for " + entry_id);
}

}  // namespace

TEST(Phase, OneDimensionalAbelian)
{
    auto ps = phase(abelian<Q>(1), Metric<Q>::identity(1));
    EXPECT_EQ(ps.algebra.dim(), 2u);
    EXPECT_TRUE(is_zero_tensor(ps.algebra.product()));
    Matrix<Q> rot(2, 2);
    rot(0, 1) = -1;
    rot(1, 0) = 1;
    EXPECT_EQ(ps.J, rot);
    // omega(x, y) = <Jx, y>: omega(f1, f2) = 1
    EXPECT_EQ(ps.omega(0, 1), Q(1));
    EXPECT_EQ(ps.omega(1, 0), Q(-1));
}

TEST(Phase, HeisenbergBrackets)
{
    auto ps = phase(n5g3(), Metric<Q>::identity(3));
    const auto& a = ps.algebra;
    Vec<Q> f3 = unit<Q>(6, 2), f6 = unit<Q>(6, 5);
    EXPECT_EQ(a.br_basis(0, 1), f3);
    EXPECT_EQ(a.br_basis(0, 4), scale(f6, Q(1, 2)));
    EXPECT_EQ(a.br_basis(1, 3), scale(f6, Q(-1, 2)));
    EXPECT_TRUE(all_zero(a.br_basis(3, 4)));
}

TEST(Phase, InvariantsOnRandomInstances)
{
    for (const auto& in : instances(25, 41)) {
        auto ps = phase(in.algebra, in.metric);
        auto inv = phase_invariants(ps, in.algebra);
        EXPECT_TRUE(inv.all());
        EXPECT_TRUE(ps.algebra.jacobi());
    }
}

TEST(Phase, FloatBackendInvariants)
{
    for (const auto& in : instances(5, 42)) {
        auto af = Algebra<double>::validate(convert_tensor<double>(in.algebra.product()));
        auto gf = Metric<double>::make(convert_matrix<double>(in.metric.G()));
        auto ps = phase(af, gf);
        EXPECT_TRUE(phase_invariants(ps, af).nijenhuis);
        EXPECT_TRUE(phase_invariants(ps, af).j_parallel);
    }
}

TEST(Forms, DifferentialSquaresToZero)
{
    InstanceGenerator gen(43);
    for (const auto& in : instances(8, 44)) {
        auto ps = phase(in.algebra, in.metric);
        Vec<Q> eta(6);
        for (auto& x : eta) x = Q(gen.uniform(-4, 4));
        Form<Q> d1 = d_form(ps.algebra, form_from_covector(eta));
        EXPECT_TRUE(d_form(ps.algebra, d1).is_zero());
        Form<Q> w = form_from_matrix(ps.omega);
        EXPECT_TRUE(d_form(ps.algebra, d_form(ps.algebra, w)).is_zero());
    }
}

TEST(Forms, OneFormSignConvention)
{
    // d eta(x, y) = -eta([x, y])
    auto a = n5g3();
    Vec<Q> eta{0, 0, 1};
    Form<Q> d = d_form(a, form_from_covector(eta));
    EXPECT_EQ(d.at({0, 1}), Q(-1));
    EXPECT_EQ(d.at({1, 0}), Q(1));
}

TEST(Forms, AlphaClosedAndAbelianExact)
{
    for (const auto& in : instances(10, 45)) {
        auto dt = difference_tensor(in.algebra, in.metric);
        EXPECT_TRUE(d_form(in.algebra, form_from_covector(dt.alpha)).is_zero());
    }
    auto ab = abelian<Q>(4);
    Matrix<Q> m(4, 4);
    m(0, 1) = 3; m(1, 0) = -3; m(2, 3) = 1; m(3, 2) = -1;
    EXPECT_TRUE(d_form(ab, form_from_matrix(m)).is_zero());
}

TEST(Forms, FundamentalFormBlocks)
{
    // d omega on (h,h,v) triples is <g*_u v - g*_v u, w>; the other block types vanish
    std::vector<std::pair<Algebra<Q>, Metric<Q>>> all{{n5g3(), Metric<Q>::identity(3)}};
    for (auto& in : instances(10, 46)) all.emplace_back(in.algebra, in.metric);
    for (const auto& [alg, g] : all) {
        auto ps = phase(alg, g);
        auto dt = difference_tensor(alg, g);
        Form<Q> dw = d_form(ps.algebra, form_from_matrix(ps.omega));
        for (std::size_t a = 0; a < 6; ++a)
            for (std::size_t b = 0; b < 6; ++b)
                for (std::size_t c = 0; c < 6; ++c) {
                    std::size_t nh = (a < 3) + (b < 3) + (c < 3);
                    if (a < 3 && b < 3 && c >= 3) {
                        Q expect = g.ip(sub(dt.gamma_star.at(a, b), dt.gamma_star.at(b, a)), unit<Q>(3, c - 3));
                        EXPECT_EQ(dw.at({a, b, c}), expect);
                    } else if (nh != 2) {
                        EXPECT_EQ(dw.at({a, b, c}), Q(0));
                    }
                }
    }
}

TEST(Forms, HeisenbergFundamentalFormValue)
{
    auto ps = phase(n5g3(), Metric<Q>::identity(3));
    auto dt = difference_tensor(n5g3(), Metric<Q>::identity(3));
    Form<Q> dw = d_form(ps.algebra, form_from_matrix(ps.omega));
    Q expect = dot(sub(dt.gamma_star.at(0, 1), dt.gamma_star.at(1, 0)), unit<Q>(3, 2));
    EXPECT_EQ(dw.at({0, 1, 5}), expect);
    EXPECT_NE(expect, Q(0));
}

TEST(LeeForm, FlatInstanceVanishes)
{
    auto ab = abelian<Q>(3);
    EXPECT_TRUE(all_zero(lee_form_direct(phase(ab, diag({1, 2, 3})))));
}

TEST(LeeForm, ReducesToKoszulDifference)
{
    std::vector<std::pair<Algebra<Q>, Metric<Q>>> all;
    for (auto& in : instances(10, 47)) all.emplace_back(in.algebra, in.metric);
    const auto& f = catalog::builtin().fixtures().at("exem1a");
    catalog::Assignment p;
    for (const auto& [k, v] : f.at("params").items()) p[k] = parse_rational(v.get<std::string>());
    all.emplace_back(entry(f.at("entry").get<std::string>(), p), metric({{1, 1, 0}, {1, 3, 1}, {0, 1, 1}}));
    for (const auto& [alg, g] : all) {
        auto dt = difference_tensor(alg, g);
        Vec<Q> th = lee_form_direct(phase(alg, g));
        EXPECT_EQ(th, pullback(sub(dt.alpha, dt.xi), 6));
    }
    EXPECT_FALSE(all_zero(lee_form_direct(phase(all.back().first, all.back().second))));
}

TEST(Lift, FlatInstanceStaysFlat)
{
    auto levels = iterate_lift(abelian<Q>(2), diag({1, 3}), 3);
    ASSERT_EQ(levels.size(), 4u);
    for (std::size_t j = 1; j < levels.size(); ++j) {
        EXPECT_EQ(levels[j].algebra.dim(), 2u << j);
        EXPECT_TRUE(all_zero(levels[j].theta));
        EXPECT_TRUE(is_zero_tensor(levels[j].dt.gamma));
    }
}

TEST(Lift, ClosedFormsOnRandomInstances)
{
    for (const auto& in : instances(6, 48)) EXPECT_TRUE(lift_defects(iterate_lift(in.algebra, in.metric, 2)).empty());
}

TEST(Lift, ResourceCap)
{
    EXPECT_THROW(iterate_lift(n5g3(), Metric<Q>::identity(3), 5), Error);
    try {
        iterate_lift(n5g3(), Metric<Q>::identity(3), 5);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ResourceCap);
    }
    EXPECT_NO_THROW(iterate_lift(n5g3(), Metric<Q>::identity(3), 5, 96));
}

TEST(GammaPhase, ClosedFormsAgree)
{
    auto z = gamma_phase_closed_forms(abelian<Q>(2), diag({2, 3}));
    EXPECT_TRUE(is_zero_tensor(z.gamma));
    for (const auto& in : instances(10, 49)) EXPECT_TRUE(gamma_phase_closed_forms(in.algebra, in.metric).agree());
}

TEST(GammaPhase, HeisenbergMixedBlock)
{
    auto g = Metric<Q>::identity(3);
    auto gp = gamma_phase_closed_forms(n5g3(), g);
    auto dt = difference_tensor(n5g3(), g);
    // Gamma_{f1} f6 = 1/2 (g_{e1} e3 + g*_{e1} e3) placed in the vertical block
    Vec<Q> half = scale(add(dt.gamma.at(0, 2), dt.gamma_star.at(0, 2)), Q(1, 2));
    Vec<Q> expect(6, Q(0));
    for (std::size_t k = 0; k < 3; ++k) expect[3 + k] = half[k];
    EXPECT_EQ(gp.gamma.at(0, 5), expect);
    EXPECT_TRUE(gp.agree());
}

TEST(Canonical, HermitianAndTorsionTypes)
{
    for (const auto& in : instances(8, 50)) {
        auto ps = phase(in.algebra, in.metric);
        auto cc = canonical_connections_direct(ps);
        EXPECT_TRUE(is_hermitian_connection(ps, cc.bismut));
        EXPECT_TRUE(is_hermitian_connection(ps, cc.chern));
        EXPECT_TRUE(torsion_totally_skew(ps, cc.bismut));
        EXPECT_TRUE(torsion_no_11_part(ps, cc.chern));
    }
}

TEST(Canonical, FlatCaseCoincidesWithLeviCivita)
{
    auto ps = phase(abelian<Q>(2), diag({1, 4}));
    auto cc = canonical_connections_direct(ps);
    EXPECT_EQ(cc.bismut, cc.lc);
    EXPECT_EQ(cc.chern, cc.lc);
    for (const auto& r : cc.r_bismut) EXPECT_TRUE(is_zero_matrix(r));
}

TEST(Canonical, HeisenbergRicciFormsVanish)
{
    auto cc = canonical_connections_direct(phase(n5g3(), Metric<Q>::identity(3)));
    EXPECT_TRUE(is_zero_matrix(cc.rho_bismut));
    EXPECT_TRUE(is_zero_matrix(cc.rho_chern));
}

TEST(Canonical, VerticalBismutBlock)
{
    for (const auto& in : instances(5, 51)) {
        auto cc = canonical_connections_direct(phase(in.algebra, in.metric));
        auto dt = difference_tensor(in.algebra, in.metric);
        for (std::size_t x = 0; x < 3; ++x)
            for (std::size_t y = 0; y < 3; ++y) {
                Vec<Q> expect(6, Q(0));
                Vec<Q> v = dt.gamma_star.at(y, x);
                for (std::size_t k = 0; k < 3; ++k) expect[k] = -v[k];
                EXPECT_EQ(cc.bismut.at(3 + x, 3 + y), expect);
            }
    }
}

TEST(Pluriclosed, KahlerInstanceIsClosed)
{
    auto alg = entry("N1g5", {{"a", Q(0)}});
    auto g = diag({1, 1, 1});
    ASSERT_TRUE(classify(alg, g).holds("kahler"));
    auto ps = phase(alg, g);
    EXPECT_TRUE(d_form(ps.algebra, form_from_matrix(ps.omega)).is_zero());
    auto pd = pluriclosed_direct(ps, alg, g);
    EXPECT_TRUE(pd.pluriclosed);
    EXPECT_TRUE(pd.blocks_match);
}

TEST(Pluriclosed, AlwaysRowIsPluriclosedNotKahler)
{
    catalog::Assignment p;
    auto g = table7_metric("N2g1", p);
    auto alg = catalog::instantiate(catalog::builtin().entry("N2g1"), p);
    auto pd = pluriclosed_direct(phase(alg, g), alg, g);
    EXPECT_TRUE(pd.pluriclosed);
    EXPECT_FALSE(classify(alg, g).holds("kahler"));
    InstanceGenerator gen(52);
    for (int i = 0; i < 5; ++i) {
        auto gi = gen.random_metric(3);
        EXPECT_TRUE(pluriclosed_direct(phase(alg, gi), alg, gi).pluriclosed);
    }
}

TEST(Pluriclosed, BlocksMatchReducedResidual)
{
    int negative = 0;
    for (const auto& in : instances(10, 53)) {
        auto pd = pluriclosed_direct(phase(in.algebra, in.metric), in.algebra, in.metric);
        EXPECT_TRUE(pd.blocks_match);
        auto dt = difference_tensor(in.algebra, in.metric);
        bool reduced_zero = true;
        for (std::size_t x = 0; x < 3; ++x)
            for (std::size_t y = 0; y < 3; ++y)
                for (std::size_t z = 0; z < 3; ++z)
                    for (std::size_t u = 0; u < 3; ++u) {
                        Q r = pluriclosed_residual(in.algebra, in.metric, dt, x, y, z, u);
                        EXPECT_EQ(pd.ddc.at({x, y, 3 + z, 3 + u}), Q(2) * r);
                        if (r != 0) reduced_zero = false;
                    }
        EXPECT_EQ(pd.pluriclosed, reduced_zero);
        if (!pd.pluriclosed) ++negative;
    }
    EXPECT_GT(negative, 0);
}

TEST(Pluriclosed, FlagMatchesClassify)
{
    for (const auto& in : instances(10, 54))
        EXPECT_EQ(classify(in.algebra, in.metric).holds("pluriclosed"),
                  pluriclosed_direct(phase(in.algebra, in.metric), in.algebra, in.metric).pluriclosed);
}
