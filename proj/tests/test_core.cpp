#include <gtest/gtest.h>

#include "gkforge/levi_civita.hpp"
#include "support.hpp"

using namespace gkt;

TEST(Scalar, ParseRational)
{
    EXPECT_EQ(parse_rational("1/2"), Q(1, 2));
    EXPECT_EQ(parse_rational("-6/4"), Q(-3, 2));
    EXPECT_EQ(parse_rational("0.25"), Q(1, 4));
    EXPECT_EQ(parse_rational(" 3 "), Q(3));
    EXPECT_THROW(parse_rational("1/0"), Error);
    EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Scalar, FloatFormattingRoundTrips)
{
    for (double x : {0.1, 1.0 / 3.0, 2.0, -1e-300, 12345.678}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Validate, AbelianIsNovikovWithZeroBracket)
{
    auto a = abelian<Q>(3);
    EXPECT_TRUE(a.left_symmetric());
    EXPECT_TRUE(a.novikov());
    EXPECT_TRUE(is_zero_tensor(a.bracket()));
}

TEST(Validate, HeisenbergBracket)
{
    auto a = n5g3();
    EXPECT_TRUE(a.left_symmetric());
    EXPECT_EQ(a.br_basis(0, 1), (Vec<Q>{0, 0, 1}));
    EXPECT_EQ(a.br_basis(1, 0), (Vec<Q>{0, 0, -1}));
    EXPECT_TRUE(all_zero(a.br_basis(0, 2)));
}

TEST(Validate, SwappedSquaresAreNotLeftSymmetric)
{
    // e1.e1 = e2, e2.e2 = e1: ass(e1,e2,e1) = 0 but ass(e2,e1,e1) = -e1
    Tensor3<Q> c(2);
    c(0, 0, 1) = 1;
    c(1, 1, 0) = 1;
    auto a = Algebra<Q>::validate(c);
    EXPECT_FALSE(a.left_symmetric());
    EXPECT_FALSE(a.novikov());
    ASSERT_TRUE(a.associator_defect().has_value());
    auto t = *a.associator_defect();
    Vec<Q> ea = unit<Q>(2, t[0]), eb = unit<Q>(2, t[1]), ec = unit<Q>(2, t[2]);
    EXPECT_NE(a.associator(ea, eb, ec), a.associator(eb, ea, ec));
    EXPECT_THROW(difference_tensor(a, Metric<Q>::identity(2)), Error);
}

TEST(Validate, NonFiniteFloatRejected)
{
    Tensor3<double> c(2);
    c(0, 0, 0) = std::nan("");
    try {
        Algebra<double>::validate(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonFinite);
    }
}

TEST(Validate, NovikovRightMultiplicationsCommute)
{
    int novikov = 0;
    for (const auto& in : instances(20, 11)) {
        const auto& a = in.algebra;
        if (!a.novikov()) continue;
        ++novikov;
        const std::size_t n = a.dim();
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t x = 0; x < n; ++x) {
                    Vec<Q> ex = unit<Q>(n, x);
                    EXPECT_EQ(a.mul(a.mul(ex, unit<Q>(n, b)), unit<Q>(n, c)),
                              a.mul(a.mul(ex, unit<Q>(n, c)), unit<Q>(n, b)));
                }
    }
    EXPECT_GT(novikov, 0);
}

TEST(Validate, LeftSymmetricImpliesJacobi)
{
    for (const auto& in : instances(25, 12)) {
        ASSERT_TRUE(in.algebra.left_symmetric());
        EXPECT_TRUE(in.algebra.jacobi());
    }
}

TEST(Metric, RejectsIndefiniteAndAsymmetric)
{
    Matrix<Q> m(2, 2);
    m(0, 0) = 1; m(1, 1) = -1;
    EXPECT_THROW(Metric<Q>::make(m), Error);
    Matrix<Q> s(2, 2);
    s(0, 0) = 2; s(0, 1) = 1; s(1, 1) = 2;
    EXPECT_THROW(Metric<Q>::make(s), Error);
    Matrix<Q> z(2, 2);
    EXPECT_THROW(Metric<Q>::make(z), Error);
}

TEST(Metric, InverseIsExact)
{
    InstanceGenerator gen(3);
    for (int i = 0; i < 10; ++i) {
        auto g = gen.random_metric(4);
        EXPECT_EQ(g.G() * g.Ginv(), Matrix<Q>::identity(4));
    }
}

TEST(LeviCivita, AbelianIsZero)
{
    EXPECT_TRUE(is_zero_tensor(levi_civita(abelian<Q>(3), metric({{2, 1, 0}, {1, 2, 0}, {0, 0, 1}}))));
}

TEST(LeviCivita, HeisenbergIdentityMetric)
{
    auto l = levi_civita(n5g3(), Metric<Q>::identity(3));
    EXPECT_EQ(l.at(0, 1), (Vec<Q>{0, 0, Q(1, 2)}));
    EXPECT_EQ(l.at(0, 2), (Vec<Q>{0, Q(-1, 2), 0}));
    EXPECT_EQ(l.at(1, 2), (Vec<Q>{Q(1, 2), 0, 0}));
}

TEST(LeviCivita, AbelianBracketGivesMinusProduct)
{
    Tensor3<Q> c(2);
    c(0, 0, 1) = 1;
    auto a = Algebra<Q>::validate(c);
    auto g = metric({{2, 1}, {1, 3}});
    EXPECT_TRUE(is_zero_tensor(levi_civita(a, g)));
    EXPECT_EQ(difference_tensor(a, g).gamma, Q(-1) * c);
}

TEST(LeviCivita, TorsionFreeAndMetric)
{
    for (const auto& in : instances(25, 13)) {
        auto l = levi_civita(in.algebra, in.metric);
        EXPECT_FALSE(torsion_defect(in.algebra, l).has_value());
        EXPECT_FALSE(metric_defect(l, in.metric).has_value());
    }
}

TEST(LeviCivita, MatchesKoszulOracle)
{
    for (const auto& in : instances(10, 14)) {
        auto l = levi_civita(in.algebra, in.metric);
        D3 o = koszul_oracle(to_d3(in.algebra.product()), to_dm(in.metric.G()));
        for (std::size_t u = 0; u < 3; ++u)
            for (std::size_t v = 0; v < 3; ++v) EXPECT_LT(max_diff(o[u][v], l.at(u, v)), 1e-9);
    }
}

TEST(ContractTrace, ZeroAndHeisenberg)
{
    auto g = metric({{3, 1, 0}, {1, 2, 0}, {0, 0, 1}});
    EXPECT_TRUE(all_zero(contract_trace(Tensor3<Q>(3), g)));
    EXPECT_TRUE(all_zero(difference_tensor(n5g3(), Metric<Q>::identity(3)).tr_gamma));
}

TEST(ContractTrace, MatchesOrthonormalFrameSum)
{
    for (const auto& in : instances(25, 15)) {
        auto dt = difference_tensor(in.algebra, in.metric);
        DM g = to_dm(in.metric.G());
        EXPECT_LT(max_diff(frame_trace(to_d3(dt.gamma), g), dt.tr_gamma), 1e-9);
        EXPECT_LT(max_diff(frame_trace(to_d3(dt.gamma_star), g), dt.tr_gamma_star), 1e-9);
    }
}

TEST(ContractTrace, BasisChangeCovariance)
{
    InstanceGenerator gen(16);
    for (const auto& in : instances(15, 17)) {
        Matrix<Q> p(3, 3);
        do {
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    p(i, j) = Q(gen.uniform(-3, 3), gen.uniform(1, 2));
                    p(i, j).canonicalize();
                }
        } while (determinant(p) == 0);
        auto a2 = in.algebra.change_basis(p);
        auto g2 = Metric<Q>::make(p.transpose() * in.metric.G() * p);
        auto d1 = difference_tensor(in.algebra, in.metric), d2 = difference_tensor(a2, g2);
        EXPECT_EQ(p * d2.tr_gamma, d1.tr_gamma);
        EXPECT_EQ(p * d2.tr_gamma_star, d1.tr_gamma_star);
    }
}

TEST(Backends, FloatAgreesWithRational)
{
    for (const auto& in : instances(10, 18)) {
        auto af = Algebra<double>::validate(convert_tensor<double>(in.algebra.product()));
        auto gf = Metric<double>::make(convert_matrix<double>(in.metric.G()));
        auto df = difference_tensor(af, gf);
        auto dq = difference_tensor(in.algebra, in.metric);
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_NEAR(df.tr_gamma[k], dq.tr_gamma[k].get_d(), 1e-9);
            EXPECT_NEAR(df.alpha[k], dq.alpha[k].get_d(), 1e-9);
        }
    }
}
