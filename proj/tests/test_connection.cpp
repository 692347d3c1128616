#include <gtest/gtest.h>

#include "gkforge/classify.hpp"
#include "gkforge/phase.hpp"
#include "gkforge/rigid.hpp"
#include "support.hpp"

using namespace gkt;

namespace {

std::vector<std::pair<Algebra<Q>, Metric<Q>>> catalog_samples(int table, std::size_t per_row, std::uint64_t seed)
{
    const auto& cat = catalog::builtin();
    std::vector<std::pair<Algebra<Q>, Metric<Q>>> out;
    for (const auto& row : cat.rows()) {
        if (row.table != table) continue;
        for (const auto& a : catalog::sample_row(cat, row, per_row, seed).samples)
            out.emplace_back(catalog::instantiate(cat.entry(row.entry), a), Metric<Q>::make(catalog::metric_matrix(a)));
    }
    return out;
}

Algebra<Q> exem1_algebra(const std::string& name)
{
    const auto& f = catalog::builtin().fixtures().at(name);
    catalog::Assignment p;
    for (const auto& [k, v] : f.at("params").items()) p[k] = parse_rational(v.get<std::string>());
    return entry(f.at("entry").get<std::string>(), p);
}

}  // namespace

TEST(DifferenceTensor, AbelianVanishes)
{
    auto dt = difference_tensor(abelian<Q>(3), metric({{2, 1, 0}, {1, 2, 0}, {0, 0, 5}}));
    EXPECT_TRUE(is_zero_tensor(dt.gamma));
    EXPECT_TRUE(all_zero(dt.alpha));
    EXPECT_TRUE(all_zero(dt.xi));
}

TEST(DifferenceTensor, HeisenbergValues)
{
    auto dt = difference_tensor(n5g3(), Metric<Q>::identity(3));
    EXPECT_EQ(dt.gamma.at(0, 2), (Vec<Q>{0, Q(-1, 2), 0}));
    EXPECT_EQ(dt.gamma.at(1, 2), (Vec<Q>{Q(1, 2), 0, 0}));
    EXPECT_TRUE(all_zero(dt.gamma.at(2, 2)));
    EXPECT_TRUE(all_zero(dt.tr_gamma));
    EXPECT_TRUE(all_zero(dt.tr_gamma_star));
}

TEST(DifferenceTensor, Invariants)
{
    for (const auto& in : instances(25, 21)) {
        const auto& g = in.metric;
        const auto& alg = in.algebra;
        auto dt = difference_tensor(alg, g);
        for (std::size_t u = 0; u < 3; ++u)
            for (std::size_t v = 0; v < 3; ++v) {
                EXPECT_EQ(dt.gamma.at(u, v), dt.gamma.at(v, u));
                for (std::size_t w = 0; w < 3; ++w) {
                    Vec<Q> eu = unit<Q>(3, u), ev = unit<Q>(3, v), ew = unit<Q>(3, w);
                    EXPECT_EQ(g.ip(dt.gamma_star.at(u, v), ew), g.ip(ev, dt.gamma.at(u, w)));
                    // derivative of the metric along the flat connection
                    Q lhs = -g.ip(alg.mul(eu, ev), ew) - g.ip(ev, alg.mul(eu, ew));
                    EXPECT_EQ(lhs, g.ip(add(dt.gamma.at(u, v), dt.gamma_star.at(u, v)), ew));
                }
            }
        EXPECT_EQ(dt.alpha, g.lower(dt.tr_gamma_star));
        EXPECT_EQ(dt.xi, g.lower(dt.tr_gamma));
    }
}

TEST(DifferenceTensor, MatchesFloatOracle)
{
    for (const auto& in : instances(10, 22)) {
        auto dt = difference_tensor(in.algebra, in.metric);
        auto [gm, gs] = gamma_oracle(to_d3(in.algebra.product()), to_dm(in.metric.G()));
        for (std::size_t u = 0; u < 3; ++u)
            for (std::size_t v = 0; v < 3; ++v) {
                EXPECT_LT(max_diff(gm[u][v], dt.gamma.at(u, v)), 1e-9);
                EXPECT_LT(max_diff(gs[u][v], dt.gamma_star.at(u, v)), 1e-9);
            }
    }
}

// Frozen from the Gram-Schmidt frame oracle: the first example has tr gamma* = 3 tr gamma,
// the second tr gamma* = 15 tr gamma for every diagonal metric tried.
TEST(DifferenceTensor, ExampleTraceRatiosFromFrameOracle)
{
    struct Case {
        Algebra<Q> alg;
        Metric<Q> g;
        Q ratio;
    };
    std::vector<Case> cases{{exem1_algebra("exem1a"), metric({{1, 1, 0}, {1, 3, 1}, {0, 1, 1}}), Q(1, 3)},
                            {exem1_algebra("exem1b"), diag({1, 1, 1}), Q(1, 15)},
                            {exem1_algebra("exem1b"), diag({2, 3, 5}), Q(1, 15)},
                            {exem1_algebra("exem1b"), diag({Q(1, 2), 7, Q(4, 3)}), Q(1, 15)}};
    for (const auto& c : cases) {
        auto [gm, gs] = gamma_oracle(to_d3(c.alg.product()), to_dm(c.g.G()));
        auto tg = frame_trace(gm, to_dm(c.g.G())), tgs = frame_trace(gs, to_dm(c.g.G()));
        for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(tg[k], c.ratio.get_d() * tgs[k], 1e-12);

        auto dt = difference_tensor(c.alg, c.g);
        EXPECT_FALSE(all_zero(dt.tr_gamma_star));
        EXPECT_EQ(dt.tr_gamma, scale(dt.tr_gamma_star, c.ratio));
        EXPECT_LT(max_diff(tgs, dt.tr_gamma_star), 1e-9);
        auto cr = classify(c.alg, c.g, 6);
        ASSERT_TRUE(cr.balanced_solution.exists);
        EXPECT_EQ(cr.balanced_solution.lambda, c.ratio.get_str());
        EXPECT_FALSE(cr.balanced_solution.k_integer);
        for (int k = 1; k <= 6; ++k) EXPECT_FALSE(cr.holds("balanced_" + std::to_string(k)));
    }
}

TEST(Curvature, AntisymmetricSkewAndDifferenceForm)
{
    for (const auto& in : instances(15, 23)) {
        const auto& g = in.metric;
        auto dt = difference_tensor(in.algebra, g);
        auto K = curvature(in.algebra, dt.L);
        auto dg = covariant_derivative(dt.gamma, dt.L);
        for (std::size_t u = 0; u < 3; ++u)
            for (std::size_t v = 0; v < 3; ++v) {
                const auto& k = K[u * 3 + v];
                EXPECT_EQ(k, Q(-1) * K[v * 3 + u]);
                EXPECT_EQ(g.G() * k, Q(-1) * (k.transpose() * g.G()));
                Matrix<Q> comm = commutator(dt.gamma.op_basis(u), dt.gamma.op_basis(v));
                for (std::size_t w = 0; w < 3; ++w)
                    EXPECT_EQ(k.col(w), add(sub(dg[v].at(u, w), dg[u].at(v, w)), comm.col(w)));
            }
    }
}

TEST(Koszul, FirstFormClosed)
{
    for (const auto& in : instances(25, 24)) {
        auto dt = difference_tensor(in.algebra, in.metric);
        EXPECT_TRUE(is_zero_matrix(koszul_closedness(dt, in.algebra).d_alpha));
    }
    auto ab = abelian<Q>(3);
    EXPECT_TRUE(is_zero_matrix(koszul_closedness(difference_tensor(ab, diag({1, 2, 3})), ab).d_xi));
}

TEST(Koszul, AdjointFormClosedForMinusOne)
{
    auto alg = entry("N1g1", {{"a", Q(-1)}});
    for (auto g : {diag({1, 1, 1}), diag({2, 5, Q(1, 3)}), diag({7, 1, 4})}) {
        auto dt = difference_tensor(alg, g);
        EXPECT_TRUE(is_zero_matrix(koszul_closedness(dt, alg).d_xi));
    }
}

TEST(Classify, KahlerRow)
{
    auto alg = entry("N1g5", {{"a", Q(0)}});
    for (auto g : {diag({1, 1, 1}), diag({3, 2, 2}), diag({Q(1, 2), 5, 5})})
        EXPECT_TRUE(classify(alg, g).holds("kahler"));
}

TEST(Classify, HeisenbergAlwaysInfinitelyBalanced)
{
    InstanceGenerator gen(25);
    for (int i = 0; i < 20; ++i) {
        auto cr = classify(n5g3(), gen.random_metric(3));
        EXPECT_TRUE(cr.holds("infinitely_balanced"));
        EXPECT_TRUE(cr.holds("cyt"));
        EXPECT_TRUE(cr.holds("chern_ricci_flat"));
    }
}

TEST(Classify, PlaneExampleIsVaisman)
{
    Tensor3<Q> c(2);
    c(0, 0, 1) = 1;
    auto cr = classify(Algebra<Q>::validate(c), diag({1, 2}));
    EXPECT_TRUE(cr.holds("lck"));
    EXPECT_TRUE(cr.holds("vaisman"));
    EXPECT_FALSE(cr.holds("kahler"));
}

TEST(Classify, FailingFlagsCarryWitnesses)
{
    for (const auto& in : instances(10, 26)) {
        auto cr = classify(in.algebra, in.metric);
        for (const auto& [name, f] : cr.flags) {
            if (f.holds) continue;
            ASSERT_TRUE(f.witness.has_value()) << name;
            // the Gauduchon condition is a single scalar, so its witness has no basis tuple
            if (name != "gauduchon") {
                EXPECT_FALSE(f.witness->indices.empty()) << name;
            }
            EXPECT_GT(f.residual_norm, 0.0) << name;
        }
    }
}

TEST(Classify, Deterministic)
{
    for (const auto& in : instances(5, 27)) {
        auto a = classify(in.algebra, in.metric), b = classify(in.algebra, in.metric);
        ASSERT_EQ(a.flags.size(), b.flags.size());
        for (std::size_t i = 0; i < a.flags.size(); ++i) {
            EXPECT_EQ(a.flags[i].second.holds, b.flags[i].second.holds);
            if (a.flags[i].second.witness) {
                EXPECT_EQ(a.flags[i].second.witness->indices, b.flags[i].second.witness->indices);
            }
        }
    }
}

TEST(Classify, ReportInvariants)
{
    auto all = catalog_samples(3, 2, 5);
    for (auto& in : instances(20, 28)) all.emplace_back(in.algebra, in.metric);
    for (const auto& [alg, g] : catalog_samples(5, 2, 5)) all.emplace_back(alg, g);
    for (const auto& [alg, g] : all) {
        auto cr = classify(alg, g, 5);
        auto dt = difference_tensor(alg, g);
        if (cr.holds("kahler")) {
            for (int k = 1; k <= 5; ++k) {
                Q c = Q((1 << k) - 2);
                EXPECT_EQ(cr.holds("balanced_" + std::to_string(k)), all_zero(scale(dt.alpha, c)));
            }
            EXPECT_TRUE(cr.holds("hessian"));
        }
        if (cr.holds("infinitely_balanced")) {
            for (int k = 1; k <= 5; ++k) EXPECT_TRUE(cr.holds("balanced_" + std::to_string(k)));
            EXPECT_TRUE(cr.holds("cyt"));
            EXPECT_TRUE(cr.holds("chern_ricci_flat"));
        }
    }
}

TEST(Classify, KahlerIsCodazzi)
{
    auto all = catalog_samples(3, 2, 6);
    for (auto& in : instances(15, 29)) all.emplace_back(in.algebra, in.metric);
    int kahler = 0;
    for (const auto& [alg, g] : all) {
        const std::size_t n = alg.dim();
        auto dt = difference_tensor(alg, g);
        // (nabla_u g)(v,w) = -<u.v,w> - <v,u.w>, symmetric in (u,v)
        bool codazzi = true;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                for (std::size_t w = 0; w < n; ++w) {
                    Vec<Q> eu = unit<Q>(n, u), ev = unit<Q>(n, v), ew = unit<Q>(n, w);
                    Q a = -g.ip(alg.mul(eu, ev), ew) - g.ip(ev, alg.mul(eu, ew));
                    Q b = -g.ip(alg.mul(ev, eu), ew) - g.ip(eu, alg.mul(ev, ew));
                    if (a != b) codazzi = false;
                }
        bool k = classify(alg, g).holds("kahler");
        EXPECT_EQ(k, codazzi);
        if (!k) continue;
        ++kahler;
        auto K = curvature(alg, dt.L);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                EXPECT_EQ(K[u * n + v], commutator(dt.gamma.op_basis(u), dt.gamma.op_basis(v)));
    }
    EXPECT_GT(kahler, 0);
}

TEST(Classify, ScaleAware)
{
    auto all = catalog_samples(7, 1, 7);
    for (auto& in : instances(10, 30)) all.emplace_back(in.algebra, in.metric);
    for (const auto& [alg, g] : all)
        for (Q lam : {Q(2), Q(1, 3), Q(7, 5)}) {
            auto a = classify(alg, g), b = classify(alg, Metric<Q>::make(lam * g.G()));
            for (const char* f : {"kahler", "lcb", "lck", "pluriclosed", "rigid"}) EXPECT_EQ(a.holds(f), b.holds(f)) << f;
        }
}

TEST(Classify, GauduchonAgreesWithPhaseDivergence)
{
    // d*theta on the phase algebra equals tr(ad of the metric dual of theta).
    auto all = catalog_samples(4, 1, 8);
    for (auto& in : instances(15, 31)) all.emplace_back(in.algebra, in.metric);
    int yes = 0, no = 0;
    for (const auto& [alg, g] : all) {
        auto ps = phase(alg, g);
        Vec<Q> th = ps.metric.raise(lee_form_direct(ps));
        Q tr_ad(0);
        for (std::size_t i = 0; i < th.size(); ++i) tr_ad += ps.algebra.br(th, unit<Q>(th.size(), i))[i];
        bool direct = tr_ad == 0;
        auto cr = classify(alg, g);
        EXPECT_EQ(cr.holds("gauduchon"), direct);
        (direct ? yes : no)++;
    }
    EXPECT_GT(yes, 0);
    EXPECT_GT(no, 0);
}

TEST(Classify, LckAgreesWithPhaseStructure)
{
    auto all = catalog_samples(3, 1, 9);
    for (auto& in : instances(15, 32)) all.emplace_back(in.algebra, in.metric);
    Tensor3<Q> c(2);
    c(0, 0, 1) = 1;
    all.emplace_back(Algebra<Q>::validate(c), diag({1, 2}));
    all.emplace_back(Algebra<Q>::validate(c), metric({{2, 1}, {1, 3}}));
    for (const auto& [alg, g] : all) EXPECT_EQ(classify(alg, g).holds("lck"), lck_direct(phase(alg, g)));
}

TEST(CanonicalRicci, VanishingCases)
{
    auto ab = abelian<Q>(3);
    auto g = diag({1, 2, 3});
    auto dab = difference_tensor(ab, g);
    EXPECT_TRUE(is_zero_matrix(ricci_bismut(ab, g, dab)));
    EXPECT_TRUE(is_zero_matrix(ricci_chern(ab, g, dab)));

    auto h = n5g3();
    auto dh = difference_tensor(h, Metric<Q>::identity(3));
    EXPECT_TRUE(is_zero_matrix(ricci_bismut(h, Metric<Q>::identity(3), dh)));

    Tensor3<Q> c(2);
    c(0, 0, 1) = 1;
    auto pl = Algebra<Q>::validate(c);
    auto gp = metric({{2, 1}, {1, 3}});
    auto dp = difference_tensor(pl, gp);
    ASSERT_TRUE(all_zero(dp.tr_gamma_star));
    EXPECT_TRUE(is_zero_matrix(ricci_chern(pl, gp, dp)));
}

TEST(TraceDerivative, VanishingTracesHaveParallelTraces)
{
    InstanceGenerator gen(33);
    std::vector<std::pair<Algebra<Q>, Metric<Q>>> all;
    for (int i = 0; i < 10; ++i) all.emplace_back(n5g3(), gen.random_metric(3));
    for (auto& in : instances(15, 34)) all.emplace_back(in.algebra, in.metric);
    Tensor3<Q> c(2);
    c(0, 0, 1) = 1;
    all.emplace_back(Algebra<Q>::validate(c), metric({{2, 1}, {1, 3}}));
    for (const auto& [alg, g] : all) {
        auto dt = difference_tensor(alg, g);
        auto t = trace_derivative(covariant_derivative(dt.gamma, dt.L), g);
        auto ts = trace_derivative(covariant_derivative(dt.gamma_star, dt.L), g);
        for (std::size_t u = 0; u < alg.dim(); ++u) {
            if (all_zero(dt.tr_gamma)) {
                EXPECT_TRUE(all_zero(t[u]));
            }
            if (all_zero(dt.tr_gamma_star)) {
                EXPECT_TRUE(all_zero(ts[u]));
            }
        }
    }
}

TEST(TraceDerivative, SymmetrizedCurvatureIdentity)
{
    for (const auto& in : instances(20, 35)) {
        auto dt = difference_tensor(in.algebra, in.metric);
        auto ds = covariant_derivative(dt.gamma + dt.gamma_star, dt.L);
        for (std::size_t u = 0; u < 3; ++u)
            for (std::size_t v = 0; v < 3; ++v) {
                Matrix<Q> rhs = commutator(dt.gamma_star.op_basis(u), dt.gamma_star.op_basis(v)) -
                                commutator(dt.gamma.op_basis(u), dt.gamma.op_basis(v));
                for (std::size_t w = 0; w < 3; ++w) EXPECT_EQ(sub(ds[v].at(u, w), ds[u].at(v, w)), rhs.col(w));
            }
    }
}

TEST(RicciQuadratic, NonnegativeUnderTraceFreeHypotheses)
{
    auto all = catalog_samples(7, 2, 10);
    for (const auto& p : catalog_samples(5, 2, 10)) all.push_back(p);
    for (const auto& p : catalog_samples(3, 2, 10)) all.push_back(p);
    InstanceGenerator gen(36);
    int checked = 0;
    for (const auto& [alg, g] : all) {
        auto dt = difference_tensor(alg, g);
        if (!all_zero(dt.tr_gamma)) continue;
        auto cr = classify(alg, g);
        bool pl = cr.holds("pluriclosed"), ka = cr.holds("kahler");
        if (!pl && !ka) continue;
        ++checked;
        for (int t = 0; t < 12; ++t) {
            Vec<Q> u(3);
            for (auto& x : u) x = Q(gen.uniform(-5, 5), 1);
            if (t < 3) u = unit<Q>(3, static_cast<std::size_t>(t));
            Q r = ricci_quadratic(dt, u);
            EXPECT_GE(r.get_d(), 0.0);
            if (ka) {
                EXPECT_EQ(r, trace(Matrix<Q>(dt.gamma.op(u) * dt.gamma.op(u))));
            }
        }
        if (ka && !is_zero_tensor(dt.gamma)) {
            bool some_positive = false;
            for (std::size_t i = 0; i < 3; ++i)
                if (ricci_quadratic(dt, unit<Q>(3, i)) > 0) some_positive = true;
            EXPECT_TRUE(some_positive);
        }
    }
    EXPECT_GT(checked, 0);
}
