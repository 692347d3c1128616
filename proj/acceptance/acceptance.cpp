// Acceptance runner: one PASS/FAIL line per criterion.
//   gkforge_acceptance              all criteria
//   gkforge_acceptance --criterion 4

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gkforge/catalog/builtin.hpp"
#include "gkforge/catalog/named.hpp"
#include "gkforge/chart/fixtures.hpp"
#include "gkforge/phase.hpp"
#include "gkforge/random_instance.hpp"

using namespace gkforge;
using Q = Rational;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string secs(double s)
{
    std::ostringstream os;
    os.precision(3);
    os << s << " s";
    return os.str();
}

std::vector<RandomInstance> random_instances(std::size_t count, std::uint64_t seed)
{
    InstanceGenerator gen(seed);
    std::vector<RandomInstance> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(gen.next());
    return out;
}

Outcome lee_form_oracle()
{
    auto t0 = Clock::now();
    std::size_t bad = 0;
    for (const auto& in : random_instances(25, 101)) {
        auto dt = difference_tensor(in.algebra, in.metric);
        auto ps = phase(in.algebra, in.metric);
        if (lee_form_direct(ps) != pullback(sub(dt.alpha, dt.xi), 6)) ++bad;
    }
    double t = seconds_since(t0);
    return {bad == 0 && t < 5, std::to_string(25 - bad) + "/25 exact, " + secs(t) + " (limit 5 s)"};
}

Outcome lift_recursion()
{
    auto t0 = Clock::now();
    std::size_t bad = 0;
    std::string first;
    for (const auto& in : random_instances(10, 202)) {
        auto defects = lift_defects(iterate_lift(in.algebra, in.metric, 3));
        if (!defects.empty()) {
            ++bad;
            if (first.empty()) first = defects.front();
        }
    }
    double t = seconds_since(t0);
    std::string d = std::to_string(10 - bad) + "/10 agree through level 3 (dim 24), " + secs(t) + " (limit 60 s)";
    if (!first.empty()) d += "; " + first;
    return {bad == 0 && t < 60, d};
}

/// Instances with pluriclosed structures mixed in so both sides of the equivalence are exercised.
std::vector<std::pair<Algebra<Q>, Metric<Q>>> pluriclosed_mix()
{
    std::vector<std::pair<Algebra<Q>, Metric<Q>>> out;
    for (auto& in : random_instances(13, 303)) out.emplace_back(in.algebra, in.metric);
    const auto& cat = catalog::builtin();
    for (const auto& row : cat.rows()) {
        if (row.table != 7 || out.size() == 25) continue;
        auto s = catalog::sample_row(cat, row, 1, 303);
        if (s.samples.empty()) continue;
        const auto& a = s.samples.front();
        out.emplace_back(catalog::instantiate(cat.entry(row.entry), a), Metric<Q>::make(catalog::metric_matrix(a)));
    }
    return out;
}

Outcome pluriclosed_oracle()
{
    std::size_t bad = 0, positive = 0, total = 0;
    for (const auto& [alg, g] : pluriclosed_mix()) {
        ++total;
        auto dt = difference_tensor(alg, g);
        bool reduced = true;
        for (std::size_t x = 0; x < 3 && reduced; ++x)
            for (std::size_t y = 0; y < 3 && reduced; ++y)
                for (std::size_t z = 0; z < 3 && reduced; ++z)
                    for (std::size_t u = 0; u < 3; ++u)
                        if (pluriclosed_residual(alg, g, dt, x, y, z, u) != 0) { reduced = false; break; }
        auto pd = pluriclosed_direct(phase(alg, g), alg, g);
        if (pd.pluriclosed != reduced || !pd.blocks_match) ++bad;
        if (pd.pluriclosed) ++positive;
    }
    return {bad == 0 && total == 25,
            std::to_string(total - bad) + "/" + std::to_string(total) + " agree (" + std::to_string(positive) +
                " pluriclosed, " + std::to_string(total - positive) + " not)"};
}

Outcome bismut_chern_oracle()
{
    std::size_t bad = 0;
    std::string first;
    for (const auto& in : random_instances(10, 404)) {
        const std::size_t n = 3;
        auto ps = phase(in.algebra, in.metric);
        auto cc = canonical_connections_direct(ps);
        auto [b, c] = canonical_closed_forms(in.algebra, in.metric);
        auto [rb, rc] = canonical_curvature_closed_forms(in.algebra, in.metric);
        auto dt = difference_tensor(in.algebra, in.metric);
        auto rho_b = ricci_bismut(in.algebra, in.metric, dt), rho_c = ricci_chern(in.algebra, in.metric, dt);
        std::string why;
        if (!(cc.bismut == b)) why = "Bismut connection";
        else if (!(cc.chern == c)) why = "Chern connection";
        else if (cc.r_bismut != rb) why = "Bismut curvature";
        else if (cc.r_chern != rc) why = "Chern curvature";
        for (std::size_t u = 0; u < n && why.empty(); ++u)
            for (std::size_t v = 0; v < n; ++v) {
                if (cc.rho_bismut(u, n + v) != rho_b(u, v) || cc.rho_bismut(u, v) != 0 ||
                    cc.rho_bismut(n + u, n + v) != 0) { why = "Bismut Ricci form"; break; }
                if (cc.rho_chern(u, n + v) != rho_c(u, v) || cc.rho_chern(u, v) != 0 ||
                    cc.rho_chern(n + u, n + v) != 0) { why = "Chern Ricci form"; break; }
            }
        if (!why.empty()) {
            ++bad;
            if (first.empty()) first = why;
        }
    }
    std::string d = std::to_string(10 - bad) + "/10 match connections, curvatures and Ricci forms blockwise";
    if (!first.empty()) d += "; first mismatch: " + first;
    return {bad == 0, d};
}

Outcome exem1()
{
    const auto& cat = catalog::builtin();
    std::string d;
    bool ok = true;
    for (const auto& r : {catalog::fixture_exem1a(cat), catalog::fixture_exem1b(cat)})
        for (const auto& c : r.claims) {
            ok = ok && c.holds;
            d += (d.empty() ? "" : " | ") + r.name + ": " + c.claim + " -> " + (c.holds ? "ok" : c.observed);
        }
    return {ok, d};
}

Outcome tables()
{
    auto t0 = Clock::now();
    auto rep = catalog::reproduce_tables(catalog::builtin(), {}, 10, 42);
    double t = seconds_since(t0);
    std::size_t pass = 0, review = 0, neg = 0, neg_pass = 0;
    std::string failing;
    for (const auto& r : rep.rows) {
        if (r.status == "pass") ++pass;
        else if (r.status == "review") ++review;
        else failing += (failing.empty() ? "" : ", ") + r.row.label();
        if (r.negative_status == "pass" || r.negative_status == "fail") {
            ++neg;
            if (r.negative_status == "pass") ++neg_pass;
            else failing += (failing.empty() ? "" : ", ") + r.row.label() + " (negative control)";
        }
    }
    std::string d = std::to_string(pass) + " pass, " + std::to_string(review) + " review of " +
                    std::to_string(rep.rows.size()) + " rows; negative controls " + std::to_string(neg_pass) + "/" +
                    std::to_string(neg) + "; " + secs(t) + " (limit 300 s)";
    if (!failing.empty()) d += "; failing: " + failing;
    return {rep.all_pass() && t < 300, d};
}

Outcome rigid_fixtures()
{
    std::vector<catalog::FixtureResult> rs{catalog::fixture_prg(),     catalog::fixture_cylinder(1),
                                           catalog::fixture_cylinder(2), catalog::fixture_cylinder(Q(1, 2)),
                                           catalog::fixture_exem5(2),  catalog::fixture_exem5(3)};
    bool ok = true;
    std::string d;
    for (const auto& r : rs) {
        ok = ok && r.passed();
        d += (d.empty() ? "" : ", ") + r.name + (r.passed() ? " ok" : " FAILED");
    }
    return {ok, d};
}

Outcome chart_engine()
{
    const double det_tol = 1e-9, hess_tol = 1e-7, tr_tol = 1e-6, ric_tol = -1e-7;
    double worst_det = 0, worst_hess = 0, worst_tr = 0, min_ric = 1e300;
    for (std::size_t n : {2u, 3u, 4u})
        for (Q c : {Q(1, 2), Q(1), Q(2)}) {
            auto m = chart::exemple_fixture(n, c);
            auto plan = chart::SamplePlan::make(m, 64, 42, hess_tol);
            worst_hess = std::max(worst_hess, chart::hessian_check(m, plan).max_residual);
            std::mt19937_64 rng(n * 10 + c.get_num().get_ui());
            std::normal_distribution<double> nd;
            for (const auto& x : plan.points) {
                worst_det = std::max(worst_det, std::fabs(determinant(m.G(x)) - 1));
                for (double t : chart::trace_gamma(m, x)) worst_tr = std::max(worst_tr, std::fabs(t));
                for (std::size_t k = 0; k < n + 4; ++k) {
                    std::vector<double> u(n, 0);
                    if (k < n) u[k] = 1;
                    else
                        for (auto& v : u) v = nd(rng);
                    min_ric = std::min(min_ric, chart::ricci_quadratic_at(m, x, u));
                }
            }
        }
    bool ex_ok = worst_det < det_tol && worst_hess < hess_tol && worst_tr < tr_tol && min_ric >= ric_tol;

    bool cop1 = true;
    for (const auto& g : std::vector<std::vector<std::string>>{
             {"t", "t^2"}, {"t^2", "cosh(t)", "t/3"}, {"sinh(t)", "t", "t^3", "2*t"}}) {
        auto m = chart::diagonal_exp_metric(g);
        cop1 = cop1 && chart::pluriclosed_check(m, chart::SamplePlan::make(m, 64, 42, 1e-7)).holds;
    }
    auto neg = chart::pluriclosed_negative_control();
    auto nr = chart::pluriclosed_check(neg, chart::SamplePlan::make(neg, 64, 42, 1e-7));
    bool neg_ok = !nr.holds && std::fabs(nr.max_residual - 2) < 1e-7;

    std::ostringstream os;
    os << "exemple n=2..4, c in {1/2,1,2}: max |det-1| " << worst_det << ", Hessian " << worst_hess << ", |tr gamma| "
       << worst_tr << ", min ric " << min_ric << "; diagonal exp pluriclosed " << (cop1 ? "ok" : "FAILED")
       << "; 1+x2^2 control residual " << nr.max_residual;
    return {ex_ok && cop1 && neg_ok, os.str()};
}

Outcome structural_invariants()
{
    std::vector<std::string> failures;
    auto check = [&](bool ok, const std::string& what, std::size_t i) {
        if (!ok) failures.push_back(what + " #" + std::to_string(i));
    };
    std::size_t vanishing = 0;
    std::vector<std::pair<Algebra<Q>, Metric<Q>>> cases;
    for (auto& in : random_instances(25, 909)) cases.emplace_back(in.algebra, in.metric);
    // instances with vanishing traces so the trace-derivative implications are not vacuous
    InstanceGenerator metrics(910);
    auto n5 = catalog::instantiate(catalog::builtin().entry("N5g3"), {});
    for (int i = 0; i < 5; ++i) cases.emplace_back(n5, metrics.random_metric(3));

    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& [alg, g] = cases[i];
        const std::size_t n = alg.dim();
        auto dt = difference_tensor(alg, g);
        auto ps = phase(alg, g);
        auto inv = phase_invariants(ps, alg);
        check(alg.jacobi() && ps.algebra.jacobi(), "Jacobi", i);
        check(inv.nijenhuis, "N_J", i);
        check(inv.j_parallel, "nabla J", i);
        check(is_zero_matrix(koszul_closedness(dt, alg).d_alpha), "d alpha", i);

        bool nam = true, cu = true;
        Tensor3<Q> sym = dt.gamma + dt.gamma_star;
        auto dsym = covariant_derivative(sym, dt.L);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v) {
                Vec<Q> eu = unit<Q>(n, u), ev = unit<Q>(n, v);
                Matrix<Q> comm = commutator(dt.gamma_star.op_basis(u), dt.gamma_star.op_basis(v)) -
                                 commutator(dt.gamma.op_basis(u), dt.gamma.op_basis(v));
                for (std::size_t w = 0; w < n; ++w) {
                    Vec<Q> ew = unit<Q>(n, w);
                    Q lhs = -g.ip(alg.mul(eu, ev), ew) - g.ip(ev, alg.mul(eu, ew));
                    if (lhs != g.ip(sym.at(u, v), ew)) nam = false;
                    if (sub(dsym[v].at(u, w), dsym[u].at(v, w)) != comm.col(w)) cu = false;
                }
            }
        check(nam, "nam identity", i);
        check(cu, "cu identity", i);

        auto trd = trace_derivative(covariant_derivative(dt.gamma, dt.L), g);
        auto trds = trace_derivative(covariant_derivative(dt.gamma_star, dt.L), g);
        bool yau = true, chern = true;
        for (std::size_t u = 0; u < n; ++u) {
            if (all_zero(dt.tr_gamma) && !all_zero(trd[u])) yau = false;
            if (all_zero(dt.tr_gamma_star) && !all_zero(trds[u])) chern = false;
            // contraction commutes with the metric connection: tr D_u(T) = L_u(tr T)
            if (trd[u] != dt.L.op_basis(u) * dt.tr_gamma) yau = false;
            if (trds[u] != dt.L.op_basis(u) * dt.tr_gamma_star) chern = false;
        }
        if (all_zero(dt.tr_gamma) && all_zero(dt.tr_gamma_star)) ++vanishing;
        check(yau, "trace derivative of gamma", i);
        check(chern, "trace derivative of gamma*", i);
    }
    std::string d = std::to_string(cases.size()) + " instances (" + std::to_string(vanishing) +
                    " with vanishing traces): ";
    if (failures.empty()) d += "Jacobi, N_J, nabla J, d alpha, nam and cu identities, trace derivatives exact";
    else {
        d += std::to_string(failures.size()) + " failures, first " + failures.front();
    }
    return {failures.empty() && vanishing > 0, d};
}

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"gkforge acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "Lee form oracle", lee_form_oracle},
        {2, "lift recursion", lift_recursion},
        {3, "pluriclosed oracle", pluriclosed_oracle},
        {4, "Bismut/Chern oracle", bismut_chern_oracle},
        {5, "example exem1", exem1},
        {6, "table reproduction", tables},
        {7, "rigid fixtures", rigid_fixtures},
        {8, "chart engine", chart_engine},
        {9, "structural invariants", structural_invariants},
    };
    int failed = 0;
    for (const auto& c : all) {
        if (only && c.id != only) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << c.id << " (" << c.name << "): " << (o.pass ? "PASS" : "FAIL") << "  "
                  << o.detail << std::endl;
        if (!o.pass) ++failed;
    }
    return failed ? 1 : 0;
}
