#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gkforge/catalog/builtin.hpp"
#include "gkforge/catalog/named.hpp"
#include "gkforge/chart/fixtures.hpp"
#include "gkforge/io/report.hpp"

namespace gkforge::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2 };

struct RunConfig {
    std::string command;  // classify, lift, chart, tables, fixtures
    std::string algebra_path, metric_path, config_path, catalog_path, out_path;
    int kmax = 5;
    int k = 1;
    std::optional<double> tol;
    std::uint64_t seed = 42;
    std::optional<std::size_t> samples;
    std::string which;   // "3,5,6"
    std::string check;   // "balanced:k=2,pluriclosed,hessian"
    std::string expect;  // flags that must hold, for classify
    std::optional<std::string> backend;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        auto b = cur.find_first_not_of(" \t"), e = cur.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    }
    return out;
}

inline void usage_if(bool bad, const std::string& msg)
{
    if (bad) throw Error(ErrorKind::Schema, msg);
}

inline std::string backend_for(const RunConfig& cfg, const json& alg_doc)
{
    std::string b = cfg.backend ? *cfg.backend : io::field_of(alg_doc, "algebra");
    usage_if(b != "rational" && b != "float", "--backend must be rational or float");
    return b;
}

inline std::string triple_text(const std::array<std::size_t, 3>& t)
{
    return "(" + std::to_string(t[0] + 1) + "," + std::to_string(t[1] + 1) + "," + std::to_string(t[2] + 1) + ")";
}

template <class S>
Algebra<S> load_left_symmetric(const json& doc, double tol)
{
    auto alg = io::algebra_from_json<S>(doc, tol);
    if (!alg.left_symmetric())
        throw Error(ErrorKind::NotLeftSymmetric,
                    "algebra is not left-symmetric: ass(a,b,c) != ass(b,a,c) at basis triple " +
                        triple_text(*alg.associator_defect()));
    return alg;
}

template <class S>
int classify_with(const RunConfig& cfg, const json& ad, const json& md, json& report)
{
    double tol = cfg.tol.value_or(kDefaultTol);
    auto alg = load_left_symmetric<S>(ad, tol);
    auto g = io::metric_from_json<S>(md, alg.dim(), tol);
    auto cr = classify(alg, g, cfg.kmax, tol);
    report["report"] = io::classification_json(cr);
    int code = kOk;
    json exp = json::array();
    for (const auto& name : split(cfg.expect, ',')) {
        bool h = cr.holds(name);
        exp.push_back({{"flag", name}, {"holds", h}});
        if (!h) code = kFailed;
    }
    if (!exp.empty()) report["expectations"] = exp;
    return code;
}

template <class S>
int lift_with(const RunConfig& cfg, const json& ad, const json& md, json& report)
{
    double tol = cfg.tol.value_or(kDefaultTol);
    auto alg = load_left_symmetric<S>(ad, tol);
    auto g = io::metric_from_json<S>(md, alg.dim(), tol);
    auto levels = iterate_lift(alg, g, cfg.k);
    auto defects = lift_defects(levels, tol);
    report["report"] = io::lift_json(levels, defects);
    return defects.empty() ? kOk : kFailed;
}

inline chart::Point point_from(const json& j, const std::string& where)
{
    usage_if(!j.is_array(), where + ": expected an array of numbers");
    chart::Point p;
    for (const auto& v : j) p.push_back(io::scalar_from_json<double>(v, where));
    return p;
}

inline std::vector<std::string> strings_from(const json& j, const std::string& where)
{
    usage_if(!j.is_array(), where + ": expected an array of strings");
    return j.get<std::vector<std::string>>();
}

/// A chart metric from a config document: either "builtin" with parameters or "dim" + "entries".
inline chart::ChartMetric chart_from_config(const json& c)
{
    using namespace chart;
    usage_if(!c.is_object(), "chart config: expected an object");
    if (c.contains("builtin")) {
        std::string b = c.at("builtin").get<std::string>();
        if (b == "exemple") {
            Point lo, hi;
            if (c.contains("lo")) lo = point_from(c.at("lo"), "chart.lo");
            if (c.contains("hi")) hi = point_from(c.at("hi"), "chart.hi");
            return exemple_fixture(c.value("n", std::size_t(2)), parse_rational(c.value("c", std::string("1"))), lo, hi);
        }
        if (b == "exem2") return exem2_metric(c.value("f", std::string("x1*x2/2 + x1/3")));
        if (b == "exem3") return exem3_metric(c.value("f", std::string("t/2")), c.value("h", std::string("t^2/3")));
        if (b == "dim2") {
            Dim2Family d;
            d.nu = c.value("nu", d.nu);
            d.p = c.value("p", d.p);
            d.q = c.value("q", d.q);
            d.f = c.value("f", d.f);
            d.h = c.value("h", d.h);
            d.perturb11 = c.value("perturb11", d.perturb11);
            return dim2_metric(d);
        }
        if (b == "dimn") return dimn_metric(c.value("k0", std::size_t(1)), strings_from(c.at("f"), "chart.f"));
        if (b == "diagonal_exp") return diagonal_exp_metric(strings_from(c.at("g"), "chart.g"));
        if (b == "pluriclosed_negative_control") return pluriclosed_negative_control();
        throw Error(ErrorKind::Schema, "chart.builtin: unknown fixture '" + b + "'");
    }
    usage_if(!c.contains("dim") || !c.contains("entries"), "chart config needs builtin, or dim and entries");
    std::size_t n = c.at("dim").get<std::size_t>();
    auto up = strings_from(c.at("entries"), "chart.entries");
    usage_if(!c.contains("lo") || !c.contains("hi"), "chart config needs lo and hi for the box");
    return ChartMetric::from_expressions(n, up, point_from(c.at("lo"), "chart.lo"), point_from(c.at("hi"), "chart.hi"));
}

inline int run_chart(const RunConfig& cfg, json& report)
{
    usage_if(cfg.config_path.empty(), "chart needs --config");
    json c = io::read_json_file(cfg.config_path);
    chart::ChartMetric m = chart_from_config(c);
    if (c.value("finite_differences", false)) m = m.without_derivatives();
    double tol = cfg.tol.value_or(c.value("tol", chart::default_tolerance(m)));
    std::size_t count = cfg.samples.value_or(c.value("samples", std::size_t(64)));
    std::uint64_t seed = c.value("seed", cfg.seed);
    usage_if(count == 0, "--samples must be positive");
    auto plan = chart::SamplePlan::make(m, count, seed, tol);
    std::string checks = cfg.check.empty() ? c.value("check", std::string("hessian")) : cfg.check;

    json results = json::array();
    int code = kOk;
    double gate = chart::derivative_gate(m, plan);
    if (gate > 1e-5) code = kFailed;
    for (const auto& item : split(checks, ',')) {
        chart::CheckResult r;
        if (item == "hessian") {
            r = chart::hessian_check(m, plan);
        } else if (item.rfind("balanced", 0) == 0) {
            int k = cfg.k;
            auto colon = item.find(":k=");
            if (colon != std::string::npos) k = std::stoi(item.substr(colon + 3));
            usage_if(k < 1, "balanced check needs k >= 1");
            r = chart::balanced_k_check(m, plan, k);
        } else if (item == "pluriclosed") {
            r = chart::pluriclosed_check(m, plan);
        } else if (item == "ricci_nonnegative") {
            // sampled lower bound of ric(u,u) over coordinate and diagonal directions
            r.points = 0;
            double worst = 0;
            for (const auto& x : plan.points) {
                for (std::size_t i = 0; i <= m.dim(); ++i) {
                    std::vector<double> u(m.dim(), i == m.dim() ? 1.0 : 0.0);
                    if (i < m.dim()) u[i] = 1;
                    double v = 0;
                    try {
                        v = chart::ricci_quadratic_at(m, x, u, tol);
                    } catch (const Error& e) {
                        if (e.kind() != ErrorKind::NotHessian) throw;
                        r.label = "not Hessian";
                        v = -std::numeric_limits<double>::infinity();
                    }
                    if (r.argmax.empty() || -v > worst) {
                        worst = -v;
                        r.argmax = x;
                    }
                }
                ++r.points;
            }
            r.max_residual = std::max(0.0, worst);
            r.holds = worst <= tol;
        } else {
            throw Error(ErrorKind::Schema, "--check: unknown check '" + item + "'");
        }
        if (!r.holds) code = kFailed;
        results.push_back(io::check_json(item, r, tol));
    }
    report["report"] = {{"dim", m.dim()},
                        {"analytic", m.analytic()},
                        {"samples", count},
                        {"seed", seed},
                        {"derivative_gate", gate},
                        {"checks", results}};
    return code;
}

inline std::set<int> parse_which(const std::string& s)
{
    std::set<int> out;
    for (const auto& t : split(s, ',')) {
        int v = 0;
        try {
            v = std::stoi(t);
        } catch (const std::exception&) {
            throw Error(ErrorKind::Schema, "--which: '" + t + "' is not a table number");
        }
        usage_if(v < 3 || v > 8, "--which: tables are numbered 3..8");
        out.insert(v);
    }
    return out;
}

inline const catalog::Catalog& catalog_for(const RunConfig& cfg, std::optional<catalog::Catalog>& holder)
{
    if (cfg.catalog_path.empty()) return catalog::builtin();
    holder = catalog::Catalog::parse(io::read_json_file(cfg.catalog_path).dump());
    return *holder;
}

}  // namespace detail

/// Runs one command, writes the report to cfg.out_path (or `out`), and returns the exit code.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    json report = {{"schema", io::kSchemaVersion}, {"command", cfg.command}};
    int code = kOk;
    try {
        detail::usage_if(cfg.tol && !(*cfg.tol > 0), "--tol must be positive");
        detail::usage_if(cfg.kmax < 1, "--kmax must be at least 1");
        if (cfg.command == "classify" || cfg.command == "lift") {
            detail::usage_if(cfg.algebra_path.empty() || cfg.metric_path.empty(),
                             cfg.command + " needs --algebra and --metric");
            json ad = io::read_json_file(cfg.algebra_path), md = io::read_json_file(cfg.metric_path);
            std::string b = detail::backend_for(cfg, ad);
            report["backend"] = b;
            bool lift = cfg.command == "lift";
            detail::usage_if(lift && cfg.k < 1, "--k must be at least 1");
            if (b == "rational")
                code = lift ? detail::lift_with<Rational>(cfg, ad, md, report)
                            : detail::classify_with<Rational>(cfg, ad, md, report);
            else
                code = lift ? detail::lift_with<double>(cfg, ad, md, report)
                            : detail::classify_with<double>(cfg, ad, md, report);
        } else if (cfg.command == "chart") {
            code = detail::run_chart(cfg, report);
        } else if (cfg.command == "tables") {
            std::optional<catalog::Catalog> holder;
            const auto& cat = detail::catalog_for(cfg, holder);
            std::size_t samples = cfg.samples.value_or(10);
            detail::usage_if(samples == 0, "--samples must be positive");
            auto rep = catalog::reproduce_tables(cat, detail::parse_which(cfg.which), samples, cfg.seed);
            report = io::tables_json(rep);
            code = rep.all_pass() ? kOk : kFailed;
        } else if (cfg.command == "fixtures") {
            std::optional<catalog::Catalog> holder;
            auto fx = catalog::named_fixtures(detail::catalog_for(cfg, holder));
            report["fixtures"] = io::fixtures_json(fx);
            for (const auto& f : fx)
                if (!f.passed()) code = kFailed;
        } else {
            throw Error(ErrorKind::Schema, "unknown command '" + cfg.command + "'");
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        err << "error: Schema: " << e.what() << "\n";
        return kUsage;
    }
    report["exit_code"] = code;
    std::string text = io::dump(report);
    if (cfg.out_path.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.out_path);
        if (!f) {
            err << "error: cannot write " << cfg.out_path << "\n";
            return kUsage;
        }
        f << text;
    }
    return code;
}

}  // namespace gkforge::cli
