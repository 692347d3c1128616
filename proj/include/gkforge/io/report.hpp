#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkforge/catalog/catalog.hpp"
#include "gkforge/catalog/named.hpp"
#include "gkforge/chart/chart.hpp"
#include "gkforge/classify.hpp"
#include "gkforge/phase.hpp"

namespace gkforge::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, path + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        // e.byte is a 1-based offset; report it as line:column
        std::ifstream again(path);
        std::string text((std::istreambuf_iterator<char>(again)), std::istreambuf_iterator<char>());
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') { ++line; col = 1; }
            else ++col;
        }
        throw Error(ErrorKind::Parse, path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

/// Scalar from "p/q" text or a JSON number; numbers are read through their decimal text.
template <class S>
S scalar_from_json(const json& v, const std::string& where)
{
    if (v.is_string()) return from_rational<S>(parse_rational(v.get<std::string>()));
    if (v.is_number_integer()) return from_rational<S>(Rational(v.dump()));
    if (v.is_number_float()) {
        if constexpr (ScalarTraits<S>::exact) return parse_rational(v.dump());
        else return v.get<double>();
    }
    throw Error(ErrorKind::Schema, where + ": expected a number or \"p/q\" string");
}

inline std::string field_of(const json& doc, const std::string& what)
{
    if (!doc.contains("field")) return "rational";
    std::string f = doc.at("field").get<std::string>();
    if (f != "rational" && f != "float") throw Error(ErrorKind::Schema, what + ".field: must be rational or float");
    return f;
}

/// Exact values as "p/q" text, floats as numbers (shortest round trip).
template <class S>
json scalar_json(const S& x)
{
    if constexpr (ScalarTraits<S>::exact) return to_string(x);
    else return x;
}

template <class S>
json vec_json(const Vec<S>& v)
{
    json a = json::array();
    for (const auto& x : v) a.push_back(scalar_json(x));
    return a;
}

template <class S>
Algebra<S> algebra_from_json(const json& doc, double tol = kDefaultTol)
{
    if (!doc.is_object()) throw Error(ErrorKind::Schema, "algebra: expected an object");
    if (!doc.contains("dim") || !doc.at("dim").is_number_unsigned() || doc.at("dim").get<std::size_t>() == 0)
        throw Error(ErrorKind::Schema, "algebra.dim: expected a positive integer");
    const std::size_t n = doc.at("dim").get<std::size_t>();
    Tensor3<S> c(n);
    if (doc.contains("products")) {
        const json& ps = doc.at("products");
        if (!ps.is_array()) throw Error(ErrorKind::Schema, "algebra.products: expected an array");
        for (std::size_t t = 0; t < ps.size(); ++t) {
            std::string where = "algebra.products[" + std::to_string(t) + "]";
            const json& p = ps[t];
            if (!p.is_object() || !p.contains("i") || !p.contains("j") || !p.contains("coeffs"))
                throw Error(ErrorKind::Schema, where + ": needs i, j and coeffs");
            long i = p.at("i").get<long>(), j = p.at("j").get<long>();
            if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > n)
                throw Error(ErrorKind::Schema, where + ": index out of range 1.." + std::to_string(n));
            const json& co = p.at("coeffs");
            if (!co.is_array() || co.size() != n)
                throw Error(ErrorKind::Schema, where + ".coeffs: expected " + std::to_string(n) + " entries");
            for (std::size_t k = 0; k < n; ++k)
                c(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), k) =
                    scalar_from_json<S>(co[k], where + ".coeffs[" + std::to_string(k) + "]");
        }
    }
    return Algebra<S>::validate(std::move(c), tol);
}

template <class S>
Metric<S> metric_from_json(const json& doc, std::size_t n, double tol = kDefaultTol)
{
    if (!doc.is_object() || !doc.contains("entries") || !doc.at("entries").is_array())
        throw Error(ErrorKind::Schema, "metric.entries: expected an array");
    const json& e = doc.at("entries");
    if (e.size() != n * (n + 1) / 2)
        throw Error(ErrorKind::Schema, "metric.entries: expected " + std::to_string(n * (n + 1) / 2) +
                                           " upper-triangle entries for dimension " + std::to_string(n));
    Matrix<S> g(n, n);
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j, ++t) {
            g(i, j) = scalar_from_json<S>(e[t], "metric.entries[" + std::to_string(t) + "]");
            g(j, i) = g(i, j);
        }
    return Metric<S>::make(std::move(g), tol);
}

template <class S>
json algebra_to_json(const Algebra<S>& alg)
{
    const std::size_t n = alg.dim();
    json ps = json::array();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Vec<S> v = alg.product().at(i, j);
            if (all_zero(v, 0.0)) continue;
            json co = json::array();
            for (const auto& x : v) co.push_back(scalar_json(x));
            ps.push_back({{"i", i + 1}, {"j", j + 1}, {"coeffs", co}});
        }
    return {{"dim", n}, {"field", ScalarTraits<S>::name}, {"products", ps}};
}

inline json witness_json(const Witness& w)
{
    json idx = json::array();
    for (auto i : w.indices) idx.push_back(i);
    return {{"indices", idx}, {"residual", w.residual}};
}

inline json flag_json(const Flag& f)
{
    json j = {{"holds", f.holds}, {"witness", nullptr}, {"residual_norm", nullptr}};
    if (f.witness) j["witness"] = witness_json(*f.witness);
    if (f.residual_norm) j["residual_norm"] = *f.residual_norm;
    return j;
}

inline json classification_json(const ClassificationReport& r)
{
    json flags = json::object();
    for (const auto& [name, f] : r.flags) flags[name] = flag_json(f);
    json bs = {{"exists", r.balanced_solution.exists}};
    if (r.balanced_solution.exists) {
        bs["lambda"] = r.balanced_solution.lambda;
        bs["k_real"] = r.balanced_solution.k_real;
        if (r.balanced_solution.k_integer) bs["k_integer"] = *r.balanced_solution.k_integer;
    }
    // nlohmann objects sort keys; keep the flag order explicit as well
    json order = json::array();
    for (const auto& f : r.flags) order.push_back(f.first);
    return {{"backend", r.backend}, {"dim", r.dim},  {"kmax", r.kmax},          {"degenerate", r.degenerate},
            {"flags", flags},       {"flag_order", order}, {"balanced_solution", bs}};
}

template <class S>
json lift_json(const std::vector<LiftLevel<S>>& levels, const std::vector<std::string>& defects)
{
    json out = json::array();
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto& lv = levels[i];
        const double tol = lv.metric.tol();
        json j = {{"level", lv.level},
                  {"dim", lv.algebra.dim()},
                  {"alpha", vec_json(lv.dt.alpha)},
                  {"xi", vec_json(lv.dt.xi)}};
        json flags = {{"kahler", is_zero_tensor(lv.dt.gamma - lv.dt.gamma_star, tol)},
                      {"infinitely_balanced", all_zero(lv.dt.tr_gamma, tol) && all_zero(lv.dt.tr_gamma_star, tol)}};
        if (lv.level > 0) {
            j["theta"] = vec_json(lv.theta);
            flags["balanced"] = all_zero(lv.theta, tol);
            // the Bismut Ricci form of level j lives on the level j-1 data
            const auto& prev = levels[i - 1];
            flags["cyt"] = is_zero_matrix(ricci_bismut(prev.algebra, prev.metric, prev.dt), tol);
        }
        j["flags"] = std::move(flags);
        out.push_back(std::move(j));
    }
    json d = json::array();
    for (const auto& s : defects) d.push_back(s);
    return {{"levels", out}, {"closed_form_defects", d}};
}

inline json assignment_json(const catalog::Assignment& a)
{
    json j = json::object();
    for (const auto& [k, v] : a) j[k] = to_string(v);
    return j;
}

inline json tables_json(const catalog::TablesReport& rep)
{
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json samples = json::array();
        for (const auto& s : r.samples) {
            json j = {{"values", assignment_json(s.values)}, {"property", s.property}};
            if (!s.detail.empty()) j["witness"] = s.detail;
            samples.push_back(std::move(j));
        }
        json row = {{"index", r.row.index},
                    {"table", r.row.table},
                    {"entry", r.row.entry},
                    {"label", r.row.label()},
                    {"property", r.property},
                    {"status", r.status},
                    {"requested", r.requested},
                    {"tried", r.tried},
                    {"samples", samples},
                    {"negative", {{"status", r.negative_status},
                                  {"samples", r.negative_samples},
                                  {"property_failed", r.negative_failures}}}};
        if (!r.note.empty()) row["note"] = r.note;
        if (r.property == "balanced_nonkahler") row["lcb_consistent"] = r.lcb_consistent;
        rows.push_back(std::move(row));
    }
    return {{"schema", kSchemaVersion}, {"command", "tables"}, {"seed", rep.seed},
            {"samples_per_row", rep.samples_per_row}, {"all_pass", rep.all_pass()}, {"rows", rows}};
}

inline json fixtures_json(const std::vector<catalog::FixtureResult>& fx)
{
    json out = json::array();
    for (const auto& f : fx) {
        json claims = json::array();
        for (const auto& c : f.claims) claims.push_back({{"claim", c.claim}, {"holds", c.holds}, {"observed", c.observed}});
        out.push_back({{"name", f.name}, {"passed", f.passed()}, {"claims", claims}});
    }
    return out;
}

inline json check_json(const std::string& name, const chart::CheckResult& r, double tol)
{
    return {{"check", name},       {"holds", r.holds},   {"max_residual", r.max_residual},
            {"argmax", r.argmax},  {"points", r.points}, {"tolerance", tol},
            {"label", r.label}};
}

/// Pretty JSON with a trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace gkforge::io
