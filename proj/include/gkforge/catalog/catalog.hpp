#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gkforge/chart/expr.hpp"
#include "gkforge/classify.hpp"
#include "gkforge/parallel.hpp"
#include "gkforge/phase.hpp"

namespace gkforge::catalog {

using json = nlohmann::json;
using Assignment = std::map<std::string, Rational>;

struct Range {
    Rational lo, hi;
};

struct Term {
    std::size_t i = 0, j = 0;  // 0-based
    std::string rhs;
};

/// One three-dimensional Novikov algebra of the catalog.
struct Entry {
    std::string id, name;
    std::vector<std::string> params;
    std::vector<Term> products;      // e_i . e_j
    std::vector<Term> phi_brackets;  // [f_i, f_j], i < j
    std::vector<std::string> errata;
};

struct Row {
    std::size_t index = 0;  // position in the row list
    int table = 0;
    std::string entry;
    std::map<std::string, std::string> fixed;
    std::map<std::string, std::vector<std::string>> choices;
    std::vector<std::pair<std::string, std::string>> assign;
    std::vector<std::string> conditions;
    std::map<std::string, Range> ranges;
    std::string review;  // known problem with the printed row; failures report "review"

    bool unconstrained() const { return assign.empty() && conditions.empty(); }
    std::string label() const
    {
        std::string s = "T" + std::to_string(table) + " " + entry;
        for (const auto& [k, v] : fixed) s += " " + k + "=" + v;
        for (const auto& [k, v] : choices) {
            s += " " + k + " in {";
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
            s += "}";
        }
        return s;
    }
};

struct TableInfo {
    std::string property;
    bool iff = false;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> parse_pair(const std::string& key)
{
    auto comma = key.find(',');
    if (comma == std::string::npos) throw Error(ErrorKind::Schema, "bad index pair '" + key + "'");
    long a = std::stol(key.substr(0, comma)), b = std::stol(key.substr(comma + 1));
    if (a < 1 || b < 1) throw Error(ErrorKind::Schema, "indices are 1-based in '" + key + "'");
    return {static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1)};
}

inline Range parse_range(const json& j)
{
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::Schema, "range must be [lo, hi]");
    Range r{parse_rational(j[0].get<std::string>()), parse_rational(j[1].get<std::string>())};
    if (!(r.lo < r.hi)) throw Error(ErrorKind::Schema, "empty range");
    return r;
}

}  // namespace detail

class Catalog {
public:
    static Catalog parse(const std::string& text)
    {
        json d;
        try {
            d = json::parse(text);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::Parse, std::string("catalog: ") + e.what());
        }
        try {
            return from_json(d);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::Schema, std::string("catalog: ") + e.what());
        }
    }

    const std::vector<std::string>& variables() const { return vars_; }
    const std::vector<Entry>& entries() const { return entries_; }
    const std::vector<Row>& rows() const { return rows_; }
    const json& fixtures() const { return fixtures_; }
    const std::map<std::string, Range>& default_ranges() const { return ranges_; }

    const Entry& entry(const std::string& id) const
    {
        for (const auto& e : entries_)
            if (e.id == id) return e;
        throw Error(ErrorKind::Schema, "unknown catalog entry " + id);
    }
    const TableInfo& table(int t) const
    {
        auto it = tables_.find(t);
        if (it == tables_.end()) throw Error(ErrorKind::Schema, "unknown table " + std::to_string(t));
        return it->second;
    }
    std::size_t var_index(const std::string& v) const
    {
        auto it = std::find(vars_.begin(), vars_.end(), v);
        if (it == vars_.end()) throw Error(ErrorKind::Schema, "unknown variable " + v);
        return static_cast<std::size_t>(it - vars_.begin());
    }
    Range range_for(const Row& row, const std::string& v) const
    {
        if (auto it = row.ranges.find(v); it != row.ranges.end()) return it->second;
        return ranges_.at(v);
    }

private:
    static Catalog from_json(const json& d)
    {
        Catalog c;
        if (d.value("schema", 0) != 1) throw Error(ErrorKind::Schema, "catalog schema must be 1");
        c.vars_ = d.at("variables").get<std::vector<std::string>>();
        for (const auto& v : c.vars_) c.ranges_[v] = detail::parse_range(d.at("default_ranges").at(v));
        for (const auto& e : d.at("entries")) {
            Entry en;
            en.id = e.at("id").get<std::string>();
            en.name = e.at("name").get<std::string>();
            en.params = e.at("params").get<std::vector<std::string>>();
            for (const auto& [k, v] : e.at("products").items()) {
                auto [i, j] = detail::parse_pair(k);
                en.products.push_back({i, j, v.get<std::string>()});
            }
            for (const auto& [k, v] : e.at("phi_brackets").items()) {
                auto [i, j] = detail::parse_pair(k);
                en.phi_brackets.push_back({i, j, v.get<std::string>()});
            }
            if (e.contains("errata")) en.errata = e.at("errata").get<std::vector<std::string>>();
            c.entries_.push_back(std::move(en));
        }
        for (const auto& [k, v] : d.at("tables").items())
            c.tables_[std::stoi(k)] = {v.at("property").get<std::string>(), v.at("iff").get<bool>()};
        for (const auto& r : d.at("rows")) {
            Row row;
            row.index = c.rows_.size();
            row.table = r.at("table").get<int>();
            row.entry = r.at("entry").get<std::string>();
            c.entry(row.entry);
            c.table(row.table);
            if (r.contains("fixed")) row.fixed = r.at("fixed").get<std::map<std::string, std::string>>();
            if (r.contains("choices"))
                row.choices = r.at("choices").get<std::map<std::string, std::vector<std::string>>>();
            if (r.contains("assign"))
                for (const auto& a : r.at("assign")) row.assign.emplace_back(a.at(0).get<std::string>(), a.at(1).get<std::string>());
            if (r.contains("conditions")) row.conditions = r.at("conditions").get<std::vector<std::string>>();
            if (r.contains("ranges"))
                for (const auto& [k, v] : r.at("ranges").items()) row.ranges[k] = detail::parse_range(v);
            row.review = r.value("review", std::string());
            c.rows_.push_back(std::move(row));
        }
        if (d.contains("fixtures")) c.fixtures_ = d.at("fixtures");
        return c;
    }

    std::vector<std::string> vars_;
    std::map<std::string, Range> ranges_;
    std::vector<Entry> entries_;
    std::map<int, TableInfo> tables_;
    std::vector<Row> rows_;
    json fixtures_;
};

// ---------------------------------------------------------------------------------------------

namespace detail {

/// Coefficients of a linear expression in the basis symbols, exactly.
inline Vec<Rational> linear_coeffs(const std::string& rhs, const std::vector<std::string>& params,
                                   const Assignment& values, const std::string& sym, std::size_t dim)
{
    std::vector<std::string> vars = params;
    for (std::size_t k = 0; k < dim; ++k) vars.push_back(sym + std::to_string(k + 1));
    Expr e = Expr::parse(rhs, vars);
    std::vector<Rational> x;
    for (const auto& p : params) {
        auto it = values.find(p);
        if (it == values.end()) throw Error(ErrorKind::InadmissibleParams, "missing parameter " + p);
        x.push_back(it->second);
    }
    x.resize(params.size() + dim, Rational(0));
    Vec<Rational> c(dim);
    for (std::size_t k = 0; k < dim; ++k) c[k] = e.diff(params.size() + k).eval_exact(x);
    // linearity check at a generic point
    Rational expect(0);
    for (std::size_t k = 0; k < dim; ++k) {
        x[params.size() + k] = Rational(static_cast<long>(2 * k + 3), 7);
        expect += c[k] * x[params.size() + k];
    }
    if (e.eval_exact(x) != expect) throw Error(ErrorKind::Schema, "'" + rhs + "' is not linear in " + sym + "_k");
    return c;
}

}  // namespace detail

inline Tensor3<Rational> structure_constants(const Entry& e, const Assignment& params)
{
    Tensor3<Rational> c(3);
    for (const auto& t : e.products) {
        Vec<Rational> v = detail::linear_coeffs(t.rhs, e.params, params, "e", 3);
        for (std::size_t k = 0; k < 3; ++k) c(t.i, t.j, k) = v[k];
    }
    return c;
}

/// Validated algebra; InadmissibleParams if the parameters leave the Novikov class.
inline Algebra<Rational> instantiate(const Entry& e, const Assignment& params)
{
    auto c = structure_constants(e, params);
    std::optional<Algebra<Rational>> alg;
    try {
        alg = Algebra<Rational>::validate(std::move(c));
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::NotLeftSymmetric) throw;
        throw Error(ErrorKind::InadmissibleParams, e.id + " is not left-symmetric at these parameters");
    }
    if (!alg->novikov())
        throw Error(ErrorKind::InadmissibleParams, e.id + " is not Novikov at these parameters");
    return *alg;
}

struct BracketCheck {
    bool match = true;
    std::string witness;  // "[f_i,f_j]" of the first mismatch
};

/// Compares the stated Phi-brackets with the bracket of phase(instantiate(e)).
inline BracketCheck check_phi_brackets(const Entry& e, const Assignment& params)
{
    auto alg = instantiate(e, params);
    auto ps = phase(alg, Metric<Rational>::identity(3));
    Tensor3<Rational> expected(6);
    for (const auto& t : e.phi_brackets) {
        Vec<Rational> v = detail::linear_coeffs(t.rhs, e.params, params, "f", 6);
        for (std::size_t k = 0; k < 6; ++k) {
            expected(t.i, t.j, k) = v[k];
            expected(t.j, t.i, k) = -v[k];
        }
    }
    BracketCheck r;
    const auto& got = ps.algebra.bracket();
    for (std::size_t i = 0; i < 6 && r.match; ++i)
        for (std::size_t j = i + 1; j < 6 && r.match; ++j)
            if (got.at(i, j) != expected.at(i, j)) {
                r.match = false;
                r.witness = "[f" + std::to_string(i + 1) + ",f" + std::to_string(j + 1) + "]";
            }
    return r;
}

inline Matrix<Rational> metric_matrix(const Assignment& v)
{
    static const char* names[3][3] = {{"g11", "g12", "g13"}, {"g12", "g22", "g23"}, {"g13", "g23", "g33"}};
    Matrix<Rational> g(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) g(i, j) = v.at(names[i][j]);
    return g;
}

inline bool evaluate_property(const std::string& prop, const ClassificationReport& r)
{
    if (prop == "kahler") return r.holds("kahler");
    if (prop == "gauduchon") return r.holds("gauduchon");
    if (prop == "infinitely_balanced") return r.holds("infinitely_balanced");
    if (prop == "balanced_nonkahler") return r.holds("balanced_1") && !r.holds("kahler");
    if (prop == "pluriclosed_nonkahler") return r.holds("pluriclosed") && !r.holds("kahler");
    if (prop == "cyt_not_infinitely_balanced") return r.holds("cyt") && !r.holds("infinitely_balanced");
    throw Error(ErrorKind::Schema, "unknown property " + prop);
}

// ---------------------------------------------------------------------------------------------
// Sampling

struct SampleSet {
    std::vector<Assignment> samples;
    std::size_t tried = 0;
};

namespace detail {

struct CompiledRow {
    std::vector<std::pair<std::size_t, Expr>> assign;
    struct Cond {
        Expr lhs, rhs;
        bool strict_less;  // "<" when true, "!=" otherwise
    };
    std::vector<Cond> conds;
};

inline CompiledRow compile(const Catalog& cat, const Row& row)
{
    CompiledRow c;
    const auto& vars = cat.variables();
    for (const auto& [v, rhs] : row.assign) c.assign.emplace_back(cat.var_index(v), Expr::parse(rhs, vars));
    for (const auto& s : row.conditions) {
        std::size_t p = s.find("!=");
        bool less = false;
        std::size_t len = 2;
        if (p == std::string::npos) {
            p = s.find('<');
            less = true;
            len = 1;
        }
        if (p == std::string::npos) throw Error(ErrorKind::Schema, "condition needs < or !=: " + s);
        c.conds.push_back({Expr::parse(s.substr(0, p), vars), Expr::parse(s.substr(p + len), vars), less});
    }
    return c;
}

inline std::vector<Rational> to_vector(const Catalog& cat, const Assignment& a)
{
    std::vector<Rational> x(cat.variables().size(), Rational(0));
    for (const auto& [k, v] : a) x[cat.var_index(k)] = v;
    return x;
}

// strict inequalities keep this relative gap so rows are not classified on a knife edge
inline const Rational kStrictMargin(1, 100);

/// Exact comparison when possible, double otherwise (sqrt of non-squares).
inline bool condition_holds(const CompiledRow::Cond& c, const std::vector<Rational>& x)
{
    try {
        Rational l = c.lhs.eval_exact(x), r = c.rhs.eval_exact(x);
        if (!c.strict_less) return l != r;
        Rational scale = std::max({Rational(1), Rational(abs(l)), Rational(abs(r))});
        return l + scale * kStrictMargin < r;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Irrational) throw;
        std::vector<double> xd;
        for (const auto& q : x) xd.push_back(q.get_d());
        double l = c.lhs.eval(xd), r = c.rhs.eval(xd);
        double scale = std::max({1.0, std::fabs(l), std::fabs(r)});
        return c.strict_less ? l + scale * kStrictMargin.get_d() < r : std::fabs(l - r) > 1e-9 * scale;
    }
}

inline bool satisfies(const CompiledRow& c, const std::vector<Rational>& x)
{
    try {
        for (const auto& [v, e] : c.assign)
            if (x[v] != e.eval_exact(x)) return false;
        for (const auto& cond : c.conds)
            if (!condition_holds(cond, x)) return false;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::InadmissibleParams) throw;
        return false;
    }
    return true;
}

inline Rational draw(std::mt19937_64& rng, const Range& r)
{
    // interior grid point, away from both ends
    const long steps = 24;
    long m = std::uniform_int_distribution<long>(1, steps - 1)(rng);
    Rational q = r.lo + (r.hi - r.lo) * Rational(m, steps);
    q.canonicalize();
    return q;
}

inline std::uint64_t row_seed(std::uint64_t seed, std::size_t row, std::uint64_t salt)
{
    std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(salt)};
    std::uint64_t out[1];
    std::uint32_t w[2];
    s.generate(w, w + 2);
    out[0] = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
    return out[0];
}

inline bool admissible(const Entry& e, const Assignment& a, const Matrix<Rational>& g)
{
    if (!positive_definite(g)) return false;
    try {
        instantiate(e, a);
    } catch (const Error& err) {
        if (err.kind() == ErrorKind::InadmissibleParams) return false;
        throw;
    }
    return true;
}

}  // namespace detail

/// Deterministic rejection sampling of rational points satisfying the row exactly.
/// violating = true draws every metric entry freely and keeps only points that break the row.
inline SampleSet sample_row(const Catalog& cat, const Row& row, std::size_t count, std::uint64_t seed,
                            bool violating = false, std::size_t budget = 40000)
{
    const Entry& entry = cat.entry(row.entry);
    auto comp = detail::compile(cat, row);
    std::mt19937_64 rng(detail::row_seed(seed, row.index, violating ? 2 : 1));
    std::set<std::string> assigned;
    if (!violating)
        for (const auto& [v, _] : row.assign) assigned.insert(v);

    std::vector<std::string> free;
    for (const auto& p : entry.params)
        if (!row.fixed.count(p) && !row.choices.count(p)) free.push_back(p);
    for (const char* g : {"g11", "g12", "g13", "g22", "g23", "g33"})
        if (!assigned.count(g)) free.push_back(g);

    SampleSet out;
    while (out.samples.size() < count && out.tried < budget) {
        ++out.tried;
        Assignment a;
        for (const auto& [k, v] : row.fixed) a[k] = parse_rational(v);
        for (const auto& [k, v] : row.choices) a[k] = parse_rational(v[out.samples.size() % v.size()]);
        for (const auto& v : free) a[v] = detail::draw(rng, cat.range_for(row, v));
        std::vector<Rational> x = detail::to_vector(cat, a);
        bool ok = true;
        if (!violating) {
            try {
                for (const auto& [v, e] : comp.assign) x[v] = e.eval_exact(x);
            } catch (const Error& err) {
                if (err.kind() != ErrorKind::InadmissibleParams) throw;
                ok = false;
            }
            if (!ok) continue;
            for (const auto& [v, _] : row.assign) a[v] = x[cat.var_index(v)];
            if (!detail::satisfies(comp, x)) continue;
        } else if (detail::satisfies(comp, x)) {
            continue;
        }
        if (!detail::admissible(entry, a, metric_matrix(a))) continue;
        out.samples.push_back(std::move(a));
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Reproduction

struct SampleOutcome {
    Assignment values;
    bool property = false;
    std::string detail;  // deciding flag and witness when the property is off
};

struct RowReport {
    Row row;
    std::string property;
    std::string status;  // pass, fail, review
    std::string note;
    std::size_t requested = 0;
    std::vector<SampleOutcome> samples;
    std::size_t tried = 0;
    // negative controls (if-and-only-if tables)
    std::string negative_status;  // pass, fail, n/a, review
    std::size_t negative_samples = 0, negative_failures = 0;
    bool lcb_consistent = true;  // balanced rows: every passing sample has d xi = 0
};

struct TablesReport {
    std::uint64_t seed = 0;
    std::size_t samples_per_row = 0;
    std::vector<RowReport> rows;

    bool all_pass(bool allow_review = true) const
    {
        for (const auto& r : rows) {
            if (r.status == "fail" || (!allow_review && r.status == "review")) return false;
            if (r.negative_status == "fail") return false;
        }
        return true;
    }
};

namespace detail {

inline std::string describe_failure(const std::string& prop, const ClassificationReport& r)
{
    auto flag_text = [&](const std::string& name) {
        const Flag& f = r.flag(name);
        std::string s = name + "=" + (f.holds ? "true" : "false");
        if (f.witness) {
            s += " at (";
            for (std::size_t i = 0; i < f.witness->indices.size(); ++i)
                s += (i ? "," : "") + std::to_string(f.witness->indices[i]);
            s += ") residual " + f.witness->residual;
        }
        return s;
    };
    if (prop == "balanced_nonkahler") return flag_text("balanced_1") + "; " + flag_text("kahler");
    if (prop == "pluriclosed_nonkahler") return flag_text("pluriclosed") + "; " + flag_text("kahler");
    if (prop == "cyt_not_infinitely_balanced") return flag_text("cyt") + "; " + flag_text("infinitely_balanced");
    return flag_text(prop);
}

}  // namespace detail

inline RowReport reproduce_row(const Catalog& cat, const Row& row, std::size_t count, std::uint64_t seed)
{
    const TableInfo& ti = cat.table(row.table);
    const Entry& entry = cat.entry(row.entry);
    RowReport rep;
    rep.row = row;
    rep.property = ti.property;
    rep.requested = count;
    SampleSet s = sample_row(cat, row, count, seed);
    rep.tried = s.tried;
    for (auto& a : s.samples) {
        auto alg = instantiate(entry, a);
        auto g = Metric<Rational>::make(metric_matrix(a));
        auto cr = classify(alg, g, 1);
        SampleOutcome o;
        o.values = a;
        o.property = evaluate_property(ti.property, cr);
        if (!o.property) o.detail = detail::describe_failure(ti.property, cr);
        if (ti.property == "balanced_nonkahler" && o.property && !cr.holds("lcb")) rep.lcb_consistent = false;
        rep.samples.push_back(std::move(o));
    }
    bool all = std::all_of(rep.samples.begin(), rep.samples.end(), [](const auto& o) { return o.property; });
    if (rep.samples.size() < count) {
        rep.status = "review";
        rep.note = "found " + std::to_string(rep.samples.size()) + " of " + std::to_string(count) +
                   " admissible samples after " + std::to_string(s.tried) + " draws";
        if (!all) rep.status = "fail";
    } else {
        rep.status = all && rep.lcb_consistent ? "pass" : "fail";
    }
    if (!row.review.empty() && rep.status != "pass") {
        rep.status = "review";
        rep.note = row.review;
    }

    if (!ti.iff) {
        rep.negative_status = "n/a";
    } else if (row.unconstrained() && row.choices.empty()) {
        rep.negative_status = "n/a";
        if (rep.note.empty()) rep.note = "holds for every metric; no violating metric exists";
    } else {
        SampleSet v = sample_row(cat, row, count, seed, true);
        rep.negative_samples = v.samples.size();
        for (auto& a : v.samples) {
            auto cr = classify(instantiate(entry, a), Metric<Rational>::make(metric_matrix(a)), 1);
            if (!evaluate_property(ti.property, cr)) ++rep.negative_failures;
        }
        if (v.samples.size() < count) rep.negative_status = "review";
        else rep.negative_status = 5 * rep.negative_failures >= 4 * count ? "pass" : "fail";
    }
    return rep;
}

inline TablesReport reproduce_tables(const Catalog& cat, const std::set<int>& which, std::size_t samples_per_row,
                                     std::uint64_t seed)
{
    TablesReport rep;
    rep.seed = seed;
    rep.samples_per_row = samples_per_row;
    std::vector<const Row*> todo;
    for (const auto& r : cat.rows())
        if (which.empty() || which.count(r.table)) todo.push_back(&r);
    rep.rows.resize(todo.size());
    parallel_for(todo.size(), [&](std::size_t i) { rep.rows[i] = reproduce_row(cat, *todo[i], samples_per_row, seed); });
    return rep;
}

}  // namespace gkforge::catalog
