#include <CLI11.hpp>

#include "gkforge/cli/run.hpp"

int main(int argc, char** argv)
{
    using gkforge::cli::RunConfig;
    CLI::App app{"gkforge: generalized Kahler structures on tangent bundles of affine-Riemann manifolds"};
    app.require_subcommand(1);
    RunConfig cfg;
    double tol = 0;
    std::size_t samples = 0;
    std::string backend;

    auto add_common = [&](CLI::App* s) {
        s->add_option("--out", cfg.out_path, "write the JSON report here instead of stdout");
        s->add_option("--tol", tol, "float tolerance");
    };
    auto add_instance = [&](CLI::App* s) {
        s->add_option("--algebra", cfg.algebra_path, "algebra JSON")->required();
        s->add_option("--metric", cfg.metric_path, "metric JSON")->required();
        s->add_option("--backend", backend, "rational or float (default: the algebra's field)");
    };

    auto* classify = app.add_subcommand("classify", "classify one (algebra, metric) instance");
    add_instance(classify);
    add_common(classify);
    classify->add_option("--kmax", cfg.kmax, "highest balanced level");
    classify->add_option("--expect", cfg.expect, "comma-separated flags that must hold");

    auto* lift = app.add_subcommand("lift", "iterate the phase construction and compare with closed forms");
    add_instance(lift);
    add_common(lift);
    lift->add_option("--k", cfg.k, "number of levels");

    auto* chart = app.add_subcommand("chart", "PDE checks for a metric in affine coordinates");
    add_common(chart);
    chart->add_option("--metric,--config", cfg.config_path, "chart JSON config")->required();
    chart->add_option("--check", cfg.check, "e.g. balanced:k=2,pluriclosed,hessian,ricci_nonnegative");
    chart->add_option("--k", cfg.k, "default level for balanced checks");
    chart->add_option("--samples", samples, "sample points");
    chart->add_option("--seed", cfg.seed, "sample seed");

    auto* tables = app.add_subcommand("tables", "reproduce catalog tables 3-8");
    add_common(tables);
    tables->add_option("--which", cfg.which, "comma-separated table numbers (default all)");
    tables->add_option("--samples", samples, "samples per row (default 10)");
    tables->add_option("--seed", cfg.seed, "master seed (default 42)");
    tables->add_option("--catalog", cfg.catalog_path, "catalog JSON instead of the embedded one");

    auto* fixtures = app.add_subcommand("fixtures", "run the named example fixtures");
    add_common(fixtures);
    fixtures->add_option("--catalog", cfg.catalog_path, "catalog JSON instead of the embedded one");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : gkforge::cli::kUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();
    if (sub->count("--tol")) cfg.tol = tol;
    if (sub->get_option_no_throw("--samples") && sub->count("--samples")) cfg.samples = samples;
    if (sub->get_option_no_throw("--backend") && sub->count("--backend")) cfg.backend = backend;
    return gkforge::cli::run(cfg);
}
