// tricomi_lab: command-line front end for the generalized-Tricomi spectral
// laboratory. One subcommand per experiment; every run writes a manifest
// JSON plus CSV tables into --out, stamped with the config hash and seed.
//
// Exit codes: 0 ok, 2 precondition violation, 3 numeric failure.

#include <csignal>
#include <cstdio>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tricomi/experiments.hpp"

using namespace tricomi;

namespace {

void handle_sigint(int) { g_interrupted.store(true); }

// --config JSON supplies defaults; explicit flags override.
void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.contains("m")) cfg.m = j["m"].get<int>();
    if (j.contains("n")) cfg.n = j["n"].get<int>();
    if (j.contains("kappa")) cfg.kappa = j["kappa"].get<double>();
    if (j.contains("sign")) cfg.sign = j["sign"].get<int>();
    if (j.contains("mu")) cfg.mu = j["mu"].get<double>();
    if (j.contains("grid")) cfg.grid = j["grid"].get<int>();
    if (j.contains("box")) cfg.box = j["box"].get<double>();
    if (j.contains("T")) cfg.T = j["T"].get<double>();
    if (j.contains("steps")) cfg.steps = j["steps"].get<int>();
    if (j.contains("amp")) cfg.amp = j["amp"].get<double>();
    if (j.contains("width")) cfg.width = j["width"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
}

} // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, handle_sigint);

    CLI::App app{"tricomi_lab: spectral laboratory for d_t^2 u - t^m Lap u = F(u)"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_file;
    std::vector<double> kappa_list;
    int trials = 3;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "JSON config file (flags override)");
        sub->add_option("--m", cfg.m, "degeneracy order m");
        sub->add_option("--n", cfg.n, "spatial dimension n");
        sub->add_option("--kappa", cfg.kappa, "nonlinearity power");
        sub->add_option("--sign", cfg.sign, "nonlinearity sign (+1/-1)");
        sub->add_option("--mu", cfg.mu, "auxiliary exponent mu");
        sub->add_option("--grid", cfg.grid, "grid points per axis (power of two)");
        sub->add_option("--box", cfg.box, "box edge length L");
        sub->add_option("--T", cfg.T, "final time");
        sub->add_option("--steps", cfg.steps, "time steps");
        sub->add_option("--amp", cfg.amp, "data amplitude");
        sub->add_option("--width", cfg.width, "data bump width");
        sub->add_option("--seed", cfg.seed, "rng seed");
        sub->add_option("--out", cfg.out, "output directory");
    };

    auto* c_exp = app.add_subcommand("exponents", "exponent table / theorem tuples");
    add_common(c_exp);
    c_exp->add_option("--kappa-list", kappa_list, "evaluate several kappa values");

    auto* c_prop = app.add_subcommand("propagator-check", "V0/V1 vs adaptive ODE oracle");
    add_common(c_prop);

    auto* c_lin = app.add_subcommand("linear-demo", "homogeneous solve + cone report");
    add_common(c_lin);

    auto* c_str = app.add_subcommand("strichartz-probe", "homogeneous Strichartz ratio ladder");
    add_common(c_str);

    auto* c_uni = app.add_subcommand("uniformity-probe", "dyadic operator norm uniformity");
    add_common(c_uni);
    c_uni->add_option("--trials", trials, "random trials per shell");

    auto* c_pic = app.add_subcommand("picard", "semilinear Picard iteration");
    add_common(c_pic);

    auto* c_life = app.add_subcommand("lifespan-scaling", "empirical lifespan x dilation family");
    add_common(c_life);

    std::string plot_csv, plot_kind = "contraction", plot_out = "plot.svg";
    auto* c_plot = app.add_subcommand("plot", "render a CSV as a static SVG");
    c_plot->add_option("csv", plot_csv, "input CSV")->required();
    c_plot->add_option("--kind", plot_kind, "contraction|ratio-sweep|uniformity");
    c_plot->add_option("--svg", plot_out, "output SVG path");

    CLI11_PARSE(app, argc, argv);

    auto flag_given = [&](const std::string& name) {
        CLI::App* sub = app.get_subcommands().front();
        auto* opt = sub->get_option_no_throw(name);
        return opt && opt->count() > 0;
    };

    try {
        // re-parse flags after config defaults: CLI11 already stored flag
        // values into cfg, so apply the file first only where flags were
        // not given. Simplest robust order: snapshot flag-provided values,
        // load file, re-apply snapshot.
        if (!config_file.empty()) {
            ExperimentConfig flag_values = cfg;
            apply_config_file(cfg, config_file);
            if (flag_given("--m")) cfg.m = flag_values.m;
            if (flag_given("--n")) cfg.n = flag_values.n;
            if (flag_given("--kappa")) cfg.kappa = flag_values.kappa;
            if (flag_given("--sign")) cfg.sign = flag_values.sign;
            if (flag_given("--mu")) cfg.mu = flag_values.mu;
            if (flag_given("--grid")) cfg.grid = flag_values.grid;
            if (flag_given("--box")) cfg.box = flag_values.box;
            if (flag_given("--T")) cfg.T = flag_values.T;
            if (flag_given("--steps")) cfg.steps = flag_values.steps;
            if (flag_given("--amp")) cfg.amp = flag_values.amp;
            if (flag_given("--width")) cfg.width = flag_values.width;
            if (flag_given("--seed")) cfg.seed = flag_values.seed;
            if (flag_given("--out")) cfg.out = flag_values.out;
        }
        // lifespan searches need data strong enough to leave the contraction
        // window; the generic small-data default would never bracket
        if (c_life->parsed() && !flag_given("--amp") && cfg.amp < 0.1) cfg.amp = 2.4;

        if (c_exp->parsed()) {
            cfg.experiment = "exponents";
            if (kappa_list.empty()) kappa_list = {cfg.kappa};
            return run_exponents(cfg, kappa_list);
        }
        if (c_prop->parsed()) {
            cfg.experiment = "propagator-check";
            return run_propagator_check(cfg);
        }
        if (c_lin->parsed()) {
            cfg.experiment = "linear-demo";
            return run_linear_demo(cfg);
        }
        if (c_str->parsed()) {
            cfg.experiment = "strichartz-probe";
            return run_strichartz_probe(cfg);
        }
        if (c_uni->parsed()) {
            cfg.experiment = "uniformity-probe";
            return run_uniformity_probe(cfg, trials);
        }
        if (c_pic->parsed()) {
            cfg.experiment = "picard";
            return run_picard(cfg);
        }
        if (c_life->parsed()) {
            cfg.experiment = "lifespan-scaling";
            return run_lifespan_scaling(cfg);
        }
        if (c_plot->parsed()) {
            return run_plot(plot_csv, plot_kind, plot_out);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "precondition violated: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "precondition violated: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
