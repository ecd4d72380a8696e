// Command line front end: analytic entropy / drift / growth reports and
// Monte Carlo or exact-enumeration cross checks for nearest neighbour random
// walks on free products of finite Markov chains.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fpwalk/pipeline.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string preset;
    std::string format = "text";
    std::string out;
    double tol = 1.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    auto* cfg = cmd->add_option("--config", o.config, "product description file");
    auto* pre = cmd->add_option("--preset", o.preset, "built-in example")
                    ->check(CLI::IsMember(fpwalk::preset_names()));
    cfg->excludes(pre);
    pre->excludes(cfg);
    cmd->add_option("--format", o.format, "output format (text, json, csv)")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--out", o.out, "write the report to this file instead of stdout");
    cmd->add_option("--tol", o.tol, "scale factor applied to every check tolerance")
        ->check(CLI::PositiveNumber);
}

int emit(const fpwalk::Report& report, const CommonOpts& o) {
    if (!o.out.empty()) {
        std::ofstream file(o.out);
        if (!file) throw fpwalk::Error("cannot open output file '" + o.out + "'");
        report.write(file, o.format);
    } else {
        report.write(std::cout, o.format);
    }
    return report.all_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random walks on free products of finite Markov chains"};
    app.require_subcommand(1);

    CommonOpts common;
    fpwalk::SimConfig sim_cfg;
    fpwalk::OracleOptions oracle_opt;
    int growth_n_max = 12;
    bool no_growth = false;

    CLI::App* validate = app.add_subcommand("validate", "parse and sanity-check a product");
    add_common(validate, common);

    CLI::App* analyze = app.add_subcommand("analyze", "full analytic report");
    add_common(analyze, common);
    analyze->add_option("--n-max", growth_n_max, "sphere horizon for the growth section");
    analyze->add_flag("--no-growth", no_growth, "skip the growth section");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo walkers");
    add_common(simulate, common);
    simulate->add_option("--walkers", sim_cfg.walkers, "number of independent walkers");
    simulate->add_option("--horizon", sim_cfg.horizon, "steps per walker");
    simulate->add_option("--seed", sim_cfg.seed, "master seed");
    simulate->add_option("--threads", sim_cfg.threads, "worker threads");

    CLI::App* growth = app.add_subcommand("growth", "sphere sizes and growth rates");
    add_common(growth, common);
    growth->add_option("--n-max", growth_n_max, "largest sphere radius to enumerate");

    CLI::App* oracle = app.add_subcommand("oracle", "exact small-step enumeration checks");
    add_common(oracle, common);
    oracle->add_option("--horizon", oracle_opt.horizon, "number of exact steps");
    oracle->add_option("--z", oracle_opt.z, "evaluation point for the partial Green sum");
    oracle->add_option("--terms", oracle_opt.green_terms, "terms in the partial Green sum");
    oracle->add_option("--walkers", oracle_opt.walkers,
                       "also sample this many walkers and report total variation");
    oracle->add_option("--seed", oracle_opt.seed, "master seed for the sampled comparison");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (common.config.empty() == common.preset.empty()) {
        std::cerr << "error: give exactly one of --config or --preset\n";
        return 2;
    }

    try {
        const fpwalk::LoadedInput input = fpwalk::load_input(common.config, common.preset);
        fpwalk::AnalysisOptions options;
        options.tol_scale = common.tol;
        options.growth_n_max = growth_n_max;
        options.include_growth = !no_growth;

        fpwalk::Report report;
        if (validate->parsed())
            report = fpwalk::run_validate(input, options);
        else if (analyze->parsed())
            report = fpwalk::run_analyze(input, options);
        else if (simulate->parsed())
            report = fpwalk::run_simulate(input, sim_cfg, options);
        else if (growth->parsed())
            report = fpwalk::run_growth(input, options);
        else
            report = fpwalk::run_oracle(input, oracle_opt, options);
        return emit(report, common);
    } catch (const fpwalk::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const fpwalk::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
