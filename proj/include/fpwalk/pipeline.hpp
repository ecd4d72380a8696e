#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fpwalk/config_parse.hpp"
#include "fpwalk/entropy.hpp"
#include "fpwalk/enumerate.hpp"
#include "fpwalk/exit_chain.hpp"
#include "fpwalk/group_product.hpp"
#include "fpwalk/growth.hpp"
#include "fpwalk/presets.hpp"
#include "fpwalk/product_spec.hpp"
#include "fpwalk/report.hpp"
#include "fpwalk/simulate.hpp"
#include "fpwalk/tolerances.hpp"
#include "fpwalk/weights.hpp"

namespace fpwalk {

inline constexpr const char* kToolName = "fpwalk";
inline constexpr const char* kToolVersion = "1.0.0";

struct AnalysisOptions {
    double tol_scale = 1.0;
    int growth_n_max = 12;
    bool include_growth = true;
};

namespace detail {

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Finite-chain analysis
// ---------------------------------------------------------------------------

struct ChainAnalysis {
    FreeProductSpec spec;
    double certified_z = 0.0;
    WeightSolution weights;
    TypeChain types;
    ExitChainKernel kernel;
    double escape_rate = 0.0;
    MeanLetterLength mean_length;
    GreenDerivativeSums sums;
    EntropyTriple entropy;
    double green_origin = 0.0;
    double green_origin_alt = 0.0;
};

inline ChainAnalysis analyze_chain(const FreeProductSpec& spec,
                                   const AnalysisOptions& options = {}) {
    (void)options;
    ChainAnalysis a;
    a.spec = spec;
    validate_spec(spec);
    a.certified_z = certify_transience(spec);
    a.weights = solve_weights(spec, 1.0);
    weight_derivatives(spec, a.weights);
    a.types = build_type_chain(spec, a.weights);
    a.kernel = build_exit_chain(spec, a.weights, a.types);
    a.escape_rate = escape_rate_block(spec, a.weights, a.types);
    a.mean_length = mean_letter_length(spec, a.weights, a.types, a.kernel);
    a.sums = green_derivative_sums(spec, a.weights);
    a.entropy = entropy_triple(a.kernel, a.escape_rate, a.mean_length, a.sums);
    a.green_origin = product_green_origin(spec, a.weights);
    double inv_sum = 0.0;
    for (std::size_t i = 0; i < spec.alphas.size(); ++i)
        inv_sum += spec.alphas[i] / a.weights.weights[i];
    a.green_origin_alt =
        (static_cast<double>(spec.num_factors()) - 1.0) / (inv_sum - 1.0);
    return a;
}

namespace detail {

inline ordered_json spec_json(const FreeProductSpec& spec) {
    ordered_json j = ordered_json::object();
    j["num_factors"] = spec.num_factors();
    ordered_json factors = ordered_json::array();
    for (const auto& f : spec.factors) {
        ordered_json fj = ordered_json::object();
        fj["name"] = f.name;
        fj["states"] = f.states;
        factors.push_back(fj);
    }
    j["factors"] = factors;
    j["alphas"] = spec.alphas;
    return j;
}

inline ordered_json matrix_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

inline ordered_json header_json(const std::string& command, const std::string& source) {
    ordered_json j = ordered_json::object();
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["source"] = source;
    return j;
}

}  // namespace detail

inline void chain_body(Report& report, const ChainAnalysis& a, bool with_growth,
                       const GrowthReport* growth, const GrowthInequalities* ineq) {
    auto& b = report.body;
    b["input"] = detail::spec_json(a.spec);
    {
        ordered_json w = ordered_json::object();
        w["certified_radius"] = a.certified_z;
        w["values"] = a.weights.weights;
        w["derivatives"] = a.weights.weight_derivs;
        w["residual"] = a.weights.residual;
        w["iterations"] = a.weights.iterations;
        b["weights"] = w;
    }
    {
        ordered_json e = ordered_json::object();
        e["type_kernel"] = detail::matrix_json(a.types.kernel);
        e["type_stationary"] = a.types.stationary;
        e["stationarity_residual"] = a.types.stationary_residual;
        e["stationary_route_gap"] = a.types.route_gap;
        e["letter_count"] = static_cast<int>(a.kernel.letter_stationary.size());
        b["exit_chain"] = e;
    }
    {
        ordered_json r = ordered_json::object();
        r["escape_rate"] = a.escape_rate;
        r["mean_letter_length"] = a.mean_length.direct;
        r["mean_letter_length_route_gap"] = a.mean_length.route_gap;
        b["rates"] = r;
    }
    {
        ordered_json e = ordered_json::object();
        e["route_1"] = a.entropy.v1;
        e["route_2"] = a.entropy.v2;
        e["route_3"] = a.entropy.v3;
        e["spread"] = a.entropy.spread;
        e["exit_chain_rate"] = a.entropy.exit_chain_rate;
        b["entropy"] = e;
    }
    {
        ordered_json g = ordered_json::object();
        g["origin"] = a.green_origin;
        g["origin_alt"] = a.green_origin_alt;
        g["cross_gap"] = std::abs(a.green_origin - a.green_origin_alt);
        b["green"] = g;
    }
    if (with_growth && growth) {
        ordered_json g = ordered_json::object();
        g["lambda_block"] = growth->block.value;
        g["lambda_metric"] = growth->metric.value;
        g["growth_block"] = growth->g_block;
        g["growth_metric"] = growth->g_metric;
        g["spheres_block"] = growth->spheres_block;
        g["spheres_metric"] = growth->spheres_metric;
        if (ineq) {
            ordered_json iq = ordered_json::object();
            iq["block_bound"] = ineq->block_bound;
            iq["block_slack"] = ineq->block_slack;
            iq["metric_checked"] = ineq->metric_checked;
            if (ineq->metric_checked) {
                iq["metric_bound"] = ineq->metric_bound;
                iq["metric_slack"] = ineq->metric_slack;
            }
            g["inequalities"] = iq;
        }
        b["growth"] = g;
    }
}

inline void chain_checks(Report& report, const ChainAnalysis& a, double s,
                         const GrowthReport* growth, const GrowthInequalities* ineq) {
    report.add_bound_check("weight_residual", a.weights.residual, 0.0, tol::weight_residual * s);
    report.add_bound_check("stationarity_residual", a.types.stationary_residual, 0.0,
                           tol::stationarity * s);
    report.add_bound_check("stationary_route_gap", a.types.route_gap, 0.0,
                           tol::stationarity * s);
    report.add_bound_check("mean_length_route_gap", a.mean_length.route_gap, 0.0,
                           tol::route_gap * s);
    report.add_bound_check("entropy_three_way_spread", a.entropy.spread, 0.0,
                           tol::three_way_spread * s);
    report.add_bound_check("green_cross_gap",
                           std::abs(a.green_origin - a.green_origin_alt) /
                               std::max(1.0, std::abs(a.green_origin)),
                           0.0, tol::green_cross * s);
    report.add_flag_check("entropy_positive", a.entropy.v1 > 0.0);
    if (growth && ineq) {
        report.add_bound_check("entropy_le_block_growth_bound", a.entropy.v1, ineq->block_bound,
                               tol::growth_slack * s);
        report.add_bound_check("lambda_metric_le_lambda_block", growth->metric.value,
                               growth->block.value, tol::growth_slack * s);
    }
}

// ---------------------------------------------------------------------------
// Lamplighter-style group analysis (infinite factors, preset only)
// ---------------------------------------------------------------------------

struct Zz2Analysis {
    double xi = 0.0;
    ZZ2Values values;
    double fhat = 0.0;
    double fixed_point_residual = 0.0;
    double xi_equation_residual = 0.0;
    GroupEntropyReport entropy;
};

inline Zz2Analysis analyze_zz2(double rel_tol = 1e-6) {
    Zz2Analysis a;
    ZZ2Factor f1, f2;
    const std::vector<const GroupFactor*> factors{&f1, &f2};
    const std::vector<double> alphas{0.5, 0.5};
    a.xi = solve_zz2_xi(f1);
    a.values = f1.values(a.xi);
    a.fhat = a.values.fhat_a + a.values.fhat_b;
    a.fixed_point_residual =
        std::abs(a.fhat - (a.xi / 3.0) * (1.0 + a.fhat + a.fhat * a.fhat));
    a.xi_equation_residual = std::abs(1.0 - 2.0 * a.xi + (2.0 / 3.0) * a.xi * a.values.fa +
                                      (1.0 / 3.0) * a.xi * a.values.fc);
    a.entropy = entropy_groups(factors, alphas, {a.xi, a.xi}, rel_tol);
    return a;
}

inline void zz2_body(Report& report, const Zz2Analysis& a) {
    auto& b = report.body;
    {
        ordered_json in = ordered_json::object();
        in["num_factors"] = 2;
        in["factors"] = {"zxz2_a", "zxz2_b"};
        in["alphas"] = {0.5, 0.5};
        in["factor_kind"] = "integer-line with order-2 twist, nearest-neighbour walk";
        b["input"] = in;
    }
    {
        ordered_json w = ordered_json::object();
        w["xi"] = a.xi;
        w["fhat_a"] = a.values.fhat_a;
        w["fhat_b"] = a.values.fhat_b;
        w["fhat"] = a.fhat;
        w["first_visit_a"] = a.values.fa;
        w["first_visit_b"] = a.values.fb;
        w["first_visit_c"] = a.values.fc;
        w["quadratic_residual"] = a.values.quad_residual;
        w["fixed_point_residual"] = a.fixed_point_residual;
        w["equation_residual"] = a.xi_equation_residual;
        b["weights"] = w;
    }
    {
        ordered_json e = ordered_json::object();
        e["value"] = a.entropy.h;
        e["first_letter_mass"] = a.entropy.rho;
        e["truncation_level"] = a.entropy.truncation_level;
        e["tail_bound"] = a.entropy.tail;
        b["entropy"] = e;
    }
}

inline void zz2_checks(Report& report, const Zz2Analysis& a, double s) {
    report.add_bound_check("weight_equation_residual", a.xi_equation_residual, 0.0,
                           tol::weight_residual * 10 * s);
    report.add_bound_check("fhat_fixed_point_residual", a.fixed_point_residual, 0.0,
                           tol::weight_residual * 10 * s);
    report.add_bound_check("fhat_quadratic_residual", a.values.quad_residual, 0.0,
                           tol::weight_residual * 10 * s);
    report.add_check("xi_reference", a.xi, 0.55973, tol::preset_weight * s);
    report.add_check("fhat_reference", a.fhat, 0.24291, tol::preset_weight * s);
    report.add_check("entropy_reference", a.entropy.h, 1.14985, tol::preset_entropy_group * s);
}

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

struct LoadedInput {
    std::string source;
    std::string preset;  // empty when loaded from a file
    bool group_mode = false;
    FreeProductSpec spec;  // unused in group mode
};

inline LoadedInput load_input(const std::string& config_path, const std::string& preset) {
    LoadedInput in;
    if (!preset.empty()) {
        in.source = "preset:" + preset;
        in.preset = preset;
        if (is_group_preset(preset)) {
            in.group_mode = true;
        } else {
            in.spec = preset_spec(preset);
        }
    } else {
        in.source = config_path;
        in.spec = load_spec_file(config_path);
    }
    return in;
}

// ---------------------------------------------------------------------------
// Subcommand drivers
// ---------------------------------------------------------------------------

inline Report run_analyze(const LoadedInput& in, const AnalysisOptions& options) {
    detail::Stopwatch clock;
    Report report;
    report.body = ordered_json::object();
    ordered_json header = detail::header_json("analyze", in.source);

    if (in.group_mode) {
        const Zz2Analysis a = analyze_zz2();
        for (auto it = header.begin(); it != header.end(); ++it)
            report.body[it.key()] = it.value();
        zz2_body(report, a);
        zz2_checks(report, a, options.tol_scale);
    } else {
        const ChainAnalysis a = analyze_chain(in.spec, options);
        GrowthReport growth;
        GrowthInequalities ineq;
        const bool with_growth = options.include_growth;
        if (with_growth) {
            growth = growth_report(in.spec, options.growth_n_max);
            ineq = check_inequalities(a.entropy.v1, a.escape_rate, growth);
        }
        for (auto it = header.begin(); it != header.end(); ++it)
            report.body[it.key()] = it.value();
        chain_body(report, a, with_growth, with_growth ? &growth : nullptr,
                   with_growth ? &ineq : nullptr);
        chain_checks(report, a, options.tol_scale, with_growth ? &growth : nullptr,
                     with_growth ? &ineq : nullptr);
        if (in.preset == "paper-7.1") {
            const double s = options.tol_scale;
            report.add_check("escape_rate_reference", a.escape_rate, 0.41563,
                             tol::preset_rate * s);
            report.add_check("entropy_reference_route_1", a.entropy.v1, 0.32005,
                             tol::preset_entropy_chain * s);
            report.add_check("entropy_reference_route_2", a.entropy.v2, 0.32005,
                             tol::preset_entropy_chain * s);
            report.add_check("entropy_reference_route_3", a.entropy.v3, 0.32005,
                             tol::preset_entropy_chain * s);
        }
    }
    report.timing_ms["total"] = clock.ms();
    return report;
}

inline Report run_validate(const LoadedInput& in, const AnalysisOptions& options) {
    detail::Stopwatch clock;
    Report report;
    report.body = detail::header_json("validate", in.source);

    if (in.group_mode) {
        const Zz2Analysis a = analyze_zz2();
        zz2_body(report, a);
        zz2_checks(report, a, options.tol_scale);
        report.timing_ms["total"] = clock.ms();
        return report;
    }

    validate_spec(in.spec);
    report.body["input"] = detail::spec_json(in.spec);
    ordered_json factors = ordered_json::array();
    double worst_row = 0.0;
    for (std::size_t i = 0; i < in.spec.factors.size(); ++i) {
        const FactorValidation v = validate_factor(in.spec.factors[i]);
        ordered_json fj = ordered_json::object();
        fj["name"] = in.spec.factors[i].name;
        fj["states"] = v.states;
        fj["min_positive_probability"] = v.min_positive;
        fj["max_row_sum_error"] = v.max_row_sum_error;
        factors.push_back(fj);
        worst_row = std::max(worst_row, v.max_row_sum_error);
    }
    report.body["validation"] = factors;

    bool transient = true;
    double certified = 0.0;
    std::string gate_message;
    try {
        certified = certify_transience(in.spec);
    } catch (const TransienceGateFailed& e) {
        transient = false;
        gate_message = e.what();
    }
    ordered_json gate = ordered_json::object();
    gate["certified"] = transient;
    gate["certified_radius"] = certified;
    if (!transient) gate["message"] = gate_message;
    report.body["transience"] = gate;

    report.add_bound_check("row_sum_error", worst_row, 0.0,
                           tol::row_stochastic * options.tol_scale);
    report.add_flag_check("transience_certified", transient);
    report.timing_ms["total"] = clock.ms();
    return report;
}

inline Report run_growth(const LoadedInput& in, const AnalysisOptions& options) {
    if (in.group_mode)
        throw ValidationError("growth analysis needs finite factors; preset '" + in.preset +
                              "' has infinite ones");
    detail::Stopwatch clock;
    Report report;
    report.body = detail::header_json("growth", in.source);
    const ChainAnalysis a = analyze_chain(in.spec, options);
    const GrowthReport growth = growth_report(in.spec, options.growth_n_max);
    const GrowthInequalities ineq = check_inequalities(a.entropy.v1, a.escape_rate, growth);

    report.body["input"] = detail::spec_json(in.spec);
    ordered_json g = ordered_json::object();
    g["n_max"] = options.growth_n_max;
    g["lambda_block"] = growth.block.value;
    g["lambda_block_residual"] = growth.block.residual;
    g["lambda_metric"] = growth.metric.value;
    g["lambda_metric_residual"] = growth.metric.residual;
    g["growth_block"] = growth.g_block;
    g["growth_metric"] = growth.g_metric;
    g["spheres_block"] = growth.spheres_block;
    g["spheres_metric"] = growth.spheres_metric;
    report.body["growth"] = g;
    ordered_json r = ordered_json::object();
    r["escape_rate"] = a.escape_rate;
    r["entropy"] = a.entropy.v1;
    r["block_bound"] = ineq.block_bound;
    r["block_slack"] = ineq.block_slack;
    report.body["entropy_vs_growth"] = r;

    const double s = options.tol_scale;
    report.add_bound_check("entropy_le_block_growth_bound", a.entropy.v1, ineq.block_bound,
                           tol::growth_slack * s);
    report.add_bound_check("lambda_metric_le_lambda_block", growth.metric.value,
                           growth.block.value, tol::growth_slack * s);
    report.add_bound_check("lambda_block_residual", growth.block.residual, 0.0, 1e-9 * s);
    report.add_bound_check("lambda_metric_residual", growth.metric.residual, 0.0, 1e-9 * s);
    report.timing_ms["total"] = clock.ms();
    return report;
}

inline Report run_simulate(const LoadedInput& in, const SimConfig& cfg,
                           const AnalysisOptions& options) {
    if (in.group_mode)
        throw ValidationError("simulation needs finite factors; preset '" + in.preset +
                              "' has infinite ones");
    detail::Stopwatch clock;
    Report report;
    report.body = detail::header_json("simulate", in.source);
    validate_spec(in.spec);

    bool analytic_ok = true;
    ChainAnalysis a;
    std::string analytic_message;
    try {
        a = analyze_chain(in.spec, options);
    } catch (const TransienceGateFailed& e) {
        analytic_ok = false;
        analytic_message = e.what();
    }

    const SimResult sim = run_walkers(in.spec, cfg, analytic_ok ? &a.kernel : nullptr);

    report.body["input"] = detail::spec_json(in.spec);
    {
        ordered_json c = ordered_json::object();
        c["walkers"] = cfg.walkers;
        c["horizon"] = cfg.horizon;
        c["seed"] = cfg.seed;
        c["threads"] = cfg.threads;
        report.body["config"] = c;
    }
    const auto est_json = [](const SimEstimate& e) {
        ordered_json j = ordered_json::object();
        j["value"] = e.value;
        j["stderr"] = e.se;
        j["n"] = e.n;
        return j;
    };
    {
        ordered_json e = ordered_json::object();
        e["block_speed"] = est_json(sim.block_speed);
        e["length_speed"] = est_json(sim.length_speed);
        e["first_visit_speed"] = est_json(sim.first_visit_speed);
        e["metric_speed"] = est_json(sim.metric_speed);
        if (analytic_ok) e["exit_entropy"] = est_json(sim.exit_entropy);
        report.body["estimates"] = e;
    }
    {
        const auto conc = concentration_check(sim.block_rate_per_walker,
                                              analytic_ok ? a.escape_rate
                                                          : sim.block_speed.value);
        ordered_json cj = ordered_json::array();
        for (const auto& c : conc) {
            ordered_json e = ordered_json::object();
            e["epsilon"] = c.epsilon;
            e["fraction_within"] = c.fraction;
            e["stderr"] = c.se;
            cj.push_back(e);
        }
        report.body["concentration"] = cj;
    }

    if (analytic_ok) {
        ordered_json an = ordered_json::object();
        an["escape_rate"] = a.escape_rate;
        an["entropy"] = a.entropy.v1;
        an["exit_chain_rate"] = a.entropy.exit_chain_rate;
        report.body["analytic"] = an;

        const double s = options.tol_scale;
        const auto three_se = [](const SimEstimate& e) { return 3.0 * e.se; };
        report.add_check("block_speed_vs_analytic", sim.block_speed.value, a.escape_rate,
                         three_se(sim.block_speed) * s);
        report.add_check("length_speed_vs_entropy", sim.length_speed.value, a.entropy.v1,
                         three_se(sim.length_speed) * s);
        report.add_check("exit_entropy_vs_analytic", sim.exit_entropy.value,
                         a.entropy.exit_chain_rate, three_se(sim.exit_entropy) * s);

        // Empirical exit-transition rows against the analytic kernel, one
        // total-variation figure per source type with enough transitions.
        const int r = in.spec.num_factors();
        const int L = a.kernel.letters.total();
        double worst_tv = 0.0;
        long long min_count = -1;
        for (int i = 0; i < r; ++i) {
            unsigned long long total = 0;
            for (int l = 0; l < L; ++l)
                total += sim.transition_counts[static_cast<std::size_t>(i) * L + l];
            if (total < 100000ull) continue;
            double tv = 0.0;
            for (int l = 0; l < L; ++l) {
                const double emp =
                    static_cast<double>(
                        sim.transition_counts[static_cast<std::size_t>(i) * L + l]) /
                    static_cast<double>(total);
                tv += std::abs(emp - a.kernel.q(i, l));
            }
            tv *= 0.5;
            worst_tv = std::max(worst_tv, tv);
            min_count = (min_count < 0) ? static_cast<long long>(total)
                                        : std::min(min_count, static_cast<long long>(total));
        }
        ordered_json kj = ordered_json::object();
        kj["worst_row_tv"] = worst_tv;
        kj["min_row_transitions"] = min_count;
        report.body["exit_kernel"] = kj;
        if (min_count > 0)
            report.add_bound_check("exit_kernel_row_tv", worst_tv, 0.0, tol::sim_kernel_tv * s);
    } else {
        ordered_json an = ordered_json::object();
        an["available"] = false;
        an["message"] = analytic_message;
        report.body["analytic"] = an;
    }

    report.timing_ms["total"] = clock.ms();
    return report;
}

struct OracleOptions {
    int horizon = 6;
    double z = 0.5;
    int green_terms = 34;
    long long walkers = 0;  // 0 = skip the sampled comparison
    std::uint64_t seed = 1;
    std::size_t max_words = 10000000;
};

inline Report run_oracle(const LoadedInput& in, const OracleOptions& opt,
                         const AnalysisOptions& options) {
    if (in.group_mode)
        throw ValidationError("exact enumeration needs finite factors; preset '" + in.preset +
                              "' has infinite ones");
    detail::Stopwatch clock;
    Report report;
    report.body = detail::header_json("oracle", in.source);
    validate_spec(in.spec);
    report.body["input"] = detail::spec_json(in.spec);
    const double s = options.tol_scale;

    const EnumerationResult exact = exact_distribution(in.spec, opt.horizon, opt.max_words);
    double mass = 0.0;
    for (const auto& [w, p] : exact.distribution) mass += p;
    {
        ordered_json e = ordered_json::object();
        e["horizon"] = opt.horizon;
        e["support_size"] = static_cast<long long>(exact.distribution.size());
        e["total_mass"] = mass;
        e["shannon_by_step"] = exact.shannon;
        e["new_words_by_step"] = exact.new_words;
        e["return_probability_by_step"] = exact.return_probability;
        report.body["enumeration"] = e;
    }
    report.add_check("distribution_mass", mass, 1.0, 1e-12 * s);

    {
        const std::vector<double> ret =
            exact_return_probabilities(in.spec, opt.green_terms, opt.max_words);
        double partial = 0.0, zn = 1.0;
        for (double p : ret) {
            partial += p * zn;
            zn *= opt.z;
        }
        const WeightSolution sol = solve_weights(in.spec, opt.z);
        const double analytic = product_green_origin(in.spec, sol);
        ordered_json g = ordered_json::object();
        g["z"] = opt.z;
        g["terms"] = opt.green_terms;
        g["partial_sum"] = partial;
        g["analytic"] = analytic;
        g["gap"] = analytic - partial;
        report.body["partial_green"] = g;
        report.add_bound_check("partial_green_gap", std::abs(analytic - partial), 0.0,
                               tol::oracle_green_gap * s);
        report.add_bound_check("partial_green_below_analytic", partial, analytic, 1e-12 * s);
    }

    if (opt.walkers > 0) {
        SimConfig cfg;
        cfg.walkers = opt.walkers;
        cfg.horizon = opt.horizon;
        cfg.seed = opt.seed;
        cfg.keep_words = true;
        const SimResult sim = run_walkers(in.spec, cfg);
        double tv = 0.0;
        double seen_mass = 0.0;
        for (const auto& [word, count] : sim.word_counts) {
            const double emp = static_cast<double>(count) / static_cast<double>(cfg.walkers);
            const auto it = exact.distribution.find(word);
            const double ex = (it == exact.distribution.end()) ? 0.0 : it->second;
            if (it != exact.distribution.end()) seen_mass += ex;
            tv += std::abs(emp - ex);
        }
        tv += mass - seen_mass;  // exact words never sampled
        tv *= 0.5;
        ordered_json t = ordered_json::object();
        t["walkers"] = opt.walkers;
        t["seed"] = opt.seed;
        t["total_variation"] = tv;
        report.body["sampled_comparison"] = t;
        report.add_bound_check("sampled_total_variation", tv, 0.0, tol::oracle_tv * s);
    }

    report.timing_ms["total"] = clock.ms();
    return report;
}

}  // namespace fpwalk
