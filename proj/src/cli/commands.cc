// Copyright 2026 The mend-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mend/cli/commands.h"

#include <CLI11.hpp>
#include <cmath>
#include <map>
#include <ostream>

#include "mend/channel_osbp.h"
#include "mend/cli/config.h"
#include "mend/cli/output.h"
#include "mend/errors.h"
#include "mend/integrated_osbp.h"
#include "mend/runner.h"

namespace mend::cli {

namespace {

constexpr double kTargetDistance = 0.038;

// Flags that map onto configuration keys.
const std::vector<std::pair<std::string, std::string>> kFlagKeys = {
    {"--a", "a"},
    {"--alpha", "alpha"},
    {"--alpha-cos2", "alpha_cos2"},
    {"--beta", "beta"},
    {"--parties", "parties"},
    {"--copies", "copies"},
    {"--strategy", "strategy"},
    {"--rotating-step", "rotating_step"},
    {"--mode", "mode"},
    {"--grid-size", "grid_size"},
    {"--seed", "master_seed"},
    {"--trials", "trials"},
    {"--epsilon", "epsilon"},
    {"--k", "k"},
};

struct CommandOptions {
    std::map<std::string, std::string> raw;  // by configuration key
    std::vector<std::string> sets;
    std::string config_path;
    std::string output_dir = ".";
    std::string format = "csv+svg";
    std::string id;
};

void add_common_options(CLI::App* sub, CommandOptions& opts) {
    for (const auto& [flag, key] : kFlagKeys) {
        sub->add_option(flag, opts.raw[key], "value of '" + key + "'");
    }
    sub->add_option("--set", opts.sets, "key=value override (repeatable)");
    sub->add_option("--config", opts.config_path, "JSON configuration file");
    sub->add_option("--output-dir", opts.output_dir, "directory for CSV/SVG output");
    sub->add_option("--format", opts.format, "csv or csv+svg")->check(CLI::IsMember({"csv", "csv+svg"}));
}

Settings resolve_settings(const CLI::App* sub, const CommandOptions& opts) {
    Settings file;
    if (!opts.config_path.empty()) {
        file = load_config_file(opts.config_path);
    }
    Settings cli;
    for (const auto& entry : opts.sets) {
        auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("--set expects key=value, got '" + entry + "'");
        }
        cli.set(entry.substr(0, eq), entry.substr(eq + 1));
    }
    // Dedicated flags are applied after --set.
    for (const auto& [flag, key] : kFlagKeys) {
        if (sub->count(flag) > 0) {
            cli.set(key, opts.raw.at(key));
        }
    }
    return file.merged_with(cli);
}

struct Context {
    std::ostream& out;
    const CommandOptions& opts;
    Settings settings;
    int threads;
    std::string stem;  // "<command>-<id>"

    bool svg() const { return opts.format == "csv+svg"; }
};

void commit(Context& ctx, OutputBatch& batch) {
    for (const auto& path : batch.commit()) {
        ctx.out << "wrote " << path.string() << "\n";
    }
}

void write_curves(Context& ctx, const std::vector<LabeledCurve>& curves, const std::string& title) {
    OutputBatch batch(ctx.opts.output_dir);
    batch.add(ctx.stem + ".csv", format_curves_csv(curves));
    if (ctx.svg()) {
        batch.add(ctx.stem + ".svg", format_svg(curves, title));
    }
    commit(ctx, batch);
}

void print_curve_tail(Context& ctx, const LabeledCurve& c) {
    const auto& p = c.points.back();
    ctx.out << c.label << ": x=" << p.x << " mean_distance=" << format_number(p.mean_distance)
            << " stderr=" << format_number(p.std_error) << " trials=" << p.samples << "\n";
}

std::string curve_label(const TrialConfig& cfg) {
    return cfg.mode == TrialMode::NaiveReceived ? "naive-" + cfg.strategy.name() : cfg.strategy.name();
}

TwoParamQutrit default_vendor() { return TwoParamQutrit::from_cos2_alpha(4.0 / 15.0, kPi / 4); }

int cmd_simulate(Context& ctx) {
    TrialConfig cfg = trial_config_from(ctx.settings, TrialConfig{});
    if (cfg.trials == 1) {
        TrialDraw draw = draw_trial(cfg.master_seed, cfg.parties, 0);
        RunRecord record = run_trial(cfg, draw.true_phi, draw.seed);
        OutputBatch batch(ctx.opts.output_dir);
        batch.add(ctx.stem + ".csv", format_run_record_csv(record));
        commit(ctx, batch);
        ctx.out << "true_phase " << format_number(draw.true_phi) << "\n"
                << "successes " << record.success_count << "\n"
                << "failures " << record.failure_count << "\n"
                << "final_distance " << format_number(record.final_distance) << "\n";
        return kExitOk;
    }
    SimulationSummary summary = simulate_over_prior(cfg, ctx.threads);
    LabeledCurve curve{curve_label(cfg), summary.curve, false};
    write_curves(ctx, {curve}, "");
    print_curve_tail(ctx, curve);
    if (summary.copies > 0) {
        ctx.out << "success_fraction "
                << format_number(static_cast<double>(summary.success_count) / static_cast<double>(summary.copies))
                << "\n";
    }
    return kExitOk;
}

int cmd_figure(Context& ctx, int id) {
    TrialConfig defaults;
    defaults.copies = 20;
    defaults.trials = 2000;
    std::vector<LabeledCurve> curves;
    std::string title;
    if (id == 2) {
        defaults.source = 1.0 / std::sqrt(2.0);
        TrialConfig base = trial_config_from(ctx.settings, defaults);
        for (double a : {0.3, 0.5, 1.0 / std::sqrt(2.0), 0.9}) {
            TrialConfig cfg = base;
            cfg.source = a;
            char label[32];
            std::snprintf(label, sizeof label, "a=%.6g", a);
            curves.push_back({label, average_over_prior(cfg, ctx.threads), false});
        }
        title = "failure-branch estimation, " + base.strategy.name() + " strategy";
    } else if (id == 3) {
        defaults.source = 1.0 / std::sqrt(2.0);
        TrialConfig base = trial_config_from(ctx.settings, defaults);
        for (StrategyKind kind :
             {StrategyKind::Adaptive, StrategyKind::Rotating, StrategyKind::Alternating, StrategyKind::Fixed}) {
            TrialConfig cfg = base;
            cfg.strategy.kind = kind;
            curves.push_back({cfg.strategy.name(), average_over_prior(cfg, ctx.threads), false});
        }
        title = "measurement strategies";
    } else {
        TrialConfig base = trial_config_from(ctx.settings, defaults);
        TwoParamQutrit params = vendor_params_from(ctx.settings, default_vendor());
        TrialConfig naive = base;
        naive.source = params;
        naive.mode = TrialMode::NaiveReceived;
        curves.push_back({"naive-received", average_over_prior(naive, ctx.threads), false});
        TrialConfig recycled = base;
        recycled.source = failure_amplitude(params);
        recycled.mode = TrialMode::FailureBranch;
        curves.push_back({"failure-branch", average_over_prior(recycled, ctx.threads), false});
        double qfi = quantum_fisher_information(params, 1);
        LabeledCurve floor{"van-trees-floor", {}, true};
        for (int k = 1; k <= base.copies; ++k) {
            floor.points.push_back({k, van_trees_distance_floor(k, qfi), 0.0});
        }
        if (!floor.points.empty()) {
            curves.push_back(floor);
        }
        title = "received-copy estimation and bound";
    }
    write_curves(ctx, curves, title);
    for (const auto& c : curves) {
        print_curve_tail(ctx, c);
    }
    return kExitOk;
}

int cmd_bounds(Context& ctx) {
    TwoParamQutrit params = vendor_params_from(ctx.settings, default_vendor());
    int parties = static_cast<int>(get_integer(ctx.settings, "parties", 3));
    long long k = get_integer(ctx.settings, "k", 100);
    if (k < 1 || parties < 2) {
        throw ConfigError("'k' must be >= 1 and 'parties' >= 2");
    }
    BoundReport report(params);
    OsbpOperators ops = build_osbp(params);
    auto& out = ctx.out;
    out << "p_success " << format_number(ops.p_success) << "\n";
    out << "qfi_per_copy " << format_number(report.qfi_per_copy()) << "\n";
    out << "qfi_parties " << format_number(quantum_fisher_information(params, parties)) << "\n";
    out << "distillation_rate " << format_number(report.distillation_rate()) << "\n";
    out << "vidal_rate " << format_number(report.vidal_rate()) << "\n";
    if (ops.p_success < 1.0) {
        out << "failure_amplitude " << format_number(failure_amplitude(params)) << "\n";
    }
    LabeledCurve floor{"van-trees-floor", {}, true};
    if (report.qfi_per_copy() > 0.0) {
        double crossing = van_trees_crossing(kTargetDistance, report.qfi_per_copy());
        out << "crossing_k_e " << format_number(crossing) << "\n";
        int first_exact = 1;
        while (first_exact <= k && report.approximation_regime(first_exact)) {
            ++first_exact;
        }
        out << "approximation_regime_until_k " << first_exact - 1 << "\n";
        auto naive = naive_copies_needed(params, parties, kTargetDistance, 11);
        if (naive) {
            double optimal = std::round(crossing * 10.0) / 10.0;
            YieldComparison y = yield_comparison(static_cast<double>(k), ops.p_success, *naive, optimal);
            out << "k_e_naive " << *naive << "\n";
            out << "failure_branch_yield " << format_number(y.failure_branch_yield) << "\n";
            out << "naive_yield " << format_number(y.naive_yield) << "\n";
            out << "optimal_naive_yield " << format_number(y.optimal_naive_yield) << "\n";
        }
        for (int x = 1; x <= k; ++x) {
            floor.points.push_back({x, report.distance_floor(x), 0.0});
        }
        write_curves(ctx, {floor}, "distance floor");
    }
    return kExitOk;
}

int cmd_compare(Context& ctx) {
    TwoParamQutrit params = vendor_params_from(ctx.settings, default_vendor());
    int parties = static_cast<int>(get_integer(ctx.settings, "parties", 3));
    long long k = get_integer(ctx.settings, "k", 100);
    long long seed = get_integer(ctx.settings, "master_seed", 1);
    if (k < 1 || parties < 2 || seed < 0) {
        throw ConfigError("'k' must be >= 1, 'parties' >= 2 and 'master_seed' >= 0");
    }
    CompareReport report =
        compare_report(params, parties, static_cast<int>(k), static_cast<std::uint64_t>(seed), 100000, ctx.threads);
    std::string table = format_compare(report);
    ctx.out << table;
    OutputBatch batch(ctx.opts.output_dir);
    batch.add(ctx.stem + ".csv", table);
    commit(ctx, batch);
    return kExitOk;
}

int cmd_integrated(Context& ctx) {
    IntegratedConfig cfg = integrated_config_from(ctx.settings, IntegratedConfig{});
    long long runs = get_integer(ctx.settings, "trials", 200);
    long long seed = get_integer(ctx.settings, "master_seed", 1);
    if (runs < 1 || seed < 0) {
        throw ConfigError("'trials' must be >= 1 and 'master_seed' >= 0");
    }
    if (cfg.copies < 1) {
        throw ConfigError("'copies' must be >= 1");
    }
    IntegratedSummary s =
        simulate_integrated(cfg, static_cast<int>(runs), static_cast<std::uint64_t>(seed), ctx.threads);
    LabeledCurve distance{"estimation-distance", {}, false};
    std::string copies = "copy,stored_fraction,success_fraction\n";
    for (int i = 0; i < cfg.copies; ++i) {
        distance.points.push_back({i + 1, s.mean_distance[i], s.distance_stderr[i]});
        copies += std::to_string(i) + "," + format_number(s.stored_fraction[i]) + "," +
                  format_number(s.success_fraction[i]) + "\n";
    }
    OutputBatch batch(ctx.opts.output_dir);
    batch.add(ctx.stem + ".csv", format_curves_csv({distance}));
    batch.add(ctx.stem + "-copies.csv", copies);
    if (ctx.svg()) {
        batch.add(ctx.stem + ".svg", format_svg({distance}, "storage-aware protocol"));
    }
    commit(ctx, batch);
    ctx.out << "runs " << s.runs << "\n"
            << "stored_fraction_first_half " << format_number(s.stored_first_half) << "\n"
            << "stored_fraction_second_half " << format_number(s.stored_second_half) << "\n"
            << "stored_total " << s.stored_total << "\n"
            << "final_recheck_pass_fraction " << format_number(s.final_pass_fraction) << "\n"
            << "mean_stored_fidelity " << format_number(s.mean_stored_fidelity) << "\n"
            << "final_estimation_distance " << format_number(s.mean_distance.back()) << "\n";
    return kExitOk;
}

}  // namespace

std::optional<int> naive_copies_needed(const TwoParamQutrit& params, int parties, double target, int max_copies) {
    TrialConfig cfg;
    cfg.source = params;
    cfg.parties = parties;
    cfg.mode = TrialMode::NaiveReceived;
    cfg.strategy = StrategySpec::adaptive();
    // The posterior after k updates is a trigonometric polynomial of degree 2k,
    // so a 256-point grid integrates every quantity used here exactly for k <= 60.
    cfg.grid_size = 256;
    // The tree grows threefold per copy, so the horizon is extended one copy at a time.
    for (int k = 0; k <= max_copies; ++k) {
        cfg.copies = k;
        auto curve = enumerate_exact(cfg, 1e9);
        if (curve[k].mean_distance <= target) {
            return k;
        }
    }
    return std::nullopt;
}

CompareReport compare_report(const TwoParamQutrit& params, int parties, int k, std::uint64_t seed,
                             long long sampled_copies, int threads) {
    CompareReport r;
    r.total_copies = k;
    r.target_distance = kTargetDistance;
    OsbpOperators ops = build_osbp(params);
    r.success_probability = ops.p_success;

    TrialConfig cfg;
    cfg.source = params;
    cfg.parties = parties;
    cfg.copies = k;
    cfg.master_seed = seed;
    cfg.grid_size = 256;
    cfg.trials = static_cast<int>((sampled_copies + k - 1) / k);
    SimulationSummary sim = simulate_over_prior(cfg, threads);
    r.simulated_copies = sim.copies;
    r.simulated_successes = sim.success_count;
    r.empirical_success_fraction = static_cast<double>(sim.success_count) / static_cast<double>(sim.copies);
    r.binomial_sigma = std::sqrt(r.success_probability * (1.0 - r.success_probability) / static_cast<double>(sim.copies));

    auto naive = naive_copies_needed(params, parties, kTargetDistance, 11);
    if (!naive) {
        throw std::runtime_error("the received-copy protocol does not reach the target within 11 copies");
    }
    r.naive_copies = *naive;
    BoundReport bounds(params);
    r.optimal_copies_raw = van_trees_crossing(kTargetDistance, bounds.qfi_per_copy());
    r.optimal_copies = std::round(r.optimal_copies_raw * 10.0) / 10.0;
    r.distillation_rate = bounds.distillation_rate();
    r.yields = yield_comparison(k, r.success_probability, r.naive_copies, r.optimal_copies);
    r.distillation_ceiling = (k - r.optimal_copies) * r.distillation_rate;
    return r;
}

std::string format_compare(const CompareReport& r) {
    std::string out = "quantity,value\n";
    auto row = [&out](const std::string& name, double value) { out += name + "," + format_number(value) + "\n"; };
    row("copies", r.total_copies);
    row("target_distance", r.target_distance);
    row("success_probability", r.success_probability);
    row("simulated_copies", static_cast<double>(r.simulated_copies));
    row("empirical_success_fraction", r.empirical_success_fraction);
    row("binomial_sigma", r.binomial_sigma);
    row("k_e_naive", r.naive_copies);
    row("k_e_optimal", r.optimal_copies);
    row("failure_branch_yield", r.yields.failure_branch_yield);
    row("naive_yield", r.yields.naive_yield);
    row("optimal_naive_yield", r.yields.optimal_naive_yield);
    row("distillation_rate", r.distillation_rate);
    row("distillation_ceiling", r.distillation_ceiling);
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Failure-branch phase estimation for GHZ-class state repair", "mend-sim"};
    app.require_subcommand(1);

    struct Sub {
        std::string name;
        std::string default_id;
        CLI::App* app = nullptr;
        CommandOptions opts;
    };
    std::vector<Sub> subs = {{"simulate", "run", nullptr, {}},
                             {"figure", "", nullptr, {}},
                             {"bounds", "report", nullptr, {}},
                             {"compare", "table", nullptr, {}},
                             {"integrated", "run", nullptr, {}}};
    const std::map<std::string, std::string> descriptions = {
        {"simulate", "run trials of one protocol"},
        {"figure", "reproduce a distance-versus-copies figure"},
        {"bounds", "print benchmark quantities and the distance floor"},
        {"compare", "print the yield comparison table"},
        {"integrated", "run the storage-aware protocol"},
    };
    for (auto& s : subs) {
        s.app = app.add_subcommand(s.name, descriptions.at(s.name));
        add_common_options(s.app, s.opts);
        if (s.name == "figure") {
            s.app->add_option("--id", s.opts.id, "figure number")->required()->check(CLI::IsMember({"2", "3", "4"}));
        } else {
            s.app->add_option("--id", s.opts.id, "output name suffix");
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run 'mend-sim --help' for usage\n";
        return kExitUsage;
    }

    for (auto& s : subs) {
        if (!s.app->parsed()) {
            continue;
        }
        std::string id = s.opts.id.empty() ? s.default_id : s.opts.id;
        if (id.find_first_of("/\\") != std::string::npos) {
            err << "error: --id must not contain path separators\n";
            return kExitUsage;
        }
        try {
            Context ctx{out, s.opts, resolve_settings(s.app, s.opts), threads_from_environment(), s.name + "-" + id};
            if (s.name == "simulate") return cmd_simulate(ctx);
            if (s.name == "figure") return cmd_figure(ctx, std::stoi(id));
            if (s.name == "bounds") return cmd_bounds(ctx);
            if (s.name == "compare") return cmd_compare(ctx);
            return cmd_integrated(ctx);
        } catch (const ConfigError& e) {
            err << "configuration error: " << e.what() << "\n";
            return kExitConfig;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return kExitRuntime;
        }
    }
    return kExitUsage;
}

}  // namespace mend::cli
