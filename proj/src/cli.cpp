#include "aoi/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "aoi/closed_form.hpp"
#include "aoi/metrics.hpp"
#include "aoi/report.hpp"
#include "aoi/simulator.hpp"
#include "aoi/validation.hpp"

namespace aoi::cli {

namespace {

struct SimOptions {
    std::uint64_t events = 1'000'000;
    std::uint32_t reps = 16;
    std::uint64_t seed = 1;
    double warmup = 0.1;

    SimSettings settings() const { return {events, reps, seed, warmup}; }
};

void add_sim_options(CLI::App* cmd, SimOptions& sim) {
    cmd->add_option("--events", sim.events, "Events (arrivals + completions) per replication")
        ->capture_default_str();
    cmd->add_option("--reps", sim.reps, "Independent replications")->capture_default_str();
    cmd->add_option("--seed", sim.seed, "Base random seed")->capture_default_str();
    cmd->add_option("--warmup", sim.warmup, "Fraction of each replication discarded as warmup")
        ->capture_default_str();
}

PolicyId require_policy(const std::string& name) {
    if (auto p = parse_policy(name)) return *p;
    throw InvalidConfig("unknown policy '" + name +
                        "' (expected p1, p2, p3, lcfs-s, lcfs-w, pp-nw, pp-ww)");
}

std::vector<PolicyId> parse_policy_list(const std::vector<std::string>& names) {
    std::vector<PolicyId> out;
    for (const auto& n : names) out.push_back(require_policy(n));
    return out;
}

EvalMethod require_method(const std::string& name) {
    if (auto m = parse_method(name)) return *m;
    throw InvalidConfig("unknown method '" + name + "' (expected closed-form, shs or sim)");
}

// Emits to the file when a path is given, otherwise to out.
void emit_rows(const std::vector<SweepRow>& rows, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        emit_csv(rows, out);
    } else {
        write_csv(rows, path);
    }
}

double plot_value(const SweepRow& row, const std::string& column) {
    if (column == "sum_aoi") return row.sum_aoi;
    if (column == "jain") return row.jain;
    if (column == "delta1") return row.delta1;
    if (column == "delta2") return row.delta2;
    throw InvalidConfig("unknown plot column '" + column + "'");
}

std::vector<PlotSeries> series_by_policy(const std::vector<SweepRow>& rows,
                                         const std::function<std::pair<double, double>(const SweepRow&)>& xy) {
    std::vector<PlotSeries> series;
    for (const auto& row : rows) {
        if (!row.ok()) continue;
        const std::string label(policy_name(row.policy));
        if (series.empty() || series.back().label != label) series.push_back({label, {}});
        series.back().points.push_back(xy(row));
    }
    return series;
}

int report_failures(const std::vector<SweepRow>& rows, std::ostream& err) {
    int failed = 0;
    for (const auto& row : rows) {
        if (row.ok()) continue;
        ++failed;
        err << "failed point " << policy_name(row.policy) << " rho1=" << format_number(row.rho1)
            << " rho2=" << format_number(row.rho2) << ": " << *row.error << '\n';
    }
    return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Average age of information for two-source queues with packet management"};
    app.name("aoi");
    app.require_subcommand(1);
    // Options of a subcommand go under a [sweep] or [tradeoff] section.
    app.set_config("--config", "", "INI/TOML file with per-subcommand sections");
    app.fallthrough();

    // analytic
    auto* analytic = app.add_subcommand("analytic", "Closed-form or SHS-engine average AoI");
    std::string a_policy, a_method = "closed-form";
    double a_rho1 = 0, a_rho2 = 0, a_mu = 1;
    bool a_csv = false;
    analytic->add_option("--policy", a_policy, "p1, p2 or p3")->required();
    analytic->add_option("--rho1", a_rho1, "Load of source 1")->required();
    analytic->add_option("--rho2", a_rho2, "Load of source 2")->required();
    analytic->add_option("--mu", a_mu, "Service rate")->capture_default_str();
    analytic->add_option("--method", a_method, "closed-form or shs")->capture_default_str();
    analytic->add_flag("--csv", a_csv, "Print a CSV row instead of the report");

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "Discrete-event simulation of one policy");
    std::string s_policy, s_out, s_trace;
    double s_rho1 = 0, s_rho2 = 0, s_mu = 1;
    SimOptions s_sim;
    simulate_cmd->add_option("--policy", s_policy, "Any policy")->required();
    simulate_cmd->add_option("--rho1", s_rho1, "Load of source 1")->required();
    simulate_cmd->add_option("--rho2", s_rho2, "Load of source 2")->required();
    simulate_cmd->add_option("--mu", s_mu, "Service rate")->capture_default_str();
    add_sim_options(simulate_cmd, s_sim);
    simulate_cmd->add_option("--out", s_out, "CSV output path (default stdout)");
    simulate_cmd->add_option("--trace", s_trace, "Per-delivery trace output path");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Evaluate policies over a grid of rho1");
    std::vector<std::string> w_policies{"p1", "p2", "p3", "lcfs-s", "lcfs-w", "pp-nw", "pp-ww"};
    std::vector<std::string> w_methods;
    std::optional<double> w_rho, w_rho2;
    double w_mu = 1;
    std::string w_grid, w_out, w_plot, w_plot_y = "sum_aoi";
    std::size_t w_points = 19;
    SimOptions w_sim;
    w_sim.events = 200'000;
    sweep->add_option("--policies", w_policies, "Policies to evaluate")->delimiter(',')->capture_default_str();
    sweep->add_option("--method", w_methods,
                      "Method for analytic policies ('shs'), or per policy ('p1=shs')")
        ->delimiter(',');
    auto* rho_opt = sweep->add_option("--rho", w_rho, "Fixed total load; rho2 = rho - rho1");
    auto* rho2_opt = sweep->add_option("--rho2", w_rho2, "Fixed load of source 2");
    rho_opt->excludes(rho2_opt);
    sweep->add_option("--mu", w_mu, "Service rate")->capture_default_str();
    sweep->add_option("--grid", w_grid, "rho1 grid as start:stop:step");
    sweep->add_option("--points", w_points, "Evenly spaced rho1 points in (0, rho)")->capture_default_str();
    add_sim_options(sweep, w_sim);
    sweep->add_option("--out", w_out, "CSV output path (default stdout)");
    sweep->add_option("--plot", w_plot, "SVG plot output path");
    sweep->add_option("--plot-y", w_plot_y, "Plotted column: sum_aoi, jain, delta1, delta2")
        ->capture_default_str();

    // tradeoff
    auto* tradeoff = app.add_subcommand("tradeoff", "Achievable (delta1, delta2) pairs at fixed total load");
    std::vector<std::string> t_policies{"p1", "p2", "p3"};
    double t_rho = 1, t_mu = 1;
    std::size_t t_points = 49;
    std::string t_out, t_plot;
    SimOptions t_sim;
    t_sim.events = 200'000;
    tradeoff->add_option("--policies", t_policies, "Policies")->delimiter(',')->capture_default_str();
    tradeoff->add_option("--rho", t_rho, "Total load")->capture_default_str();
    tradeoff->add_option("--mu", t_mu, "Service rate")->capture_default_str();
    tradeoff->add_option("--points", t_points, "Points along the curve")->capture_default_str();
    add_sim_options(tradeoff, t_sim);
    tradeoff->add_option("--out", t_out, "CSV output path (default stdout)");
    tradeoff->add_option("--plot", t_plot, "SVG plot output path");

    auto* validate_cmd = app.add_subcommand("validate", "Cross-check SHS engine and closed forms");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analytic->parsed()) {
            const PolicyId policy = require_policy(a_policy);
            const EvalMethod method = require_method(a_method);
            if (method == EvalMethod::Simulate) throw InvalidConfig("analytic supports closed-form or shs");
            if (!has_analytic_model(policy)) {
                throw UnsupportedPolicy("no closed form in scope for " + std::string(policy_name(policy)) +
                                        "; use simulate");
            }
            if (!(a_rho1 > 0.0) || !(a_rho2 > 0.0) || !(a_mu > 0.0)) {
                throw DomainError("rho1, rho2 and mu must be positive");
            }
            const SweepRow row = evaluate_point(policy, method, a_rho1, a_rho2, a_mu);
            if (a_csv) {
                emit_csv({row}, out);
            } else {
                out << "policy = " << policy_name(policy) << '\n'
                    << "method = " << method_name(method) << '\n'
                    << "rho1 = " << format_number(row.rho1) << '\n'
                    << "rho2 = " << format_number(row.rho2) << '\n'
                    << "mu = " << format_number(row.mu) << '\n'
                    << "delta1 = " << format_number(row.delta1) << '\n'
                    << "delta2 = " << format_number(row.delta2) << '\n'
                    << "sum_aoi = " << format_number(row.sum_aoi) << '\n'
                    << "jain = " << format_number(row.jain) << '\n';
            }
            return kExitOk;
        }

        if (simulate_cmd->parsed()) {
            SimConfig config;
            config.policy = require_policy(s_policy);
            config.loads = LoadPoint::from_loads(s_rho1, s_rho2, s_mu);
            config.horizon_events = s_sim.events;
            config.replications = s_sim.reps;
            config.seed = s_sim.seed;
            config.warmup_fraction = s_sim.warmup;
            validate(config);

            SimResult result;
            if (s_trace.empty()) {
                result = simulate(config);
            } else {
                std::ofstream trace(s_trace, std::ios::binary);
                if (!trace) throw Error("cannot open " + s_trace + " for writing");
                trace << std::setprecision(17) << "policy,replication,source,generated,delivered\n";
                result = simulate(config, &trace);
                if (!trace) throw Error("failed writing " + s_trace);
            }

            SweepRow row;
            row.policy = config.policy;
            row.rho1 = s_rho1;
            row.rho2 = s_rho2;
            row.mu = s_mu;
            row.delta1 = result.mean_aoi[0];
            row.delta2 = result.mean_aoi[1];
            row.sum_aoi = row.delta1 + row.delta2;
            row.jain = jain_index(row.delta1, row.delta2);
            row.method = EvalMethod::Simulate;
            row.ci_low = row.sum_aoi - kSigmaBand * result.sum_std_error;
            row.ci_high = row.sum_aoi + kSigmaBand * result.sum_std_error;
            row.seed = config.seed;
            emit_rows({row}, s_out, out);
            if (!s_out.empty()) {
                out << "delta1 = " << format_number(row.delta1) << " +/- "
                    << format_number(result.std_error[0]) << " (1 SE)\n"
                    << "delta2 = " << format_number(row.delta2) << " +/- "
                    << format_number(result.std_error[1]) << " (1 SE)\n"
                    << "sum_aoi = " << format_number(row.sum_aoi) << " +/- "
                    << format_number(result.sum_std_error) << " (1 SE)\n"
                    << "replications = " << result.replications << '\n';
            }
            return kExitOk;
        }

        if (sweep->parsed()) {
            SweepSpec spec;
            spec.policies = parse_policy_list(w_policies);
            for (const auto& m : w_methods) {
                const auto eq = m.find('=');
                if (eq == std::string::npos) {
                    const EvalMethod method = require_method(m);
                    for (auto p : spec.policies) {
                        if (has_analytic_model(p)) spec.methods.emplace_back(p, method);
                    }
                } else {
                    spec.methods.emplace(spec.methods.begin(), require_policy(m.substr(0, eq)),
                                         require_method(m.substr(eq + 1)));
                }
            }
            spec.mu = w_mu;
            spec.sim = w_sim.settings();
            if (w_rho2) {
                spec.mode = SweepMode::FixedRho2;
                spec.rho2 = *w_rho2;
                if (w_grid.empty()) throw InvalidConfig("--rho2 sweeps need --grid start:stop:step");
            } else {
                spec.mode = SweepMode::FixedTotal;
                spec.total_rho = w_rho.value_or(1.0);
            }
            if (!w_grid.empty()) {
                double start = 0, stop = 0, step = 0;
                char c1 = 0, c2 = 0;
                std::istringstream is(w_grid);
                is.imbue(std::locale::classic());
                if (!(is >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':') {
                    throw InvalidConfig("--grid must be start:stop:step");
                }
                spec.rho1_grid = step_grid(start, stop, step);
            } else {
                spec.rho1_grid = fixed_total_grid(spec.total_rho, w_points);
            }
            const auto rows = run_sweep(spec);
            emit_rows(rows, w_out, out);
            if (!w_plot.empty()) {
                write_svg(series_by_policy(rows,
                                           [&](const SweepRow& r) {
                                               return std::pair{r.rho1, plot_value(r, w_plot_y)};
                                           }),
                          {"Sweep over rho1 (mu = " + format_number(spec.mu) + ")", "rho1", w_plot_y},
                          w_plot);
            }
            return report_failures(rows, err);
        }

        if (tradeoff->parsed()) {
            SweepSpec spec;
            spec.policies = parse_policy_list(t_policies);
            spec.mode = SweepMode::FixedTotal;
            spec.total_rho = t_rho;
            spec.mu = t_mu;
            spec.rho1_grid = fixed_total_grid(t_rho, t_points);
            spec.sim = t_sim.settings();
            const auto rows = run_sweep(spec);
            emit_rows(rows, t_out, out);
            if (!t_plot.empty()) {
                write_svg(series_by_policy(rows,
                                           [](const SweepRow& r) { return std::pair{r.delta1, r.delta2}; }),
                          {"Achievable average AoI pairs (rho = " + format_number(t_rho) + ")", "delta1",
                           "delta2"},
                          t_plot);
            }
            return report_failures(rows, err);
        }

        if (validate_cmd->parsed()) {
            const ValidationReport report = run_validation();
            print_report(report, out);
            return report.passed ? kExitOk : kExitFailure;
        }
    } catch (const InvalidConfig& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnsupportedPolicy& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace aoi::cli
