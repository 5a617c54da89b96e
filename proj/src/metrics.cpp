#include "aoi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aoi {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

std::size_t policy_order(PolicyId p) { return static_cast<std::size_t>(p); }

}  // namespace

double jain_index(double d1, double d2) {
    if (!positive_finite(d1) || !positive_finite(d2)) {
        throw DomainError("jain_index requires two positive finite ages");
    }
    const double s = d1 + d2;
    return (s * s) / (2.0 * (d1 * d1 + d2 * d2));
}

std::string_view method_name(EvalMethod method) {
    switch (method) {
        case EvalMethod::ClosedForm: return "closed-form";
        case EvalMethod::Shs: return "shs";
        case EvalMethod::Simulate: return "sim";
    }
    return "?";
}

std::optional<EvalMethod> parse_method(std::string_view name) {
    if (name == "closed-form" || name == "closed") return EvalMethod::ClosedForm;
    if (name == "shs") return EvalMethod::Shs;
    if (name == "sim" || name == "simulate") return EvalMethod::Simulate;
    return std::nullopt;
}

EvalMethod default_method(PolicyId policy) {
    return has_analytic_model(policy) ? EvalMethod::ClosedForm : EvalMethod::Simulate;
}

EvalMethod SweepSpec::method_for(PolicyId policy) const {
    for (const auto& [p, m] : methods) {
        if (p == policy) return m;
    }
    return default_method(policy);
}

void validate(const SweepSpec& spec) {
    if (spec.policies.empty()) throw InvalidConfig("sweep needs at least one policy");
    if (spec.rho1_grid.empty()) throw InvalidConfig("sweep grid is empty");
    if (!positive_finite(spec.mu)) throw InvalidConfig("mu must be positive");
    for (std::size_t i = 0; i < spec.rho1_grid.size(); ++i) {
        const double r = spec.rho1_grid[i];
        if (!positive_finite(r)) throw InvalidConfig("grid points must be positive");
        if (i > 0 && !(r > spec.rho1_grid[i - 1])) throw InvalidConfig("grid must be strictly increasing");
        if (spec.mode == SweepMode::FixedTotal && !(r < spec.total_rho)) {
            throw InvalidConfig("grid point rho1 must be below the total load");
        }
    }
    if (spec.mode == SweepMode::FixedTotal && !positive_finite(spec.total_rho)) {
        throw InvalidConfig("total load must be positive");
    }
    if (spec.mode == SweepMode::FixedRho2 && !positive_finite(spec.rho2)) {
        throw InvalidConfig("rho2 must be positive");
    }
    for (auto p : spec.policies) {
        if (!has_analytic_model(p) && spec.method_for(p) != EvalMethod::Simulate) {
            throw InvalidConfig(std::string(policy_name(p)) + " can only be simulated");
        }
    }
    if (std::any_of(spec.policies.begin(), spec.policies.end(),
                    [&](PolicyId p) { return spec.method_for(p) == EvalMethod::Simulate; })) {
        SimConfig probe;
        probe.horizon_events = spec.sim.horizon_events;
        probe.replications = spec.sim.replications;
        probe.warmup_fraction = spec.sim.warmup_fraction;
        validate(probe);
    }
}

std::vector<double> fixed_total_grid(double total_rho, std::size_t points) {
    if (!positive_finite(total_rho)) throw InvalidConfig("total load must be positive");
    if (points == 0) throw InvalidConfig("grid needs at least one point");
    const double eps = 0.01 * total_rho;
    if (points == 1) return {0.5 * total_rho};
    std::vector<double> grid(points);
    const double span = total_rho - 2.0 * eps;
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = eps + span * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

std::vector<double> step_grid(double start, double stop, double step) {
    if (!positive_finite(step) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw InvalidConfig("grid needs start <= stop and a positive step");
    }
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    grid.reserve(count);
    // Index-based so that e.g. 0.1..0.9 step 0.1 yields exact-looking decimals.
    for (std::size_t i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
}

bool SweepRow::operator==(const SweepRow& o) const {
    return policy == o.policy && rho1 == o.rho1 && rho2 == o.rho2 && mu == o.mu &&
           delta1 == o.delta1 && delta2 == o.delta2 && sum_aoi == o.sum_aoi && jain == o.jain &&
           method == o.method && ci_low == o.ci_low && ci_high == o.ci_high && seed == o.seed;
}

SweepRow evaluate_point(PolicyId policy, EvalMethod method, double rho1, double rho2, double mu,
                        const SimSettings& sim) {
    SweepRow row;
    row.policy = policy;
    row.rho1 = rho1;
    row.rho2 = rho2;
    row.mu = mu;
    row.method = method;

    if (method == EvalMethod::Simulate) {
        SimConfig config;
        config.policy = policy;
        config.loads = LoadPoint::from_loads(rho1, rho2, mu);
        config.horizon_events = sim.horizon_events;
        config.replications = sim.replications;
        config.seed = sim.seed;
        config.warmup_fraction = sim.warmup_fraction;
        const SimResult result = simulate(config);

        row.delta1 = result.mean_aoi[0];
        row.delta2 = result.mean_aoi[1];
        row.sum_aoi = row.delta1 + row.delta2;
        row.jain = jain_index(row.delta1, row.delta2);
        row.sum_std_error = result.sum_std_error;
        row.ci_low = row.sum_aoi - kSigmaBand * result.sum_std_error;
        row.ci_high = row.sum_aoi + kSigmaBand * result.sum_std_error;
        row.seed = sim.seed;

        double jmean = 0.0;
        std::vector<double> js;
        for (const auto& rep : result.per_replication) {
            js.push_back(jain_index(rep.mean_aoi[0], rep.mean_aoi[1]));
            jmean += js.back();
        }
        jmean /= static_cast<double>(js.size());
        double ss = 0.0;
        for (double j : js) ss += (j - jmean) * (j - jmean);
        const double n = static_cast<double>(js.size());
        row.jain_std_error = js.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        return row;
    }

    const LoadPoint loads = LoadPoint::from_loads(rho1, rho2, mu);
    const Method m = method == EvalMethod::Shs ? Method::ShsEngine : Method::ClosedForm;
    row.delta1 = average_aoi_for(policy, SourceView::Source1, loads, m);
    row.delta2 = average_aoi_for(policy, SourceView::Source2, loads, m);
    row.sum_aoi = row.delta1 + row.delta2;
    row.jain = jain_index(row.delta1, row.delta2);
    return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    validate(spec);
    std::vector<PolicyId> policies = spec.policies;
    std::sort(policies.begin(), policies.end(),
              [](PolicyId a, PolicyId b) { return policy_order(a) < policy_order(b); });
    policies.erase(std::unique(policies.begin(), policies.end()), policies.end());

    std::vector<SweepRow> rows;
    rows.reserve(policies.size() * spec.rho1_grid.size());
    for (auto policy : policies) {
        const EvalMethod method = spec.method_for(policy);
        for (double rho1 : spec.rho1_grid) {
            const double rho2 = spec.mode == SweepMode::FixedTotal ? spec.total_rho - rho1 : spec.rho2;
            try {
                rows.push_back(evaluate_point(policy, method, rho1, rho2, spec.mu, spec.sim));
            } catch (const Error& e) {
                SweepRow failed;
                failed.policy = policy;
                failed.rho1 = rho1;
                failed.rho2 = rho2;
                failed.mu = spec.mu;
                failed.method = method;
                failed.error = e.what();
                rows.push_back(std::move(failed));
            }
        }
    }
    return rows;
}

std::vector<TradeoffPoint> tradeoff_curve(PolicyId policy, double total_rho, double mu,
                                          std::size_t num_points, const SimSettings& sim) {
    SweepSpec spec;
    spec.policies = {policy};
    spec.mode = SweepMode::FixedTotal;
    spec.total_rho = total_rho;
    spec.mu = mu;
    spec.rho1_grid = fixed_total_grid(total_rho, num_points);
    spec.sim = sim;

    std::vector<TradeoffPoint> curve;
    for (const auto& row : run_sweep(spec)) {
        if (!row.ok()) throw Error("tradeoff point failed: " + *row.error);
        curve.push_back({row.rho1, row.delta1, row.delta2});
    }
    return curve;
}

}  // namespace aoi
