#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aoi/policy_models.hpp"
#include "aoi/simulator.hpp"

namespace aoi {

/// Jain's fairness index of two average ages, (d1+d2)^2 / (2(d1^2+d2^2)).
/// Lies in [0.5, 1]; 1 iff d1 == d2. Throws DomainError unless both > 0.
double jain_index(double d1, double d2);

enum class EvalMethod : std::uint8_t { ClosedForm, Shs, Simulate };

std::string_view method_name(EvalMethod method);
std::optional<EvalMethod> parse_method(std::string_view name);

/// Closed form for the source-aware policies, simulation for the baselines.
EvalMethod default_method(PolicyId policy);

struct SimSettings {
    std::uint64_t horizon_events = 200'000;
    std::uint32_t replications = 16;
    std::uint64_t seed = 1;
    double warmup_fraction = 0.1;
};

enum class SweepMode : std::uint8_t {
    FixedTotal,  ///< rho2 = total_rho - rho1
    FixedRho2,   ///< rho2 held constant
};

struct SweepSpec {
    std::vector<PolicyId> policies;
    /// Per-policy override; policies without an entry use default_method.
    std::vector<std::pair<PolicyId, EvalMethod>> methods;
    SweepMode mode = SweepMode::FixedTotal;
    double total_rho = 1.0;
    double rho2 = 1.0;
    double mu = 1.0;
    std::vector<double> rho1_grid;
    SimSettings sim;

    EvalMethod method_for(PolicyId policy) const;
};

/// Throws InvalidConfig: empty policy list or grid, non-increasing grid,
/// grid point outside (0, total_rho) in FixedTotal mode, bad mu or sim
/// settings, or an analytic method requested for a baseline.
void validate(const SweepSpec& spec);

/// n evenly spaced points over [eps, total - eps] with eps = 0.01 * total.
std::vector<double> fixed_total_grid(double total_rho, std::size_t points);

/// start, start+step, ... up to stop (inclusive within a 1e-9 step fraction).
std::vector<double> step_grid(double start, double stop, double step);

struct SweepRow {
    PolicyId policy = PolicyId::Policy1;
    double rho1 = 0.0;
    double rho2 = 0.0;
    double mu = 1.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double sum_aoi = 0.0;
    double jain = 0.0;
    EvalMethod method = EvalMethod::ClosedForm;
    /// Simulation rows: sum_aoi +/- 3 standard errors.
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<std::uint64_t> seed;

    // In-memory only (not serialized).
    std::optional<double> sum_std_error;
    std::optional<double> jain_std_error;
    std::optional<std::string> error;  ///< set when the point failed

    bool ok() const { return !error.has_value(); }
    bool operator==(const SweepRow& other) const;
};

/// Multiplier on the standard error for simulation confidence bounds.
inline constexpr double kSigmaBand = 3.0;

/// Evaluates one (policy, load) point. Source 2 is obtained by swapping loads
/// (analytic) or read from the same simulation run.
SweepRow evaluate_point(PolicyId policy, EvalMethod method, double rho1, double rho2, double mu,
                        const SimSettings& sim = {});

/// One row per (policy, grid point), sorted by policy then rho1. Failing
/// points are marked via SweepRow::error instead of aborting the sweep.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct TradeoffPoint {
    double rho1 = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
};

/// Achievable (delta1, delta2) pairs as rho1 sweeps (0, total_rho).
std::vector<TradeoffPoint> tradeoff_curve(PolicyId policy, double total_rho, double mu,
                                          std::size_t num_points, const SimSettings& sim = {});

}  // namespace aoi
