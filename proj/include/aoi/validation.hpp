#pragma once

// Cross-method consistency suite: SHS engine vs closed forms, per-state sums
// vs the closed forms, and the known zero-load limits.

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "aoi/policy_models.hpp"

namespace aoi {

using ScalarForm = std::function<double(double rho1, double rho2, double mu)>;
using VectorForm = std::function<std::vector<double>(double rho1, double rho2, double mu)>;

/// The closed forms under test, indexed Policy1..Policy3. Tests substitute
/// corrupted entries to check that the suite catches them.
struct AnalyticBackend {
    std::array<ScalarForm, 3> aoi;
    std::array<VectorForm, 3> vq0;
};

AnalyticBackend reference_backend();

inline constexpr double kEngineTolerance = 1e-9;
inline constexpr double kSumTolerance = 1e-12;
inline constexpr double kLimitTolerance = 1e-12;

/// Per-source load values of the cross-check grid.
inline constexpr std::array<double, 8> kValidationLoads{0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
inline constexpr std::array<double, 3> kValidationServiceRates{0.5, 1.0, 2.0};

struct PolicyCheck {
    PolicyId policy = PolicyId::Policy1;
    std::size_t points = 0;
    double max_engine_rel_err = 0.0;  ///< |engine - closed form| / closed form
    double max_sum_rel_err = 0.0;     ///< |sum v_q0 - closed form| / closed form
    bool passed = false;
};

struct LimitCheck {
    std::string name;
    double expected = 0.0;
    double closed_form = 0.0;
    double engine = 0.0;  ///< engine at rho2 = 1e-12
    bool passed = false;
};

struct ValidationReport {
    std::vector<PolicyCheck> policies;
    std::vector<LimitCheck> limits;
    bool passed = false;
};

ValidationReport run_validation(const AnalyticBackend& backend = reference_backend());

void print_report(const ValidationReport& report, std::ostream& out);

}  // namespace aoi
