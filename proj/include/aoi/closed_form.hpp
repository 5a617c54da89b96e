#pragma once

// Exact average-age expressions for the three source-aware policies, as
// rational functions of the loads rho1, rho2 and the service rate mu.
// All functions reject rho1 <= 0 (the expressions carry a 1/rho1 factor),
// negative rho2 and non-positive mu with DomainError; rho2 = 0 is allowed.

#include <array>

#include "aoi/policy_models.hpp"
#include "aoi/shs.hpp"

namespace aoi {

double theorem1_aoi(double rho1, double rho2, double mu);
double theorem2_aoi(double rho1, double rho2, double mu);
double theorem3_aoi(double rho1, double rho2, double mu);

/// Dispatches to the expression for a source-aware policy; throws
/// UnsupportedPolicy for the baselines.
double closed_form_aoi(PolicyId policy, double rho1, double rho2, double mu);

/// Stationary occupancy of the Policy 1 chain. Requires rho1, rho2 >= 0, not
/// both zero.
StationaryDistribution policy1_stationary(double rho1, double rho2);

/// Stationary occupancy shared by the Policy 2 and Policy 3 chains.
StationaryDistribution policy23_stationary(double rho1, double rho2);

/// Per-state first correlation components v_q0; their sum is the average age.
std::array<double, 6> policy1_vq0(double rho1, double rho2, double mu);
std::array<double, 5> policy2_vq0(double rho1, double rho2, double mu);
std::array<double, 5> policy3_vq0(double rho1, double rho2, double mu);

}  // namespace aoi
