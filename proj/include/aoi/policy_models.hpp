#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "aoi/shs.hpp"

namespace aoi {

enum class PolicyId : std::uint8_t {
    Policy1,  ///< two-slot queue, one per source; same-source replacement in waiting
    Policy2,  ///< one packet per source in the system; same-source preemption anywhere
    Policy3,  ///< as Policy2 but arrivals of the in-service source are discarded
    LcfsS,    ///< no waiting room; any arrival preempts service
    LcfsW,    ///< one waiting slot; any arrival replaces the waiting packet
    PpNw,     ///< no waiting room; preemption by equal or higher priority
    PpWw,     ///< one waiting slot; priority replacement in waiting only
};

inline constexpr std::array<PolicyId, 7> kAllPolicies{
    PolicyId::Policy1, PolicyId::Policy2, PolicyId::Policy3, PolicyId::LcfsS,
    PolicyId::LcfsW,   PolicyId::PpNw,    PolicyId::PpWw,
};

inline constexpr std::array<PolicyId, 3> kSourceAwarePolicies{
    PolicyId::Policy1, PolicyId::Policy2, PolicyId::Policy3,
};

enum class SourceView : std::uint8_t { Source1, Source2 };

enum class Method : std::uint8_t { ShsEngine, ClosedForm };

/// Short CLI/CSV name: p1, p2, p3, lcfs-s, lcfs-w, pp-nw, pp-ww.
std::string_view policy_name(PolicyId policy);
std::optional<PolicyId> parse_policy(std::string_view name);

/// True for the three source-aware policies, which have SHS models and
/// closed forms; the baselines are simulator-only.
bool has_analytic_model(PolicyId policy);

ShsModel build_policy1_model();
ShsModel build_policy2_model();
ShsModel build_policy3_model();

/// Throws UnsupportedPolicy for the baselines.
ShsModel build_model(PolicyId policy);

/// Average age of the given source. Source 2 is evaluated on the source-1
/// model with the two arrival rates exchanged.
double average_aoi_for(PolicyId policy, SourceView view, const LoadPoint& loads, Method method);

}  // namespace aoi
