#include "aoi/policy_models.hpp"

#include "aoi/closed_form.hpp"

namespace aoi {

namespace {

constexpr int Z = ResetMap::kZero;
constexpr auto L1 = RateSymbol::Lambda1;
constexpr auto L2 = RateSymbol::Lambda2;
constexpr auto MU = RateSymbol::Mu;

Transition row(int l, std::size_t from, std::size_t to, RateSymbol rate,
               std::initializer_list<int> sources) {
    return Transition{l, from, to, rate, ResetMap::from_sources(sources)};
}

}  // namespace

std::string_view policy_name(PolicyId policy) {
    switch (policy) {
        case PolicyId::Policy1: return "p1";
        case PolicyId::Policy2: return "p2";
        case PolicyId::Policy3: return "p3";
        case PolicyId::LcfsS: return "lcfs-s";
        case PolicyId::LcfsW: return "lcfs-w";
        case PolicyId::PpNw: return "pp-nw";
        case PolicyId::PpWw: return "pp-ww";
    }
    return "?";
}

std::optional<PolicyId> parse_policy(std::string_view name) {
    for (auto p : kAllPolicies) {
        if (policy_name(p) == name) return p;
    }
    if (name == "policy1") return PolicyId::Policy1;
    if (name == "policy2") return PolicyId::Policy2;
    if (name == "policy3") return PolicyId::Policy3;
    return std::nullopt;
}

bool has_analytic_model(PolicyId policy) {
    return policy == PolicyId::Policy1 || policy == PolicyId::Policy2 ||
           policy == PolicyId::Policy3;
}

// States: 0 idle; 1 busy, queue empty; 2 queue [s1]; 3 queue [s2];
// 4 queue [s1, s2]; 5 queue [s2, s1] (head first).
// Age vector: x0 current age, x1 after the in-service packet, x2 after the
// queue head, x3 after the second queued packet.
ShsModel build_policy1_model() {
    return ShsModel::with_unit_growth(
        "policy1", 6, 4,
        {
            row(1, 0, 1, L1, {0, Z, 2, 3}),
            row(2, 0, 1, L2, {0, 0, 2, 3}),
            row(3, 1, 0, MU, {1, 1, 2, 3}),
            row(4, 1, 2, L1, {0, 1, Z, 3}),
            row(5, 1, 3, L2, {0, 1, 1, 3}),
            row(6, 2, 1, MU, {1, 2, 2, 3}),
            row(7, 3, 1, MU, {1, 1, 2, 3}),
            row(8, 2, 2, L1, {0, 1, Z, 3}),
            // The x' form [x0 x1 x2 x2]; the printed matrix for this row is the
            // identity, which contradicts it.
            row(9, 2, 4, L2, {0, 1, 2, 2}),
            row(10, 3, 5, L1, {0, 1, 1, Z}),
            row(11, 4, 4, L1, {0, 1, Z, Z}),
            row(12, 5, 5, L1, {0, 1, 1, Z}),
            row(13, 4, 3, MU, {1, 2, 2, 3}),
            row(14, 5, 2, MU, {1, 1, 3, 3}),
        });
}

// States: 0 idle; 1 serving s1; 2 serving s2; 3 serving s1, s2 waiting;
// 4 serving s2, s1 waiting. Age vector: x0 current, x1 after the in-service
// packet, x2 after the waiting packet.
ShsModel build_policy2_model() {
    return ShsModel::with_unit_growth(
        "policy2", 5, 3,
        {
            row(1, 0, 1, L1, {0, Z, 2}),
            row(2, 0, 2, L2, {0, 0, 2}),
            row(3, 1, 1, L1, {0, Z, 2}),
            row(4, 1, 3, L2, {0, 1, 1}),
            row(5, 2, 4, L1, {0, 0, Z}),
            row(6, 3, 3, L1, {0, Z, Z}),
            row(7, 4, 4, L1, {0, 0, Z}),
            row(8, 1, 0, MU, {1, 1, 2}),
            row(9, 2, 0, MU, {0, 1, 2}),
            row(10, 3, 2, MU, {1, 1, 2}),
            row(11, 4, 1, MU, {0, 2, 2}),
        });
}

ShsModel build_policy3_model() {
    ShsModel model = build_policy2_model();
    model.name = "policy3";
    for (auto& t : model.transitions) {
        if (t.index == 3) t.reset = ResetMap::from_sources({0, 1, 2});
        if (t.index == 6) t.reset = ResetMap::from_sources({0, 1, 1});
    }
    return model;
}

ShsModel build_model(PolicyId policy) {
    switch (policy) {
        case PolicyId::Policy1: return build_policy1_model();
        case PolicyId::Policy2: return build_policy2_model();
        case PolicyId::Policy3: return build_policy3_model();
        default:
            throw UnsupportedPolicy("no SHS model in scope for " + std::string(policy_name(policy)) +
                                    "; use simulate");
    }
}

double average_aoi_for(PolicyId policy, SourceView view, const LoadPoint& loads, Method method) {
    if (!has_analytic_model(policy)) {
        throw UnsupportedPolicy("no closed form in scope for " + std::string(policy_name(policy)) +
                                "; use simulate");
    }
    const LoadPoint tracked = view == SourceView::Source1 ? loads : loads.swapped();
    if (method == Method::ShsEngine) return average_aoi(build_model(policy), tracked);
    return closed_form_aoi(policy, tracked.rho1(), tracked.rho2(), tracked.mu());
}

}  // namespace aoi
