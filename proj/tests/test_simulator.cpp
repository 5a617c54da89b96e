#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "aoi/closed_form.hpp"
#include "aoi/simulator.hpp"

using namespace aoi;

namespace {

SystemState busy_with(Packet serving, std::initializer_list<Packet> waiting = {}) {
    SystemState s;
    s.in_service = serving;
    for (const auto& p : waiting) s.waiting.push_back(p);
    return s;
}

StepResult arrive(PolicyId policy, const SystemState& s, int source, double t) {
    return step_policy(policy, s, Event::arrival(source, t));
}

}  // namespace

TEST_CASE("arrival at an idle server starts service under every policy") {
    for (auto p : kAllPolicies) {
        const auto r = arrive(p, SystemState{}, 2, 1.5);
        REQUIRE(r.state.in_service.has_value());
        CHECK(*r.state.in_service == Packet{2, 1.5});
        CHECK(r.state.waiting.empty());
        CHECK(r.service_started);
        CHECK_FALSE(r.delivery.has_value());
    }
}

TEST_CASE("policy 1 keeps one waiting packet per source") {
    auto s = busy_with({1, 0.5}, {{2, 0.7}});
    auto r = arrive(PolicyId::Policy1, s, 1, 1.0);
    REQUIRE(r.state.waiting.size() == 2);
    CHECK(r.state.waiting[1] == Packet{1, 1.0});
    CHECK_FALSE(r.service_started);

    r = arrive(PolicyId::Policy1, r.state, 2, 1.2);
    CHECK(r.state.waiting[0] == Packet{2, 1.2});
    CHECK(r.state.waiting[1] == Packet{1, 1.0});

    r = step_policy(PolicyId::Policy1, r.state, Event::completion(2.0));
    REQUIRE(r.delivery.has_value());
    CHECK(r.delivery->source == 1);
    CHECK(r.delivery->generated == 0.5);
    CHECK(r.delivery->delivered == 2.0);
    CHECK(r.state.last_delivered[0] == 0.5);
    CHECK(*r.state.in_service == Packet{2, 1.2});
    CHECK(r.state.waiting.size() == 1);
    CHECK(r.service_started);
}

TEST_CASE("policy 2 preempts the same source in service") {
    const auto s = busy_with({1, 0.5});
    auto r = arrive(PolicyId::Policy2, s, 1, 1.0);
    CHECK(*r.state.in_service == Packet{1, 1.0});
    CHECK(r.state.waiting.empty());
    CHECK(r.service_started);

    r = arrive(PolicyId::Policy2, s, 2, 1.0);
    CHECK(*r.state.in_service == Packet{1, 0.5});
    REQUIRE(r.state.waiting.size() == 1);
    CHECK(r.state.waiting[0] == Packet{2, 1.0});
    r = arrive(PolicyId::Policy2, r.state, 2, 1.4);
    REQUIRE(r.state.waiting.size() == 1);
    CHECK(r.state.waiting[0] == Packet{2, 1.4});
}

TEST_CASE("policy 3 discards a newcomer whose source is in service") {
    const auto s = busy_with({1, 0.5});
    auto r = arrive(PolicyId::Policy3, s, 1, 1.0);
    CHECK(r.state == s);
    CHECK_FALSE(r.service_started);
    r = arrive(PolicyId::Policy3, s, 2, 1.0);
    CHECK(r.state.waiting.size() == 1);
    r = arrive(PolicyId::Policy3, r.state, 2, 1.3);
    CHECK(r.state.waiting[0] == Packet{2, 1.3});
}

TEST_CASE("baseline rules") {
    SUBCASE("LCFS-S always preempts") {
        auto r = arrive(PolicyId::LcfsS, busy_with({2, 0.1}), 1, 0.9);
        CHECK(*r.state.in_service == Packet{1, 0.9});
        CHECK(r.state.waiting.empty());
        CHECK(r.service_started);
    }
    SUBCASE("LCFS-W keeps only the newest waiting packet") {
        auto r = arrive(PolicyId::LcfsW, busy_with({2, 0.1}), 1, 0.9);
        r = arrive(PolicyId::LcfsW, r.state, 2, 1.1);
        CHECK(*r.state.in_service == Packet{2, 0.1});
        REQUIRE(r.state.waiting.size() == 1);
        CHECK(r.state.waiting[0] == Packet{2, 1.1});
    }
    SUBCASE("PP-NW: source 2 preempts source 1, not the reverse") {
        auto r = arrive(PolicyId::PpNw, busy_with({1, 0.1}), 2, 0.9);
        CHECK(*r.state.in_service == Packet{2, 0.9});
        CHECK(r.service_started);
        r = arrive(PolicyId::PpNw, r.state, 1, 1.0);
        CHECK(*r.state.in_service == Packet{2, 0.9});
        CHECK_FALSE(r.service_started);
        r = arrive(PolicyId::PpNw, r.state, 2, 1.2);
        CHECK(*r.state.in_service == Packet{2, 1.2});
        CHECK(r.state.waiting.empty());
    }
    SUBCASE("PP-WW: a low-priority packet cannot displace a waiting high-priority one") {
        auto r = arrive(PolicyId::PpWw, busy_with({1, 0.1}), 2, 0.9);
        CHECK(*r.state.in_service == Packet{1, 0.1});
        CHECK(r.state.waiting[0] == Packet{2, 0.9});
        r = arrive(PolicyId::PpWw, r.state, 1, 1.0);
        CHECK(r.state.waiting[0] == Packet{2, 0.9});
        r = arrive(PolicyId::PpWw, busy_with({2, 0.1}, {{1, 0.5}}), 1, 1.0);
        CHECK(r.state.waiting[0] == Packet{1, 1.0});
        r = arrive(PolicyId::PpWw, r.state, 2, 1.1);
        CHECK(r.state.waiting[0] == Packet{2, 1.1});
    }
}

TEST_CASE("illegal events") {
    CHECK_THROWS_AS(step_policy(PolicyId::Policy1, SystemState{}, Event::completion(1.0)), IllegalEvent);
    CHECK_THROWS_AS(arrive(PolicyId::Policy1, SystemState{}, 3, 1.0), IllegalEvent);
    CHECK_THROWS_AS(aoi_area_increment(1.0, -0.1), NegativeElapsed);
}

TEST_CASE("aoi area increment is the exact trapezoid") {
    CHECK(aoi_area_increment(0.0, 2.0) == 2.0);
    CHECK(aoi_area_increment(1.5, 2.0) == 5.0);
    CHECK(aoi_area_increment(3.0, 0.0) == 0.0);
}

TEST_CASE("property: random event sequences keep every policy's invariants") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick(0, 2);
    for (auto policy : kAllPolicies) {
        CAPTURE(policy_name(policy));
        for (int run = 0; run < 200; ++run) {
            SystemState s;
            double t = 0.0;
            std::array<double, 2> last{0.0, 0.0};
            for (int step = 0; step < 60; ++step) {
                t += 1.0;
                const int k = pick(rng);
                if (k == 0 && !s.in_service) continue;
                const Event e = k == 0 ? Event::completion(t) : Event::arrival(k, t);
                const std::size_t before = s.waiting.size() + (s.in_service ? 1 : 0);
                const auto r = step_policy(policy, s, e);
                REQUIRE(satisfies_invariants(policy, r.state));
                const std::size_t after = r.state.waiting.size() + (r.state.in_service ? 1 : 0);
                if (e.kind == EventKind::ServiceCompletion) {
                    REQUIRE(r.delivery.has_value());
                    CHECK(after + 1 == before);
                    // Deliveries of one source are in generation order.
                    const auto c = static_cast<std::size_t>(r.delivery->source - 1);
                    CHECK(r.delivery->generated >= last[c]);
                    last[c] = r.delivery->generated;
                } else {
                    CHECK(after <= before + 1);
                    CHECK(after >= 1);
                }
                s = r.state;
            }
        }
    }
}

TEST_CASE("config validation") {
    SimConfig c;
    CHECK_NOTHROW(validate(c));
    c.horizon_events = 100;
    CHECK_THROWS_AS(validate(c), InvalidConfig);
    c = SimConfig{};
    c.replications = 0;
    CHECK_THROWS_AS(validate(c), InvalidConfig);
    c = SimConfig{};
    c.warmup_fraction = 1.0;
    CHECK_THROWS_AS(validate(c), InvalidConfig);
}

TEST_CASE("simulation is deterministic for a fixed seed") {
    SimConfig c;
    c.policy = PolicyId::PpWw;
    c.loads = LoadPoint::from_loads(0.7, 1.3, 1.0);
    c.horizon_events = 20'000;
    c.replications = 4;
    const auto a = simulate(c);
    const auto b = simulate(c);
    CHECK(a.mean_aoi == b.mean_aoi);
    CHECK(a.std_error == b.std_error);
    c.seed = 2;
    CHECK(simulate(c).mean_aoi != a.mean_aoi);
    CHECK(replication_seed(1, 0) != replication_seed(1, 1));
    CHECK(replication_seed(1, 1) != replication_seed(2, 0));
}

TEST_CASE("trace deliveries are ordered per source") {
    SimConfig c;
    c.policy = PolicyId::Policy1;
    c.loads = LoadPoint::from_loads(1.0, 1.0, 1.0);
    c.horizon_events = 10'000;
    c.replications = 2;
    std::ostringstream trace;
    simulate(c, &trace);
    std::istringstream in(trace.str());
    std::string line;
    std::map<std::pair<int, int>, double> last;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.rfind("policy", 0) == 0) continue;
        std::istringstream fields(line);
        std::string policy, rep, src, gen, del;
        std::getline(fields, policy, ',');
        std::getline(fields, rep, ',');
        std::getline(fields, src, ',');
        std::getline(fields, gen, ',');
        std::getline(fields, del, ',');
        const auto key = std::make_pair(std::stoi(rep), std::stoi(src));
        const double g = std::stod(gen);
        CHECK(std::stod(del) >= g);
        if (last.count(key)) CHECK(g > last[key]);
        last[key] = g;
        ++rows;
    }
    CHECK(rows > 1000);
}

TEST_CASE("simulation agrees with the closed forms") {
    struct Case {
        PolicyId policy;
        double r1, r2;
    };
    for (const auto& k : {Case{PolicyId::Policy1, 0.5, 0.5}, Case{PolicyId::Policy2, 1.0, 1.0},
                          Case{PolicyId::Policy3, 0.3, 1.7}}) {
        SimConfig c;
        c.policy = k.policy;
        c.loads = LoadPoint::from_loads(k.r1, k.r2, 1.0);
        c.horizon_events = 200'000;
        c.replications = 16;
        const auto res = simulate(c);
        for (int src = 0; src < 2; ++src) {
            const double r1 = src == 0 ? k.r1 : k.r2;
            const double r2 = src == 0 ? k.r2 : k.r1;
            const double exact = closed_form_aoi(k.policy, r1, r2, 1.0);
            CAPTURE(policy_name(k.policy));
            CAPTURE(src);
            CHECK(std::abs(res.mean_aoi[src] - exact) <= 4.0 * res.std_error[src]);
            CHECK(res.std_error[src] / exact < 0.01);
        }
    }
}

TEST_CASE("single-source limits in simulation") {
    // With a vanishing second source, LCFS-S reduces to the preemptive
    // one-slot queue with average age (1 + 1/rho) / mu.
    SimConfig c;
    c.policy = PolicyId::LcfsS;
    c.loads = LoadPoint::from_loads(1.0, 1e-6, 2.0);
    c.horizon_events = 100'000;
    const auto res = simulate(c);
    CHECK(std::abs(res.mean_aoi[0] - 1.0) <= 4.0 * res.std_error[0]);
}

TEST_CASE("baselines agree with independently derived values") {
    struct Case {
        PolicyId policy;
        double r1, r2;
        double d1, d2;
    };
    // PP-NW values come from a separate three-state SHS solve; LCFS-S from
    // the preemptive multi-source form (1 + rho) / (mu rho_i).
    const Case cases[] = {
        {PolicyId::PpNw, 0.5, 0.5, 19.0 / 3.0, 3.0},
        {PolicyId::PpNw, 0.9, 0.1, 251.0 / 99.0, 11.0},
        {PolicyId::LcfsS, 0.3, 0.7, 2.0 / 0.3, 2.0 / 0.7},
    };
    for (const auto& k : cases) {
        SimConfig c;
        c.policy = k.policy;
        c.loads = LoadPoint::from_loads(k.r1, k.r2, 1.0);
        c.horizon_events = 200'000;
        const auto res = simulate(c);
        CAPTURE(policy_name(k.policy));
        CAPTURE(k.r1);
        CHECK(std::abs(res.mean_aoi[0] - k.d1) <= 4.0 * res.std_error[0]);
        CHECK(std::abs(res.mean_aoi[1] - k.d2) <= 4.0 * res.std_error[1]);
    }
}
