#include <doctest.h>

#include <cmath>
#include <numeric>

#include "aoi/closed_form.hpp"
#include "aoi/policy_models.hpp"
#include "aoi/shs.hpp"

using namespace aoi;

// Frozen reference values. Each is an exact rational obtained from an
// independent symbolic solve of the SHS equations.
TEST_CASE("frozen closed-form values") {
    CHECK(theorem1_aoi(0.5, 0.5, 1.0) == doctest::Approx(3319.0 / 882.0).epsilon(1e-14));
    CHECK(theorem1_aoi(0.5, 0.5, 1.0) == doctest::Approx(3.7630385487528345).epsilon(1e-14));
    CHECK(theorem2_aoi(0.25, 3.0, 1.0) == doctest::Approx(55874.0 / 9775.0).epsilon(1e-14));
    CHECK(theorem2_aoi(0.25, 3.0, 1.0) == doctest::Approx(5.7160102301790281).epsilon(1e-14));
    CHECK(theorem3_aoi(1.0, 1.0, 1.0) == doctest::Approx(37.0 / 12.0).epsilon(1e-14));
    CHECK(theorem3_aoi(2.0, 0.5, 1.0) == doctest::Approx(3589.0 / 1386.0).epsilon(1e-14));
    CHECK(theorem1_aoi(1.0, 1.0, 1.0) == doctest::Approx(141.0 / 44.0).epsilon(1e-14));
    CHECK(theorem2_aoi(1.0, 1.0, 1.0) == doctest::Approx(73.0 / 30.0).epsilon(1e-14));
}

TEST_CASE("zero-load limits") {
    for (double r1 : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        CAPTURE(r1);
        CHECK(theorem2_aoi(r1, 0.0, 1.0) == doctest::Approx((1.0 + r1) / r1).epsilon(1e-13));
        // One-slot blocking queue.
        CHECK(theorem3_aoi(r1, 0.0, 1.0) == doctest::Approx(1.0 + 1.0 / r1 + r1 / (1.0 + r1)).epsilon(1e-13));
    }
    CHECK(theorem1_aoi(1.0, 0.0, 1.0) == doctest::Approx(116.0 / 48.0).epsilon(1e-13));
    // Continuity into the limit.
    CHECK(theorem1_aoi(1.0, 1e-9, 1.0) == doctest::Approx(theorem1_aoi(1.0, 0.0, 1.0)).epsilon(1e-8));
}

TEST_CASE("service rate scales the age") {
    for (double mu : {0.5, 2.0, 7.0}) {
        CHECK(theorem1_aoi(0.7, 1.1, mu) == doctest::Approx(theorem1_aoi(0.7, 1.1, 1.0) / mu).epsilon(1e-14));
        CHECK(theorem2_aoi(0.7, 1.1, mu) == doctest::Approx(theorem2_aoi(0.7, 1.1, 1.0) / mu).epsilon(1e-14));
        CHECK(theorem3_aoi(0.7, 1.1, mu) == doctest::Approx(theorem3_aoi(0.7, 1.1, 1.0) / mu).epsilon(1e-14));
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(theorem1_aoi(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(theorem2_aoi(1.0, -0.1, 1.0), DomainError);
    CHECK_THROWS_AS(theorem3_aoi(1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(theorem3_aoi(std::nan(""), 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(closed_form_aoi(PolicyId::LcfsS, 1.0, 1.0, 1.0), UnsupportedPolicy);
}

TEST_CASE("per-state correlations sum to the closed forms") {
    const double loads[] = {0.05, 0.3, 1.0, 2.5, 10.0};
    for (double r1 : loads) {
        for (double r2 : loads) {
            for (double mu : {0.5, 1.0, 3.0}) {
                CAPTURE(r1);
                CAPTURE(r2);
                CAPTURE(mu);
                const auto v1 = policy1_vq0(r1, r2, mu);
                const auto v2 = policy2_vq0(r1, r2, mu);
                const auto v3 = policy3_vq0(r1, r2, mu);
                CHECK(std::accumulate(v1.begin(), v1.end(), 0.0) ==
                      doctest::Approx(theorem1_aoi(r1, r2, mu)).epsilon(1e-12));
                CHECK(std::accumulate(v2.begin(), v2.end(), 0.0) ==
                      doctest::Approx(theorem2_aoi(r1, r2, mu)).epsilon(1e-12));
                CHECK(std::accumulate(v3.begin(), v3.end(), 0.0) ==
                      doctest::Approx(theorem3_aoi(r1, r2, mu)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("stationary vectors agree with the numerical solver") {
    for (double r1 : {0.2, 1.0, 4.0}) {
        for (double r2 : {0.3, 1.0, 6.0}) {
            const auto loads = LoadPoint::from_loads(r1, r2, 1.0);
            const auto p1 = policy1_stationary(r1, r2).probabilities;
            const auto n1 = stationary_distribution(build_policy1_model(), loads).probabilities;
            for (std::size_t q = 0; q < 6; ++q) CHECK(p1[q] == doctest::Approx(n1[q]).epsilon(1e-12));
            const auto p2 = policy23_stationary(r1, r2).probabilities;
            const auto n2 = stationary_distribution(build_policy2_model(), loads).probabilities;
            const auto n3 = stationary_distribution(build_policy3_model(), loads).probabilities;
            for (std::size_t q = 0; q < 5; ++q) {
                CHECK(p2[q] == doctest::Approx(n2[q]).epsilon(1e-12));
                CHECK(p2[q] == doctest::Approx(n3[q]).epsilon(1e-12));
            }
        }
    }
    CHECK_THROWS_AS(policy1_stationary(0.0, 0.0), DomainError);
}

TEST_CASE("property: orderings among the source-aware policies") {
    // Preempting a same-source packet in service never hurts that source
    // relative to discarding the newcomer.
    for (double r1 = 0.05; r1 < 10.0; r1 *= 1.37) {
        for (double r2 = 0.05; r2 < 10.0; r2 *= 1.41) {
            CAPTURE(r1);
            CAPTURE(r2);
            CHECK(theorem2_aoi(r1, r2, 1.0) <= theorem3_aoi(r1, r2, 1.0) * (1.0 + 1e-12));
            CHECK(theorem1_aoi(r1, r2, 1.0) > 1.0);
            CHECK(theorem2_aoi(r1, r2, 1.0) > 1.0);
            CHECK(theorem3_aoi(r1, r2, 1.0) > 1.0);
            // More load from the other source can only delay this one.
            CHECK(theorem2_aoi(r1, r2 * 1.1, 1.0) >= theorem2_aoi(r1, r2, 1.0));
        }
    }
}
