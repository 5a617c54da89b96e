#include "aoi/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "aoi/closed_form.hpp"
#include "aoi/report.hpp"

namespace aoi {

namespace {

// Stand-in for rho2 = 0 where the engine needs a strictly positive rate.
constexpr double kTinyLoad = 1e-12;

template <std::size_t N>
VectorForm as_vector(std::array<double, N> (*f)(double, double, double)) {
    return [f](double r1, double r2, double mu) {
        const auto a = f(r1, r2, mu);
        return std::vector<double>(a.begin(), a.end());
    };
}

double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

}  // namespace

AnalyticBackend reference_backend() {
    return AnalyticBackend{
        {theorem1_aoi, theorem2_aoi, theorem3_aoi},
        {as_vector(policy1_vq0), as_vector(policy2_vq0), as_vector(policy3_vq0)},
    };
}

ValidationReport run_validation(const AnalyticBackend& backend) {
    ValidationReport report;

    for (std::size_t k = 0; k < kSourceAwarePolicies.size(); ++k) {
        const PolicyId policy = kSourceAwarePolicies[k];
        const ShsModel model = build_model(policy);
        PolicyCheck check;
        check.policy = policy;
        for (double mu : kValidationServiceRates) {
            for (double r1 : kValidationLoads) {
                for (double r2 : kValidationLoads) {
                    const double closed = backend.aoi[k](r1, r2, mu);
                    double engine = std::nan("");
                    try {
                        engine = average_aoi(model, LoadPoint::from_loads(r1, r2, mu));
                    } catch (const Error&) {
                    }
                    const auto parts = backend.vq0[k](r1, r2, mu);
                    const double sum = std::accumulate(parts.begin(), parts.end(), 0.0);
                    // NaN-safe: a failed solve or a NaN form counts as infinite error.
                    const double e1 = rel_err(engine, closed);
                    const double e2 = rel_err(sum, closed);
                    check.max_engine_rel_err =
                        std::isnan(e1) ? INFINITY : std::max(check.max_engine_rel_err, e1);
                    check.max_sum_rel_err =
                        std::isnan(e2) ? INFINITY : std::max(check.max_sum_rel_err, e2);
                    ++check.points;
                }
            }
        }
        check.passed =
            check.max_engine_rel_err <= kEngineTolerance && check.max_sum_rel_err <= kSumTolerance;
        report.policies.push_back(check);
    }

    auto add_limit = [&](std::string name, std::size_t k, double r1, double mu, double expected) {
        LimitCheck c;
        c.name = std::move(name);
        c.expected = expected;
        c.closed_form = backend.aoi[k](r1, 0.0, mu);
        c.engine = average_aoi(build_model(kSourceAwarePolicies[k]),
                               LoadPoint::from_loads(r1, kTinyLoad, mu));
        c.passed = rel_err(c.closed_form, expected) <= kLimitTolerance &&
                   rel_err(c.engine, expected) <= kEngineTolerance;
        report.limits.push_back(std::move(c));
    };
    for (double r1 : {0.5, 1.0, 2.0, 5.0}) {
        add_limit("p2 rho2=0 rho1=" + format_number(r1), 1, r1, 1.0, (1.0 + r1) / r1);
    }
    add_limit("p3 rho2=0 rho1=1", 2, 1.0, 1.0, 2.5);
    add_limit("p1 rho2=0 rho1=1", 0, 1.0, 1.0, 116.0 / 48.0);

    report.passed =
        std::all_of(report.policies.begin(), report.policies.end(), [](const auto& c) { return c.passed; }) &&
        std::all_of(report.limits.begin(), report.limits.end(), [](const auto& c) { return c.passed; });
    return report;
}

void print_report(const ValidationReport& report, std::ostream& out) {
    char buf[256];
    for (const auto& c : report.policies) {
        std::snprintf(buf, sizeof buf,
                      "%s %s points=%zu engine max rel err %.3e (tol %.0e), state-sum max rel err %.3e (tol %.0e)",
                      c.passed ? "PASS" : "FAIL", std::string(policy_name(c.policy)).c_str(), c.points,
                      c.max_engine_rel_err, kEngineTolerance, c.max_sum_rel_err, kSumTolerance);
        out << buf << '\n';
    }
    for (const auto& c : report.limits) {
        std::snprintf(buf, sizeof buf, "%s limit %s expected %.12f closed-form %.12f engine %.12f",
                      c.passed ? "PASS" : "FAIL", c.name.c_str(), c.expected, c.closed_form, c.engine);
        out << buf << '\n';
    }
    out << (report.passed ? "validation passed" : "validation FAILED") << '\n';
}

}  // namespace aoi
