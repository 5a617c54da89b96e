#include "aoi/closed_form.hpp"

#include <cmath>
#include <initializer_list>
#include <sstream>
#include <string>

namespace aoi {

namespace {

using Poly = std::initializer_list<double>;         // ascending powers of rho2
using Bivariate = std::initializer_list<Poly>;      // row k multiplies rho1^k

double horner(Poly coeffs, double x) {
    double acc = 0.0;
    for (auto it = std::rbegin(coeffs); it != std::rend(coeffs); ++it) acc = acc * x + *it;
    return acc;
}

double horner(Bivariate rows, double rho1, double rho2) {
    double acc = 0.0;
    for (auto it = std::rbegin(rows); it != std::rend(rows); ++it) acc = acc * rho1 + horner(*it, rho2);
    return acc;
}

void check_domain(const char* what, double rho1, double rho2, double mu) {
    if (!(std::isfinite(rho1) && rho1 > 0.0) || !(std::isfinite(rho2) && rho2 >= 0.0) ||
        !(std::isfinite(mu) && mu > 0.0)) {
        std::ostringstream os;
        os << what << ": requires rho1 > 0, rho2 >= 0, mu > 0 (got rho1=" << rho1
           << ", rho2=" << rho2 << ", mu=" << mu << ")";
        throw DomainError(os.str());
    }
}

void check_occupancy_domain(double rho1, double rho2) {
    if (!(std::isfinite(rho1) && rho1 >= 0.0) || !(std::isfinite(rho2) && rho2 >= 0.0) ||
        (rho1 == 0.0 && rho2 == 0.0)) {
        throw DomainError("stationary occupancy requires rho1, rho2 >= 0, not both zero");
    }
}

// rho1^2 (2 rho2 + 1) + (rho2 + 1)^2 (2 rho1 + 1), which equals
// (1 + rho)(1 + rho + 2 rho1 rho2).
double two_slot_factor(double rho1, double rho2) {
    return rho1 * rho1 * (2.0 * rho2 + 1.0) + (rho2 + 1.0) * (rho2 + 1.0) * (2.0 * rho1 + 1.0);
}

}  // namespace

double theorem1_aoi(double rho1, double rho2, double mu) {
    check_domain("theorem1_aoi", rho1, rho2, mu);
    const double num = horner(
        {
            {1, 2, 3, 2, 1},
            {6, 14, 21, 15, 7},
            {16, 42, 64, 46, 17},
            {26, 78, 118, 73, 15},
            {30, 102, 124, 52, 5},
            {24, 79, 66, 15},
            {11, 31, 15},
            {2, 5},
        },
        rho1, rho2);
    const double den_poly = horner(
        {
            {1, 2, 3, 2, 1},
            {3, 7, 9, 6, 2},
            {4, 10, 12, 6},
            {3, 8, 6},
            {1, 2},
        },
        rho1, rho2);
    return num / (mu * rho1 * (1.0 + rho1) * (1.0 + rho1) * den_poly);
}

double theorem2_aoi(double rho1, double rho2, double mu) {
    check_domain("theorem2_aoi", rho1, rho2, mu);
    const double num = horner(
        {
            {1, 2, 1},
            {5, 11, 6},
            {10, 24, 13},
            {10, 27, 10},
            {5, 14, 3},
            {1, 3},
        },
        rho1, rho2);
    return num / (mu * rho1 * (1.0 + rho1) * (1.0 + rho1) * two_slot_factor(rho1, rho2));
}

double theorem3_aoi(double rho1, double rho2, double mu) {
    check_domain("theorem3_aoi", rho1, rho2, mu);
    const double num = horner(
        {
            {1, 3, 3, 1},
            {4, 13, 14, 5},
            {7, 25, 28, 10},
            {6, 23, 22, 5},
            {2, 8, 5},
        },
        rho1, rho2);
    return num / (mu * rho1 * (1.0 + rho1) * (1.0 + rho2) * two_slot_factor(rho1, rho2));
}

double closed_form_aoi(PolicyId policy, double rho1, double rho2, double mu) {
    switch (policy) {
        case PolicyId::Policy1: return theorem1_aoi(rho1, rho2, mu);
        case PolicyId::Policy2: return theorem2_aoi(rho1, rho2, mu);
        case PolicyId::Policy3: return theorem3_aoi(rho1, rho2, mu);
        default:
            throw UnsupportedPolicy("no closed form in scope for " +
                                    std::string(policy_name(policy)) + "; use simulate");
    }
}

StationaryDistribution policy1_stationary(double rho1, double rho2) {
    check_occupancy_domain(rho1, rho2);
    const double rho = rho1 + rho2;
    const double norm = rho * rho + rho * (2.0 * rho1 * rho2 + 1.0) + 1.0;
    return {{1.0 / norm, rho / norm, rho1 * rho / norm, rho2 * rho / norm,
             rho1 * rho2 * rho / norm, rho1 * rho2 * rho / norm}};
}

StationaryDistribution policy23_stationary(double rho1, double rho2) {
    check_occupancy_domain(rho1, rho2);
    const double norm = 2.0 * rho1 * rho2 + rho1 + rho2 + 1.0;
    return {{1.0 / norm, rho1 / norm, rho2 / norm, rho1 * rho2 / norm, rho1 * rho2 / norm}};
}

// Four of the printed gamma coefficients disagree with a direct solve of the
// Policy 1 correlation system and are corrected here:
//   gamma_{1,7} = rho2 + 1             (printed rho2^2 + 10 rho2 + 1)
//   gamma_{2,3} has 20 rho2^5          (printed 2 rho2^5)
//   gamma_{2,4} has 138 rho2 + 33      (printed 138 + 33)
//   gamma_{4,6} has 17 rho2            (printed 14 rho2)
std::array<double, 6> policy1_vq0(double rho1, double rho2, double mu) {
    check_domain("policy1_vq0", rho1, rho2, mu);
    const double rho = rho1 + rho2;
    const double a = (rho + 1.0) * (rho + 1.0) - rho2;
    const double b = rho * rho + rho * (2.0 * rho1 * rho2 + 1.0) + 1.0;
    const double p1 = (1.0 + rho1) * (1.0 + rho1);
    const double p2 = 1.0 + rho2;
    const double common = mu * p1 * a * b;
    const double tail = (1.0 + rho) * common;

    const double n0 = horner({{1, 1, 1}, {5, 6, 4}, {10, 11, 2}, {9, 5}, {3}}, rho1, rho2);
    const double n1 = horner(
        {
            {0, 1, 3, 4, 3, 1},
            {1, 9, 22, 26, 16, 4},
            {6, 35, 70, 64, 25, 2},
            {16, 72, 107, 62, 11},
            {23, 77, 75, 23, 1},
            {18, 41, 23, 3},
            {7, 10, 3},
            {1, 1},
        },
        rho1, rho2);
    const double n2 = horner(
        {
            {0, 1, 4, 7, 7, 4, 1},
            {1, 10, 32, 51, 46, 23, 5},
            {7, 46, 119, 156, 108, 36, 4},
            {21, 111, 222, 213, 100, 20, 1},
            {33, 138, 202, 134, 40, 4},
            {28, 87, 89, 39, 6},
            {12, 26, 18, 4},
            {2, 3, 1},
        },
        rho1, rho2);
    const double n3 = horner(
        {
            {0, 0, 1, 3, 4, 3, 1},
            {0, 1, 10, 25, 30, 19, 5},
            {0, 6, 41, 87, 84, 37, 5},
            {0, 18, 91, 149, 101, 27, 2},
            {0, 30, 110, 126, 55, 8},
            {0, 27, 69, 51, 12},
            {0, 12, 20, 8},
            {0, 2, 2},
        },
        rho1, rho2);
    const double n4 = horner(
        {
            {0, 0, 1, 4, 7, 7, 4, 1},
            {0, 1, 11, 36, 58, 53, 27, 6},
            {0, 8, 55, 145, 193, 137, 48, 6},
            {0, 26, 140, 287, 286, 143, 32, 2},
            {0, 43, 183, 281, 201, 67, 8},
            {0, 38, 123, 137, 67, 12},
            {0, 17, 40, 31, 8},
            {0, 3, 5, 2},
        },
        rho1, rho2);
    const double n5 = horner(
        {
            {0, 0, 1, 3, 4, 3, 1},
            {0, 1, 11, 28, 34, 22, 6},
            {0, 7, 49, 105, 103, 47, 7},
            {0, 23, 115, 190, 133, 38, 3},
            {0, 40, 145, 170, 78, 12},
            {0, 37, 95, 73, 18},
            {0, 17, 29, 12},
            {0, 3, 3},
        },
        rho1, rho2);

    return {
        n0 / (rho1 * common),
        n1 / (rho1 * p2 * tail),
        n2 / (p2 * p2 * tail),
        n3 / (rho1 * p2 * tail),
        n4 / (p2 * p2 * tail),
        n5 / (p2 * tail),
    };
}

std::array<double, 5> policy2_vq0(double rho1, double rho2, double mu) {
    check_domain("policy2_vq0", rho1, rho2, mu);
    const double rho = rho1 + rho2;
    const double c = 1.0 + rho + 2.0 * rho1 * rho2;
    const double p1 = (1.0 + rho1) * (1.0 + rho1);
    const double r1sq = rho1 * rho1;
    const double r1cu = r1sq * rho1;
    const double with_rho = mu * rho1 * p1 * (1.0 + rho) * c;
    const double with_p2 = mu * (1.0 + rho2) * p1 * c;

    return {
        (r1sq * (2.0 * rho + 5.0) + (4.0 * rho1 + 1.0) * (rho2 + 1.0)) / with_rho,
        ((1.0 + rho2) * (r1cu + 4.0 * r1sq + 1.0) + rho1 * (5.0 * rho2 + 4.0)) / with_p2,
        rho2 * (r1sq * (2.0 * rho + 6.0) + (4.0 * rho1 + 1.0) * (rho2 + 1.0)) / with_rho,
        rho2 * ((1.0 + rho2) * (2.0 * r1cu + 6.0 * r1sq + 1.0) + rho1 * (6.0 * rho2 + 5.0)) / with_p2,
        rho2 *
            (r1sq * (r1sq + 5.0 * rho1 + rho1 * rho2 + 4.0 * rho2 + 9.0) +
             (5.0 * rho1 + 1.0) * (1.0 + rho2)) /
            (mu * p1 * (1.0 + rho) * c),
    };
}

std::array<double, 5> policy3_vq0(double rho1, double rho2, double mu) {
    check_domain("policy3_vq0", rho1, rho2, mu);
    const double rho = rho1 + rho2;
    const double c = 1.0 + rho + 2.0 * rho1 * rho2;
    const double r1sq = rho1 * rho1;
    const double r1cu = r1sq * rho1;
    const double q2 = (rho2 + 2.0) * (rho2 + 2.0) - 1.0;
    const double s2 = (rho2 + 1.0) * (rho2 + 1.0);
    const double base = mu * (1.0 + rho1) * (1.0 + rho2) * c;

    return {
        (r1cu + r1sq * q2 + s2 * (3.0 * rho1 + 1.0)) / (rho1 * (1.0 + rho) * base),
        ((1.0 + rho2) * (2.0 * r1sq + 1.0) + rho1 * (4.0 * rho2 + 3.0)) / base,
        rho2 *
            (r1cu * (rho2 + 2.0) + r1sq * (rho2 * rho2 + 5.0 * rho2 + 4.0) +
             (3.0 * rho1 + 1.0) * s2) /
            (rho1 * (1.0 + rho) * base),
        rho2 * ((rho2 + 1.0) * (3.0 * r1sq + 1.0) + rho1 * (5.0 * rho2 + 4.0)) / base,
        rho2 * (r1cu * (2.0 * rho2 + 3.0) + 2.0 * r1sq * q2 + (4.0 * rho1 + 1.0) * s2) /
            ((1.0 + rho) * base),
    };
}

}  // namespace aoi
