#include "quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace bellsim;

TEST_CASE("Gauss-Kronrod weights integrate constants")
{
    double kron = quad::kKronrodWeights[7];
    for (int k = 0; k < 7; ++k)
        kron += 2 * quad::kKronrodWeights[k];
    const auto& g = quad::kGaussWeights;
    CHECK(kron == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(2 * (g[0] + g[1] + g[2]) + g[3] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("15-point rule is exact for polynomials up to degree 22")
{
    for (int degree = 0; degree <= 22; ++degree) {
        const auto f = [&](double x) { return quad::Vec<1>{std::pow(x, degree)}; };
        const auto p = quad::kronrod15<1>(f, 0.0, 1.0);
        CHECK(p.value[0] == doctest::Approx(1.0 / (degree + 1)).epsilon(1e-14));
        // the embedded 7-point Gauss rule is exact to degree 13
        if (degree <= 13)
            CHECK(p.error < 1e-14);
    }
}

TEST_CASE("adaptive integration of a kinked integrand")
{
    const auto f = [](double x) { return quad::Vec<2>{std::abs(x - 0.3), std::sqrt(x)}; };
    const double breaks[] = {0.0, 1.0};
    const auto r = quad::adaptive<2>(f, breaks, [](const quad::Vec<2>&) { return 1e-12; }, 10000);
    CHECK(r.value[0] == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-11));
    CHECK(r.value[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
    CHECK(r.panels > 2);
}

TEST_CASE("adaptive integration reports non-convergence")
{
    const auto f = [](double x) { return quad::Vec<1>{x < 1.0 / 3.0 ? 0.0 : 1.0}; };
    const double breaks[] = {0.0, 1.0};
    CHECK_THROWS_AS(quad::adaptive<1>(f, breaks, [](const quad::Vec<1>&) { return 0.0; }, 20),
                    QuadratureError);
    try {
        quad::adaptive<1>(f, breaks, [](const quad::Vec<1>&) { return 0.0; }, 20);
    } catch (const QuadratureError& e) {
        CHECK(e.achieved_error() > 0.0);
    }
}

TEST_CASE("fixed grid rule")
{
    const auto f = [](double x) { return quad::Vec<1>{std::sin(x)}; };
    const double breaks[] = {0.0, 3.14159265358979323846};
    const auto r = quad::fixed_grid<1>(f, breaks, 4);
    CHECK(r.value[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r.panels == 4);
}
