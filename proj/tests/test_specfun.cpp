#include <doctest.h>

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "oracles.hpp"
#include "specfun.hpp"

using namespace edgelaw;

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);
}

TEST_SUITE("specfun") {
    TEST_CASE("airy_ai matches the extended-precision Maclaurin series") {
        CHECK(airy_ai(0.0) == doctest::Approx(0.3550280538878172).epsilon(1e-15));
        for (double x = -5.0; x <= 5.0; x += 0.25) {
            CHECK(std::abs(airy_ai(x) - static_cast<double>(oracle::airy_maclaurin(x))) <= 1e-12);
        }
    }

    TEST_CASE("airy_ai_prime matches the extended-precision Maclaurin series") {
        CHECK(airy_ai_prime(0.0) == doctest::Approx(-0.2588194037928068).epsilon(1e-15));
        for (double x = -5.0; x <= 5.0; x += 0.25) {
            CHECK(std::abs(airy_ai_prime(x) - static_cast<double>(oracle::airy_maclaurin(x, true))) <= 1e-11);
        }
    }

    TEST_CASE("airy decay bounds with c = 1/(2 sqrt(pi))") {
        const double c = 1.0 / (2.0 * kSqrtPi);
        const double v = airy_ai(20.0);
        CHECK(v > 0.0);
        CHECK(v < std::pow(20.0, -0.25) * std::exp(-2.0 / 3.0 * std::pow(20.0, 1.5)));
        for (double x = 1.0; x <= 20.0; x += 0.5) {
            const double env = std::exp(-2.0 / 3.0 * std::pow(x, 1.5));
            CHECK(airy_ai(x) <= c * std::pow(x, -0.25) * env);
            CHECK(airy_ai_prime(x) < 0.0);
            // Ai' overshoots the leading term by the factor 1 + 7/(72 zeta)
            CHECK(-airy_ai_prime(x) <= 1.2 * c * std::pow(x, 0.25) * env);
        }
    }

    TEST_CASE("airy ODE residual and derivative consistency") {
        const double h = 1e-4;
        for (double x : {-2.0, 0.0, 3.0}) {
            const double d2 = (airy_ai(x + h) - 2.0 * airy_ai(x) + airy_ai(x - h)) / (h * h);
            CHECK(std::abs(d2 - x * airy_ai(x)) <= 1e-6);
        }
        const double fd = (airy_ai(1.0 + h) - airy_ai(1.0 - h)) / (2.0 * h);
        CHECK(std::abs(fd - airy_ai_prime(1.0)) <= 1e-6);
    }

    TEST_CASE("airy kernel diagonal and its tail integral") {
        for (double x : {-3.0, 0.0, 2.0, 5.0}) {
            const double q = oracle::integrate([](double s) { return airy_kernel_diag(s); }, x, 30.0);
            CHECK(std::abs(airy_kernel_diag_tail(x) - q) <= 1e-12);
        }
    }

    TEST_CASE("phi values, symmetry and the Gaussian bound") {
        CHECK(phi(0.0) == 0.5);
        for (double x = -8.0; x <= 8.0; x += 0.37) CHECK(std::abs(phi(x) + phi(-x) - 1.0) <= 2e-16);
        CHECK(std::abs(phi(2.0) - 1.0) <= 0.5 * std::exp(-4.0));
        CHECK(phi(-6.0) < 1.1e-17);
        for (double x : {3.0, 6.0, 10.0, 20.0, 26.0}) {
            const double ref = static_cast<double>(oracle::phi_lower_tail(x));
            CHECK(std::abs(phi(-x) / ref - 1.0) <= 1e-13);
        }
    }

    TEST_CASE("log_phi keeps relative accuracy in both tails") {
        for (double x : {-40.0, -27.0, -10.0, -3.0}) {
            const double ref = static_cast<double>(std::log(oracle::phi_lower_tail(-x)));
            CHECK(std::abs(log_phi(x) / ref - 1.0) <= 1e-13);
        }
        CHECK(std::abs(log_phi(-1.0) / std::log(0.5 * std::erfc(1.0)) - 1.0) <= 1e-14);
        CHECK(std::abs(log_phi(6.0) / -static_cast<double>(oracle::phi_lower_tail(6.0)) - 1.0) <= 1e-12);
    }

    TEST_CASE("phi increasing, erfc decreasing") {
        for (int i = 1; i < 1000; ++i) {
            const double a = -8.0 + 13.0 * (i - 1) / 999.0, b = -8.0 + 13.0 * i / 999.0;
            CHECK(phi(b) > phi(a));
            const double c = -5.0 + 30.0 * (i - 1) / 999.0, d = -5.0 + 30.0 * i / 999.0;
            CHECK(edgelaw::erfc(d) < edgelaw::erfc(c));
        }
    }

    TEST_CASE("classical small rules") {
        const QuadGrid g = gauss_legendre(2);
        CHECK(g.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
        CHECK(g.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
        CHECK(g.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(g.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
        const QuadGrid h = gauss_hermite(1);
        CHECK(h.nodes[0] == 0.0);
        CHECK(h.weights[0] == doctest::Approx(kSqrtPi).epsilon(1e-15));
        const QuadGrid h20 = gauss_hermite(20);
        double m2 = 0.0;
        for (std::size_t i = 0; i < h20.size(); ++i) m2 += h20.weights[i] * h20.nodes[i] * h20.nodes[i];
        CHECK(std::abs(m2 - kSqrtPi / 2.0) <= 1e-12);
    }

    TEST_CASE("rule invariants and exactness") {
        for (std::size_t m : {1u, 3u, 8u, 17u, 40u}) {
            for (const QuadGrid& g : {gauss_legendre(m, 2.0, 5.0), gauss_hermite(m)}) {
                double sum = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    CHECK(g.weights[i] > 0.0);
                    if (i > 0) CHECK(g.nodes[i] > g.nodes[i - 1]);
                    sum += g.weights[i];
                }
                const double expect = g.kind == QuadGrid::Kind::hermite ? kSqrtPi : 3.0;
                CHECK(std::abs(sum - expect) <= 1e-13 * expect);
            }
            // degree 2m - 1 on [2, 5]
            const QuadGrid g = gauss_legendre(m, 2.0, 5.0);
            const double k = static_cast<double>(2 * m - 1);
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
            const double exact = (std::pow(5.0, k + 1) - std::pow(2.0, k + 1)) / (k + 1);
            CHECK(std::abs(s / exact - 1.0) <= 1e-13);
        }
    }

    TEST_CASE("composite rule covers the breakpoints") {
        const QuadGrid g = composite_legendre({0.0, 1.0, 3.0, 7.0}, 10);
        CHECK(g.size() == 30);
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::exp(-g.nodes[i]);
        CHECK(std::abs(s - (1.0 - std::exp(-7.0))) <= 1e-14);
    }

    TEST_CASE("empty rules are rejected") {
        CHECK_THROWS_AS(gauss_legendre(0), InvalidArgument);
        CHECK_THROWS_AS(gauss_hermite(0), InvalidArgument);
    }
}
