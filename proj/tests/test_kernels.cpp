#include <doctest.h>

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "kernels.hpp"
#include "oracles.hpp"
#include "specfun.hpp"

using namespace edgelaw;

TEST_SUITE("kernels") {
    TEST_CASE("airy kernel symmetry, diagonal and integral form") {
        CHECK(airy_kernel(0.3, 1.7) == airy_kernel(1.7, 0.3));
        const double diag = oracle::integrate([](double z) { return airy_ai(z) * airy_ai(z); }, 0.0, 40.0);
        CHECK(std::abs(airy_kernel(0.0, 0.0) - diag) <= 1e-12);
        CHECK(airy_kernel(0.0, 0.0) == doctest::Approx(0.2588194037928068 * 0.2588194037928068).epsilon(1e-14));
        const double off = oracle::integrate([](double z) { return airy_ai(1.0 + z) * airy_ai(2.0 + z); }, 0.0, 40.0);
        CHECK(std::abs(airy_kernel(1.0, 2.0) - off) <= 1e-9);
    }

    TEST_CASE("airy kernel is continuous across the near-diagonal switch") {
        for (double a : {-4.0, 0.0, 2.5}) {
            for (double h : {1e-2, 1e-3, 3e-4, 1e-4, 1e-6}) {
                const double ref = oracle::integrate(
                    [&](double z) { return airy_ai(a + z) * airy_ai(a + h + z); }, 0.0, 45.0);
                CHECK(std::abs(airy_kernel(a, a + h) - ref) <= 1e-12);
            }
        }
    }

    TEST_CASE("finite-temperature kernel: sigma -> 0 limit and symmetry") {
        CHECK(std::abs(ft_airy_kernel(1.0, 2.0, 0.0, 1e-3) - airy_kernel(1.0, 2.0)) <= 1e-4);
        CHECK(ft_airy_kernel(0.5, 2.0, 1.0, 1.5) == doctest::Approx(ft_airy_kernel(2.0, 0.5, 1.0, 1.5)).epsilon(1e-14));
        CHECK(ft_airy_kernel(0.4, 0.9, -1.0, 0.0) == airy_kernel(-0.6, -0.1));
    }

    TEST_CASE("real-line and contour routes agree") {
        const double r = ft_airy_kernel(0.2, 0.7, 2.0, 1.0);
        const auto c = ft_airy_kernel_contour_complex(0.2, 0.7, 2.0, 1.0, 2.0);
        CHECK(std::abs(r - c.real()) <= 1e-8);
        CHECK(std::abs(c.imag()) <= 1e-10);
    }

    TEST_CASE("contour diagonal against a phi-weighted quadrature") {
        const double ref = oracle::integrate(
            [](double y) { return phi(y) * airy_ai(y + 3.0) * airy_ai(y + 3.0); }, -12.0, 20.0);
        CHECK(std::abs(ft_airy_kernel_contour(0.0, 0.0, 3.0, 1.0) - ref) <= 1e-8);
    }

    TEST_CASE("contour value does not depend on the offset") {
        const double a = ft_airy_kernel_contour(1.0, 1.0, 2.0, 1.0, 1.0);
        const double b = ft_airy_kernel_contour(1.0, 1.0, 2.0, 1.0, 2.0);
        CHECK(std::abs(a - b) <= 1e-9);
        const double s = ft_airy_kernel_contour(1.0, 1.0, 2.0, 1.0, contour_saddle(1.0, 1.0, 2.0, 1.0));
        CHECK(std::abs(a - s) <= 1e-9);
    }

    TEST_CASE("contour argument checks") {
        CHECK_THROWS_AS(ft_airy_kernel_contour(0.0, 0.0, 0.0, 1.0, 0.0), InvalidArgument);
        CHECK_THROWS_AS(ft_airy_kernel_contour(0.0, 0.0, 0.0, 1.0, -1.0), InvalidArgument);
        CHECK_THROWS_AS(ft_airy_kernel_contour(0.0, 0.0, 0.0, 0.0, 1.0), InvalidArgument);
    }

    TEST_CASE("contour stays finite far from the diagonal") {
        for (double b : {5.0, 12.0, 21.0, 30.0}) {
            const double c = ft_airy_kernel_contour(0.02, b, 0.5, 1.0, contour_saddle(0.02, b, 0.5, 1.0));
            CHECK(std::isfinite(c));
            CHECK(std::abs(c - ft_airy_kernel(0.02, b, 0.5, 1.0)) <= 1e-12);
        }
    }

    TEST_CASE("two-dimensional kernel") {
        const double v = ksigma_2d(0.3, -0.4, 1.1, 0.8, 0.5, 1.2);
        CHECK(v == doctest::Approx(ksigma_2d(1.1, 0.8, 0.3, -0.4, 0.5, 1.2)).epsilon(1e-15));
        const double f = std::exp(-0.5 * (0.16 + 0.64)) / std::sqrt(std::numbers::pi) * airy_kernel(0.8, 1.6);
        CHECK(ksigma_2d(0.3, -0.4, 1.1, 0.8, 0.5, 0.0) == doctest::Approx(f).epsilon(1e-14));
        double sup = 0.0;
        for (double x = -8.0; x <= 8.0; x += 0.01) sup = std::max(sup, airy_kernel(x, x));
        for (double x = 0.0; x <= 4.0; x += 0.5)
            for (double y = -3.0; y <= 3.0; y += 0.5)
                CHECK(std::abs(ksigma_2d(x, y, x, y, 0.0, 1.0)) <= std::exp(-y * y) / std::sqrt(std::numbers::pi) * sup);
    }

    TEST_CASE("gumbel kernel limit") {
        const double target = std::exp(-1.0);
        double prev = 1.0;
        for (double s : {10.0, 100.0, 1000.0}) {
            const double v = gumbel_limit_diag(1.0, s);
            CHECK(v > 0.0);
            CHECK(std::abs(v - target) < prev);
            prev = std::abs(v - target);
        }
        CHECK(gumbel_limit_diag(3.0, 100.0) < gumbel_limit_diag(1.0, 100.0));
        for (double x : {0.0, 0.5, 2.0, 4.0})
            for (double s : {5.0, 50.0}) CHECK(gumbel_limit_diag(x, s) > 0.0);
        CHECK_THROWS_AS(gumbel_limit_diag(1.0, 1.0), InvalidArgument);
    }

    TEST_CASE("sigma continuity") {
        const double h = 1e-2;
        const double mid = ft_airy_kernel(0.5, 1.0, 0.0, 1.0);
        const double avg = 0.5 * (ft_airy_kernel(0.5, 1.0, 0.0, 1.0 + h) + ft_airy_kernel(0.5, 1.0, 0.0, 1.0 - h));
        CHECK(std::abs(mid - avg) <= 1e-5);
    }

    TEST_CASE("eval_kernel dispatch") {
        KernelSpec s;
        s.tag = KernelSpec::Tag::airy;
        s.t = -1.0;
        CHECK(eval_kernel(s, 0.5, 1.0) == airy_kernel(-0.5, 0.0));
        s.tag = KernelSpec::Tag::ksigma_2d;
        CHECK_THROWS_AS(eval_kernel(s, 0.5, 1.0), InvalidArgument);
    }
}
