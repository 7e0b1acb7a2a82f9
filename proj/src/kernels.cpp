#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "tails.hpp"

namespace edgelaw {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this separation the Christoffel-Darboux quotient loses digits; the
// second-order expansion about the midpoint is used instead.
constexpr double kNearDiagonal = 2e-4;

// Ai(x)^2 < 1e-30 beyond this argument.
constexpr double kAiryCutoff = 14.5;

}  // namespace

double airy_kernel(double a, double b) {
    const double d = a - b;
    if (std::abs(d) < kNearDiagonal) {
        const double m = 0.5 * (a + b), h = 0.5 * d;
        return airy_kernel_diag(m) - h * h * airy_kernel_diag_tail(m);
    }
    double ai_a, aip_a, ai_b, aip_b;
    airy_pair(a, ai_a, aip_a);
    airy_pair(b, ai_b, aip_b);
    return (ai_a * aip_b - aip_a * ai_b) / d;
}

QuadGrid ft_inner_grid(double t, double sigma, double amin, std::size_t panel_nodes) {
    require(sigma > 0.0, "ft_inner_grid: sigma must be positive");
    const double lo = -std::max(8.0 * sigma, 8.0);
    const double hi = std::max(kAiryCutoff - t - amin, lo + 1.0);

    // Breakpoints: geometric grading about y = 0 where phi(y/sigma) switches,
    // then panels no wider than 2 and no wider than ~4 local Airy wavelengths.
    std::vector<double> pts{0.0};
    double g = 0.25 * sigma;
    while (g < 2.0) {
        pts.push_back(g);
        pts.push_back(-g);
        g *= 2.0;
    }
    auto panel = [&](double y) {
        const double u = std::max(1.0, -(y + t + amin));
        return std::min(2.0, 4.0 * kPi / std::sqrt(u));
    };
    for (double y = g; y < hi;) {
        pts.push_back(y);
        y += panel(y);
    }
    for (double y = -g; y > lo;) {
        pts.push_back(y);
        y -= panel(y);
    }
    std::vector<double> br{lo, hi};
    for (double p : pts) {
        if (p > lo && p < hi) br.push_back(p);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end(), [](double x, double y) { return y - x < 1e-12; }),
             br.end());
    QuadGrid q = composite_legendre(br, panel_nodes);
    for (std::size_t j = 0; j < q.size(); ++j) q.weights[j] *= phi(q.nodes[j] / sigma);
    return q;
}

double ft_airy_kernel(double a, double b, double t, double sigma, std::size_t panel_nodes) {
    require(sigma >= 0.0 && std::isfinite(sigma), "ft_airy_kernel: sigma must be >= 0");
    if (sigma == 0.0) return airy_kernel(a + t, b + t);
    const QuadGrid q = ft_inner_grid(t, sigma, std::min(a, b), panel_nodes);
    double s = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        const double y = q.nodes[j];
        s += q.weights[j] * airy_ai(a + y + t) * airy_ai(b + y + t);
    }
    if (!std::isfinite(s)) {
        throw NumericFailure("ft_airy_kernel: non-finite value at a=" + std::to_string(a) +
                             " b=" + std::to_string(b));
    }
    return s;
}

double contour_saddle(double a, double b, double t, double sigma) {
    require(sigma > 0.0, "contour_saddle: sigma must be positive");
    const double s3 = sigma * sigma * sigma;
    const double lin = (a + b + 2.0 * t) / (2.0 * sigma);
    const double d2 = (a - b) * (a - b);
    // Derivative in delta of the real part of the exponent at lambda = i delta.
    auto slope = [&](double d) {
        return d * d / (4.0 * s3) + 0.5 * d - lin - 1.5 / d + sigma * d2 / (4.0 * d * d);
    };
    // Without the cubic and (a-b)^2 terms the root is lin + sqrt(lin^2 + 3),
    // an upper bound for the outermost local minimum. Scan down from there.
    double hi = std::max(lin + std::sqrt(lin * lin + 3.0), 1e-3);
    while (slope(hi) < 0.0) hi *= 2.0;
    double best = hi, best_slope = slope(hi);
    for (double d = hi; d > 1e-3 * hi; d *= 0.95) {
        const double g = slope(d);
        if (g < 0.0) {
            double lo = d, up = d / 0.95;
            for (int k = 0; k < 60; ++k) {
                const double mid = 0.5 * (lo + up);
                (slope(mid) < 0.0 ? lo : up) = mid;
            }
            return 0.5 * (lo + up);
        }
        if (g < best_slope) {
            best_slope = g;
            best = d;
        }
    }
    // No saddle on the imaginary axis: take the point of slowest growth.
    return best;
}

std::complex<double> ft_airy_kernel_contour_complex(double a, double b, double t, double sigma,
                                                    double delta, double lambda_max) {
    require(sigma > 0.0, "ft_airy_kernel_contour: sigma must be positive");
    require(delta > 0.0, "ft_airy_kernel_contour: contour offset must be positive");
    using cd = std::complex<double>;
    const double big = lambda_max > 0.0 ? lambda_max : 12.0 + 2.0 * delta;
    const double s3 = sigma * sigma * sigma;
    const double lin = (a + b + 2.0 * t) / (2.0 * sigma);
    const double d2 = (a - b) * (a - b);

    // Envelope decays like exp(-s^2 (1/4 + delta/(4 sigma^3))); stop once it is
    // far below the peak.
    const double reach = std::sqrt(90.0 / (0.25 + delta / (4.0 * s3)));
    const double smax = std::min(big, reach);
    const double omega = smax * smax / (4.0 * s3) + std::abs(lin) + 0.5 * smax +
                         sigma * d2 / (4.0 * delta * delta) + delta * delta / (4.0 * s3);
    const double h = std::min(1.0, 6.0 / omega);
    const auto panels = static_cast<std::size_t>(std::ceil(2.0 * smax / h));
    const QuadGrid base = gauss_legendre(20);

    // Shift the real part of the exponent by its value at s = 0 to keep the
    // summands O(1); the shift is restored at the end.
    const cd i(0.0, 1.0);
    auto exponent = [&](cd lam) {
        return i * (lam * lam * lam / (12.0 * s3) + lam * lin - sigma * d2 / (4.0 * lam)) -
               lam * lam / 4.0 - 1.5 * std::log(lam);
    };
    const double shift = exponent(cd(0.0, delta)).real();
    cd sum = 0.0;
    const double hw = smax / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = -smax + 2.0 * hw * static_cast<double>(p);
        for (std::size_t k = 0; k < base.size(); ++k) {
            const double s = lo + hw * (base.nodes[k] + 1.0);
            sum += hw * base.weights[k] * std::exp(exponent(cd(s, delta)) - shift);
        }
    }
    const cd pref = std::exp(i * (0.75 * kPi)) / (4.0 * kPi) * std::sqrt(sigma / kPi);
    if (sum == 0.0) return 0.0;
    return pref * std::exp(std::log(sum) + shift);
}

double ft_airy_kernel_contour(double a, double b, double t, double sigma, double delta,
                              double lambda_max) {
    return ft_airy_kernel_contour_complex(a, b, t, sigma, delta, lambda_max).real();
}

double ksigma_2d(double x1, double y1, double x2, double y2, double t, double sigma) {
    return std::exp(-0.5 * (y1 * y1 + y2 * y2)) / std::sqrt(kPi) *
           airy_kernel(x1 + sigma * y1 + t, x2 + sigma * y2 + t);
}

double gumbel_limit_diag(double x, double sigma) {
    require(sigma > 1.0, "gumbel_limit_diag: sigma must exceed 1");
    const auto [as, cs] = gumbel_constants(sigma);
    const double arg = cs + as * x;
    return as * ft_airy_kernel_contour(arg, arg, 0.0, sigma, contour_saddle(arg, arg, 0.0, sigma));
}

double eval_kernel(const KernelSpec& spec, double a, double b) {
    switch (spec.tag) {
        case KernelSpec::Tag::airy:
            return airy_kernel(a + spec.t, b + spec.t);
        case KernelSpec::Tag::ft_airy:
            return ft_airy_kernel(a, b, spec.t, spec.sigma, spec.panel_nodes);
        case KernelSpec::Tag::ft_airy_contour: {
            const double d = spec.delta > 0.0 ? spec.delta : contour_saddle(a, b, spec.t, spec.sigma);
            return ft_airy_kernel_contour(a, b, spec.t, spec.sigma, d, spec.lambda_max);
        }
        case KernelSpec::Tag::gumbel_ext:
            return gumbel_limit_diag(a, spec.sigma);
        case KernelSpec::Tag::ksigma_2d:
            break;
    }
    throw InvalidArgument("eval_kernel: kernel is not one-dimensional");
}

}  // namespace edgelaw
