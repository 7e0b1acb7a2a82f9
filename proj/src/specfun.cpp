#include "specfun.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/airy.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "errors.hpp"

namespace edgelaw {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrtPi = 1.0 / std::sqrt(kPi);

}  // namespace

double airy_ai(double x) {
    if (x > 105.0) return 0.0;  // below the smallest subnormal
    return boost::math::airy_ai(x);
}

double airy_ai_prime(double x) {
    if (x > 105.0) return 0.0;
    return boost::math::airy_ai_prime(x);
}

void airy_pair(double x, double& ai, double& aip) {
    ai = airy_ai(x);
    aip = airy_ai_prime(x);
}

double erfc(double x) { return std::erfc(x); }

double phi(double x) { return 0.5 * std::erfc(-x); }

double log_phi(double x) {
    if (x >= 0.0) return std::log1p(-0.5 * std::erfc(x));
    if (x > -25.0) return std::log(0.5 * std::erfc(-x));
    // erfc(z) ~ exp(-z^2)/(z sqrt(pi)) * (1 - 1/(2z^2) + 3/(4z^4) - 15/(8z^6))
    const double z = -x;
    const double r = 1.0 / (2.0 * z * z);
    const double series = 1.0 - r + 3.0 * r * r - 15.0 * r * r * r;
    return std::log(0.5) - z * z - std::log(z * std::sqrt(kPi)) + std::log(series);
}

double phi_density(double x) { return kInvSqrtPi * std::exp(-x * x); }

double airy_kernel_diag(double x) {
    double a, ap;
    airy_pair(x, a, ap);
    return ap * ap - x * a * a;
}

double airy_kernel_diag_tail(double x) {
    double a, ap;
    airy_pair(x, a, ap);
    return (2.0 * x * x * a * a - 2.0 * x * ap * ap - a * ap) / 3.0;
}

namespace {

QuadGrid legendre_unit(std::size_t m) {
    static std::mutex mu;
    static std::map<std::size_t, QuadGrid> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
    }
    QuadGrid g;
    g.nodes.resize(m);
    g.weights.resize(m);
    for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(m) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            if (m == 1) p0 = 1.0;
            dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                // one more pass for the derivative at the converged node
                p0 = 1.0;
                p1 = x;
                for (std::size_t k = 2; k <= m; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                    p0 = p1;
                    p1 = p2;
                }
                if (m == 1) p0 = 1.0;
                dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        g.nodes[i] = -x;
        g.nodes[m - 1 - i] = x;
        g.weights[i] = w;
        g.weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) g.nodes[m / 2] = 0.0;
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(m, g);
    return g;
}

}  // namespace

QuadGrid gauss_legendre(std::size_t m, double a, double b) {
    require(m >= 1, "gauss_legendre: m must be positive");
    require(std::isfinite(a) && std::isfinite(b) && a < b, "gauss_legendre: need a < b");
    QuadGrid g = legendre_unit(m);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t i = 0; i < m; ++i) {
        g.nodes[i] = c + h * g.nodes[i];
        g.weights[i] *= h;
    }
    g.kind = QuadGrid::Kind::legendre;
    g.a = a;
    g.b = b;
    return g;
}

QuadGrid composite_legendre(const std::vector<double>& breaks, std::size_t per_panel) {
    require(breaks.size() >= 2, "composite_legendre: need at least two breakpoints");
    QuadGrid base = legendre_unit(per_panel);
    QuadGrid g;
    g.kind = QuadGrid::Kind::composite;
    g.nodes.reserve((breaks.size() - 1) * per_panel);
    g.weights.reserve((breaks.size() - 1) * per_panel);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double a = breaks[p], b = breaks[p + 1];
        require(b > a, "composite_legendre: breakpoints must increase");
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (std::size_t i = 0; i < per_panel; ++i) {
            g.nodes.push_back(c + h * base.nodes[i]);
            g.weights.push_back(h * base.weights[i]);
        }
    }
    g.a = breaks.front();
    g.b = breaks.back();
    return g;
}

QuadGrid gauss_hermite(std::size_t m) {
    require(m >= 1, "gauss_hermite: m must be positive");
    // Golub-Welsch start, refined by Newton on the orthonormal recurrence.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(m > 1 ? m - 1 : 1));
    for (std::size_t k = 1; k < m; ++k) sub[static_cast<Eigen::Index>(k - 1)] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (m > 1) {
        es.computeFromTridiagonal(diag, sub.head(static_cast<Eigen::Index>(m - 1)), Eigen::EigenvaluesOnly);
    }
    QuadGrid g;
    g.kind = QuadGrid::Kind::hermite;
    g.nodes.resize(m);
    g.weights.resize(m);
    const double p0c = std::pow(kPi, -0.25);
    for (std::size_t i = 0; i < m; ++i) {
        double x = m > 1 ? es.eigenvalues()[static_cast<Eigen::Index>(i)] : 0.0;
        double sum = 0.0;
        for (int it = 0; it < 4; ++it) {
            double pm1 = 0.0, p = p0c;
            sum = p * p;
            for (std::size_t k = 0; k + 1 < m; ++k) {
                const double pn = x * std::sqrt(2.0 / (k + 1.0)) * p - std::sqrt(k / (k + 1.0)) * pm1;
                pm1 = p;
                p = pn;
                sum += p * p;
            }
            // p = h_{m-1}; h_m and its derivative sqrt(2m) h_{m-1}
            const double pmm = x * std::sqrt(2.0 / m) * p - std::sqrt((m - 1.0) / m) * pm1;
            const double d = std::sqrt(2.0 * m) * p;
            if (d == 0.0) break;
            x -= pmm / d;
        }
        g.nodes[i] = x;
        g.weights[i] = 1.0 / sum;
    }
    if (m % 2 == 1) g.nodes[m / 2] = 0.0;
    for (std::size_t i = 0; i < m / 2; ++i) {
        const double x = 0.5 * (g.nodes[m - 1 - i] - g.nodes[i]);
        const double w = 0.5 * (g.weights[m - 1 - i] + g.weights[i]);
        g.nodes[i] = -x;
        g.nodes[m - 1 - i] = x;
        g.weights[i] = w;
        g.weights[m - 1 - i] = w;
    }
    g.a = -INFINITY;
    g.b = INFINITY;
    return g;
}

}  // namespace edgelaw
