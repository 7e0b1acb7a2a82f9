#include "tails.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "specfun.hpp"

namespace edgelaw {

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Gauss-Legendre of `u` to `v` with panels of width about 1/density
// measured in panels of 16 nodes.
template <class F>
double integrate(F&& f, double u, double v, int density) {
    if (!(v > u)) return 0.0;
    static const QuadGrid base = gauss_legendre(16);
    const int panels = std::max(1, static_cast<int>(std::ceil((v - u) * density / 16.0)));
    const double h = (v - u) / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = u + h * p;
        for (std::size_t k = 0; k < base.size(); ++k) {
            s += 0.5 * h * base.weights[k] * f(lo + 0.5 * h * (base.nodes[k] + 1.0));
        }
    }
    return s;
}

// ln phi(z) and phi'(z)/phi(z) decay like exp(-z^2) for z > 0; cut the
// v-integrals where the integrand is 1e-30 below its value at v = 0, or at
// z = 7.4 if that lies further out.
double v_upper(double x) {
    const double xp = std::max(x, 0.0);
    const double rel = std::sqrt(xp * xp + 69.0) - xp;
    return std::sqrt(std::max(7.4 - x, rel));
}

}  // namespace

const char* regime_name(TailExpansion::Regime r) {
    switch (r) {
        case TailExpansion::Regime::right_thm2: return "right_thm2";
        case TailExpansion::Regime::right_thm3: return "right_thm3";
        case TailExpansion::Regime::left_cor4: return "left_cor4";
        case TailExpansion::Regime::gumbel: return "gumbel";
        case TailExpansion::Regime::tw_left: return "tw_left";
        case TailExpansion::Regime::tw_right: return "tw_right";
    }
    return "unknown";
}

double B_of(double t, double sigma, TailForm form) {
    require(t > 0.0, "B_of: t must be positive");
    require(sigma >= 0.0, "B_of: sigma must be >= 0");
    const double s2 = sigma * sigma, s4 = s2 * s2, s6 = s4 * s2;
    if (form == TailForm::automatic) form = s4 <= t ? TailForm::small_sigma : TailForm::large_sigma;
    if (form == TailForm::small_sigma) {
        return 4.0 / 3.0 * std::pow(t, 1.5) * std::pow(1.0 + s4 / (4.0 * t), 1.5) - t * s2 - s6 / 6.0;
    }
    // (s6/6)((1+z)^{3/2} - 1 - 3z/2) with z = 4t/s4, r = sqrt(1+z):
    // the bracket equals (r-1)^2 (r+1/2) = z^2 (r+1/2)/(r+1)^2.
    const double z = 4.0 * t / s4;
    const double r = std::sqrt(1.0 + z);
    const double w = z * z * (r + 0.5) / ((r + 1.0) * (r + 1.0));
    return s6 / 6.0 * w;
}

double A_of(double t, double sigma, TailForm form) {
    require(t > 0.0, "A_of: t must be positive");
    require(sigma >= 0.0, "A_of: sigma must be >= 0");
    const double s2 = sigma * sigma, s4 = s2 * s2;
    if (form == TailForm::automatic) form = s4 <= t ? TailForm::small_sigma : TailForm::large_sigma;
    if (form == TailForm::small_sigma) {
        const double q = 4.0 + s4 / t;
        return 1.0 / (2.0 * kPi * std::pow(t, 1.5)) * std::pow(std::sqrt(q) - s2 / std::sqrt(t), -2.5) *
               std::pow(q, -0.25);
    }
    const double z = 4.0 * t / s4;
    return s4 / (64.0 * kPi * std::pow(t, 2.5)) * std::pow(1.0 + std::sqrt(1.0 + z), 2.5) *
           std::pow(1.0 + z, -0.25);
}

TailExpansion right_tail_thm2(double t, double sigma) {
    TailExpansion e;
    e.regime = TailExpansion::Regime::right_thm2;
    e.t = t;
    e.sigma = sigma;
    const double a = A_of(t, sigma), b = B_of(t, sigma);
    e.pieces["A"] = a;
    e.pieces["B"] = b;
    e.one_minus = a * std::exp(-b);
    e.value = 1.0 - e.one_minus;
    e.log_value = std::log1p(-e.one_minus);
    e.validity = "t >= 4 and 0 <= sigma <= t^0.9";
    e.valid = t >= 4.0 && sigma <= std::pow(t, 0.9);
    return e;
}

double C_of(double x, int density) {
    require(x >= -1.0, "C_of: x must be >= -1");
    const double vmax = v_upper(x);
    return 2.0 / kPi * integrate([&](double v) { return v * v * log_phi(x + v * v); }, 0.0, vmax, density);
}

double D_of(double x, int density) {
    require(x >= -1.0, "D_of: x must be >= -1");
    const double vmax = v_upper(x);
    return 2.0 / kPi * integrate([&](double v) { return log_phi(x + v * v); }, 0.0, vmax, density);
}

double Dprime_of(double x, int density) {
    require(x >= -1.0, "Dprime_of: x must be >= -1");
    const double vmax = std::max(v_upper(x), std::sqrt(std::max(8.3 - x, 0.0)));
    return 2.0 / kPi *
           integrate([&](double v) { return phi_density(x + v * v) / phi(x + v * v); }, 0.0, vmax, density);
}

TailExpansion right_tail_thm3(double t, double sigma) {
    require(sigma > 0.0, "right_tail_thm3: sigma must be positive");
    TailExpansion e;
    e.regime = TailExpansion::Regime::right_thm3;
    e.t = t;
    e.sigma = sigma;
    const double w = t / sigma;
    require(w >= -1.0, "right_tail_thm3: t/sigma must be >= -1");
    const double c = C_of(w);
    // D'(u)^2 falls 1e-30 below its value at u = w by u = sqrt(w^2 + 35)
    const double wp = std::max(w, 0.0);
    const double dint = integrate(
        [](double u) {
            const double d = Dprime_of(u);
            return d * d;
        },
        w, std::max(wp + 6.0, std::sqrt(wp * wp + 35.0)), 8);
    e.pieces["omega"] = w;
    e.pieces["C"] = c;
    e.pieces["Dprime_sq_integral"] = dint;
    e.log_value = std::pow(sigma, 1.5) * c + 0.25 * dint;
    e.value = std::exp(e.log_value);
    e.one_minus = -std::expm1(e.log_value);
    e.validity = "t >= 4 and sigma >= 4";
    e.valid = t >= 4.0 && sigma >= 4.0;
    return e;
}

std::pair<double, double> gumbel_constants(double sigma) {
    require(sigma > 1.0, "gumbel_constants: sigma must exceed 1");
    const double l = std::log(sigma);
    const double a = sigma / std::sqrt(6.0 * l);
    const double c = a * (3.0 * l - 1.25 * std::log(6.0 * l) - std::log(2.0 * kPi));
    return {a, c};
}

double gumbel_cdf(double t) { return std::exp(-std::exp(-t)); }

double ginue_gamma(double n) {
    require(n >= 16.0, "ginue_gamma: n must be >= 16");
    return 0.5 * (std::log(n) - 5.0 * std::log(std::log(n)) - std::log(2.0 * std::pow(kPi, 4)));
}

double tw_left_tail(double t, double zeta_prime) {
    require(t < 0.0, "tw_left_tail: t must be negative");
    return t * t * t / 12.0 - 0.125 * std::log(std::abs(t)) + std::log(2.0) / 24.0 + zeta_prime;
}

TailExpansion left_tail_cor4(double t, double sigma, double zeta_prime) {
    require(t < 0.0, "left_tail_cor4: t must be negative");
    require(sigma >= 0.0, "left_tail_cor4: sigma must be >= 0");
    TailExpansion e;
    e.regime = sigma == 0.0 ? TailExpansion::Regime::tw_left : TailExpansion::Regime::left_cor4;
    e.t = t;
    e.sigma = sigma;
    // The u-correction integral vanishes to the retained order.
    e.log_value = tw_left_tail(t, zeta_prime);
    e.value = std::exp(e.log_value);
    e.one_minus = -std::expm1(e.log_value);
    e.pieces["zeta_prime"] = zeta_prime;
    e.pieces["correction"] = 0.0;
    e.validity = "t <= -4 and 0 <= sigma <= 1/t^2";
    e.valid = t <= -4.0 && sigma <= 1.0 / (t * t);
    return e;
}

double step_minus_phi_integral() {
    // integrand is 1 - phi(y) = phi(-y) for y > 0 and -phi(y) for y < 0
    return integrate([](double y) { return phi(-y); }, 0.0, 9.0, 32) -
           integrate([](double y) { return phi(y); }, -9.0, 0.0, 32);
}

}  // namespace edgelaw
