#pragma once

#include <cstddef>
#include <vector>

namespace edgelaw {

double airy_ai(double x);
double airy_ai_prime(double x);

// Evaluates Ai and Ai' together.
void airy_pair(double x, double& ai, double& aip);

double erfc(double x);
// Standard normal-type cdf used throughout: phi(x) = 1 - erfc(x)/2.
double phi(double x);
double log_phi(double x);
// Derivative of phi: exp(-x^2)/sqrt(pi).
double phi_density(double x);

// Diagonal of the Airy kernel, Ai'(x)^2 - x Ai(x)^2.
double airy_kernel_diag(double x);
// Integral of airy_kernel_diag over (x, inf), closed form.
double airy_kernel_diag_tail(double x);

struct QuadGrid {
    enum class Kind { legendre, hermite, composite };
    Kind kind = Kind::legendre;
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = -1.0;
    double b = 1.0;

    std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre on [a, b].
QuadGrid gauss_legendre(std::size_t m, double a = -1.0, double b = 1.0);
// Gauss-Hermite for weight exp(-x^2); nodes ascending.
QuadGrid gauss_hermite(std::size_t m);
// One Gauss-Legendre panel of `per_panel` nodes between consecutive breakpoints.
QuadGrid composite_legendre(const std::vector<double>& breaks, std::size_t per_panel);

}  // namespace edgelaw
