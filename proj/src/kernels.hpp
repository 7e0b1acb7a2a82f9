#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "specfun.hpp"

namespace edgelaw {

struct KernelSpec {
    enum class Tag { airy, ft_airy, ft_airy_contour, ksigma_2d, gumbel_ext };
    Tag tag = Tag::airy;
    double t = 0.0;
    double sigma = 0.0;
    std::size_t panel_nodes = 32;  // inner quadrature panel size
    double delta = 2.0;            // contour offset; <= 0 selects the saddle point
    double lambda_max = 0.0;       // contour truncation; 0 selects 12 + 2*delta
};

double airy_kernel(double a, double b);

// Weighted inner rule for the finite-temperature kernel: nodes y_j with
// weights w_j * phi(y_j / sigma), covering the y-range that matters when both
// kernel arguments are >= amin.
QuadGrid ft_inner_grid(double t, double sigma, double amin, std::size_t panel_nodes = 32);

double ft_airy_kernel(double a, double b, double t, double sigma, std::size_t panel_nodes = 32);

std::complex<double> ft_airy_kernel_contour_complex(double a, double b, double t, double sigma,
                                                    double delta, double lambda_max = 0.0);
double ft_airy_kernel_contour(double a, double b, double t, double sigma, double delta = 2.0,
                              double lambda_max = 0.0);
// Contour offset at the outermost saddle of the integrand on the imaginary
// axis, or at its flattest point when there is none.
double contour_saddle(double a, double b, double t, double sigma);

double ksigma_2d(double x1, double y1, double x2, double y2, double t, double sigma);

// a_s * N_{0,s}(c_s + a_s x, c_s + a_s x) with the Gumbel centering constants.
double gumbel_limit_diag(double x, double sigma);

// Dispatches on spec.tag for the one-dimensional kernels; arguments are
// offsets from the threshold, i.e. the operator acts on L2(0, inf).
double eval_kernel(const KernelSpec& spec, double a, double b);

}  // namespace edgelaw
