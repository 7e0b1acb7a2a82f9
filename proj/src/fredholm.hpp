#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <vector>

#include "kernels.hpp"
#include "specfun.hpp"

namespace edgelaw {

struct DistEval {
    enum class Method { fredholm, fredholm_trace_series, idpii, tail_thm2, tail_thm3, tail_left, gumbel_limit };
    Method method = Method::fredholm;
    double t = 0.0;
    double sigma = 0.0;
    double value = 0.0;      // F
    double one_minus = 0.0;  // 1 - F, accurate in the right tail
    double log_value = 0.0;  // ln F, accurate in the left tail
    double err_est = 0.0;
    // Trace bracket [tr - tr^2, tr] for 1 - F; filled when 1 - F < 1e-13.
    double tail_lower = 0.0;
    double tail_upper = 0.0;
    bool tail_bracket = false;
    std::size_t m = 0;
    double L = 0.0;
};

const char* method_name(DistEval::Method m);

struct NystromMatrix {
    QuadGrid grid;
    Eigen::MatrixXd entries;  // sqrt(w_i) K(x_i, x_j) sqrt(w_j)
};

// Kernel on L2(0, L) given as offsets from the threshold spec.t.
NystromMatrix assemble(const KernelSpec& spec, std::size_t m, double L);
NystromMatrix assemble(const std::function<double(double, double)>& kernel, std::size_t m, double L);

struct DetResult {
    double det = 1.0;
    double log_det = 0.0;
    double one_minus = 0.0;
    double trace = 0.0;
    double trace_sq = 0.0;
    Eigen::VectorXd eigenvalues;
};

DetResult det_of(const NystromMatrix& M);

double nystrom_det(const KernelSpec& spec, double t, std::size_t m, double L);
double nystrom_det(const std::function<double(double, double)>& kernel, std::size_t m, double L);

struct FredholmOptions {
    std::size_t m = 0;  // 0: automatic
    double L = 0.0;     // 0: automatic
    bool estimate_error = true;
};

double default_length(double t, double sigma);
std::size_t default_nodes(double t, double sigma, double L);

DistEval F_sigma(double t, double sigma, const FredholmOptions& opts = {});

// ln det(I - N) ~ -tr N - tr N^2 / 2 with the remainder bounded through a
// Schur-test norm estimate; suited to large sigma where N is nearly diagonal
// on the scale of its decay.
DistEval F_sigma_trace_series(double t, double sigma);

double trace_power_1d(const KernelSpec& spec, double t, int n, std::size_t m, double L);
double trace_power_2d(double t, double sigma, int n, std::size_t mx, std::size_t my, double L = 0.0);

}  // namespace edgelaw
