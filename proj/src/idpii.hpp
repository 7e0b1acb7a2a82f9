#pragma once

#include <cstddef>
#include <vector>

#include "fredholm.hpp"

namespace edgelaw {

struct PiiState {
    double sigma = 0.0;
    double t0 = 8.0;
    double t_min = -2.0;
    double dt = 1.0 / 64.0;  // output grid spacing
    double ode_tol = 1e-10;
    std::vector<double> t_grid;      // decreasing, t_grid[0] = t0
    std::vector<double> y_nodes;     // sigma * u_k
    std::vector<double> gh_weights;  // Hermite weights for exp(-u^2)
    std::vector<std::vector<double>> p;
    std::vector<std::vector<double>> pdot;
    std::vector<double> E;
    std::vector<double> Edot;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
};

struct PiiOptions {
    double t_min = -2.0;
    double t0 = 8.0;
    std::size_t m_h = 32;
    double ode_tol = 1e-10;
    double dt = 1.0 / 64.0;
};

// Backward integration of p'' = (t + y_k + 2E(t)) p from the Airy seed at t0.
// sigma == 0 collapses the measure to the single node y = 0.
PiiState solve_idpii(double sigma, const PiiOptions& opts = {});

DistEval F_from_idpii(const PiiState& state, double t);

// [-d^2/dt^2 + t + 2E(t)] p(t, y_k) + y_k p(t, y_k) at the grid point nearest t.
double stark_residual(const PiiState& state, double t, std::size_t k);

}  // namespace edgelaw
