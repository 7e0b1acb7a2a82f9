#include "idpii.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "specfun.hpp"

namespace edgelaw {

namespace {

constexpr double kBlowUp = 1e6;

using Vec = std::vector<double>;

struct System {
    std::vector<double> y;  // node positions
    std::vector<double> c;  // measure weights, summing to 1
    std::size_t m = 0;

    double energy(const Vec& s) const {
        double e = 0.0;
        for (std::size_t j = 0; j < m; ++j) e += c[j] * s[j] * s[j];
        return e;
    }

    void rhs(double t, const Vec& s, Vec& out) const {
        const double e2 = 2.0 * energy(s);
        for (std::size_t k = 0; k < m; ++k) {
            out[k] = s[m + k];
            out[m + k] = (t + y[k] + e2) * s[k];
        }
    }
};

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// Integrates from t to t_end (either direction) with adaptive steps; h carries
// the last proposed step size between calls.
void dopri_advance(const System& sys, double& t, double t_end, Vec& s, double& h, double tol,
                   std::size_t& accepted, std::size_t& rejected) {
    const std::size_t n = s.size();
    std::array<Vec, 7> k;
    for (auto& v : k) v.resize(n);
    Vec tmp(n), next(n);
    const double dir = t_end > t ? 1.0 : -1.0;
    sys.rhs(t, s, k[0]);
    while (dir * (t_end - t) > 1e-15) {
        double hs = dir * std::min(std::abs(h), std::abs(t_end - t));
        auto stage = [&](int idx, double ct, std::initializer_list<double> a) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                int j = 0;
                for (double aj : a) acc += aj * k[static_cast<std::size_t>(j++)][i];
                tmp[i] = s[i] + hs * acc;
            }
            sys.rhs(t + ct * hs, tmp, k[static_cast<std::size_t>(idx)]);
        };
        stage(1, c2, {a21});
        stage(2, c3, {a31, a32});
        stage(3, c4, {a41, a42, a43});
        stage(4, c5, {a51, a52, a53, a54});
        stage(5, 1.0, {a61, a62, a63, a64, a65});
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = s[i] + hs * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
        }
        sys.rhs(t + hs, next, k[6]);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = hs * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                                    e6 * k[5][i] + e7 * k[6][i]);
            const double sc = tol * (1.0 + std::max(std::abs(s[i]), std::abs(next[i])));
            err = std::max(err, std::abs(ei) / sc);
        }
        if (!std::isfinite(err)) throw InstabilityError("idpii: non-finite state", t);
        if (err <= 1.0) {
            t += hs;
            s.swap(next);
            k[0].swap(k[6]);
            ++accepted;
            for (std::size_t i = 0; i < sys.m; ++i) {
                if (std::abs(s[i]) > kBlowUp) {
                    throw InstabilityError("idpii: solution blew up at t = " + std::to_string(t), t);
                }
            }
        } else {
            ++rejected;
        }
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = std::abs(hs) * fac;
        if (h < 1e-12) throw InstabilityError("idpii: step size underflow", t);
    }
}

System make_system(double sigma, std::size_t m_h, std::vector<double>& u_weights) {
    System sys;
    if (sigma == 0.0) {
        sys.m = 1;
        sys.y = {0.0};
        sys.c = {1.0};
        u_weights = {std::sqrt(std::numbers::pi)};
        return sys;
    }
    const QuadGrid gh = gauss_hermite(m_h);
    sys.m = m_h;
    sys.y.resize(m_h);
    sys.c.resize(m_h);
    for (std::size_t k = 0; k < m_h; ++k) {
        sys.y[k] = sigma * gh.nodes[k];
        sys.c[k] = gh.weights[k] / std::sqrt(std::numbers::pi);
    }
    u_weights = gh.weights;
    return sys;
}

}  // namespace

PiiState solve_idpii(double sigma, const PiiOptions& opts) {
    require(sigma >= 0.0 && std::isfinite(sigma), "solve_idpii: sigma must be >= 0");
    require(opts.t0 >= 6.0, "solve_idpii: t0 must be >= 6");
    require(opts.t_min >= -2.0, "solve_idpii: t_min below the stability wall -2");
    require(opts.t_min < opts.t0, "solve_idpii: need t_min < t0");
    require(sigma == 0.0 || opts.m_h >= 12, "solve_idpii: m_h must be >= 12");
    require(opts.ode_tol > 0.0 && opts.dt > 0.0, "solve_idpii: tolerances must be positive");

    PiiState st;
    st.sigma = sigma;
    st.t0 = opts.t0;
    st.t_min = opts.t_min;
    st.dt = opts.dt;
    st.ode_tol = opts.ode_tol;
    const System sys = make_system(sigma, opts.m_h, st.gh_weights);
    st.y_nodes = sys.y;
    const std::size_t m = sys.m;

    Vec s(2 * m);
    for (std::size_t k = 0; k < m; ++k) airy_pair(opts.t0 + sys.y[k], s[k], s[m + k]);

    const auto count = static_cast<std::size_t>(std::ceil((opts.t0 - opts.t_min) / opts.dt - 1e-9));
    auto record = [&](double t) {
        st.t_grid.push_back(t);
        st.p.emplace_back(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(m));
        st.pdot.emplace_back(s.begin() + static_cast<std::ptrdiff_t>(m), s.end());
        double e = 0.0, ed = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            e += sys.c[j] * s[j] * s[j];
            ed += 2.0 * sys.c[j] * s[j] * s[m + j];
        }
        st.E.push_back(e);
        st.Edot.push_back(ed);
    };
    double t = opts.t0;
    double h = opts.dt / 4.0;
    record(t);
    for (std::size_t i = 1; i <= count; ++i) {
        const double target = std::max(opts.t0 - static_cast<double>(i) * opts.dt, opts.t_min);
        dopri_advance(sys, t, target, s, h, opts.ode_tol, st.steps_accepted, st.steps_rejected);
        t = target;
        record(t);
    }
    return st;
}

DistEval F_from_idpii(const PiiState& st, double t) {
    require(t >= st.t_min - 1e-12 && t <= st.t0 + 1e-12, "F_from_idpii: t outside the solved range");
    // Grid index of the first point at or below t.
    const double pos = (st.t0 - t) / st.dt;
    auto idx = static_cast<std::size_t>(std::ceil(pos - 1e-9));
    idx = std::min(idx, st.t_grid.size() - 1);
    auto g = [&](std::size_t i) { return (st.t_grid[i] - t) * st.E[i]; };
    auto gd = [&](std::size_t i) { return st.E[i] + (st.t_grid[i] - t) * st.Edot[i]; };

    // Grid part on [t_grid[j0], t0], j0 = last grid point >= t.
    std::size_t j0 = idx;
    if (st.t_grid[j0] < t - 1e-12) --j0;
    double integral = 0.0;
    std::size_t j = 0;
    const double h = st.dt;
    while (j + 2 <= j0) {
        const double a = st.t_grid[j + 2], b = st.t_grid[j];
        const double w = b - a;
        integral += w / 6.0 * (g(j) + 4.0 * g(j + 1) + g(j + 2));
        j += 2;
    }
    if (j < j0) {
        // single leftover interval: endpoint-corrected trapezoid
        const double w = st.t_grid[j] - st.t_grid[j + 1];
        integral += 0.5 * w * (g(j) + g(j + 1)) + w * w / 12.0 * (gd(j + 1) - gd(j));
        j += 1;
    }
    (void)h;
    // Partial interval [t, t_grid[j0]] with E from cubic Hermite interpolation.
    const double top = st.t_grid[j0];
    if (top - t > 1e-14 && j0 + 1 < st.t_grid.size()) {
        const double ta = st.t_grid[j0 + 1], tb = top, w = tb - ta;
        auto E_at = [&](double s) {
            const double x = (s - ta) / w;
            const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
            const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
            return h00 * st.E[j0 + 1] + h10 * w * st.Edot[j0 + 1] + h01 * st.E[j0] + h11 * w * st.Edot[j0];
        };
        static const QuadGrid gl = gauss_legendre(6);
        const double c = 0.5 * (tb + t), r = 0.5 * (tb - t);
        for (std::size_t q = 0; q < gl.size(); ++q) {
            const double s = c + r * gl.nodes[q];
            integral += r * gl.weights[q] * (s - t) * E_at(s);
        }
    }
    // Beyond t0 the solution is the Airy seed.
    double tail = 0.0;
    for (std::size_t k = 0; k < st.y_nodes.size(); ++k) {
        const double u = st.t0 + st.y_nodes[k];
        tail += st.gh_weights[k] * (airy_kernel_diag_tail(u) + (st.t0 - t) * airy_kernel_diag(u));
    }
    tail /= std::sqrt(std::numbers::pi);

    DistEval e;
    e.method = DistEval::Method::idpii;
    e.t = t;
    e.sigma = st.sigma;
    e.log_value = -(integral + tail);
    e.value = std::exp(e.log_value);
    e.one_minus = -std::expm1(e.log_value);
    // Simpson error on the output grid plus the accumulated integrator tolerance.
    e.err_est = e.value * (st.ode_tol * (st.t0 - t) + std::pow(st.dt, 4));
    e.m = st.y_nodes.size();
    e.L = st.t0 - t;
    return e;
}

double stark_residual(const PiiState& st, double t, std::size_t k) {
    require(k < st.y_nodes.size(), "stark_residual: node index out of range");
    const double pos = (st.t0 - t) / st.dt;
    require(pos > -0.5 && pos < static_cast<double>(st.t_grid.size()) - 0.5,
            "stark_residual: t outside the solved range");
    const auto i = static_cast<std::size_t>(std::lround(pos));
    const std::size_t n = st.t_grid.size();
    // d/dt of pdot; the grid decreases, so the index step is -dt in t.
    double ptt;
    if (i >= 4 && i + 4 < n) {
        static constexpr std::array<double, 4> c{4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
        double d = 0.0;
        for (std::size_t j = 0; j < 4; ++j) d += c[j] * (st.pdot[i - j - 1][k] - st.pdot[i + j + 1][k]);
        ptt = d / st.dt;
    } else {
        // one-sided 6th-order stencil pointing into the grid
        static constexpr std::array<double, 7> c{-49.0 / 20, 6.0, -15.0 / 2, 20.0 / 3, -15.0 / 4, 6.0 / 5, -1.0 / 6};
        const bool forward = i + 6 < n;  // stepping to larger index lowers t
        double d = 0.0;
        for (std::size_t j = 0; j < 7; ++j) {
            d += c[j] * (forward ? st.pdot[i + j][k] : st.pdot[i - j][k]);
        }
        ptt = forward ? -d / st.dt : d / st.dt;
    }
    const double tt = st.t_grid[i];
    const double p = st.p[i][k];
    return -ptt + (tt + 2.0 * st.E[i]) * p + st.y_nodes[k] * p;
}

}  // namespace edgelaw
