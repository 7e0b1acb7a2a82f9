#include "fredholm.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "parallel.hpp"

namespace edgelaw {

namespace {

constexpr double kPi = std::numbers::pi;

void check_finite(const Eigen::MatrixXd& M, const QuadGrid& g) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (!std::isfinite(M(i, j))) {
                throw NumericFailure("non-finite kernel entry at nodes (" +
                                     std::to_string(g.nodes[static_cast<std::size_t>(i)]) + ", " +
                                     std::to_string(g.nodes[static_cast<std::size_t>(j)]) + ")");
            }
        }
    }
}

// Airy kernel Nystrom matrix from cached Ai, Ai' at the shifted nodes u.
Eigen::MatrixXd airy_block(const std::vector<double>& u, const std::vector<double>& sw) {
    const std::size_t n = u.size();
    std::vector<double> ai(n), aip(n);
    parallel_for(n, [&](std::size_t i) { airy_pair(u[i], ai[i], aip[i]); });
    Eigen::MatrixXd M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double d = u[i] - u[j];
            double k;
            if (std::abs(d) < 2e-4) {
                k = airy_kernel(u[i], u[j]);
            } else {
                k = (ai[i] * aip[j] - aip[i] * ai[j]) / d;
            }
            const double v = sw[i] * k * sw[j];
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }
    return M;
}

}  // namespace

const char* method_name(DistEval::Method m) {
    switch (m) {
        case DistEval::Method::fredholm: return "fredholm";
        case DistEval::Method::fredholm_trace_series: return "fredholm_trace_series";
        case DistEval::Method::idpii: return "idpii";
        case DistEval::Method::tail_thm2: return "tail_thm2";
        case DistEval::Method::tail_thm3: return "tail_thm3";
        case DistEval::Method::tail_left: return "tail_left";
        case DistEval::Method::gumbel_limit: return "gumbel_limit";
    }
    return "unknown";
}

NystromMatrix assemble(const KernelSpec& spec, std::size_t m, double L) {
    require(m >= 8, "nystrom: m must be at least 8");
    require(L > 0.0 && std::isfinite(L), "nystrom: L must be positive");
    require(spec.sigma >= 0.0, "nystrom: sigma must be >= 0");
    NystromMatrix out;
    out.grid = gauss_legendre(m, 0.0, L);
    const auto& x = out.grid.nodes;
    std::vector<double> sw(m);
    for (std::size_t i = 0; i < m; ++i) sw[i] = std::sqrt(out.grid.weights[i]);

    const bool airy = spec.tag == KernelSpec::Tag::airy ||
                      (spec.tag == KernelSpec::Tag::ft_airy && spec.sigma == 0.0);
    if (airy) {
        std::vector<double> u(m);
        for (std::size_t i = 0; i < m; ++i) u[i] = x[i] + spec.t;
        out.entries = airy_block(u, sw);
    } else if (spec.tag == KernelSpec::Tag::ft_airy) {
        // N = B B^T with B_ij = sqrt(w_i) Ai(x_i + y_j + t) sqrt(v_j phi(y_j/sigma))
        const QuadGrid inner = ft_inner_grid(spec.t, spec.sigma, 0.0, spec.panel_nodes);
        const std::size_t ny = inner.size();
        Eigen::MatrixXd B(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(ny));
        parallel_for(m, [&](std::size_t i) {
            for (std::size_t j = 0; j < ny; ++j) {
                B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    sw[i] * airy_ai(x[i] + inner.nodes[j] + spec.t) * std::sqrt(inner.weights[j]);
            }
        });
        out.entries = B * B.transpose();
    } else if (spec.tag == KernelSpec::Tag::ft_airy_contour) {
        require(spec.sigma > 0.0, "nystrom: contour kernel needs sigma > 0");
        out.entries.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        parallel_for(m, [&](std::size_t i) {
            for (std::size_t j = i; j < m; ++j) {
                const double v = sw[i] * eval_kernel(spec, x[i], x[j]) * sw[j];
                out.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
                out.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
            }
        });
    } else {
        throw InvalidArgument("nystrom: unsupported kernel tag");
    }
    check_finite(out.entries, out.grid);
    return out;
}

NystromMatrix assemble(const std::function<double(double, double)>& kernel, std::size_t m, double L) {
    require(m >= 8, "nystrom: m must be at least 8");
    require(L > 0.0 && std::isfinite(L), "nystrom: L must be positive");
    NystromMatrix out;
    out.grid = gauss_legendre(m, 0.0, L);
    out.entries.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            out.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::sqrt(out.grid.weights[i]) * kernel(out.grid.nodes[i], out.grid.nodes[j]) *
                std::sqrt(out.grid.weights[j]);
        }
    }
    check_finite(out.entries, out.grid);
    return out;
}

DetResult det_of(const NystromMatrix& M) {
    DetResult r;
    const Eigen::MatrixXd S = 0.5 * (M.entries + M.entries.transpose());
    r.trace = S.trace();
    r.trace_sq = S.squaredNorm();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericFailure("nystrom: eigendecomposition failed");
    r.eigenvalues = es.eigenvalues();
    const double scale = r.eigenvalues.cwiseAbs().maxCoeff();
    const double noise = static_cast<double>(S.rows()) * std::numeric_limits<double>::epsilon() * scale;
    double logdet = 0.0;
    for (Eigen::Index k = 0; k < r.eigenvalues.size(); ++k) {
        const double nu = r.eigenvalues[k];
        if (nu < noise) continue;
        if (nu >= 1.0) {
            throw NumericFailure("nystrom: eigenvalue " + std::to_string(nu) + " outside [0, 1)");
        }
        logdet += std::log1p(-nu);
    }
    r.log_det = logdet;
    r.det = std::exp(logdet);
    r.one_minus = -std::expm1(logdet);
    return r;
}

double nystrom_det(const KernelSpec& spec, double t, std::size_t m, double L) {
    KernelSpec s = spec;
    s.t = t;
    return det_of(assemble(s, m, L)).det;
}

double nystrom_det(const std::function<double(double, double)>& kernel, std::size_t m, double L) {
    return det_of(assemble(kernel, m, L)).det;
}

double default_length(double t, double sigma) {
    return 25.0 + 2.0 * std::max(0.0, -t) + sigma * sigma;
}

std::size_t default_nodes(double t, double sigma, double L) {
    const double osc = std::sqrt(1.0 + std::max(0.0, -t) / 4.0 + sigma / 2.0);
    return static_cast<std::size_t>(std::ceil(40.0 + 2.0 * L * osc));
}

DistEval F_sigma(double t, double sigma, const FredholmOptions& opts) {
    require(std::isfinite(t), "F_sigma: t must be finite");
    require(sigma >= 0.0 && std::isfinite(sigma), "F_sigma: sigma must be >= 0");
    DistEval e;
    e.method = DistEval::Method::fredholm;
    e.t = t;
    e.sigma = sigma;
    e.L = opts.L > 0.0 ? opts.L : default_length(t, sigma);
    e.m = opts.m > 0 ? opts.m : default_nodes(t, sigma, e.L);

    KernelSpec spec;
    spec.tag = sigma == 0.0 ? KernelSpec::Tag::airy : KernelSpec::Tag::ft_airy;
    spec.t = t;
    spec.sigma = sigma;
    const DetResult r = det_of(assemble(spec, e.m, e.L));
    e.value = r.det;
    e.one_minus = r.one_minus;
    e.log_value = r.log_det;
    if (opts.estimate_error) {
        const double Lc = e.L > 10.0 ? e.L - 5.0 : 0.5 * e.L;
        const DetResult c = det_of(assemble(spec, std::max<std::size_t>(8, e.m / 2), Lc));
        e.err_est = std::abs(r.det - c.det);
    }
    if (r.one_minus < 1e-13) {
        e.tail_bracket = true;
        e.tail_upper = r.trace;
        e.tail_lower = std::max(0.0, r.trace - r.trace * r.trace);
    }
    return e;
}

DistEval F_sigma_trace_series(double t, double sigma) {
    require(std::isfinite(t), "F_sigma_trace_series: t must be finite");
    require(sigma > 0.0 && std::isfinite(sigma), "F_sigma_trace_series: sigma must be positive");
    DistEval e;
    e.method = DistEval::Method::fredholm_trace_series;
    e.t = t;
    e.sigma = sigma;

    const QuadGrid g16 = gauss_legendre(16);
    auto composite = [&](double lo, double hi, std::size_t panels, auto&& f) {
        double s = 0.0;
        const double h = (hi - lo) / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            for (std::size_t k = 0; k < g16.size(); ++k) {
                s += 0.5 * h * g16.weights[k] * f(lo + h * (static_cast<double>(p) + 0.5 * (g16.nodes[k] + 1.0)));
            }
        }
        return s;
    };

    // tr N = pi^{-1/2} int exp(-v^2) G(t + sigma v) dv, G the integrated Airy diagonal.
    const double vhi = std::min(8.0, (16.0 - t) / sigma);
    double tr1 = 0.0;
    if (vhi > -8.0) {
        tr1 = composite(-8.0, vhi, 64, [&](double v) {
                  return std::exp(-v * v) * airy_kernel_diag_tail(t + sigma * v);
              }) / std::sqrt(kPi);
    }

    // Outer grid in a: e-folding length of the diagonal is about sigma / lambda*.
    const double ell = sigma / contour_saddle(0.0, 0.0, t, sigma);
    const std::size_t outer_panels = 24;
    const double amax = 40.0 * ell;
    const QuadGrid g8 = gauss_legendre(8);
    const std::size_t na = outer_panels * g8.size();
    std::vector<double> an(na), aw(na);
    {
        const double h = amax / static_cast<double>(outer_panels);
        for (std::size_t p = 0; p < outer_panels; ++p) {
            for (std::size_t k = 0; k < g8.size(); ++k) {
                an[p * g8.size() + k] = h * (static_cast<double>(p) + 0.5 * (g8.nodes[k] + 1.0));
                aw[p * g8.size() + k] = 0.5 * h * g8.weights[k];
            }
        }
    }
    std::vector<double> diag(na), row_sq(na), row_abs(na);
    const QuadGrid inner = gauss_legendre(24);
    const std::size_t inner_panels = 4;
    parallel_for(na, [&](std::size_t i) {
        const double a = an[i];
        const double lam = contour_saddle(a, a, t, sigma);
        auto kern = [&](double b) {
            return ft_airy_kernel_contour(a, b, t, sigma, contour_saddle(a, b, t, sigma));
        };
        diag[i] = kern(a);
        const double width = 7.0 * std::sqrt(8.0 * lam / sigma);
        const double lo = std::max(0.0, a - width), hi = a + width;
        double sq = 0.0, ab = 0.0;
        const double h = (hi - lo) / static_cast<double>(inner_panels);
        for (std::size_t p = 0; p < inner_panels; ++p) {
            for (std::size_t k = 0; k < inner.size(); ++k) {
                const double b = lo + h * (static_cast<double>(p) + 0.5 * (inner.nodes[k] + 1.0));
                const double w = 0.5 * h * inner.weights[k];
                const double v = kern(b);
                sq += w * v * v;
                ab += w * std::abs(v);
            }
        }
        row_sq[i] = sq;
        row_abs[i] = ab;
    });
    double tr1_quad = 0.0, tr2 = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        tr1_quad += aw[i] * diag[i];
        tr2 += aw[i] * row_sq[i];
        norm = std::max(norm, row_abs[i]);
    }
    if (!(norm < 1.0)) {
        throw NumericFailure("trace series: operator norm bound " + std::to_string(norm) + " is not below 1");
    }
    const double rem = norm * tr2 / (3.0 * (1.0 - norm));
    e.log_value = -tr1 - 0.5 * tr2;
    e.value = std::exp(e.log_value);
    e.one_minus = -std::expm1(e.log_value);
    e.err_est = e.value * (std::expm1(rem) + std::abs(tr1 - tr1_quad));
    e.m = na;
    e.L = amax;
    return e;
}

double trace_power_1d(const KernelSpec& spec, double t, int n, std::size_t m, double L) {
    require(n == 1 || n == 2, "trace_power_1d: n must be 1 or 2");
    KernelSpec s = spec;
    s.t = t;
    const NystromMatrix M = assemble(s, m, L);
    return n == 1 ? M.entries.trace() : M.entries.squaredNorm();
}

double trace_power_2d(double t, double sigma, int n, std::size_t mx, std::size_t my, double L) {
    require(n == 1 || n == 2, "trace_power_2d: n must be 1 or 2");
    require(sigma >= 0.0, "trace_power_2d: sigma must be >= 0");
    require(mx >= 8 && my >= 1, "trace_power_2d: grid too small");
    const QuadGrid gh = gauss_hermite(my);
    const double ymax = std::max(std::abs(gh.nodes.front()), 6.0);
    const double Lx = L > 0.0 ? L : std::max(14.5 - t + ymax * sigma, 2.0);
    const QuadGrid gx = gauss_legendre(mx, 0.0, Lx);
    // e^{-y^2/2} factors of the kernel combine with the Hermite weights.
    const std::size_t N = mx * my;
    std::vector<double> u(N), sw(N);
    for (std::size_t i = 0; i < mx; ++i) {
        for (std::size_t j = 0; j < my; ++j) {
            u[i * my + j] = gx.nodes[i] + sigma * gh.nodes[j] + t;
            sw[i * my + j] = std::sqrt(gx.weights[i] * gh.weights[j] / std::sqrt(kPi));
        }
    }
    const Eigen::MatrixXd M = airy_block(u, sw);
    return n == 1 ? M.trace() : M.squaredNorm();
}

}  // namespace edgelaw
