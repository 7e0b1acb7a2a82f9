#include "mc.hpp"

#include <Eigen/Eigenvalues>
#include <lapacke.h>
#include <algorithm>
#include <boost/math/interpolators/cubic_hermite.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>

#include "errors.hpp"
#include "fredholm.hpp"
#include "parallel.hpp"
#include "tails.hpp"

namespace edgelaw {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

bool is_hermitian(const Eigen::MatrixXcd& X) {
    if (X.rows() != X.cols()) return false;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = i; j < X.cols(); ++j) {
            if (X(i, j) != std::conj(X(j, i))) return false;
        }
    }
    return true;
}

// Tabulated F on a uniform grid, monotone cubic interpolation in between.
std::function<double(double)> tabulate(double sigma, double lo, double hi, double step) {
    const auto count = static_cast<std::size_t>(std::lround((hi - lo) / step)) + 1;
    std::vector<double> ts(count), fs(count);
    parallel_for(count, [&](std::size_t i) {
        ts[i] = lo + step * static_cast<double>(i);
        FredholmOptions o;
        o.estimate_error = false;
        fs[i] = F_sigma(ts[i], sigma, o).value;
    });
    for (std::size_t i = 1; i < count; ++i) fs[i] = std::max(fs[i], fs[i - 1]);
    // Fritsch-Carlson monotone slopes on the uniform grid.
    std::vector<double> ds(count, 0.0), sec(count - 1);
    for (std::size_t i = 0; i + 1 < count; ++i) sec[i] = (fs[i + 1] - fs[i]) / step;
    ds.front() = sec.front();
    ds.back() = sec.back();
    for (std::size_t i = 1; i + 1 < count; ++i) {
        if (sec[i - 1] * sec[i] > 0.0) ds[i] = 2.0 / (1.0 / sec[i - 1] + 1.0 / sec[i]);
    }
    auto spline = std::make_shared<boost::math::interpolators::cubic_hermite<std::vector<double>>>(
        std::move(ts), std::move(fs), std::move(ds));
    return [spline, lo, hi](double t) {
        if (t <= lo) return 0.0;
        if (t >= hi) return 1.0;
        return std::clamp((*spline)(t), 0.0, 1.0);
    };
}

}  // namespace

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t x = seed;
    const std::uint64_t a = splitmix64(x);
    std::uint64_t y = a ^ (trial * 0xd1b54a32d192ed03ULL);
    std::seed_seq seq{splitmix64(y), splitmix64(y), splitmix64(y), splitmix64(y)};
    return std::mt19937_64(seq);
}

Eigen::MatrixXcd sample_gue(std::size_t n, std::mt19937_64& rng) {
    require(n >= 1, "sample_gue: n must be positive");
    std::normal_distribution<double> diag(0.0, std::sqrt(0.5)), off(0.0, 0.5);
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd X(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        X(i, i) = diag(rng);
        for (Eigen::Index j = i + 1; j < N; ++j) {
            const double re = off(rng), im = off(rng);
            X(i, j) = {re, im};
            X(j, i) = {re, -im};
        }
    }
    return X;
}

Eigen::MatrixXcd sample_eginue(std::size_t n, double tau, std::mt19937_64& rng) {
    require(tau >= 0.0 && tau <= 1.0, "sample_eginue: tau must lie in [0, 1]");
    const Eigen::MatrixXcd H1 = sample_gue(n, rng);
    const Eigen::MatrixXcd H2 = sample_gue(n, rng);
    const std::complex<double> b(0.0, std::sqrt((1.0 - tau) / 2.0));
    return std::sqrt((1.0 + tau) / 2.0) * H1 + b * H2;
}

Eigen::MatrixXcd sample_ginue(std::size_t n, std::mt19937_64& rng) {
    require(n >= 1, "sample_ginue: n must be positive");
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd X(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = 0; j < N; ++j) X(i, j) = {g(rng), g(rng)};
    }
    return X;
}

double rightmost(const Eigen::MatrixXcd& X) {
    require(X.rows() == X.cols() && X.rows() > 0, "rightmost: need a non-empty square matrix");
    if (is_hermitian(X)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(X, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NumericFailure("rightmost: Hermitian eigensolver failed");
        return es.eigenvalues().maxCoeff();
    }
    // Hessenberg reduction plus complex Schur (zgeev, eigenvalues only).
    Eigen::MatrixXcd A = X;
    const auto n = static_cast<lapack_int>(A.rows());
    Eigen::VectorXcd w(A.rows());
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(A.data()), n,
                      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr, 1);
    if (info < 0) throw InvalidArgument("rightmost: zgeev rejected argument " + std::to_string(-info));
    if (info > 0) throw NumericFailure("rightmost: eigensolver did not converge");
    return w.real().maxCoeff();
}

double edge_scale(double x_max, std::size_t n, Scaling law) {
    require(n >= 1, "edge_scale: n must be positive");
    const double nn = static_cast<double>(n);
    switch (law) {
        case Scaling::raw: return x_max;
        case Scaling::gue_edge: return (x_max - std::sqrt(2.0 * nn)) * std::sqrt(2.0) * std::pow(nn, 1.0 / 6.0);
        case Scaling::ginue_edge: {
            const double g = ginue_gamma(nn);
            require(g > 0.0, "edge_scale: gamma_n = " + std::to_string(g) + " is not positive at n = " +
                                 std::to_string(n) + "; the Gumbel edge scaling is undefined");
            return (x_max - std::sqrt(nn) - std::sqrt(g / 4.0)) * std::sqrt(4.0 * g);
        }
    }
    throw InvalidArgument("edge_scale: unknown scaling");
}

double edge_unscale(double t, std::size_t n, Scaling law) {
    const double nn = static_cast<double>(n);
    switch (law) {
        case Scaling::raw: return t;
        case Scaling::gue_edge: return std::sqrt(2.0 * nn) + t / (std::sqrt(2.0) * std::pow(nn, 1.0 / 6.0));
        case Scaling::ginue_edge: {
            const double g = ginue_gamma(nn);
            require(g > 0.0, "edge_unscale: gamma_n is not positive");
            return std::sqrt(nn) + std::sqrt(g / 4.0) + t / std::sqrt(4.0 * g);
        }
    }
    throw InvalidArgument("edge_unscale: unknown scaling");
}

ReferenceCdf ReferenceCdf::tracy_widom() {
    static std::once_flag once;
    static std::function<double(double)> table;
    std::call_once(once, [] { table = tabulate(0.0, -9.0, 6.0, 0.05); });
    return ReferenceCdf("tracy_widom", table);
}

ReferenceCdf ReferenceCdf::gumbel() { return ReferenceCdf("gumbel", [](double t) { return gumbel_cdf(t); }); }

ReferenceCdf ReferenceCdf::f_sigma(double sigma) {
    require(sigma >= 0.0, "ReferenceCdf: sigma must be >= 0");
    if (sigma == 0.0) return tracy_widom();
    static std::mutex mu;
    static std::map<double, std::function<double(double)>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(sigma);
    if (it == cache.end()) {
        it = cache.emplace(sigma, tabulate(sigma, -8.0 - 2.0 * sigma, 6.0 + 2.0 * sigma * sigma, 0.2)).first;
    }
    return ReferenceCdf("f_sigma(" + std::to_string(sigma) + ")", it->second);
}

double ReferenceCdf::quantile(double p) const {
    require(p > 0.0 && p < 1.0, "quantile: p must lie in (0, 1)");
    double lo = -60.0, hi = 60.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf_(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double ks_distance(std::vector<double> samples, const ReferenceCdf& ref) {
    require(!samples.empty(), "ks_distance: no samples");
    std::sort(samples.begin(), samples.end());
    const double N = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = ref(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / N - f, f - static_cast<double>(i) / N});
    }
    return d;
}

McRun run_experiment(const McConfig& cfg) {
    require(cfg.trials >= 1, "run_experiment: trials must be >= 1");
    require(cfg.n >= 1, "run_experiment: n must be >= 1");
    require(cfg.tau >= 0.0 && cfg.tau <= 1.0, "run_experiment: tau must lie in [0, 1]");
    // Validate the scaling before sampling.
    (void)edge_scale(0.0, cfg.n, cfg.scaling);

    McRun run;
    run.config = cfg;
    std::optional<ReferenceCdf> ref;
    switch (cfg.reference) {
        case Reference::none: break;
        case Reference::tracy_widom: ref = ReferenceCdf::tracy_widom(); break;
        case Reference::gumbel: ref = ReferenceCdf::gumbel(); break;
        case Reference::f_sigma: {
            const double s = cfg.sigma >= 0.0 ? cfg.sigma
                                              : std::pow(static_cast<double>(cfg.n), 1.0 / 6.0) * std::sqrt(1.0 - cfg.tau);
            ref = ReferenceCdf::f_sigma(s);
            break;
        }
    }

    run.samples.resize(cfg.trials);
    parallel_for(cfg.trials, [&](std::size_t k) {
        auto rng = trial_rng(cfg.seed, k);
        Eigen::MatrixXcd X;
        switch (cfg.ensemble) {
            case Ensemble::gue: X = sample_gue(cfg.n, rng); break;
            case Ensemble::eginue: X = sample_eginue(cfg.n, cfg.tau, rng); break;
            case Ensemble::ginue: X = sample_ginue(cfg.n, rng); break;
        }
        run.samples[k] = edge_scale(rightmost(X), cfg.n, cfg.scaling);
    });
    run.mean = std::accumulate(run.samples.begin(), run.samples.end(), 0.0) / static_cast<double>(cfg.trials);
    if (ref) {
        run.ks = ks_distance(run.samples, *ref);
        run.reference_name = ref->name();
    } else {
        run.reference_name = "none";
    }
    return run;
}

double elliptic_law_check(std::size_t n, double tau, std::size_t trials, std::uint64_t seed) {
    require(n >= 32, "elliptic_law_check: n must be >= 32");
    require(tau >= 0.0 && tau <= 1.0, "elliptic_law_check: tau must lie in [0, 1]");
    require(trials >= 1, "elliptic_law_check: trials must be >= 1");
    std::vector<std::size_t> inside(trials, 0);
    const double scale = std::sqrt(2.0 / static_cast<double>(n));
    parallel_for(trials, [&](std::size_t k) {
        auto rng = trial_rng(seed, k);
        const Eigen::MatrixXcd X = sample_eginue(n, tau, rng);
        Eigen::VectorXcd ev;
        if (tau == 1.0) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(X, Eigen::EigenvaluesOnly);
            ev = es.eigenvalues().cast<std::complex<double>>();
        } else {
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(X, false);
            if (es.info() != Eigen::Success) throw NumericFailure("elliptic_law_check: eigensolver failed");
            ev = es.eigenvalues();
        }
        std::size_t c = 0;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            const std::complex<double> z = scale * ev[i];
            bool in;
            if (tau == 1.0) {
                in = std::abs(z.real()) <= (1.0 + tau) * 1.05;
            } else {
                const double u = z.real() / (1.0 + tau), v = z.imag() / (1.0 - tau);
                in = u * u + v * v < 1.05 * 1.05;
            }
            c += in ? 1 : 0;
        }
        inside[k] = c;
    });
    const double total = static_cast<double>(std::accumulate(inside.begin(), inside.end(), std::size_t{0}));
    return total / static_cast<double>(n * trials);
}

}  // namespace edgelaw
