// edgelaw command-line front end; talks to the library only through edgelaw.h.
#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "edgelaw.h"

namespace {

constexpr int kExitNumeric = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 3;

struct Failure {
    int code;
    std::string message;
};

void check(edgelaw_status s) {
    if (s != EDGELAW_OK) throw Failure{static_cast<int>(s), edgelaw_last_error()};
}

// 17 significant digits, scientific, independent of the C locale.
std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, r.ptr);
}

struct Settings {
    double t_min = -4.0;
    double t_max = 4.0;
    int steps = 17;
    std::vector<double> sigmas;
    double t = 1.0;
    std::size_t n = 200;
    double tau = 1.0;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::size_t m = 0;
    double L = 0.0;
    std::string out = "-";
    std::string format = "csv";
    std::string regime = "all";
    std::string ensemble = "gue";
    std::string law = "auto";
    std::string scaling = "auto";
    std::string filter;
    double zeta_perturbation = 0.0;
    unsigned threads = 0;
};

std::vector<double> t_grid(const Settings& s) {
    if (!(s.t_min < s.t_max)) throw Failure{kExitUsage, "--t-min must be below --t-max"};
    if (s.steps < 2) throw Failure{kExitUsage, "--steps must be at least 2"};
    std::vector<double> ts(static_cast<std::size_t>(s.steps));
    for (int i = 0; i < s.steps; ++i) ts[static_cast<std::size_t>(i)] = s.t_min + (s.t_max - s.t_min) * i / (s.steps - 1);
    return ts;
}

std::vector<double> sigma_list(const Settings& s, std::vector<double> fallback) {
    std::vector<double> v = s.sigmas.empty() ? std::move(fallback) : s.sigmas;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::out | std::ios::trunc);
            if (!file_) throw Failure{kExitIo, "cannot open " + path + " for writing"};
        }
        os_ = path == "-" ? &std::cout : &file_;
        path_ = path;
    }
    std::ostream& operator*() { return *os_; }
    void finish() {
        os_->flush();
        if (!*os_) throw Failure{kExitIo, "write to " + path_ + " failed"};
    }

private:
    std::ofstream file_;
    std::ostream* os_ = nullptr;
    std::string path_;
};

void echo_config(std::ostream& os, const CLI::App& app, const std::string& command) {
    os << "# edgelaw " << edgelaw_version() << " " << command << "\n";
    std::istringstream cfg(app.config_to_str(true, false));
    for (std::string line; std::getline(cfg, line);) {
        if (!line.empty()) os << "# " << line << "\n";
    }
}

void row(std::ostream& os, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) os << ',';
        os << c;
        first = false;
    }
    os << '\n';
}

int cmd_eval(const Settings& s, const CLI::App& app) {
    const auto ts = t_grid(s);
    const auto sigmas = sigma_list(s, {0.0});
    Output out(s.out);
    echo_config(*out, app, "eval");
    row(*out, {"t", "sigma", "F_fredholm", "err_est"});
    for (double sigma : sigmas) {
        for (double t : ts) {
            edgelaw_dist_eval e;
            check(edgelaw_F_sigma(t, sigma, s.m, s.L, &e));
            row(*out, {num(t), num(sigma), num(e.value), num(e.err_est)});
        }
    }
    out.finish();
    return 0;
}

int cmd_tails(const Settings& s, const CLI::App& app) {
    struct Regime {
        const char* name;
        int id;
    };
    const Regime all[] = {{"thm2", EDGELAW_RIGHT_THM2}, {"thm3", EDGELAW_RIGHT_THM3}, {"left", EDGELAW_LEFT_COR4}};
    std::vector<Regime> chosen;
    for (const auto& r : all)
        if (s.regime == "all" || s.regime == r.name) chosen.push_back(r);
    if (chosen.empty()) throw Failure{kExitUsage, "--regime must be thm2, thm3, left or all"};
    const auto ts = t_grid(s);
    const auto sigmas = sigma_list(s, {0.0, 1.0});
    Output out(s.out);
    echo_config(*out, app, "tails");
    row(*out, {"t", "sigma", "regime", "F_fredholm", "one_minus_fredholm", "log_F_fredholm", "F_approx",
               "one_minus_approx", "log_F_approx", "rel_err", "valid"});
    for (double sigma : sigmas) {
        for (double t : ts) {
            edgelaw_dist_eval e;
            check(edgelaw_F_sigma(t, sigma, s.m, s.L, &e));
            for (const auto& r : chosen) {
                edgelaw_tail a;
                const bool ok = edgelaw_tail_eval(r.id, t, sigma, &a) == EDGELAW_OK;
                const double nan = std::nan("");
                double rel = nan;
                if (ok) {
                    // right tails approximate 1 - F, the left tail approximates F
                    rel = r.id == EDGELAW_LEFT_COR4 ? std::expm1(a.log_value - e.log_value)
                                                    : a.one_minus / e.one_minus - 1.0;
                }
                row(*out, {num(t), num(sigma), r.name, num(e.value), num(e.one_minus), num(e.log_value),
                           num(ok ? a.value : nan), num(ok ? a.one_minus : nan), num(ok ? a.log_value : nan),
                           num(rel), ok && a.valid ? "1" : "0"});
            }
        }
    }
    out.finish();
    return 0;
}

int cmd_idpii(const Settings& s, const CLI::App& app) {
    const auto ts = t_grid(s);
    const auto sigmas = sigma_list(s, {0.5, 1.0, 2.0});
    Output out(s.out);
    echo_config(*out, app, "idpii");
    row(*out, {"t", "sigma", "F_idpii", "F_fredholm", "abs_diff"});
    for (double sigma : sigmas) {
        edgelaw_pii* raw = nullptr;
        check(edgelaw_pii_solve(sigma, s.t_min, 8.0, s.m, 0.0, &raw));
        std::unique_ptr<edgelaw_pii, void (*)(edgelaw_pii*)> st(raw, edgelaw_pii_free);
        for (double t : ts) {
            edgelaw_dist_eval p, f;
            check(edgelaw_pii_F(st.get(), t, &p));
            check(edgelaw_F_sigma(t, sigma, 0, 0.0, &f));
            row(*out, {num(t), num(sigma), num(p.value), num(f.value), num(std::abs(p.value - f.value))});
        }
    }
    out.finish();
    return 0;
}

int cmd_mc(const Settings& s, const CLI::App& app) {
    edgelaw_mc_config c;
    edgelaw_mc_config_default(&c);
    if (s.ensemble == "gue") c.ensemble = EDGELAW_GUE;
    else if (s.ensemble == "eginue") c.ensemble = EDGELAW_EGINUE;
    else if (s.ensemble == "ginue") c.ensemble = EDGELAW_GINUE;
    else throw Failure{kExitUsage, "--ensemble must be gue, eginue or ginue"};
    const bool ginue = c.ensemble == EDGELAW_GINUE;
    if (s.scaling == "auto") c.scaling = ginue ? EDGELAW_SCALE_GINUE_EDGE : EDGELAW_SCALE_GUE_EDGE;
    else if (s.scaling == "gue") c.scaling = EDGELAW_SCALE_GUE_EDGE;
    else if (s.scaling == "ginue") c.scaling = EDGELAW_SCALE_GINUE_EDGE;
    else if (s.scaling == "raw") c.scaling = EDGELAW_SCALE_RAW;
    else throw Failure{kExitUsage, "--scaling must be auto, gue, ginue or raw"};
    if (s.law == "auto") {
        c.reference = ginue ? EDGELAW_REF_GUMBEL
                      : c.ensemble == EDGELAW_EGINUE && s.tau < 1.0 ? EDGELAW_REF_F_SIGMA
                                                                     : EDGELAW_REF_TRACY_WIDOM;
    } else if (s.law == "tw") c.reference = EDGELAW_REF_TRACY_WIDOM;
    else if (s.law == "gumbel") c.reference = EDGELAW_REF_GUMBEL;
    else if (s.law == "fsigma") c.reference = EDGELAW_REF_F_SIGMA;
    else if (s.law == "none") c.reference = EDGELAW_REF_NONE;
    else throw Failure{kExitUsage, "--law must be auto, tw, gumbel, fsigma or none"};
    if (c.scaling == EDGELAW_SCALE_RAW) c.reference = EDGELAW_REF_NONE;
    if (!(s.tau >= 0.0 && s.tau <= 1.0)) throw Failure{kExitUsage, "--tau must lie in [0, 1]"};
    c.n = s.n;
    c.tau = c.ensemble == EDGELAW_GUE ? 1.0 : ginue ? 0.0 : s.tau;
    c.trials = s.trials;
    c.seed = s.seed;
    if (!s.sigmas.empty()) c.sigma = s.sigmas.front();
    edgelaw_mc_run* raw = nullptr;
    check(edgelaw_mc_run_experiment(&c, &raw));
    std::unique_ptr<edgelaw_mc_run, void (*)(edgelaw_mc_run*)> run(raw, edgelaw_mc_free);
    Output out(s.out);
    echo_config(*out, app, "mc");
    row(*out, {"trial", "sample"});
    const double* x = edgelaw_mc_samples(run.get());
    for (std::size_t i = 0; i < edgelaw_mc_sample_count(run.get()); ++i) row(*out, {std::to_string(i), num(x[i])});
    *out << "# summary reference=" << edgelaw_mc_reference_name(run.get()) << "\n";
    *out << "# summary mean=" << num(edgelaw_mc_mean(run.get())) << "\n";
    *out << "# summary ks=" << num(edgelaw_mc_ks(run.get())) << "\n";
    out.finish();
    return 0;
}

int cmd_traceid(const Settings& s, const CLI::App& app) {
    const double sigma = s.sigmas.empty() ? 0.8 : s.sigmas.front();
    // both routes share the x-grid, so sigma = 0 reduces exactly
    const std::size_t m = s.m > 0 ? s.m : 80, mx = m, my = 40;
    const double L = s.L > 0.0 ? s.L : 25.0 + 2.0 * std::max(0.0, -s.t) + sigma * sigma;
    Output out(s.out);
    echo_config(*out, app, "traceid");
    row(*out, {"n", "t", "sigma", "trace_1d", "trace_2d", "abs_diff", "m", "L", "mx", "my"});
    for (int n : {1, 2}) {
        double a = 0.0, b = 0.0;
        check(edgelaw_trace_1d(s.t, sigma, n, m, L, &a));
        check(edgelaw_trace_2d(s.t, sigma, n, mx, my, L, &b));
        row(*out, {std::to_string(n), num(s.t), num(sigma), num(a), num(b), num(std::abs(a - b)), std::to_string(m),
                   num(L), std::to_string(mx), std::to_string(my)});
    }
    out.finish();
    return 0;
}

int cmd_selftest(const Settings& s) {
    edgelaw_selftest_options o{s.filter.empty() ? nullptr : s.filter.c_str(), s.zeta_perturbation};
    int failures = 0;
    check(edgelaw_selftest(
        &o,
        [](const char* name, int passed, double measured, double tol, void*) {
            std::printf("%s %-34s measured %s tolerance %s\n", passed ? "PASS" : "FAIL", name, num(measured).c_str(),
                        num(tol).c_str());
            std::fflush(stdout);
        },
        nullptr, &failures));
    std::printf("%d check(s) failed\n", failures);
    return failures == 0 ? 0 : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    Settings s;
    CLI::App app{"Rightmost-eigenvalue laws of the elliptic Ginibre ensemble at weak non-Hermiticity"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.add_option("--t-min", s.t_min, "first t")->capture_default_str();
    app.add_option("--t-max", s.t_max, "last t")->capture_default_str();
    app.add_option("--steps", s.steps, "number of t points")->capture_default_str();
    app.add_option("--sigma", s.sigmas, "sigma value (repeatable)")->allow_extra_args(false);
    app.add_option("--t", s.t, "threshold for traceid")->capture_default_str();
    app.add_option("--n", s.n, "matrix size")->capture_default_str();
    app.add_option("--tau", s.tau, "non-Hermiticity parameter in [0, 1]")->capture_default_str();
    app.add_option("--trials", s.trials, "Monte Carlo trials")->capture_default_str();
    app.add_option("--seed", s.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--m", s.m, "quadrature nodes (0: automatic); Hermite nodes for idpii")->capture_default_str();
    app.add_option("--L", s.L, "truncation length (0: automatic)")->capture_default_str();
    app.add_option("--out", s.out, "output path, - for stdout")->capture_default_str();
    app.add_option("--format", s.format, "output format")->check(CLI::IsMember({"csv"}))->capture_default_str();
    app.add_option("--regime", s.regime, "tails: thm2, thm3, left or all")->capture_default_str();
    app.add_option("--ensemble", s.ensemble, "mc: gue, eginue or ginue")->capture_default_str();
    app.add_option("--law", s.law, "mc reference: auto, tw, gumbel, fsigma or none")->capture_default_str();
    app.add_option("--scaling", s.scaling, "mc scaling: auto, gue, ginue or raw")->capture_default_str();
    app.add_option("--filter", s.filter, "selftest: run checks whose name contains this");
    app.add_option("--zeta-perturbation", s.zeta_perturbation, "selftest: shift of zeta'(-1)")
        ->capture_default_str();
    app.add_option("--threads", s.threads, "worker threads (0: EDGELAW_THREADS or all cores)")
        ->capture_default_str();

    auto* eval = app.add_subcommand("eval", "F_sigma(t) by the Fredholm determinant")->fallthrough();
    auto* tails = app.add_subcommand("tails", "Fredholm against the asymptotic tail formulas")->fallthrough();
    auto* idpii = app.add_subcommand("idpii", "integro-differential Painleve II against Fredholm")->fallthrough();
    auto* mc = app.add_subcommand("mc", "Monte Carlo rightmost eigenvalues")->fallthrough();
    auto* traceid = app.add_subcommand("traceid", "one- and two-dimensional trace identity")->fallthrough();
    auto* selftest = app.add_subcommand("selftest", "invariant suite")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        app.exit(e);
        return kExitIo;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        edgelaw_set_threads(s.threads);
        if (eval->parsed()) return cmd_eval(s, app);
        if (tails->parsed()) return cmd_tails(s, app);
        if (idpii->parsed()) return cmd_idpii(s, app);
        if (mc->parsed()) return cmd_mc(s, app);
        if (traceid->parsed()) return cmd_traceid(s, app);
        if (selftest->parsed()) return cmd_selftest(s);
    } catch (const Failure& f) {
        std::cerr << "edgelaw: " << f.message << "\n";
        return f.code;
    }
    return kExitUsage;
}
