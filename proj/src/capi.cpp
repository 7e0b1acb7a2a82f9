#include "edgelaw.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>

#include "errors.hpp"
#include "fredholm.hpp"
#include "idpii.hpp"
#include "kernels.hpp"
#include "mc.hpp"
#include "parallel.hpp"
#include "selftest.hpp"
#include "specfun.hpp"
#include "tails.hpp"

struct edgelaw_pii {
    edgelaw::PiiState state;
};

struct edgelaw_mc_run {
    edgelaw::McRun run;
};

namespace {

thread_local std::string last_error;

template <class F>
edgelaw_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return EDGELAW_OK;
    } catch (const std::invalid_argument& e) {
        last_error = e.what();
        return EDGELAW_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return EDGELAW_NUMERIC_FAILURE;
    } catch (const std::exception& e) {
        last_error = e.what();
        return EDGELAW_NUMERIC_FAILURE;
    } catch (...) {
        last_error = "unknown error";
        return EDGELAW_NUMERIC_FAILURE;
    }
}

void need(const void* p, const char* what) {
    if (p == nullptr) throw edgelaw::InvalidArgument(std::string(what) + " must not be NULL");
}

void fill(const edgelaw::DistEval& e, edgelaw_dist_eval* out) {
    using M = edgelaw::DistEval::Method;
    out->method = e.method == M::idpii ? EDGELAW_METHOD_IDPII
                  : e.method == M::fredholm_trace_series ? EDGELAW_METHOD_TRACE_SERIES
                                                          : EDGELAW_METHOD_FREDHOLM;
    out->t = e.t;
    out->sigma = e.sigma;
    out->value = e.value;
    out->one_minus = e.one_minus;
    out->log_value = e.log_value;
    out->err_est = e.err_est;
    out->tail_bracket = e.tail_bracket ? 1 : 0;
    out->tail_lower = e.tail_lower;
    out->tail_upper = e.tail_upper;
    out->m = e.m;
    out->L = e.L;
}

edgelaw::Reference to_reference(int r) {
    switch (r) {
        case EDGELAW_REF_NONE: return edgelaw::Reference::none;
        case EDGELAW_REF_TRACY_WIDOM: return edgelaw::Reference::tracy_widom;
        case EDGELAW_REF_GUMBEL: return edgelaw::Reference::gumbel;
        case EDGELAW_REF_F_SIGMA: return edgelaw::Reference::f_sigma;
        default: throw edgelaw::InvalidArgument("unknown reference law " + std::to_string(r));
    }
}

edgelaw::McConfig to_config(const edgelaw_mc_config& c) {
    edgelaw::McConfig m;
    switch (c.ensemble) {
        case EDGELAW_GUE: m.ensemble = edgelaw::Ensemble::gue; break;
        case EDGELAW_EGINUE: m.ensemble = edgelaw::Ensemble::eginue; break;
        case EDGELAW_GINUE: m.ensemble = edgelaw::Ensemble::ginue; break;
        default: throw edgelaw::InvalidArgument("unknown ensemble " + std::to_string(c.ensemble));
    }
    switch (c.scaling) {
        case EDGELAW_SCALE_GUE_EDGE: m.scaling = edgelaw::Scaling::gue_edge; break;
        case EDGELAW_SCALE_GINUE_EDGE: m.scaling = edgelaw::Scaling::ginue_edge; break;
        case EDGELAW_SCALE_RAW: m.scaling = edgelaw::Scaling::raw; break;
        default: throw edgelaw::InvalidArgument("unknown scaling " + std::to_string(c.scaling));
    }
    m.reference = to_reference(c.reference);
    m.n = c.n;
    m.tau = c.tau;
    m.trials = c.trials;
    m.seed = c.seed;
    m.sigma = c.sigma;
    return m;
}

}  // namespace

extern "C" {

const char* edgelaw_last_error(void) { return last_error.c_str(); }

const char* edgelaw_version(void) { return "0.1.0"; }

void edgelaw_set_threads(unsigned n) { edgelaw::set_thread_count(n); }

double edgelaw_airy_ai(double x) { return edgelaw::airy_ai(x); }
double edgelaw_airy_ai_prime(double x) { return edgelaw::airy_ai_prime(x); }
double edgelaw_phi(double x) { return edgelaw::phi(x); }
double edgelaw_airy_kernel(double a, double b) { return edgelaw::airy_kernel(a, b); }

edgelaw_status edgelaw_ft_airy_kernel(double a, double b, double t, double sigma, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = edgelaw::ft_airy_kernel(a, b, t, sigma);
    });
}

edgelaw_status edgelaw_ft_airy_kernel_contour(double a, double b, double t, double sigma, double delta, double* out) {
    return guarded([&] {
        need(out, "out");
        const double d = delta > 0.0 ? delta : edgelaw::contour_saddle(a, b, t, sigma);
        *out = edgelaw::ft_airy_kernel_contour(a, b, t, sigma, d);
    });
}

edgelaw_status edgelaw_F_sigma(double t, double sigma, size_t m, double L, edgelaw_dist_eval* out) {
    return guarded([&] {
        need(out, "out");
        edgelaw::FredholmOptions o;
        o.m = m;
        o.L = L;
        fill(edgelaw::F_sigma(t, sigma, o), out);
    });
}

edgelaw_status edgelaw_F_sigma_large(double t, double sigma, edgelaw_dist_eval* out) {
    return guarded([&] {
        need(out, "out");
        fill(edgelaw::F_sigma_trace_series(t, sigma), out);
    });
}

edgelaw_status edgelaw_trace_1d(double t, double sigma, int n, size_t m, double L, double* out) {
    return guarded([&] {
        need(out, "out");
        edgelaw::KernelSpec spec;
        spec.tag = sigma == 0.0 ? edgelaw::KernelSpec::Tag::airy : edgelaw::KernelSpec::Tag::ft_airy;
        spec.sigma = sigma;
        const double len = L > 0.0 ? L : edgelaw::default_length(t, sigma);
        *out = edgelaw::trace_power_1d(spec, t, n, m > 0 ? m : edgelaw::default_nodes(t, sigma, len), len);
    });
}

edgelaw_status edgelaw_trace_2d(double t, double sigma, int n, size_t mx, size_t my, double L, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = edgelaw::trace_power_2d(t, sigma, n, mx > 0 ? mx : 80, my > 0 ? my : 40, L);
    });
}

edgelaw_status edgelaw_pii_solve(double sigma, double t_min, double t0, size_t m_h, double ode_tol,
                                 edgelaw_pii** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        edgelaw::PiiOptions o;
        o.t_min = t_min;
        o.t0 = t0;
        if (m_h > 0) o.m_h = m_h;
        if (ode_tol > 0.0) o.ode_tol = ode_tol;
        auto* h = new edgelaw_pii{edgelaw::solve_idpii(sigma, o)};
        *out = h;
    });
}

void edgelaw_pii_free(edgelaw_pii* state) { delete state; }

edgelaw_status edgelaw_pii_F(const edgelaw_pii* state, double t, edgelaw_dist_eval* out) {
    return guarded([&] {
        need(state, "state");
        need(out, "out");
        fill(edgelaw::F_from_idpii(state->state, t), out);
    });
}

edgelaw_status edgelaw_pii_residual(const edgelaw_pii* state, double t, size_t k, double* out) {
    return guarded([&] {
        need(state, "state");
        need(out, "out");
        *out = edgelaw::stark_residual(state->state, t, k);
    });
}

size_t edgelaw_pii_grid_size(const edgelaw_pii* state) { return state ? state->state.t_grid.size() : 0; }

size_t edgelaw_pii_nodes(const edgelaw_pii* state) { return state ? state->state.y_nodes.size() : 0; }

edgelaw_status edgelaw_pii_grid_point(const edgelaw_pii* state, size_t i, double* t, double* E, double* p_mid) {
    return guarded([&] {
        need(state, "state");
        const auto& s = state->state;
        if (i >= s.t_grid.size()) throw edgelaw::InvalidArgument("grid index out of range");
        if (t) *t = s.t_grid[i];
        if (E) *E = s.E[i];
        if (p_mid) *p_mid = s.p[i][s.y_nodes.size() / 2];
    });
}

edgelaw_status edgelaw_tail_eval(int regime, double t, double sigma, edgelaw_tail* out) {
    return guarded([&] {
        need(out, "out");
        edgelaw::TailExpansion e;
        switch (regime) {
            case EDGELAW_RIGHT_THM2: e = edgelaw::right_tail_thm2(t, sigma); break;
            case EDGELAW_RIGHT_THM3: e = edgelaw::right_tail_thm3(t, sigma); break;
            case EDGELAW_LEFT_COR4: e = edgelaw::left_tail_cor4(t, sigma); break;
            case EDGELAW_GUMBEL:
                if (!(sigma > 1.0)) throw edgelaw::InvalidArgument("gumbel regime needs sigma > 1");
                e.t = t;
                e.sigma = sigma;
                e.log_value = -std::exp(-t);
                e.value = edgelaw::gumbel_cdf(t);
                e.one_minus = -std::expm1(e.log_value);
                e.valid = true;
                break;
            default: throw edgelaw::InvalidArgument("unknown tail regime " + std::to_string(regime));
        }
        out->regime = regime;
        out->t = t;
        out->sigma = sigma;
        out->value = e.value;
        out->one_minus = e.one_minus;
        out->log_value = e.log_value;
        out->valid = e.valid ? 1 : 0;
    });
}

edgelaw_status edgelaw_gumbel_constants(double sigma, double* a, double* c) {
    return guarded([&] {
        need(a, "a");
        need(c, "c");
        const auto [as, cs] = edgelaw::gumbel_constants(sigma);
        *a = as;
        *c = cs;
    });
}

double edgelaw_gumbel_cdf(double t) { return edgelaw::gumbel_cdf(t); }

void edgelaw_mc_config_default(edgelaw_mc_config* cfg) {
    if (!cfg) return;
    const edgelaw::McConfig d;
    cfg->ensemble = EDGELAW_GUE;
    cfg->n = d.n;
    cfg->tau = d.tau;
    cfg->trials = d.trials;
    cfg->seed = d.seed;
    cfg->scaling = EDGELAW_SCALE_GUE_EDGE;
    cfg->reference = EDGELAW_REF_TRACY_WIDOM;
    cfg->sigma = d.sigma;
}

edgelaw_status edgelaw_mc_run_experiment(const edgelaw_mc_config* cfg, edgelaw_mc_run** out) {
    return guarded([&] {
        need(cfg, "cfg");
        need(out, "out");
        *out = nullptr;
        auto* h = new edgelaw_mc_run{edgelaw::run_experiment(to_config(*cfg))};
        *out = h;
    });
}

void edgelaw_mc_free(edgelaw_mc_run* run) { delete run; }

size_t edgelaw_mc_sample_count(const edgelaw_mc_run* run) { return run ? run->run.samples.size() : 0; }

const double* edgelaw_mc_samples(const edgelaw_mc_run* run) { return run ? run->run.samples.data() : nullptr; }

double edgelaw_mc_mean(const edgelaw_mc_run* run) { return run ? run->run.mean : NAN; }

double edgelaw_mc_ks(const edgelaw_mc_run* run) { return run ? run->run.ks : -1.0; }

const char* edgelaw_mc_reference_name(const edgelaw_mc_run* run) {
    return run ? run->run.reference_name.c_str() : "";
}

edgelaw_status edgelaw_ks_distance(const double* samples, size_t count, int reference, double sigma, double* out) {
    return guarded([&] {
        need(samples, "samples");
        need(out, "out");
        const std::vector<double> v(samples, samples + count);
        switch (to_reference(reference)) {
            case edgelaw::Reference::tracy_widom: *out = edgelaw::ks_distance(v, edgelaw::ReferenceCdf::tracy_widom()); break;
            case edgelaw::Reference::gumbel: *out = edgelaw::ks_distance(v, edgelaw::ReferenceCdf::gumbel()); break;
            case edgelaw::Reference::f_sigma: *out = edgelaw::ks_distance(v, edgelaw::ReferenceCdf::f_sigma(sigma)); break;
            case edgelaw::Reference::none: throw edgelaw::InvalidArgument("a reference law is required");
        }
    });
}

edgelaw_status edgelaw_elliptic_law_check(size_t n, double tau, size_t trials, uint64_t seed, double* fraction) {
    return guarded([&] {
        need(fraction, "fraction");
        *fraction = edgelaw::elliptic_law_check(n, tau, trials, seed);
    });
}

edgelaw_status edgelaw_selftest(const edgelaw_selftest_options* opts, edgelaw_check_fn cb, void* user,
                                int* failures) {
    return guarded([&] {
        edgelaw::SelftestOptions o;
        if (opts) {
            if (opts->filter) o.filter = opts->filter;
            o.zeta_perturbation = opts->zeta_perturbation;
        }
        const int f = edgelaw::run_selftest(o, [&](const edgelaw::CheckResult& r) {
            if (cb) cb(r.name.c_str(), r.passed ? 1 : 0, r.measured, r.tolerance, user);
        });
        if (failures) *failures = f;
    });
}

}  // extern "C"
