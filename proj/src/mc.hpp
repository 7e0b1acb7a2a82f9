#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace edgelaw {

enum class Ensemble { gue, eginue, ginue };
enum class Scaling { gue_edge, ginue_edge, raw };
enum class Reference { none, tracy_widom, gumbel, f_sigma };

struct McConfig {
    Ensemble ensemble = Ensemble::gue;
    std::size_t n = 200;
    double tau = 1.0;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    Scaling scaling = Scaling::gue_edge;
    Reference reference = Reference::tracy_widom;
    double sigma = -1.0;  // for Reference::f_sigma; < 0 derives n^{1/6} sqrt(1 - tau)
};

struct McRun {
    McConfig config;
    std::vector<double> samples;  // in trial order
    double mean = 0.0;
    double ks = -1.0;  // < 0 when no reference
    std::string reference_name;
};

// Independent stream per (seed, trial).
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

Eigen::MatrixXcd sample_gue(std::size_t n, std::mt19937_64& rng);
Eigen::MatrixXcd sample_eginue(std::size_t n, double tau, std::mt19937_64& rng);
Eigen::MatrixXcd sample_ginue(std::size_t n, std::mt19937_64& rng);

// Largest real part over the spectrum.
double rightmost(const Eigen::MatrixXcd& X);

double edge_scale(double x_max, std::size_t n, Scaling law);
double edge_unscale(double t, std::size_t n, Scaling law);

class ReferenceCdf {
public:
    static ReferenceCdf tracy_widom();
    static ReferenceCdf gumbel();
    static ReferenceCdf f_sigma(double sigma);

    double operator()(double t) const { return cdf_(t); }
    double quantile(double p) const;
    const std::string& name() const { return name_; }

private:
    ReferenceCdf(std::string name, std::function<double(double)> cdf) : name_(std::move(name)), cdf_(std::move(cdf)) {}
    std::string name_;
    std::function<double(double)> cdf_;
};

double ks_distance(std::vector<double> samples, const ReferenceCdf& ref);

McRun run_experiment(const McConfig& config);

// Fraction of eigenvalues of sqrt(2/n) X inside the 1.05-dilated ellipse with
// semi-axes 1 + tau, 1 - tau.
double elliptic_law_check(std::size_t n, double tau, std::size_t trials, std::uint64_t seed);

}  // namespace edgelaw
