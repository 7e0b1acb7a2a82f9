#pragma once

#include <map>
#include <string>
#include <utility>

namespace edgelaw {

// zeta'(-1) = 1/12 - ln A, A the Glaisher-Kinkelin constant.
inline constexpr double kZetaPrimeMinus1 = -0.16542114370045093;

struct TailExpansion {
    enum class Regime { right_thm2, right_thm3, left_cor4, gumbel, tw_left, tw_right };
    Regime regime = Regime::right_thm2;
    double t = 0.0;
    double sigma = 0.0;
    double value = 0.0;      // approximation of F
    double one_minus = 0.0;  // approximation of 1 - F
    double log_value = 0.0;  // approximation of ln F
    bool valid = true;
    std::string validity;
    std::map<std::string, double> pieces;
};

const char* regime_name(TailExpansion::Regime r);

enum class TailForm { automatic, small_sigma, large_sigma };

double B_of(double t, double sigma, TailForm form = TailForm::automatic);
double A_of(double t, double sigma, TailForm form = TailForm::automatic);

TailExpansion right_tail_thm2(double t, double sigma);

// Quadrature nodes per unit of v in the y = v^2 substitution.
double C_of(double x, int density = 16);
double D_of(double x, int density = 16);
double Dprime_of(double x, int density = 16);

TailExpansion right_tail_thm3(double t, double sigma);

std::pair<double, double> gumbel_constants(double sigma);
double gumbel_cdf(double t);
double ginue_gamma(double n);

// ln of the Tracy-Widom left-tail approximation.
double tw_left_tail(double t, double zeta_prime = kZetaPrimeMinus1);
TailExpansion left_tail_cor4(double t, double sigma, double zeta_prime = kZetaPrimeMinus1);

// Integral over the real line of (1_{y >= 0} - phi(y)), by quadrature.
double step_minus_phi_integral();

}  // namespace edgelaw
