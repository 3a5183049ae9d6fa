#pragma once

#include "boltzlp/collision.hpp"
#include "boltzlp/kernel_grid.hpp"
#include "boltzlp/quadrature.hpp"
#include "boltzlp/report.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace boltzlp {

inline constexpr double kInfP = std::numeric_limits<double>::infinity();

double lp_norm(const Distribution& f, double p);
// || <v>^w f ||_{L^1}
double weighted_l1(const Distribution& f, double w);
// || <v>^rho f ||_{L^2}
double weighted_l2(const Distribution& f, double rho_weight);
// || <v>^rho f ||_{L^p}
double weighted_lp(const Distribution& f, double p, double rho_weight);

// || <v>^rho g ||_{H^s} through a zero-padded FFT (padding >= 2).
double sobolev_weighted(const Distribution& g, double s_ord, double rho_weight, int padding = 2);
// || f^{p/2} ||^2 in H^s_{gamma/2}
double hs_gamma_half_sq(const Distribution& f, double p, const KernelParams& kp, int padding = 2);

struct NormReport {
    double p = 2.0;
    double lp = 0.0;
    double l1_w = 0.0;
    double l2_gamma_half = 0.0;
    double hs_gamma_half_of_fp2 = 0.0;
    double time_tag = 0.0;
};

NormReport norm_report(const Distribution& f, double p, double w, const KernelParams& kp);

enum class FunctionalKind { I_p, J_p, I_p_upper, I_1 };

struct FunctionalValue {
    FunctionalKind kind = FunctionalKind::I_p;
    double value = 0.0;
    double p = 2.0;
    double quadrature_error_estimate = 0.0;
};

struct FunctionalOptions {
    bool periodic = false;        // wrap indices (test mode); slow reference loop
    bool estimate_error = false;  // compare against a half-resolution angular rule
    bool exact_table = false;     // one table entry per event instead of r compression
};

FunctionalValue eval_Ip(const Distribution& g, const Distribution& f, double p, const KernelParams& kp,
                        const AngularQuadrature& aq, const FunctionalOptions& opts = {});
FunctionalValue eval_Jp(const Distribution& g, const Distribution& f, double p, const KernelParams& kp,
                        const AngularQuadrature& aq, const FunctionalOptions& opts = {});

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

// Stratified in dyadic shells of |v - v_*|, importance sampled in angle.
MonteCarloEstimate eval_Ip_monte_carlo(const Distribution& g, const Distribution& f, double p, const KernelParams& kp,
                                       const AngularQuadrature& aq, std::uint64_t samples, std::uint64_t seed);

FunctionalValue eval_Ip_upper(const Distribution& g, const Distribution& f, double p, const KernelParams& kp);

struct Lemma21Result {
    double lhs = 0.0;
    double rhs = 0.0;
    double ip = 0.0;
    double jp = 0.0;
    double slack = 0.0;
    bool pass = false;
};

// lhs = sum Q(g,f) f^{p-1} h^3, rhs = I_p/p' - J_p/max(p,p').
Lemma21Result lemma21_check(const Distribution& g, const Distribution& f, double p, const KernelParams& kp,
                            const AngularQuadrature& aq);
// Same check with a precomputed Q(g,f).
Lemma21Result lemma21_check(const Distribution& g, const Distribution& f, const Distribution& q, double p,
                            const KernelParams& kp, const AngularQuadrature& aq);

struct CoercivityFit {
    double c0 = 0.0;
    double c1 = 0.0;
    bool feasible = false;
    bool c0_positive = false;
    std::vector<double> jp, hs_sq, l2_sq;
};

// LP over the sample inequalities J_i >= c0 H_i - c1 L_i, maximising c0 - c1_weight*c1.
CoercivityFit coercivity_fit(const std::vector<Distribution>& family, double p, const KernelParams& kp,
                             const AngularQuadrature& aq, double c1_weight = 1.0);

CheckReport hardy_check(const Distribution& F, double ell, double delta = -1.0);
double hls_exponent(double alpha, double p_in);
CheckReport hls_check(const Distribution& f, double alpha, double p_in, double q_out, double delta = -1.0);
CheckReport sobolev_embedding_check(const Distribution& f, double p, double s_ord, double gamma);

inline double sobolev_exponent(double p, double s) { return 3.0 * p / (3.0 - 2.0 * s); }
inline double conjugate(double p) { return p / (p - 1.0); }

}  // namespace boltzlp
