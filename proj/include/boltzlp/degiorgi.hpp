#pragma once

#include "boltzlp/kernel_grid.hpp"
#include "boltzlp/quadrature.hpp"
#include "boltzlp/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace boltzlp {

enum class ScheduleVariant { strong_soft, weak_soft };

const char* schedule_name(ScheduleVariant v);

struct LevelSetLadder {
    double K = 1.0;
    int k_max = 40;
    ScheduleVariant variant = ScheduleVariant::strong_soft;
    double t_star = 1.0;

    // K_k = K (1 - 2^{-k})
    double level(int k) const;
    // strong: t*(1 - 2^{-(k+1)})/2, weak: t*(1 - 2^{-(k+1)})
    double time(int k) const;
    void validate() const;
};

// (f - K_k)^+
Distribution level_truncate(const Distribution& f, double K, int k);

// Scalar form of the indicator bound 1{f >= K_k} <= ((2^k/K) f_{k-beta} / (2^beta - 1))^alpha.
CheckReport inhomog_bound_check(double fval, double K, int k, double beta, double alpha);

struct EnergySequence {
    std::vector<double> w;
    std::vector<double> sup_term;
    std::vector<double> integral_term;
    std::vector<double> t_k;
    std::vector<double> K_k;
    double p = 2.0;
    double c_front = 1.0;

    std::string to_csv() const;  // k,t_k,K_k,sup_term,integral_term,W_k
};

struct EnergyOptions {
    double c_front = 1.0;
    int min_snapshots_per_window = 4;
    int checked_windows = 8;  // sparsity is checked for windows k = 1..checked_windows
};

// Snapshots are read from time_tag and must be sorted by time.
EnergySequence energy_sequence(const std::vector<Distribution>& trajectory, const LevelSetLadder& ladder, double p,
                               const KernelParams& kp, const EnergyOptions& opts = {});

// Snapshot times with `per_window` points in every dyadic window up to `windows`, plus a
// uniform cover of the remaining interval up to t_end.
std::vector<double> ladder_snapshot_times(const LevelSetLadder& ladder, int windows, int per_window, double t_end,
                                          int tail_points);

enum class RecursionVariant { single_c, two_c };

struct RecursionParams {
    double C = 1.0;
    double a = 1.0;
    double b = 1.0;
    double c1 = 2.0;  // c for the single-exponent form
    double c2 = 2.0;
    double W0 = 1.0;
    double K = 1.0;

    void validate(RecursionVariant v) const;
};

double recursion_threshold(const RecursionParams& rp, RecursionVariant v);

struct DecayReport {
    bool pass = true;
    bool below_threshold = false;  // expected-failure mode
    int first_violation = -1;
    double threshold = 0.0;
    double worst_log_ratio = -1e300;  // max_k log(W_k / bound_k)
    std::vector<double> w;
    std::vector<double> bound;

    std::string to_string() const;
};

// Iterates the recursion with equality from W0 (in log space) and compares against
// W0 2^{-a k/(c1-1)} at every k <= k_max.
DecayReport verify_decay(const RecursionParams& rp, RecursionVariant v, int k_max, double log_tol = 1e-12);

// sum Q(f,f) f_k^{p-1} h^3 against K_k I_{p-1}(f,f_k) + I_p(f,f_k)/p' - J_p(f,f_k)/max(p,p').
CheckReport level_energy_inequality_check(const Distribution& f, const LevelSetLadder& ladder, int k, double p,
                                          const KernelParams& kp, const AngularQuadrature& aq,
                                          const Distribution* q_ff = nullptr);

struct LinftySearch {
    double tol_zero_rel = 0.0;  // W_{k_max} <= tol_zero_rel * W_0 counts as vanished
    double c_front = 1.0;
    int iterations = 200;
    double soundness_tol = 1e-6;
};

struct LinftyEstimate {
    double K_star = 0.0;
    double sup_norm = 0.0;  // max grid sup-norm over snapshots in [t*/2, t*]
    bool bracketed = false;
    bool sound = false;     // K_star >= sup_norm - soundness_tol
    int probes = 0;
    EnergySequence at_k_star;

    std::string to_string() const;
};

LinftyEstimate estimate_linfty(const std::vector<Distribution>& trajectory, const LevelSetLadder& ladder, double p,
                               const KernelParams& kp, const LinftySearch& search = {});

// Loads every *.bin in `dir`, sorted by time tag.
std::vector<Distribution> load_trajectory(const std::string& dir);

}  // namespace boltzlp
