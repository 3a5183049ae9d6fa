#pragma once

#include "boltzlp/collision.hpp"
#include "boltzlp/degiorgi.hpp"
#include "boltzlp/functionals.hpp"
#include "boltzlp/kernel_grid.hpp"
#include "boltzlp/quadrature.hpp"
#include "boltzlp/report.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace boltzlp {

enum class InitialKind { maxwellian, bump, two_bumps, spike, file };
enum class SolverKind { direct, fast, fast_with_oracle };
enum class Scheme { euler, rk3_ssp };

const char* initial_name(InitialKind k);
const char* solver_name(SolverKind k);
const char* scheme_name(Scheme s);

struct InitialData {
    InitialKind kind = InitialKind::bump;
    Vec3 center{0.0, 0.0, 0.0};
    Vec3 center2{1.5, 0.0, 0.0};  // second bump of two_bumps
    double width = 1.5;
    double mass = 1.0;
    double temperature = 1.0;       // maxwellian
    std::array<int, 3> node{0, 0, 0};  // spike
    std::string path;               // file
};

struct ExperimentConfig {
    std::string name = "run";
    // integrate | l1w_propagation | lp_propagation | lp_generation | dissipation_budget | linfty_generation
    std::string experiment = "integrate";
    KernelParams kernel{-1.0, 0.5, 1.0, 0.05, 0.375};  // delta = h/2 on the default grid
    AngularQuadrature quadrature;
    int n = 16;
    double radius = 6.0;
    InitialData initial;
    std::vector<double> p_list{2.0};
    double w = 5.0;
    double t_star = 0.25;
    double T = 1.0;
    double dt = 0.0;  // 0 selects the adaptive step
    double safety = 0.5;
    int snapshot_cadence = 8;  // snapshots per dyadic ladder window
    int tail_snapshots = 16;
    SolverKind solver = SolverKind::fast;
    int oracle_every = 10;
    FastConfig fast;
    Scheme scheme = Scheme::rk3_ssp;
    std::uint64_t seed = 1;
    std::string output_dir;  // empty: nothing written
    int max_steps = 200000;

    void validate() const;
    VelocityGrid grid() const { return make_grid(n, radius); }
};

Distribution make_initial(const ExperimentConfig& cfg);

// Q(f,f) through the configured backend; the oracle variant compares against
// q_direct every `oracle_every` evaluations.
class CollisionSolver {
public:
    CollisionSolver(SolverKind kind, const KernelParams& kp, const AngularQuadrature& aq, const FastConfig& fc = {},
                    int oracle_every = 10);

    Distribution operator()(const Distribution& f);
    double loss_rate(const Distribution& f) const;

    int evaluations() const { return evaluations_; }
    double max_oracle_rel_l2() const { return max_oracle_rel_; }
    const KernelParams& kernel() const { return kp_; }

private:
    SolverKind kind_;
    KernelParams kp_;
    AngularQuadrature aq_;
    FastConfig fc_;
    int oracle_every_;
    int evaluations_ = 0;
    double max_oracle_rel_ = 0.0;
};

struct StepResult {
    Distribution f;
    double clamp_mass = 0.0;
};

// Throws std::runtime_error when clamping removes more than 1% of the mass.
StepResult step(const Distribution& f, double dt, Scheme scheme, CollisionSolver& solver);

double adaptive_dt(const Distribution& f, const CollisionSolver& solver, double safety);

struct TimeSeriesRecord {
    std::vector<double> times;
    std::vector<double> dt;
    std::vector<std::vector<NormReport>> norms;  // per time, per p in p_list
    std::vector<Moments> moments;
    std::vector<double> entropy;  // H
    std::vector<double> clamp_mass;
    std::vector<double> p_list;
    std::map<std::string, double> fits;
    std::map<std::string, double> tolerances;

    std::string to_csv() const;
};

struct IntegrationResult {
    TimeSeriesRecord record;
    std::vector<Distribution> snapshots;
    int steps = 0;
    double max_oracle_rel_l2 = 0.0;
};

// Steps land exactly on every requested snapshot time; the record gets every step.
IntegrationResult integrate(const ExperimentConfig& cfg, const std::vector<double>& snapshot_times = {});

// Ladder-dense snapshot times for the regime's schedule, plus a uniform cover of [0, T].
std::vector<double> default_snapshot_times(const ExperimentConfig& cfg, const std::vector<double>& t_stars);

ScheduleVariant schedule_for(const KernelParams& kp);

struct ExperimentReport {
    std::string name;
    bool pass = false;
    std::vector<CheckReport> checks;
    std::map<std::string, double> fits;

    std::string to_string() const;
};

ExperimentReport run_l1w_propagation(const ExperimentConfig& cfg);
ExperimentReport run_lp_propagation(const ExperimentConfig& cfg, double p);

struct GenerationOptions {
    std::optional<double> alpha;  // envelope exponent; default alpha1 from solve_theta3
    double slope_allowance = 0.2;
    bool refine_dt = true;
};

// Envelope ||f(t)||_p <= C_fit (t^{-alpha} + 1) and early-time slope check.
ExperimentReport run_lp_generation(const ExperimentConfig& cfg, double p, const GenerationOptions& opts = {});
// Same envelope checks on a precomputed record (used for family sweeps).
ExperimentReport lp_generation_from_record(const TimeSeriesRecord& rec, std::size_t p_index, double alpha,
                                           double t_min, double t_max, double slope_allowance);

ExperimentReport run_dissipation_budget(const ExperimentConfig& cfg, double p);

struct LinftyOptions {
    std::vector<double> t_star_factors{1.0, 0.5, 0.25};
    LinftySearch search;
    int k_max = 40;
};

ExperimentReport run_linfty_generation(const ExperimentConfig& cfg, const LinftyOptions& opts = {});

struct OdeParams {
    double C = 1.0;
    double C2 = 1.0;
    double theta = 0.75;
    double T = 1.0;
    double p = 2.0;
    double t0_fraction = 1e-6;  // t0 = fraction * T
};

struct OdeComparison {
    CheckReport report;
    double C_star = 0.0;
    double t0 = 0.0;
    double X0 = 0.0;
    int steps = 0;
    bool stiff_failure = false;
};

// dX/dt + C2 X^{1/theta} / (1+T)^{p(1-theta)/theta} = C integrated from X0 = X*(t0) with an
// adaptive backward-Euler solver, compared with X*(t) = C*(t^{-theta/(1-theta)} + 1).
OdeComparison ode_comparison_check(const OdeParams& params);

// Writes manifest.json (config echo, version, grid hash) into cfg.output_dir.
void write_manifest(const ExperimentConfig& cfg, const std::string& config_text, const ExperimentReport* report);
std::string grid_hash(const VelocityGrid& g);
const char* version_string();

// INI loader: sections [kernel] [quadrature] [grid] [initial] [run] [fast].
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path, std::string* text_out = nullptr);

}  // namespace boltzlp
