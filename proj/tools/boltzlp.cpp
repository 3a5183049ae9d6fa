// boltzlp: command line front end.
// Exit codes: 0 all asserted inequalities hold, 2 an inequality failed, 1 runtime error.

#include "boltzlp/analysis_params.hpp"
#include "boltzlp/collision.hpp"
#include "boltzlp/degiorgi.hpp"
#include "boltzlp/experiments.hpp"
#include "boltzlp/functionals.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

using namespace boltzlp;

namespace {

int exit_for(bool pass) { return pass ? 0 : 2; }

int cmd_run(const std::string& path) {
    std::string text;
    const ExperimentConfig cfg = load_config(path, &text);
    ExperimentReport rep;
    const double p = cfg.p_list.front();
    if (cfg.experiment == "integrate") {
        const IntegrationResult res = integrate(cfg);
        rep.name = "integrate";
        rep.pass = true;
        rep.fits["steps"] = res.steps;
        if (cfg.solver == SolverKind::fast_with_oracle) rep.fits["max_oracle_rel_l2"] = res.max_oracle_rel_l2;
    } else if (cfg.experiment == "l1w_propagation") {
        rep = run_l1w_propagation(cfg);
    } else if (cfg.experiment == "lp_propagation") {
        rep = run_lp_propagation(cfg, p);
    } else if (cfg.experiment == "lp_generation") {
        rep = run_lp_generation(cfg, p);
    } else if (cfg.experiment == "dissipation_budget") {
        rep = run_dissipation_budget(cfg, p);
    } else if (cfg.experiment == "linfty_generation") {
        rep = run_linfty_generation(cfg);
    } else {
        throw std::invalid_argument("unknown experiment '" + cfg.experiment + "'");
    }
    write_manifest(cfg, text, &rep);
    std::cout << rep.to_string();
    return exit_for(rep.pass);
}

struct CheckArgs {
    int n = 8;
    double radius = 4.0;
    double gamma = -1.0;
    double s = 0.5;
    double eps_theta = 0.05;
    double delta_rel = -1.0;  // negative: half the grid spacing
    double p = 2.0;
    std::uint64_t seed = 1;
    // scalar checks
    double fval = 1.0, K = 1.0, beta = 1.0, alpha = 1.0;
    int k = 2;
    double C = 1.0, a = 1.0, b = 1.0, c1 = 2.0, c2 = 2.0, W0 = 1.0;
    std::string variant = "single_c";
    int k_max = 40;
    double C2 = 1.0, theta = 0.75, T = 1.0;
    double ell = 0.5;
    double q = 0.0;

    KernelParams kernel() const {
        return KernelParams{gamma, s, 1.0, eps_theta, delta_rel < 0.0 ? radius / n : delta_rel};
    }
};

int cmd_check(const std::string& name, const CheckArgs& a) {
    const KernelParams kp = a.kernel();
    const AngularQuadrature aq;
    const VelocityGrid g = make_grid(a.n, a.radius);
    if (name == "equilibrium") {
        const Distribution M = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
        const CollisionOutput q = q_direct(M, M, kp, aq);
        double mx = 0.0;
        for (double v : q.q_values.values) mx = std::max(mx, std::abs(v));
        CheckReport r;
        r.check_name = "equilibrium";
        r.n = a.n;
        r.eps_theta = kp.eps_theta;
        r.delta = kp.delta_rel;
        r.lhs = mx;
        r.rhs = 1e-3 * M.max_value();
        r.ratio = mx / r.rhs;
        r.pass = mx <= r.rhs;
        std::cout << r << '\n' << q.eval_stats.to_string() << '\n';
        return exit_for(r.pass);
    }
    if (name == "lemma21") {
        const Distribution f = bump(g, {0.3, 0.0, 0.0}, 0.4 * a.radius, 1.0);
        const Distribution h = maxwellian(g, 1.0, {-0.5, 0.2, 0.0}, 0.8);
        const Lemma21Result r = lemma21_check(h, f, a.p, kp, aq);
        std::cout << "check=lemma21 lhs=" << format_double(r.lhs) << " rhs=" << format_double(r.rhs)
                  << " I_p=" << format_double(r.ip) << " J_p=" << format_double(r.jp)
                  << " pass=" << (r.pass ? "true" : "false") << '\n';
        return exit_for(r.pass);
    }
    if (name == "coercivity") {
        std::vector<Distribution> family;
        std::mt19937_64 rng(a.seed);
        std::uniform_real_distribution<double> uc(-0.5, 0.5), uw(0.3, 0.6);
        for (int i = 0; i < 8; ++i)
            family.push_back(bump(g, {uc(rng), uc(rng), uc(rng)}, uw(rng) * a.radius, 1.0));
        const CoercivityFit fit = coercivity_fit(family, a.p, kp, aq);
        CheckReport r;
        r.check_name = "coercivity";
        r.n = a.n;
        r.eps_theta = kp.eps_theta;
        r.delta = kp.delta_rel;
        r.lhs = fit.c0;
        r.rhs = 0.0;
        r.pass = fit.feasible && fit.c0_positive;
        r.add("c1", fit.c1);
        r.add("samples", static_cast<double>(family.size()));
        std::cout << r << '\n';
        return exit_for(r.pass);
    }
    if (name == "hardy") {
        const Distribution F = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
        const CheckReport r = hardy_check(F, a.ell);
        std::cout << r << '\n';
        return exit_for(r.pass);
    }
    if (name == "hls") {
        const Distribution f = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
        const double q = a.q > 0.0 ? a.q : hls_exponent(a.alpha, a.p);
        const CheckReport r = hls_check(f, a.alpha, a.p, q);
        std::cout << r << '\n';
        return exit_for(r.pass);
    }
    if (name == "embedding") {
        const Distribution f = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
        const CheckReport r = sobolev_embedding_check(f, a.p, a.s, a.gamma);
        std::cout << r << '\n';
        return exit_for(r.pass);
    }
    if (name == "inhomog") {
        const CheckReport r = inhomog_bound_check(a.fval, a.K, a.k, a.beta, a.alpha);
        std::cout << r << '\n';
        return exit_for(r.pass);
    }
    if (name == "decay") {
        RecursionParams rp{a.C, a.a, a.b, a.c1, a.c2, a.W0, a.K};
        const RecursionVariant v = a.variant == "two_c" ? RecursionVariant::two_c : RecursionVariant::single_c;
        const DecayReport r = verify_decay(rp, v, a.k_max);
        std::cout << "check=decay " << r.to_string() << '\n';
        return exit_for(r.pass);
    }
    if (name == "ode") {
        OdeParams op;
        op.C = a.C;
        op.C2 = a.C2;
        op.theta = a.theta;
        op.T = a.T;
        op.p = a.p;
        const OdeComparison r = ode_comparison_check(op);
        std::cout << r.report << '\n';
        return exit_for(r.report.pass);
    }
    if (name == "landau") {
        const CheckReport r = check_landau_consistency(a.gamma, a.s);
        std::cout << r << '\n';
        return exit_for(r.pass);
    }
    throw std::invalid_argument("unknown check '" + name + "'");
}

struct ParamArgs {
    std::optional<double> p, s, gamma, p0, theta6, theta7, theta8, theta9, q, theta10, theta11;
    double W0 = 1.0, C = 1.0, alpha5 = 1.0;
};

double need(const std::optional<double>& v, const char* name) {
    if (!v) throw std::invalid_argument(std::string("missing --") + name);
    return *v;
}

int cmd_params(const std::string& id_name, const ParamArgs& a) {
    const SystemId id = parse_system_id(id_name);
    ExponentSolution sol;
    switch (id) {
        case SystemId::theta3: sol = solve_theta3(need(a.p, "p"), need(a.s, "s")); break;
        case SystemId::lemma26ii:
            sol = solve_lemma26(need(a.p, "p"), need(a.gamma, "gamma"), need(a.s, "s"), Lemma26Variant::ii);
            break;
        case SystemId::lemma26iii:
            sol = solve_lemma26(need(a.p, "p"), need(a.gamma, "gamma"), need(a.s, "s"), Lemma26Variant::iii,
                                need(a.p0, "p0"));
            break;
        case SystemId::theta4: sol = solve_theta4(need(a.p0, "p0"), need(a.gamma, "gamma"), need(a.s, "s")); break;
        case SystemId::theta5:
            sol = solve_theta5(need(a.p, "p"), need(a.p0, "p0"), need(a.gamma, "gamma"), need(a.s, "s"));
            break;
        case SystemId::theta67r: sol = solve_theta67_r(need(a.p, "p"), need(a.s, "s"), a.theta6, a.theta7); break;
        case SystemId::theta89lq:
            sol = solve_theta89_lq(need(a.p, "p"), need(a.s, "s"), a.q, a.theta8, a.theta9);
            break;
        case SystemId::theta1011: sol = solve_theta1011(need(a.s, "s"), a.theta10, a.theta11); break;
        case SystemId::alphas: sol = solve_alphas(need(a.p, "p"), need(a.s, "s"), a.alpha5); break;
        case SystemId::K_threshold: {
            const double p = need(a.p, "p"), s = need(a.s, "s");
            const ExponentSolution s67 = solve_theta67_r(p, s, a.theta6, a.theta7);
            const ExponentSolution s89 = solve_theta89_lq(p, s, a.q, a.theta8, a.theta9);
            if (!s67.feasible || !s89.feasible) {
                std::cout << s67.to_string() << s89.to_string();
                return 2;
            }
            sol = derive_degiorgi_exponents(p, s, s67, s89, a.W0, a.C);
            break;
        }
    }
    std::cout << sol.to_string();
    return exit_for(sol.feasible);
}

struct DegiorgiArgs {
    std::string dir;
    double t_star = 0.25;
    double p = 2.0;
    double gamma = -1.0;
    double s = 0.5;
    std::string variant = "auto";
    int k_max = 40;
    double c_front = 1.0;
    std::string out;
};

int cmd_degiorgi(const DegiorgiArgs& a) {
    const std::vector<Distribution> traj = load_trajectory(a.dir);
    if (traj.empty()) throw std::runtime_error("no snapshots (*.bin) in " + a.dir);
    KernelParams kp{a.gamma, a.s, 1.0, 0.05, traj.front().grid.radius / traj.front().grid.n};
    LevelSetLadder lad;
    lad.t_star = a.t_star;
    lad.k_max = a.k_max;
    lad.variant = a.variant == "strong_soft" ? ScheduleVariant::strong_soft
                  : a.variant == "weak_soft" ? ScheduleVariant::weak_soft
                                             : schedule_for(kp);
    LinftySearch search;
    search.c_front = a.c_front;
    const LinftyEstimate est = estimate_linfty(traj, lad, a.p, kp, search);
    const std::string csv = est.at_k_star.to_csv();
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream(a.out) << csv;
    }
    std::cout << "check=degiorgi " << est.to_string() << " schedule=" << schedule_name(lad.variant) << '\n';
    return exit_for(est.bracketed && est.sound);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boltzlp: Lp and L-infinity estimates for the soft-potential Boltzmann operator"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run an experiment from an INI config");
    run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);

    std::string check_name;
    CheckArgs ca;
    auto* check = app.add_subcommand("check", "run one inequality check");
    check->add_option("name", check_name,
                      "equilibrium | lemma21 | coercivity | hardy | hls | embedding | inhomog | decay | ode | landau")
        ->required();
    check->add_option("--n", ca.n);
    check->add_option("--radius", ca.radius);
    check->add_option("--gamma", ca.gamma);
    check->add_option("--s", ca.s);
    check->add_option("--eps-theta", ca.eps_theta);
    check->add_option("--delta-rel", ca.delta_rel);
    check->add_option("--p", ca.p);
    check->add_option("--seed", ca.seed);
    check->add_option("--fval", ca.fval);
    check->add_option("--K", ca.K);
    check->add_option("--k", ca.k);
    check->add_option("--beta", ca.beta);
    check->add_option("--alpha", ca.alpha);
    check->add_option("--C", ca.C);
    check->add_option("--a", ca.a);
    check->add_option("--b", ca.b);
    check->add_option("--c1", ca.c1);
    check->add_option("--c2", ca.c2);
    check->add_option("--W0", ca.W0);
    check->add_option("--variant", ca.variant)->check(CLI::IsMember({"single_c", "two_c"}));
    check->add_option("--k-max", ca.k_max);
    check->add_option("--C2", ca.C2);
    check->add_option("--theta", ca.theta);
    check->add_option("--T", ca.T);
    check->add_option("--ell", ca.ell);
    check->add_option("--q", ca.q);

    std::string system_id;
    ParamArgs pa;
    auto* params = app.add_subcommand("params", "exponent systems");
    auto* solve = params->add_subcommand("solve", "solve one constraint system");
    params->require_subcommand(1);
    solve->add_option("system_id", system_id)->required();
    solve->add_option("--p", pa.p);
    solve->add_option("--s", pa.s);
    solve->add_option("--gamma", pa.gamma);
    solve->add_option("--p0", pa.p0);
    solve->add_option("--theta6", pa.theta6);
    solve->add_option("--theta7", pa.theta7);
    solve->add_option("--theta8", pa.theta8);
    solve->add_option("--theta9", pa.theta9);
    solve->add_option("--q", pa.q);
    solve->add_option("--theta10", pa.theta10);
    solve->add_option("--theta11", pa.theta11);
    solve->add_option("--W0", pa.W0);
    solve->add_option("--C", pa.C);
    solve->add_option("--alpha5", pa.alpha5);

    DegiorgiArgs da;
    auto* dg = app.add_subcommand("degiorgi", "extract an L-infinity level from a stored trajectory");
    dg->add_option("dir", da.dir, "directory of snapshot .bin files")->required()->check(CLI::ExistingDirectory);
    dg->add_option("--t-star", da.t_star);
    dg->add_option("--p", da.p);
    dg->add_option("--gamma", da.gamma);
    dg->add_option("--s", da.s);
    dg->add_option("--variant", da.variant)->check(CLI::IsMember({"auto", "strong_soft", "weak_soft"}));
    dg->add_option("--k-max", da.k_max);
    dg->add_option("--c-front", da.c_front);
    dg->add_option("--out", da.out, "per-k CSV path (stdout when empty)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    try {
        if (*run) return cmd_run(config_path);
        if (*check) return cmd_check(check_name, ca);
        if (*solve) return cmd_params(system_id, pa);
        if (*dg) return cmd_degiorgi(da);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
