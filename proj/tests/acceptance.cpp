// Acceptance harness: `acceptance <criterion>` prints one PASS/FAIL line and
// exits 0 on pass, 1 on fail.
#include "boltzlp/analysis_params.hpp"
#include "boltzlp/collision.hpp"
#include "boltzlp/degiorgi.hpp"
#include "boltzlp/experiments.hpp"
#include "boltzlp/functionals.hpp"
#include "boltzlp/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace boltzlp;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) { return format_double(v); }

KernelParams kernel_for(int n, double radius, double gamma = -1.0, double s = 0.5, double eps = 0.05) {
    // delta = h/2
    return KernelParams{gamma, s, 1.0, eps, 0.5 * (2.0 * radius / n)};
}

Distribution random_positive(const VelocityGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.8, 0.8), w(0.6, 1.4);
    Distribution f = maxwellian(g, w(rng), {u(rng), u(rng), u(rng)}, w(rng));
    const Distribution b = bump(g, {u(rng), u(rng), u(rng)}, 1.5 + w(rng), w(rng));
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += b.values[i];
    return f;
}

double max_abs(const Distribution& d) {
    double m = 0.0;
    for (double v : d.values) m = std::max(m, std::abs(v));
    return m;
}

// 1. max|Q(M,M)| decreases with n and is <= 1e-3 max M at n = 16.
Outcome equilibrium() {
    Outcome o;
    const double R = 6.0;
    const AngularQuadrature aq;
    std::vector<double> q;
    double m16 = 0.0, t16 = 0.0;
    std::ostringstream os;
    for (int n : {8, 12, 16}) {
        const VelocityGrid g = make_grid(n, R);
        const Distribution M = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
        const auto t0 = Clock::now();
        q.push_back(max_abs(q_direct(M, M, kernel_for(n, R), aq).q_values));
        const double t = seconds_since(t0);
        os << " n" << n << "=" << fmt(q.back()) << " (" << fmt(t) << " s)";
        if (n == 16) {
            m16 = M.max_value();
            t16 = t;
        }
    }
    const bool monotone = q[1] < q[0] && q[2] < q[1];
    const bool small = q[2] <= 1e-3 * m16;
    o.pass = monotone && small;
    o.detail = "max|Q(M,M)|:" + os.str() + " bound=" + fmt(1e-3 * m16) + " monotone=" + (monotone ? "yes" : "no") +
               " runtime_n16=" + fmt(t16) + " s (1 core; budget 60 s on 8 cores)";
    return o;
}

// 2. Mass and energy drift and H monotonicity over 50 rk3_ssp steps.
Outcome conservation() {
    Outcome o;
    const int n = 8;
    const double R = 4.0;
    const VelocityGrid g = make_grid(n, R);
    const KernelParams kp = kernel_for(n, R);
    const AngularQuadrature aq;
    CollisionSolver solver(SolverKind::fast, kp, aq);
    Distribution f = bump(g, {0.0, 0.0, 0.0}, 2.0, 1.0);
    const Moments m0 = moments(f);
    double h_prev = h_functional(f);
    double mass_drift = 0.0, energy_drift = 0.0, h_rise = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double dt = adaptive_dt(f, solver, 0.5);
        f = step(f, dt, Scheme::rk3_ssp, solver).f;
        const Moments m = moments(f);
        mass_drift = std::max(mass_drift, std::abs(m.mass - m0.mass) / m0.mass);
        energy_drift = std::max(energy_drift, std::abs(m.energy - m0.energy) / m0.energy);
        const double h = h_functional(f);
        h_rise = std::max(h_rise, h - h_prev);
        h_prev = h;
    }
    o.pass = mass_drift <= 1e-4 && energy_drift <= 1e-3 && h_rise <= 1e-8;
    o.detail = "mass_drift=" + fmt(mass_drift) + " (<=1e-4) energy_drift=" + fmt(energy_drift) +
               " (<=1e-3) max_H_increase=" + fmt(h_rise) + " (<=1e-8) t_end=" + fmt(f.time_tag);
    return o;
}

// 3. The three weak-form evaluations agree within 1e-6 relative.
Outcome triangle() {
    Outcome o;
    const int n = 8;
    const double R = 4.0;
    const VelocityGrid g = make_grid(n, R);
    const KernelParams kp = kernel_for(n, R);
    const AngularQuadrature aq;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const Distribution a = random_positive(g, rng), b = random_positive(g, rng);
        const double c0 = c(rng), c1 = c(rng), c2 = c(rng), c3 = c(rng), k0 = c(rng), k1 = c(rng), k2 = c(rng);
        const PhiFn ph = [=](const Vec3& v) {
            const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
            return c0 + c1 * v[0] + c2 * r2 + c3 * std::cos(k0 * v[0] + k1 * v[1] + k2 * v[2]) + 0.05 * c0 * r2 * r2;
        };
        const double d = pairing_direct(q_direct(a, b, kp, aq), ph);
        const double s = q_weak_pairing_sym(a, b, ph, kp, aq);
        const double as = q_weak_pairing_asym(a, b, ph, kp, aq);
        auto rel = [](double x, double y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}); };
        worst = std::max({worst, rel(d, s), rel(d, as), rel(s, as)});
    }
    o.pass = worst <= 1e-6;
    o.detail = "worst_pairwise_rel=" + fmt(worst) + " (<=1e-6) draws=20 n=8";
    return o;
}

// 4. sum Q(g,f) f^{p-1} <= I_p/p' - J_p/max(p,p') on 200 class-U pairs.
Outcome lemma21() {
    Outcome o;
    const int n = 8;
    const double R = 4.0;
    const VelocityGrid g = make_grid(n, R);
    const KernelParams kp = kernel_for(n, R);
    const AngularQuadrature aq;
    const ClassUParams cu{0.5, 50.0, 5.0};
    std::mt19937_64 rng(4);
    FastConfig exact;
    exact.compress = false;
    int violations = 0, checks = 0, outside_u = 0;
    double worst = -1e300;
    for (int t = 0; t < 200; ++t) {
        const Distribution a = random_positive(g, rng), b = random_positive(g, rng);
        if (!check_class_u(a, cu).pass || !check_class_u(b, cu).pass) ++outside_u;
        const Distribution q = q_fast(a, b, kp, aq, exact).q_values;
        for (double p : {1.5, 2.0, 3.0}) {
            const Lemma21Result r = lemma21_check(a, b, q, p, kp, aq);
            const double slack = 1e-8 + 1e-3 * std::abs(r.rhs);
            worst = std::max(worst, (r.lhs - r.rhs) / slack);
            if (r.lhs - r.rhs > slack) ++violations;
            ++checks;
        }
    }
    o.pass = violations == 0 && outside_u == 0;
    o.detail = "violations=" + std::to_string(violations) + "/" + std::to_string(checks) +
               " worst_excess_over_slack=" + fmt(worst) + " pairs_outside_class_U=" + std::to_string(outside_u);
    return o;
}

std::vector<Distribution> coercivity_family(const VelocityGrid& g) {
    std::vector<Distribution> fam;
    for (int i = 0; i < 10; ++i) {
        const double T = 0.4 + 0.08 * i;
        const double ux = 0.1 * (i % 3) - 0.1;
        fam.push_back(maxwellian(g, 0.6 + 0.1 * i, {ux, 0.0, 0.05 * (i % 2)}, T));
    }
    for (int i = 0; i < 10; ++i) {
        const double w = 1.6 + 0.15 * i;
        fam.push_back(bump(g, {0.1 * (i % 4) - 0.15, 0.1 * (i % 3) - 0.1, 0.0}, w, 0.6 + 0.08 * i));
    }
    return fam;
}

// 5. c0 > 0 on a 20-member family, stable within 2x between n = 8 and 12.
Outcome coercivity() {
    Outcome o;
    const double R = 4.0;
    const AngularQuadrature aq;
    double c0[2];
    const int ns[2] = {8, 12};
    for (int i = 0; i < 2; ++i) {
        const VelocityGrid g = make_grid(ns[i], R);
        const CoercivityFit fit = coercivity_fit(coercivity_family(g), 2.0, kernel_for(ns[i], R), aq);
        c0[i] = fit.feasible ? fit.c0 : 0.0;
    }
    const double ratio = c0[1] > 0.0 ? c0[0] / c0[1] : 0.0;
    o.pass = c0[0] > 0.0 && c0[1] > 0.0 && ratio >= 0.5 && ratio <= 2.0;
    o.detail = "c0(n=8)=" + fmt(c0[0]) + " c0(n=12)=" + fmt(c0[1]) + " ratio=" + fmt(ratio) + " (in [0.5,2])";
    return o;
}

// 6. Indicator bound on 1e6 random scalar draws.
Outcome inhomog() {
    Outcome o;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int t = 0; t < 1000000; ++t) {
        const int k = 1 + static_cast<int>(u(rng) * 60);
        const double K = std::exp(20.0 * (u(rng) - 0.5));
        const double beta = 1.0 + (k - 1) * u(rng);
        const double alpha = 8.0 * u(rng);
        const double f = K * (u(rng) < 0.5 ? u(rng) : 1.0 + 10.0 * u(rng));
        if (!inhomog_bound_check(f, K, k, beta, alpha).pass) ++violations;
    }
    o.pass = violations == 0;
    o.detail = "violations=" + std::to_string(violations) + "/1000000";
    return o;
}

// 7. Decay at and above the threshold, violation below it, both recursion forms.
Outcome recursion() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::ostringstream os;
    bool ok = true;
    for (RecursionVariant v : {RecursionVariant::single_c, RecursionVariant::two_c}) {
        int fail_at = 0, fail_above = 0, neg_hits = 0;
        for (int t = 0; t < 1000; ++t) {
            RecursionParams rp;
            rp.C = 0.5 + 3.5 * u(rng);
            rp.a = 0.5 + 2.5 * u(rng);
            rp.b = 0.5 + 2.5 * u(rng);
            rp.c1 = 1.1 + 1.9 * u(rng);
            rp.c2 = rp.c1 + 2.0 * u(rng);
            rp.W0 = std::exp(4.0 * (u(rng) - 0.5));
            const double thr = recursion_threshold(rp, v);
            rp.K = thr;
            if (!verify_decay(rp, v, 40).pass) ++fail_at;
            rp.K = 10.0 * thr;
            if (!verify_decay(rp, v, 40).pass) ++fail_above;
            rp.K = thr / 4.0;
            if (!verify_decay(rp, v, 40).pass) ++neg_hits;
        }
        const bool good = fail_at == 0 && fail_above == 0 && neg_hits >= 500;
        ok = ok && good;
        os << (v == RecursionVariant::single_c ? " (a)" : " (b)") << " fail_at_threshold=" << fail_at
           << " fail_10x=" << fail_above << " negative_control_hits=" << neg_hits << "/1000";
    }
    const double secs = seconds_since(t0);
    o.pass = ok && secs < 1.0;
    o.detail = os.str().substr(1) + " runtime=" + fmt(secs) + " s (<1 s)";
    return o;
}

bool positive_margins(const ExponentSolution& s) {
    if (!s.feasible) return false;
    for (const auto& [k, m] : s.margins)
        if (!(m > 0.0)) return false;
    return true;
}

// 8. Exponent systems over the sweep plus the (p=2, s=1/2) worked values.
Outcome exponents_sweep() {
    Outcome o;
    int solves = 0, bad = 0;
    std::string first_bad;
    auto note = [&](const ExponentSolution& s, const std::string& what) {
        ++solves;
        if (!positive_margins(s)) {
            ++bad;
            if (first_bad.empty()) first_bad = what + (s.violated.empty() ? "" : ":" + s.violated.front());
            std::cerr << "nonpositive margin: " << what << (s.violated.empty() ? "" : ":" + s.violated.front()) << '\n';
        }
    };
    for (double gamma : {-0.5, -1.0, -2.0, -2.5})
        for (int si = 1; si <= 9; ++si) {
            const double s = 0.1 * si;
            if (3.0 + gamma + 2.0 * s <= 0.0) continue;
            const AdmissibleRange ar = admissible_range(gamma, s);
            const double p_lo = std::max(1.0, ar.p_lower);
            // p0 windows are open intervals; sample their interior
            const double p0 = 0.5 * (p_lo + ar.p_upper_lemma);
            const std::string tag = "gamma=" + fmt(gamma) + ",s=" + fmt(s);
            note(solve_theta1011(s), "theta1011 " + tag);
            note(solve_theta4(p0, gamma, s), "theta4 " + tag);
            for (int pi = 0;; ++pi) {
                const double p = ar.p_lower + 0.05 * (pi + 1);
                if (p > 10.0 + 1e-9) break;
                if (p <= 1.0) continue;
                const std::string at = tag + ",p=" + fmt(p);
                note(solve_theta3(p, s), "theta3 " + at);
                const ExponentSolution s67 = solve_theta67_r(p, s);
                const ExponentSolution s89 = solve_theta89_lq(p, s);
                note(s67, "theta67r " + at);
                note(s89, "theta89lq " + at);
                if (s67.feasible && s89.feasible) note(derive_degiorgi_exponents(p, s, s67, s89, 1.0), "K_threshold " + at);
                note(solve_alphas(p, s, 1.0), "alphas " + at);
                note(solve_lemma26(p, gamma, s, Lemma26Variant::iii, p0), "lemma26iii " + at);
                note(solve_theta5(p, p0, gamma, s), "theta5 " + at);
                if (p < ar.p_upper_lemma - 1e-9) note(solve_lemma26(p, gamma, s, Lemma26Variant::ii), "lemma26ii " + at);
            }
        }
    const ExponentSolution t3 = solve_theta3(2.0, 0.5);
    const ExponentSolution s67 = solve_theta67_r(2.0, 0.5);
    const ExponentSolution d = derive_degiorgi_exponents(2.0, 0.5, s67, solve_theta89_lq(2.0, 0.5), 1.0);
    const double e[5] = {std::abs(t3.at("theta3") - 0.75), std::abs(t3.at("alpha1") - 3.0),
                         std::abs(s67.at("theta7") - 2.0 / 3.0), std::abs(s67.at("r") - 347.0 / 150.0),
                         std::abs(d.at("alpha3") - 691.0 / 600.0)};
    const double worst = *std::max_element(e, e + 5);
    o.pass = bad == 0 && worst <= 1e-12;
    o.detail = "solves=" + std::to_string(solves) + " infeasible_or_nonpositive=" + std::to_string(bad) +
               (first_bad.empty() ? "" : " first=" + first_bad) + " worked_values_max_err=" + fmt(worst) +
               " (<=1e-12) r=" + fmt(s67.at("r")) + " alpha3=" + fmt(d.at("alpha3"));
    return o;
}

// 9. ||f(t)||_2 <= C_fit (t^-3 + 1) across a sharpening bump family and dt halving.
Outcome generation() {
    Outcome o;
    std::vector<double> cf;
    std::ostringstream os;
    bool finite = true;
    for (double width : {2.4, 2.0, 1.6}) {
        // n = 12: at n = 8 the narrowest bump sits on 8 nodes and is a stationary discrete state
        ExperimentConfig c;
        c.n = 12;
        c.radius = 4.0;
        c.kernel = kernel_for(12, 4.0, -1.0, 0.6);
        c.initial.kind = InitialKind::bump;
        c.initial.width = width;
        c.T = 1.0;
        c.t_star = 0.5;
        c.p_list = {2.0};
        GenerationOptions go;
        go.alpha = 3.0;
        const ExperimentReport r = run_lp_generation(c, 2.0, go);
        const double a = r.fits.at("C_fit"), b = r.fits.at("C_fit_refined");
        finite = finite && std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0;
        cf.push_back(a);
        cf.push_back(b);
        os << " width=" << fmt(width) << ":C_fit=" << fmt(a) << ",halved_dt=" << fmt(b);
    }
    const double spread = *std::max_element(cf.begin(), cf.end()) / *std::min_element(cf.begin(), cf.end());
    o.pass = finite && spread <= 2.0;
    o.detail = "alpha=3" + os.str() + " max/min=" + fmt(spread) + " (<=2)";
    return o;
}

// 10. K_star >= sup-norm on [t*/2, t*] - 1e-6 on every run; stationary Maxwellian within 5%.
Outcome degiorgi_soundness() {
    Outcome o;
    std::ostringstream os;
    bool sound = true;
    struct Run {
        double gamma, s;
    };
    for (const Run& run : {Run{-2.0, 0.5}, Run{-0.5, 0.5}}) {
        ExperimentConfig c;
        c.n = 8;
        c.radius = 4.0;
        c.kernel = kernel_for(8, 4.0, run.gamma, run.s);
        c.initial.width = 2.0;
        c.T = 0.4;
        c.t_star = 0.2;
        c.p_list = {2.0};
        LinftyOptions lo;
        lo.search.soundness_tol = 1e-6;
        const ExperimentReport r = run_linfty_generation(c, lo);
        for (const auto& ch : r.checks)
            if (ch.check_name == "linfty_soundness") {
                const bool ok = ch.pass;
                sound = sound && ok;
                os << " gamma=" << fmt(run.gamma) << ":K*/sup=" << fmt(ch.ratio) << (ok ? "" : "(unsound)");
            }
    }
    const VelocityGrid g = make_grid(8, 4.0);
    const Distribution M = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
    LevelSetLadder lad;
    lad.t_star = 1.0;
    std::vector<Distribution> traj;
    for (double t : ladder_snapshot_times(lad, 8, 4, 1.0, 4)) {
        Distribution m = M;
        m.time_tag = t;
        traj.push_back(m);
    }
    const LinftyEstimate e = estimate_linfty(traj, lad, 2.0, kernel_for(8, 4.0));
    const double rel = std::abs(e.K_star - M.max_value()) / M.max_value();
    o.pass = sound && e.sound && rel <= 0.05;
    o.detail = "runs:" + os.str() + " maxwellian K*=" + fmt(e.K_star) + " supM=" + fmt(M.max_value()) +
               " rel=" + fmt(rel) + " (<=0.05)";
    return o;
}

// 11. X* dominates the integrated X on 50 random (C, theta, T).
Outcome ode() {
    Outcome o;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        OdeParams p;
        p.C = 5.0 * u(rng);
        p.theta = 0.05 + 0.9 * u(rng);
        p.T = std::exp(std::log(0.1) + std::log(100.0) * u(rng));
        const OdeComparison r = ode_comparison_check(p);
        worst = std::max(worst, r.report.lhs);
        if (!r.report.pass) ++violations;
    }
    o.pass = violations == 0;
    o.detail = "violations=" + std::to_string(violations) + "/50 worst X/X*=" + fmt(worst);
    return o;
}

// 12. q_fast vs q_direct accuracy at n = 12 and speedup at n = 16.
Outcome performance() {
    Outcome o;
    const AngularQuadrature aq;
    std::mt19937_64 rng(12);
    double err;
    {
        const int n = 12;
        const VelocityGrid g = make_grid(n, 6.0);
        const KernelParams kp = kernel_for(n, 6.0);
        const Distribution a = random_positive(g, rng);
        const Distribution d = q_direct(a, a, kp, aq).q_values;
        const Distribution f = q_fast(a, a, kp, aq).q_values;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < d.values.size(); ++i) {
            num += (f.values[i] - d.values[i]) * (f.values[i] - d.values[i]);
            den += d.values[i] * d.values[i];
        }
        err = std::sqrt(num / den);
    }
    const int n = 16;
    const VelocityGrid g = make_grid(n, 6.0);
    const KernelParams kp = kernel_for(n, 6.0);
    const Distribution a = random_positive(g, rng);
    q_fast(a, a, kp, aq);  // builds and caches the event table
    auto t0 = Clock::now();
    const int reps = 3;
    for (int i = 0; i < reps; ++i) q_fast(a, a, kp, aq);
    const double t_fast = seconds_since(t0) / reps;
    t0 = Clock::now();
    q_direct(a, a, kp, aq);
    const double t_direct = seconds_since(t0);
    const double speedup = t_direct / t_fast;
    o.pass = err <= 1e-3 && speedup >= 20.0;
    o.detail = "rel_L2(n=12)=" + fmt(err) + " (<=1e-3) t_direct(n=16)=" + fmt(t_direct) + " s t_fast(n=16)=" +
               fmt(t_fast) + " s speedup=" + fmt(speedup) + " (>=20)";
    return o;
}

const char* kNames[] = {"",
                        "equilibrium_annihilation",
                        "conservation",
                        "weak_form_triangle",
                        "lp_entropy_inequality",
                        "coercivity",
                        "indicator_bound",
                        "energy_recursion_decay",
                        "exponent_systems",
                        "generation_envelope",
                        "degiorgi_soundness",
                        "ode_comparison",
                        "performance"};

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance <1-12>\n";
        return 1;
    }
    const int id = std::atoi(argv[1]);
    const std::function<Outcome()> runs[] = {nullptr,        equilibrium, conservation,       triangle,   lemma21,
                                             coercivity,     inhomog,     recursion,          exponents_sweep,
                                             generation,     degiorgi_soundness, ode,         performance};
    if (id < 1 || id > 12) {
        std::cerr << "criterion must be 1..12\n";
        return 1;
    }
    Outcome o;
    try {
        o = runs[id]();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("error: ") + e.what();
    }
    std::cout << "criterion " << id << " " << kNames[id] << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail
              << std::endl;
    return o.pass ? 0 : 1;
}
