#include "boltzlp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boltzlp {

namespace {

struct Rhs {
    double C, kappa, m;
    double operator()(double x) const { return C - kappa * std::pow(x, m); }
};

// One backward-Euler step: solve y - x - h (C - kappa y^m) = 0 for y > 0.
// The residual is increasing and convex in y, so safeguarded Newton converges.
bool implicit_step(const Rhs& f, double x, double h, double& y) {
    double lo = 0.0, hi = std::max(x, 0.0) + h * f.C + 1.0;
    auto g = [&](double v) { return v - x - h * f(v); };
    while (g(hi) < 0.0) hi *= 2.0;
    y = std::clamp(x, lo, hi);
    for (int it = 0; it < 200; ++it) {
        const double gv = g(y);
        if (gv > 0.0)
            hi = y;
        else
            lo = y;
        const double dg = 1.0 + h * f.kappa * f.m * std::pow(std::max(y, 1e-300), f.m - 1.0);
        double yn = y - gv / dg;
        if (!(yn > lo && yn < hi)) yn = 0.5 * (lo + hi);
        if (std::abs(yn - y) <= 1e-15 * std::max(1.0, std::abs(y))) {
            y = yn;
            return true;
        }
        y = yn;
    }
    return std::abs(g(y)) <= 1e-10 * std::max(1.0, std::abs(y));
}

}  // namespace

OdeComparison ode_comparison_check(const OdeParams& prm) {
    if (!(prm.C >= 0.0) || !(prm.C2 > 0.0) || !(prm.theta > 0.0 && prm.theta < 1.0) || !(prm.T > 0.0) || !(prm.p >= 1.0))
        throw std::invalid_argument("ode: C >= 0, C2 > 0, theta in (0,1), T > 0, p >= 1 required");
    const double th = prm.theta;
    const double beta = th / (1.0 - th);
    const double m = 1.0 / th;
    const double kappa = prm.C2 / std::pow(1.0 + prm.T, prm.p * (1.0 - th) / th);
    // X* = C*(t^-beta + 1) is a super-solution once C*^{1/beta} >= beta/kappa and kappa C*^m >= C;
    // the factor 2 keeps both with room.
    OdeComparison out;
    out.C_star = std::max(std::pow(2.0 * beta / kappa, beta), prm.C > 0.0 ? std::pow(2.0 * prm.C / kappa, th) : 0.0);
    auto xstar = [&](double t) { return out.C_star * (std::pow(t, -beta) + 1.0); };
    out.t0 = prm.t0_fraction * prm.T;
    out.X0 = xstar(out.t0);
    const Rhs f{prm.C, kappa, m};

    CheckReport& rep = out.report;
    rep.check_name = "ode_comparison";
    double worst = out.X0 / xstar(out.t0);
    double t = out.t0, x = out.X0;
    double h = 1e-3 * out.t0;
    const double rtol = 1e-6;
    while (t < prm.T * (1.0 - 1e-14)) {
        if (++out.steps > 2000000 || h < 1e-14 * t) {
            out.stiff_failure = true;
            break;
        }
        h = std::min(h, prm.T - t);
        double y1, ya, y2;
        if (!implicit_step(f, x, h, y1) || !implicit_step(f, x, 0.5 * h, ya) || !implicit_step(f, ya, 0.5 * h, y2)) {
            h *= 0.25;
            continue;
        }
        const double err = std::abs(y2 - y1);
        const double tol = rtol * std::max(std::abs(y2), 1e-12);
        if (err > tol) {
            h *= std::max(0.2, 0.9 * std::sqrt(tol / err));
            continue;
        }
        t += h;
        x = 2.0 * y2 - y1;  // Richardson extrapolation of the two backward-Euler results
        if (x <= 0.0) x = y2;
        worst = std::max(worst, x / xstar(t));
        h *= std::min(4.0, 0.9 * std::sqrt(tol / std::max(err, 1e-300)));
    }
    rep.lhs = worst;
    rep.rhs = 1.0;
    rep.ratio = worst;
    rep.pass = !out.stiff_failure && worst <= 1.0 + 1e-9;
    rep.add("C", prm.C);
    rep.add("C2", prm.C2);
    rep.add("theta", th);
    rep.add("T", prm.T);
    rep.add("p", prm.p);
    rep.add("C_star", out.C_star);
    rep.add("t0", out.t0);
    rep.add("steps", static_cast<double>(out.steps));
    if (out.stiff_failure) rep.add("error", "stiffness failure; retry with a smaller t0_fraction");
    return out;
}

}  // namespace boltzlp
