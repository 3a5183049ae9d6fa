#include "boltzlp/functionals.hpp"

#include "collision_events.hpp"
#include "collision_table.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace boltzlp {

double lp_norm(const Distribution& f, double p) { return weighted_lp(f, p, 0.0); }

double weighted_lp(const Distribution& f, double p, double rho_weight) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            const double w = rho_weight == 0.0 ? 1.0 : std::pow(japanese(f.grid.node(i)), rho_weight);
            m = std::max(m, std::abs(f.values[i]) * w);
        }
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        double v = std::abs(f.values[i]);
        if (v == 0.0) continue;
        if (rho_weight != 0.0) v *= std::pow(japanese(f.grid.node(i)), rho_weight);
        s += std::pow(v, p);
    }
    return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

double weighted_l1(const Distribution& f, double w) { return weighted_lp(f, 1.0, w); }

double weighted_l2(const Distribution& f, double rho_weight) { return weighted_lp(f, 2.0, rho_weight); }

NormReport norm_report(const Distribution& f, double p, double w, const KernelParams& kp) {
    NormReport r;
    r.p = p;
    r.lp = lp_norm(f, p);
    r.l1_w = weighted_l1(f, w);
    r.l2_gamma_half = weighted_l2(f, 0.5 * kp.gamma);
    r.hs_gamma_half_of_fp2 = std::sqrt(hs_gamma_half_sq(f, p, kp));
    r.time_tag = f.time_tag;
    return r;
}

namespace {

std::vector<double> powered(const Distribution& f, double e) {
    std::vector<double> out(f.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.values[i] > 0.0 ? std::pow(f.values[i], e) : 0.0;
    return out;
}

constexpr double kLogFloor = -1e250;

std::vector<double> logs(const Distribution& f) {
    std::vector<double> out(f.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.values[i] > 0.0 ? std::log(f.values[i]) : kLogFloor;
    return out;
}

// Each event (alpha, beta, sigma) of the operator contributes in two halves, matching
// 1/2 omega (X - Y)(phi_alpha - phi_P) with Y = g_beta f_alpha, X the interpolated gain product
// and phi_P = (1-r) phi_lam + r phi_lams.
//   loss half:  g_beta [ F_P - F_alpha ]                 (I)
//               g_beta [ (1-r)(A_lam - A_alpha)^2 + r (A_lams - A_alpha)^2 ]   (J)
//   gain half:  G [ F_alpha - Fhat ]                     (I)
//               G [ A_alpha - Ahat ]^2                   (J)
// with G = g_mu^{1-r} g_mus^r, Fhat = (f_lam^{1-r} f_lams^r)^p, Ahat = Fhat^{1/2}.
// Here F = f^e with e = p (I) or e = p/2 (J, F playing the role of A).
struct EventSums {
    double y = 0.0;   // loss half
    double x = 0.0;   // gain half
};

inline void add_event(EventSums& acc, double w, double r, double gb, double Fa, double Fl, double Fls, double G,
                      double GF, double GF2, bool square) {
    if (square) {
        acc.y += w * gb * ((1.0 - r) * (Fl - Fa) * (Fl - Fa) + r * (Fls - Fa) * (Fls - Fa));
        acc.x += w * (Fa * Fa * G - 2.0 * Fa * GF + GF2);
    } else {
        acc.y += w * gb * ((1.0 - r) * Fl + r * Fls - Fa);
        acc.x += w * (Fa * G - GF);
    }
}

double table_functional(const Distribution& g, const Distribution& f, double e, bool square, const KernelParams& kp,
                        const AngularQuadrature& aq, bool exact) {
    const auto table = detail::get_table(g.grid, kp, aq, !exact, 3);
    const int n = g.grid.n;
    const std::vector<double> Fvec = powered(f, e), Lg = logs(g), Lf = logs(f);
    const double* gv = g.values.data();
    const double* Fv = Fvec.data();
    double acc = 0.0;
    for (const auto& G : table->groups)
        for (int o : {1, -1}) {
            const detail::RowBox bx = detail::make_box(G, o, n);
            if (bx.empty()) continue;
            const std::uint32_t nb = G.end - G.begin;
            const double* rho = table->rho.data() + G.begin;
            const double* W = table->W.data() + G.begin;
            const double c0 = G.W0 - G.W1, c1 = G.W1;
            double ysum = 0.0, xsum = 0.0;
            for (int z = bx.lo[2]; z < bx.hi[2]; ++z)
                for (int y = bx.lo[1]; y < bx.hi[1]; ++y) {
                    const long base = bx.lo[0] + static_cast<long>(n) * (y + static_cast<long>(n) * z);
                    const int len = bx.hi[0] - bx.lo[0];
                    for (int i = 0; i < len; ++i) {
                        const long a = base + i;
                        const double fa = Fv[a], fl = Fv[a + bx.off_l], fls = Fv[a + bx.off_ls];
                        const double gb = gv[a + bx.off_b];
                        ysum += gb * (square ? c0 * (fl - fa) * (fl - fa) + c1 * (fls - fa) * (fls - fa)
                                             : c0 * fl + c1 * fls - G.W0 * fa);
                        double Sg, S1, S2 = 0.0;
                        if (rho[0] == 0.0) {
                            const double gm = gv[a + bx.off_m];
                            Sg = G.W0 * gm;
                            S1 = Sg * fl;
                            S2 = S1 * fl;
                        } else {
                            const double lgm = Lg[a + bx.off_m], dg = Lg[a + bx.off_ms] - lgm;
                            const double lfl = Lf[a + bx.off_l], df = Lf[a + bx.off_ls] - lfl;
                            Sg = S1 = 0.0;
                            for (std::uint32_t j = 0; j < nb; ++j) {
                                const double lg = lgm + rho[j] * dg, lf = e * (lfl + rho[j] * df);
                                Sg += W[j] * std::exp(lg);
                                S1 += W[j] * std::exp(lg + lf);
                                if (square) S2 += W[j] * std::exp(lg + 2.0 * lf);
                            }
                        }
                        xsum += square ? fa * fa * Sg - 2.0 * fa * S1 + S2 : fa * Sg - S1;
                    }
                }
            acc += ysum + xsum;
        }
    const double h3 = g.grid.cell_volume();
    return 0.5 * acc * h3 * h3;
}

double periodic_functional(const Distribution& g, const Distribution& f, double e, bool square,
                           const KernelParams& kp, const AngularQuadrature& aq) {
    const VelocityGrid& grid = g.grid;
    const SphereRule sr = make_sphere_rule(aq, kp);
    const std::vector<double> F = powered(f, e);
    EventSums acc;
    for (int ak = 0; ak < grid.n; ++ak)
        for (int aj = 0; aj < grid.n; ++aj)
            for (int ai = 0; ai < grid.n; ++ai)
                detail::visit_alpha_events(grid, kp, sr, true, ai, aj, ak, [&](const detail::ResolvedEvent& ev) {
                    if (ev.noop || !ev.valid) return;
                    const double r = ev.r;
                    auto geo = [r](double x0, double x1) {
                        if (r == 0.0) return x0;
                        return x0 > 0.0 && x1 > 0.0 ? std::exp((1.0 - r) * std::log(x0) + r * std::log(x1)) : 0.0;
                    };
                    const double G = geo(g.values[ev.mu], g.values[ev.mus]);
                    const double Fh = geo(F[ev.lam], F[ev.lams]);
                    add_event(acc, ev.w, r, g.values[ev.b], F[ev.a], F[ev.lam], F[ev.lams], G, G * Fh, G * Fh * Fh,
                              square);
                });
    const double h3 = grid.cell_volume();
    return 0.5 * (acc.y + acc.x) * h3 * h3;
}

double functional_value(const Distribution& g, const Distribution& f, double e, bool square, const KernelParams& kp,
                        const AngularQuadrature& aq, const FunctionalOptions& opts) {
    return opts.periodic ? periodic_functional(g, f, e, square, kp, aq)
                         : table_functional(g, f, e, square, kp, aq, opts.exact_table);
}

FunctionalValue eval_generic(const Distribution& g, const Distribution& f, double p, bool square,
                             const KernelParams& kp, const AngularQuadrature& aq, const FunctionalOptions& opts) {
    if (g.grid != f.grid) throw std::invalid_argument("functional: grid mismatch");
    if (!(p > 0.0)) throw std::invalid_argument("functional: p must be positive");
    kp.validate();
    FunctionalValue fv;
    fv.p = p;
    fv.kind = square ? FunctionalKind::J_p : (p == 1.0 ? FunctionalKind::I_1 : FunctionalKind::I_p);
    const double e = square ? 0.5 * p : p;
    fv.value = functional_value(g, f, e, square, kp, aq, opts);
    if (opts.estimate_error) {
        AngularQuadrature coarse = aq;
        coarse.n_theta = std::max(4, aq.n_theta / 2);
        fv.quadrature_error_estimate = std::abs(fv.value - functional_value(g, f, e, square, kp, coarse, opts));
    }
    return fv;
}
}  // namespace

FunctionalValue eval_Ip(const Distribution& g, const Distribution& f, double p, const KernelParams& kp,
                        const AngularQuadrature& aq, const FunctionalOptions& opts) {
    return eval_generic(g, f, p, false, kp, aq, opts);
}

FunctionalValue eval_Jp(const Distribution& g, const Distribution& f, double p, const KernelParams& kp,
                        const AngularQuadrature& aq, const FunctionalOptions& opts) {
    return eval_generic(g, f, p, true, kp, aq, opts);
}

MonteCarloEstimate eval_Ip_monte_carlo(const Distribution& g, const Distribution& f, double p, const KernelParams& kp,
                                       const AngularQuadrature& aq, std::uint64_t samples, std::uint64_t seed) {
    if (g.grid != f.grid) throw std::invalid_argument("monte carlo: grid mismatch");
    if (samples < 1000) throw std::invalid_argument("monte carlo: at least 1000 samples required");
    const VelocityGrid& grid = f.grid;
    const int n = grid.n;
    const SphereRule sr = make_sphere_rule(aq, kp);
    const std::vector<double> F = powered(f, p);

    // dyadic shells of |u| in index units; shell k holds 2^(k-1) <= |u| < 2^k
    struct Shell {
        std::vector<std::array<int, 3>> offsets;
        std::vector<double> counts;
        double pairs = 0.0;
    };
    std::vector<Shell> shells;
    for (int uz = -(n - 1); uz < n; ++uz)
        for (int uy = -(n - 1); uy < n; ++uy)
            for (int ux = -(n - 1); ux < n; ++ux) {
                if (ux == 0 && uy == 0 && uz == 0) continue;
                const double r = std::sqrt(static_cast<double>(ux * ux + uy * uy + uz * uz));
                const int k = 1 + static_cast<int>(std::floor(std::log2(r)));
                if (static_cast<int>(shells.size()) <= k) shells.resize(k + 1);
                const double c = static_cast<double>(n - std::abs(ux)) * (n - std::abs(uy)) * (n - std::abs(uz));
                shells[k].offsets.push_back({ux, uy, uz});
                shells[k].counts.push_back(c);
                shells[k].pairs += c;
            }
    double total_pairs = 0.0;
    for (const auto& s : shells) total_pairs += s.pairs;

    // angular proposal proportional to theta^{-1-2s} times the theta quadrature weight
    std::vector<double> qtheta(sr.n_theta);
    double qsum = 0.0;
    for (int i = 0; i < sr.n_theta; ++i) {
        qtheta[i] = std::pow(sr.theta[i], -1.0 - 2.0 * kp.s) * sr.weight[static_cast<std::size_t>(i) * sr.n_phi];
        qsum += qtheta[i];
    }
    for (double& q : qtheta) q /= qsum;

    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> pick_theta(qtheta.begin(), qtheta.end());
    std::uniform_int_distribution<int> pick_phi(0, sr.n_phi - 1);
    MonteCarloEstimate est;
    double var = 0.0;
    for (const auto& sh : shells) {
        if (sh.pairs == 0.0) continue;
        const auto ns = std::max<std::uint64_t>(64, static_cast<std::uint64_t>(samples * sh.pairs / total_pairs));
        std::discrete_distribution<std::size_t> pick_u(sh.counts.begin(), sh.counts.end());
        double sum = 0.0, sum2 = 0.0;
        for (std::uint64_t t = 0; t < ns; ++t) {
            const auto& u = sh.offsets[pick_u(rng)];
            int a[3];
            for (int d = 0; d < 3; ++d) {
                std::uniform_int_distribution<int> pa(std::max(0, u[d]), std::min(n, n + u[d]) - 1);
                a[d] = pa(rng);
            }
            const int it = pick_theta(rng), ip = pick_phi(rng);
            const bool canon = offset_is_canonical(u);
            const int o = canon ? 1 : -1;
            const std::array<int, 3> ut{o * u[0], o * u[1], o * u[2]};
            const OffsetFrame fr = offset_frame(ut);
            const EventProjection pr =
                project_event(ut, fr, sr.cos_theta[it], sr.sin_theta[it], sr.cos_phi[ip], sr.sin_phi[ip]);
            double c = 0.0;
            if (pr.valid && !pr.noop()) {
                const int bx = a[0] - u[0], by = a[1] - u[1], bz = a[2] - u[2];
                const int lx = a[0] + o * pr.dl[0], ly = a[1] + o * pr.dl[1], lz = a[2] + o * pr.dl[2];
                const int sx = o * pr.s[0], sy = o * pr.s[1], sz = o * pr.s[2];
                const int mx = bx - o * pr.dl[0], my = by - o * pr.dl[1], mz = bz - o * pr.dl[2];
                std::size_t il, ils, im, ims;
                if (detail::resolve(grid, false, lx, ly, lz, il) && detail::resolve(grid, false, lx + sx, ly + sy, lz + sz, ils) &&
                    detail::resolve(grid, false, mx, my, mz, im) && detail::resolve(grid, false, mx - sx, my - sy, mz - sz, ims)) {
                    const std::size_t ia = grid.index(a[0], a[1], a[2]), ib = grid.index(bx, by, bz);
                    const double w = phi(fr.norm * grid.spacing, kp) * sr.b[it] *
                                     sr.weight[static_cast<std::size_t>(it) * sr.n_phi + ip];
                    const double r = pr.r;
                    auto geo = [r](double x0, double x1) {
                        if (r == 0.0) return x0;
                        return x0 > 0.0 && x1 > 0.0 ? std::exp((1.0 - r) * std::log(x0) + r * std::log(x1)) : 0.0;
                    };
                    const double G = geo(g.values[im], g.values[ims]);
                    c = 0.5 * w *
                        (g.values[ib] * ((1.0 - r) * F[il] + r * F[ils] - F[ia]) + G * (F[ia] - geo(F[il], F[ils])));
                }
            }
            const double x = sh.pairs * c / (qtheta[it] / sr.n_phi);
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / ns;
        est.value += mean;
        var += std::max(0.0, sum2 / ns - mean * mean) / (ns - 1);
        est.samples += ns;
    }
    const double h6 = std::pow(grid.cell_volume(), 2);
    est.value *= h6;
    est.std_error = std::sqrt(var) * h6;
    return est;
}

FunctionalValue eval_Ip_upper(const Distribution& g, const Distribution& f, double p, const KernelParams& kp) {
    if (g.grid != f.grid) throw std::invalid_argument("eval_Ip_upper: grid mismatch");
    const VelocityGrid& grid = f.grid;
    const int n = grid.n;
    const int m = 2 * n - 1;
    std::vector<double> ph(static_cast<std::size_t>(m) * m * m);
    for (int z = 0; z < m; ++z)
        for (int y = 0; y < m; ++y)
            for (int x = 0; x < m; ++x) {
                const double dx = x - (n - 1), dy = y - (n - 1), dz = z - (n - 1);
                ph[(static_cast<std::size_t>(z) * m + y) * m + x] =
                    phi_lattice(grid.spacing * std::sqrt(dx * dx + dy * dy + dz * dz), grid.spacing, kp);
            }
    const std::vector<double> F = powered(f, p);
    double acc = 0.0;
    for (int az = 0; az < n; ++az)
        for (int ay = 0; ay < n; ++ay)
            for (int ax = 0; ax < n; ++ax) {
                const double fa = F[grid.index(ax, ay, az)];
                if (fa == 0.0) continue;
                double s = 0.0;
                for (int bz = 0; bz < n; ++bz)
                    for (int by = 0; by < n; ++by) {
                        const double* prow =
                            &ph[(static_cast<std::size_t>(az - bz + n - 1) * m + (ay - by + n - 1)) * m + (ax + n - 1)];
                        const double* grow = &g.values[grid.index(0, by, bz)];
                        for (int bx = 0; bx < n; ++bx) s += grow[bx] * prow[-bx];
                    }
                acc += fa * s;
            }
    FunctionalValue fv;
    fv.kind = FunctionalKind::I_p_upper;
    fv.p = p;
    fv.value = acc * grid.cell_volume() * grid.cell_volume();
    return fv;
}

Lemma21Result lemma21_check(const Distribution& g, const Distribution& f, const Distribution& q, double p,
                            const KernelParams& kp, const AngularQuadrature& aq) {
    if (!(p > 1.0)) throw std::invalid_argument("lemma21_check: p must exceed 1");
    Lemma21Result r;
    double lhs = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (f.values[i] > 0.0) lhs += q.values[i] * std::pow(f.values[i], p - 1.0);
    r.lhs = lhs * f.grid.cell_volume();
    FunctionalOptions fo;
    fo.exact_table = true;
    r.ip = eval_Ip(g, f, p, kp, aq, fo).value;
    r.jp = eval_Jp(g, f, p, kp, aq, fo).value;
    const double pc = conjugate(p);
    r.rhs = r.ip / pc - r.jp / std::max(p, pc);
    r.slack = 1e-8 + 1e-3 * std::abs(r.rhs);
    r.pass = r.lhs - r.rhs <= r.slack;
    return r;
}

Lemma21Result lemma21_check(const Distribution& g, const Distribution& f, double p, const KernelParams& kp,
                            const AngularQuadrature& aq) {
    FastConfig exact;
    exact.compress = false;
    const CollisionOutput q = q_fast(g, f, kp, aq, exact);
    return lemma21_check(g, f, q.q_values, p, kp, aq);
}

CoercivityFit coercivity_fit(const std::vector<Distribution>& family, double p, const KernelParams& kp,
                             const AngularQuadrature& aq, double c1_weight) {
    if (family.size() < 1) throw std::invalid_argument("coercivity_fit: empty family");
    CoercivityFit fit;
    for (const auto& f : family) {
        fit.jp.push_back(eval_Jp(f, f, p, kp, aq).value);
        fit.hs_sq.push_back(hs_gamma_half_sq(f, p, kp));
        Distribution fp(f.grid);
        for (std::size_t i = 0; i < f.values.size(); ++i) fp.values[i] = std::pow(std::max(f.values[i], 0.0), 0.5 * p);
        const double l2 = weighted_l2(fp, 0.5 * kp.gamma);
        fit.l2_sq.push_back(l2 * l2);
    }
    // Two-variable LP: every optimum sits on a vertex of the feasible polygon.
    struct Line {
        double a, b, c;  // a*c0 + b*c1 <= c
    };
    std::vector<Line> lines;
    double cap = 0.0;
    for (std::size_t i = 0; i < fit.jp.size(); ++i) {
        lines.push_back({fit.hs_sq[i], -fit.l2_sq[i], fit.jp[i]});
        cap = std::max({cap, std::abs(fit.jp[i]) / std::max(fit.l2_sq[i], 1e-300), std::abs(fit.jp[i]) / std::max(fit.hs_sq[i], 1e-300)});
    }
    cap = 1e6 * std::max(cap, 1.0);
    lines.push_back({-1.0, 0.0, 0.0});
    lines.push_back({0.0, -1.0, 0.0});
    lines.push_back({1.0, 0.0, cap});
    lines.push_back({0.0, 1.0, cap});
    auto feasible = [&](double x, double y) {
        for (const auto& l : lines)
            if (l.a * x + l.b * y > l.c + 1e-12 * (std::abs(l.c) + std::abs(l.a * x) + std::abs(l.b * y))) return false;
        return true;
    };
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            const double det = lines[i].a * lines[j].b - lines[i].b * lines[j].a;
            if (std::abs(det) < 1e-300) continue;
            const double x = (lines[i].c * lines[j].b - lines[i].b * lines[j].c) / det;
            const double y = (lines[i].a * lines[j].c - lines[i].c * lines[j].a) / det;
            if (!feasible(x, y)) continue;
            const double obj = x - c1_weight * y;
            if (!fit.feasible || obj > best + 1e-15 * std::abs(best) || (obj >= best - 1e-15 * std::abs(best) && y < fit.c1)) {
                best = obj;
                fit.c0 = x;
                fit.c1 = y;
                fit.feasible = true;
            }
        }
    fit.c0_positive = fit.feasible && fit.c0 > 0.0;
    return fit;
}

CheckReport hardy_check(const Distribution& F, double ell, double delta) {
    if (!(ell > 0.0 && ell < 1.0)) throw std::invalid_argument("hardy_check: ell must lie in (0,1)");
    const VelocityGrid& grid = F.grid;
    const int n = grid.n;
    const double h = grid.spacing;
    const double d = delta < 0.0 ? 0.5 * h : delta;
    CheckReport rep;
    rep.check_name = "hardy";
    rep.n = n;
    rep.delta = d;
    const double diag = d == 0.0 ? phi_cell_average(h, -2.0 * ell) : std::pow(d * d, -ell);
    double best = 0.0;
    for (std::size_t s = 0; s < grid.size(); ++s) {
        const Vec3 vs = grid.node(s);
        double acc = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double v = F.values[i];
            if (v == 0.0) continue;
            const Vec3 x = grid.node(i);
            const double r2 = (x[0] - vs[0]) * (x[0] - vs[0]) + (x[1] - vs[1]) * (x[1] - vs[1]) + (x[2] - vs[2]) * (x[2] - vs[2]);
            acc += v * v * (i == s ? diag : std::pow(r2 + d * d, -ell));
        }
        best = std::max(best, acc);
    }
    rep.lhs = best * grid.cell_volume();
    const double hs = sobolev_weighted(F, ell, 0.0);
    rep.rhs = hs * hs;
    if (rep.rhs == 0.0) {
        rep.ratio = 0.0;
        rep.pass = true;
        rep.add("degenerate", "true");
    } else {
        rep.ratio = rep.lhs / rep.rhs;
        rep.pass = std::isfinite(rep.ratio);
    }
    rep.add("ell", ell);
    return rep;
}

double hls_exponent(double alpha, double p_in) {
    if (!(alpha > 0.0 && alpha < 3.0)) throw std::invalid_argument("hls: alpha must lie in (0,3)");
    if (!(p_in > 1.0)) throw std::invalid_argument("hls: p must exceed 1");
    const double inv = 1.0 / p_in - alpha / 3.0;
    if (!(inv > 0.0)) throw std::invalid_argument("hls: exponent relation forces q = infinity");
    return 1.0 / inv;
}

CheckReport hls_check(const Distribution& f, double alpha, double p_in, double q_out, double delta) {
    const double q = hls_exponent(alpha, p_in);
    if (!(p_in < q_out) || std::abs(1.0 / q_out - 1.0 / q) > 1e-12)
        throw std::invalid_argument("hls: 1/q = 1/p - alpha/3 violated");
    const VelocityGrid& grid = f.grid;
    const double h = grid.spacing;
    const double d = delta < 0.0 ? 0.5 * h : delta;
    const double diag = d == 0.0 ? phi_cell_average(h, alpha - 3.0) : std::pow(d * d, 0.5 * (alpha - 3.0));
    Distribution conv(grid);
    for (std::size_t a = 0; a < grid.size(); ++a) {
        const Vec3 va = grid.node(a);
        double acc = 0.0;
        for (std::size_t b = 0; b < grid.size(); ++b) {
            if (f.values[b] == 0.0) continue;
            const Vec3 vb = grid.node(b);
            const double r2 = (va[0] - vb[0]) * (va[0] - vb[0]) + (va[1] - vb[1]) * (va[1] - vb[1]) + (va[2] - vb[2]) * (va[2] - vb[2]);
            acc += f.values[b] * (a == b ? diag : std::pow(r2 + d * d, 0.5 * (alpha - 3.0)));
        }
        conv.values[a] = acc * grid.cell_volume();
    }
    CheckReport rep;
    rep.check_name = "hls";
    rep.n = grid.n;
    rep.delta = d;
    rep.lhs = lp_norm(conv, q_out);
    rep.rhs = lp_norm(f, p_in);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    rep.pass = std::isfinite(rep.ratio);
    rep.add("alpha", alpha);
    rep.add("p_in", p_in);
    rep.add("q_out", q_out);
    return rep;
}

CheckReport sobolev_embedding_check(const Distribution& f, double p, double s_ord, double gamma) {
    if (!(p >= 1.0) || !(s_ord > 0.0 && s_ord < 1.0)) throw std::invalid_argument("embedding: p >= 1, s in (0,1) required");
    const double ps = sobolev_exponent(p, s_ord);
    Distribution fp(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) fp.values[i] = std::pow(std::max(f.values[i], 0.0), 0.5 * p);
    CheckReport rep;
    rep.check_name = "sobolev_embedding";
    rep.n = f.grid.n;
    rep.lhs = weighted_lp(f, ps, 0.5 * gamma);
    rep.rhs = std::pow(sobolev_weighted(fp, s_ord, 0.5 * gamma), 2.0 / p);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    rep.pass = std::isfinite(rep.ratio);
    rep.add("p_s", ps);
    return rep;
}

}  // namespace boltzlp
