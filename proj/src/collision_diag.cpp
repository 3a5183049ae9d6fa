#include "boltzlp/collision.hpp"
#include "boltzlp/io.hpp"

#include "collision_events.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace boltzlp {

double pairing_direct(const CollisionOutput& q, const PhiFn& phi_fn) {
    const auto& d = q.q_values;
    double s = 0.0;
    for (std::size_t i = 0; i < d.values.size(); ++i) s += phi_fn(d.grid.node(i)) * d.values[i];
    return s * d.grid.cell_volume();
}

double q_weak_pairing_sym(const Distribution& g, const Distribution& f, const PhiFn& phi_fn, const KernelParams& kp,
                          const AngularQuadrature& aq, const PairingOptions& opts) {
    if (g.grid != f.grid) throw std::invalid_argument("q_weak_pairing_sym: grid mismatch");
    const VelocityGrid& grid = f.grid;
    const SphereRule sr = make_sphere_rule(aq, kp);
    std::vector<double> ph(grid.size());
    for (std::size_t i = 0; i < ph.size(); ++i) ph[i] = phi_fn(grid.node(i));
    auto geo = [](double x0, double x1, double r) {
        if (r == 0.0) return x0;
        return x0 > 0.0 && x1 > 0.0 ? std::exp((1.0 - r) * std::log(x0) + r * std::log(x1)) : 0.0;
    };
    // -1/4 [ (g'_* f' - g_* f)(phi' - phi) + (g' f'_* - g f_*)(phi'_* - phi_*) ]; for g = f this is
    // the familiar (phi' + phi'_* - phi - phi_*)(g'_* f' - g_* f) form.
    double acc = 0.0;
    for (int ak = 0; ak < grid.n; ++ak)
        for (int aj = 0; aj < grid.n; ++aj)
            for (int ai = 0; ai < grid.n; ++ai)
                detail::visit_alpha_events(grid, kp, sr, opts.periodic, ai, aj, ak, [&](const detail::ResolvedEvent& ev) {
                    if (ev.noop || !ev.valid || !ev.in_domain) return;
                    const double r = ev.r;
                    const double Y = g.values[ev.b] * f.values[ev.a];
                    const double Yb = g.values[ev.a] * f.values[ev.b];
                    double X, Xb;
                    if (opts.printed_variant) {
                        X = geo(g.values[ev.mu], g.values[ev.mus], r) * f.values[ev.b];
                        Xb = geo(g.values[ev.lam], g.values[ev.lams], r) * f.values[ev.a];
                    } else {
                        X = detail::gain_product(g.values[ev.mu], f.values[ev.lam], g.values[ev.mus], f.values[ev.lams], r);
                        Xb = detail::gain_product(g.values[ev.lam], f.values[ev.mu], g.values[ev.lams], f.values[ev.mus], r);
                    }
                    const double dphi = (1.0 - r) * ph[ev.lam] + r * ph[ev.lams] - ph[ev.a];
                    const double dphi_b = (1.0 - r) * ph[ev.mu] + r * ph[ev.mus] - ph[ev.b];
                    acc += -0.25 * ev.w * ((X - Y) * dphi + (Xb - Yb) * dphi_b);
                });
    const double h3 = grid.cell_volume();
    return acc * h3 * h3;
}

double q_weak_pairing_asym(const Distribution& g, const Distribution& f, const PhiFn& phi_fn, const KernelParams& kp,
                           const AngularQuadrature& aq, const PairingOptions& opts) {
    if (g.grid != f.grid) throw std::invalid_argument("q_weak_pairing_asym: grid mismatch");
    const VelocityGrid& grid = f.grid;
    const SphereRule sr = make_sphere_rule(aq, kp);
    std::vector<double> ph(grid.size());
    for (std::size_t i = 0; i < ph.size(); ++i) ph[i] = phi_fn(grid.node(i));
    const double h = grid.spacing;
    // (phi' - phi) g_* f on every event, averaged with its pre/post image (phi - phi') g'_* f'.
    // exact_post evaluates phi at the true v' on the loss side only.
    double acc = 0.0;
    for (int ak = 0; ak < grid.n; ++ak)
        for (int aj = 0; aj < grid.n; ++aj)
            for (int ai = 0; ai < grid.n; ++ai) {
                const Vec3 va = grid.node(grid.index(ai, aj, ak));
                detail::visit_alpha_events(grid, kp, sr, opts.periodic, ai, aj, ak, [&](const detail::ResolvedEvent& ev) {
                    if (opts.exact_post) {
                        if (!ev.valid || (!ev.noop && !ev.in_domain)) return;
                        const double Y = g.values[ev.b] * f.values[ev.a];
                        if (Y == 0.0) return;
                        const Vec3 vp{va[0] + h * ev.rel[0], va[1] + h * ev.rel[1], va[2] + h * ev.rel[2]};
                        acc += ev.w * Y * (phi_fn(vp) - ph[ev.a]);
                        return;
                    }
                    if (ev.noop || !ev.valid || !ev.in_domain) return;
                    const double dphi = (1.0 - ev.r) * ph[ev.lam] + ev.r * ph[ev.lams] - ph[ev.a];
                    const double Y = g.values[ev.b] * f.values[ev.a];
                    double X;
                    if (opts.printed_variant) {
                        const double r = ev.r;
                        const double g0 = g.values[ev.mu], g1 = g.values[ev.mus];
                        const double gp =
                            r == 0.0 ? g0 : (g0 > 0.0 && g1 > 0.0 ? std::exp((1.0 - r) * std::log(g0) + r * std::log(g1)) : 0.0);
                        X = gp * f.values[ev.b];
                    } else {
                        X = detail::gain_product(g.values[ev.mu], f.values[ev.lam], g.values[ev.mus], f.values[ev.lams],
                                                 ev.r);
                    }
                    acc += 0.5 * ev.w * (Y * dphi - X * dphi);
                });
            }
    const double h3 = grid.cell_volume();
    return acc * h3 * h3;
}

Moments moments(const Distribution& f) {
    const VelocityGrid& g = f.grid;
    const int n = g.n;
    Moments m;
    double mass = 0.0, energy = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const Vec3 v = g.node(i);
        mass += f.values[i];
        energy += f.values[i] * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    }
    // pair node i with its mirror n-1-i along every axis so even data cancel exactly
    for (int axis = 0; axis < 3; ++axis) {
        double p = 0.0;
        for (int a = 0; a < n / 2; ++a) {
            double diff = 0.0;
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    int idx[3], mir[3];
                    idx[axis] = a;
                    idx[(axis + 1) % 3] = b;
                    idx[(axis + 2) % 3] = c;
                    for (int d = 0; d < 3; ++d) mir[d] = n - 1 - idx[d];
                    diff += f.values[g.index(idx[0], idx[1], idx[2])] - f.values[g.index(mir[0], mir[1], mir[2])];
                }
            p += g.coord(a) * diff;
        }
        m.momentum[axis] = p * g.cell_volume();
    }
    m.mass = mass * g.cell_volume();
    m.energy = energy * g.cell_volume();
    return m;
}

double h_functional(const Distribution& f) {
    double s = 0.0;
    for (double v : f.values)
        if (v > 0.0) s += v * std::log(v);
    return s * f.grid.cell_volume();
}

void save_collision_output(const std::string& path_prefix, const CollisionOutput& out) {
    save_binary(path_prefix + ".bin", out.q_values);
    std::ofstream os(path_prefix + ".stats");
    if (!os) throw std::runtime_error("cannot write " + path_prefix + ".stats");
    os << out.eval_stats.to_string();
}

}  // namespace boltzlp
