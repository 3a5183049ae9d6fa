#pragma once

// Event enumeration shared by the reference (direct) evaluators.

#include "boltzlp/collision.hpp"

#include <cmath>

namespace boltzlp::detail {

struct ResolvedEvent {
    std::size_t a = 0, b = 0, lam = 0, lams = 0, mu = 0, mus = 0;
    double r = 0.0;
    double w = 0.0;   // Phi * b * quadrature weight (no h factors)
    Vec3 rel{};       // exact v' - v_alpha in index units
    bool noop = false;
    bool valid = true;
    bool in_domain = true;
};

inline bool wrap_or_check(int& x, int n, bool periodic) {
    if (x >= 0 && x < n) return true;
    if (!periodic) return false;
    x = ((x % n) + n) % n;
    return true;
}

inline bool resolve(const VelocityGrid& g, bool periodic, int x, int y, int z, std::size_t& out) {
    if (!wrap_or_check(x, g.n, periodic) || !wrap_or_check(y, g.n, periodic) || !wrap_or_check(z, g.n, periodic))
        return false;
    out = g.index(x, y, z);
    return true;
}

inline double gain_product(double gm, double fl, double gms, double fls, double r) {
    const double p1 = gm * fl;
    if (r == 0.0) return p1;
    const double p2 = gms * fls;
    if (p1 <= 0.0 || p2 <= 0.0) return 0.0;
    return std::exp((1.0 - r) * std::log(p1) + r * std::log(p2));
}

// Visit every (beta, sigma) event for the pre-collision node alpha = (ai, aj, ak).
template <class Fn>
void visit_alpha_events(const VelocityGrid& grid, const KernelParams& kp, const SphereRule& sr, bool periodic, int ai,
                        int aj, int ak, Fn&& fn) {
    const int n = grid.n;
    const std::size_t a = grid.index(ai, aj, ak);
    ResolvedEvent ev;
    ev.a = a;
    for (int bk = 0; bk < n; ++bk)
        for (int bj = 0; bj < n; ++bj)
            for (int bi = 0; bi < n; ++bi) {
                const std::array<int, 3> u{ai - bi, aj - bj, ak - bk};
                if (u[0] == 0 && u[1] == 0 && u[2] == 0) continue;
                const bool canon = offset_is_canonical(u);
                const int o = canon ? 1 : -1;
                const std::array<int, 3> ut{o * u[0], o * u[1], o * u[2]};
                const OffsetFrame fr = offset_frame(ut);
                const double ph = phi(fr.norm * grid.spacing, kp);
                ev.b = grid.index(bi, bj, bk);
                for (int it = 0; it < sr.n_theta; ++it) {
                    const double bw = ph * sr.b[it];
                    for (int ip = 0; ip < sr.n_phi; ++ip) {
                        const std::size_t m = static_cast<std::size_t>(it) * sr.n_phi + ip;
                        Vec3 rel;
                        const EventProjection pr =
                            project_event(ut, fr, sr.cos_theta[it], sr.sin_theta[it], sr.cos_phi[ip], sr.sin_phi[ip], &rel);
                        ev.w = bw * sr.weight[m];
                        ev.rel = {o * rel[0], o * rel[1], o * rel[2]};
                        ev.noop = pr.noop();
                        ev.valid = pr.valid;
                        ev.r = pr.r;
                        ev.in_domain = false;
                        if (pr.valid && !ev.noop) {
                            const int lx = ai + o * pr.dl[0], ly = aj + o * pr.dl[1], lz = ak + o * pr.dl[2];
                            const int mx = bi - o * pr.dl[0], my = bj - o * pr.dl[1], mz = bk - o * pr.dl[2];
                            const int sx = o * pr.s[0], sy = o * pr.s[1], sz = o * pr.s[2];
                            ev.in_domain = resolve(grid, periodic, lx, ly, lz, ev.lam) &&
                                           resolve(grid, periodic, lx + sx, ly + sy, lz + sz, ev.lams) &&
                                           resolve(grid, periodic, mx, my, mz, ev.mu) &&
                                           resolve(grid, periodic, mx - sx, my - sy, mz - sz, ev.mus);
                        }
                        fn(ev);
                    }
                }
            }
}

}  // namespace boltzlp::detail
