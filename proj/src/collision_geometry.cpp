#include "boltzlp/collision.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace boltzlp {

std::pair<Vec3, Vec3> post_collision_velocities(const Vec3& v, const Vec3& v_star, const Vec3& sigma) {
    const double sn = std::sqrt(sigma[0] * sigma[0] + sigma[1] * sigma[1] + sigma[2] * sigma[2]);
    if (std::abs(sn - 1.0) > 1e-12) throw std::invalid_argument("post_collision_velocities: sigma is not a unit vector");
    const double du[3] = {v[0] - v_star[0], v[1] - v_star[1], v[2] - v_star[2]};
    const double half = 0.5 * std::sqrt(du[0] * du[0] + du[1] * du[1] + du[2] * du[2]);
    Vec3 vp, vps;
    for (int d = 0; d < 3; ++d) {
        const double c = 0.5 * (v[d] + v_star[d]);
        vp[d] = c + half * sigma[d];
        vps[d] = c - half * sigma[d];
    }
    return {vp, vps};
}

std::string CollisionStats::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << "kernel_evals=" << kernel_evals << "\ndropped_events=" << dropped_events << "\nwall_ms=" << wall_ms
       << "\nleakage=" << leakage << "\n";
    return os.str();
}

bool offset_is_canonical(const std::array<int, 3>& u) {
    if (u[0] != 0) return u[0] > 0;
    if (u[1] != 0) return u[1] > 0;
    return u[2] > 0;
}

OffsetFrame offset_frame(const std::array<int, 3>& u) {
    OffsetFrame fr;
    fr.norm = std::sqrt(static_cast<double>(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]));
    for (int d = 0; d < 3; ++d) fr.k[d] = u[d] / fr.norm;
    int ax = 0;
    for (int d = 1; d < 3; ++d)
        if (std::abs(fr.k[d]) < std::abs(fr.k[ax])) ax = d;
    Vec3 a{0.0, 0.0, 0.0};
    a[ax] = 1.0;
    const double ak = fr.k[ax];
    double nn = 0.0;
    for (int d = 0; d < 3; ++d) {
        fr.e1[d] = a[d] - ak * fr.k[d];
        nn += fr.e1[d] * fr.e1[d];
    }
    nn = std::sqrt(nn);
    for (int d = 0; d < 3; ++d) fr.e1[d] /= nn;
    fr.e2 = {fr.k[1] * fr.e1[2] - fr.k[2] * fr.e1[1], fr.k[2] * fr.e1[0] - fr.k[0] * fr.e1[2],
             fr.k[0] * fr.e1[1] - fr.k[1] * fr.e1[0]};
    return fr;
}

namespace {

// Energy defect of placing v' on the node at offset o from alpha, in index units:
// |o - c|^2 - rho^2 with c = -u/2 and rho = |u|/2, which is |o|^2 + o.u exactly.
inline std::int64_t energy_defect(int ox, int oy, int oz, const std::array<int, 3>& u) {
    return static_cast<std::int64_t>(ox) * (ox + u[0]) + static_cast<std::int64_t>(oy) * (oy + u[1]) +
           static_cast<std::int64_t>(oz) * (oz + u[2]);
}

bool bracket(const std::array<int, 3>& u, const double rel[3], EventProjection& pr, std::int64_t d0, int radius) {
    bool found = false;
    double best = 0.0;
    std::int64_t best_d = 0;
    std::array<int, 3> best_t{};
    for (int tz = -radius; tz <= radius; ++tz)
        for (int ty = -radius; ty <= radius; ++ty)
            for (int tx = -radius; tx <= radius; ++tx) {
                if (tx == 0 && ty == 0 && tz == 0) continue;
                const int ox = pr.dl[0] + tx, oy = pr.dl[1] + ty, oz = pr.dl[2] + tz;
                const std::int64_t d1 = energy_defect(ox, oy, oz, u);
                if (d0 > 0 ? d1 > 0 : d1 < 0) continue;
                const double ex = ox - rel[0], ey = oy - rel[1], ez = oz - rel[2];
                const double dist = ex * ex + ey * ey + ez * ez;
                if (!found || dist < best) {
                    found = true;
                    best = dist;
                    best_d = d1;
                    best_t = {tx, ty, tz};
                }
            }
    if (!found) return false;
    if (best_d == 0) {
        for (int d = 0; d < 3; ++d) pr.dl[d] += best_t[d];
        pr.r = 0.0;
        pr.s = {0, 0, 0};
    } else {
        pr.r = static_cast<double>(d0) / static_cast<double>(d0 - best_d);
        pr.s = best_t;
    }
    return true;
}

}  // namespace

EventProjection project_event(const std::array<int, 3>& u, const OffsetFrame& fr, double cos_t, double sin_t,
                              double cos_p, double sin_p, Vec3* rel_post) {
    EventProjection pr;
    double rel[3];
    for (int d = 0; d < 3; ++d) {
        const double sig = cos_t * fr.k[d] + sin_t * (cos_p * fr.e1[d] + sin_p * fr.e2[d]);
        rel[d] = 0.5 * (fr.norm * sig - u[d]);
        pr.dl[d] = static_cast<int>(std::nearbyint(rel[d]));
    }
    if (rel_post) *rel_post = {rel[0], rel[1], rel[2]};
    const std::int64_t d0 = energy_defect(pr.dl[0], pr.dl[1], pr.dl[2], u);
    if (d0 == 0) return pr;
    if (bracket(u, rel, pr, d0, 1)) return pr;
    if (bracket(u, rel, pr, d0, 2)) return pr;
    pr.valid = false;
    return pr;
}

}  // namespace boltzlp
