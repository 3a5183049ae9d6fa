#pragma once

// Translation-invariant event table: projection geometry depends only on the
// lattice offset u = alpha - beta and the quadrature direction, so it is built
// once per (grid, kernel, quadrature) and replayed as contiguous stencils.

#include "boltzlp/collision.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace boltzlp::detail {

struct TableGroup {
    std::array<int, 3> u{};   // canonical offset
    std::array<int, 3> dl{};
    std::array<int, 3> s{};
    std::uint32_t begin = 0;  // node range in CollisionTable::rho/W/V
    std::uint32_t end = 0;
    double W0 = 0.0;          // sum of event weights
    double W1 = 0.0;          // sum of weight * r
};

struct CollisionTable {
    int n = 0;
    std::vector<TableGroup> groups;
    std::vector<double> rho, W, V;
    // unresolved (no energy bracket) weight per canonical offset
    std::vector<std::pair<std::array<int, 3>, double>> unresolved;
    std::size_t events = 0;  // non-trivial table entries before merging
    bool exact = true;       // no r compression applied
};

std::shared_ptr<const CollisionTable> get_table(const VelocityGrid& grid, const KernelParams& kp,
                                                const AngularQuadrature& aq, bool compress, int r_nodes,
                                                double max_mb = 1e9);

struct RowBox {
    int lo[3];
    int hi[3];
    long off_b, off_l, off_ls, off_m, off_ms;
    bool empty() const { return lo[0] >= hi[0] || lo[1] >= hi[1] || lo[2] >= hi[2]; }
};

inline RowBox make_box(const TableGroup& G, int o, int n) {
    RowBox bx;
    long lin[6] = {0, 0, 0, 0, 0, 0};
    for (int d = 0; d < 3; ++d) {
        const int u = o * G.u[d], dl = o * G.dl[d], s = o * G.s[d];
        const int c[6] = {0, -u, dl, dl + s, -u - dl, -u - dl - s};
        int mx = 0, mn = 0;
        for (int t = 0; t < 6; ++t) {
            mx = std::max(mx, c[t]);
            mn = std::min(mn, c[t]);
        }
        bx.lo[d] = -mn;
        bx.hi[d] = n - mx;
        const long stride = d == 0 ? 1 : (d == 1 ? n : static_cast<long>(n) * n);
        for (int t = 1; t < 6; ++t) lin[t] += c[t] * stride;
    }
    bx.off_b = lin[1];
    bx.off_l = lin[2];
    bx.off_ls = lin[3];
    bx.off_m = lin[4];
    bx.off_ms = lin[5];
    return bx;
}

}  // namespace boltzlp::detail
