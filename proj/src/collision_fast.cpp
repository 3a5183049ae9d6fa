#include "collision_table.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace boltzlp {
namespace detail {
namespace {

struct RawEntry {
    std::array<int, 3> dl, s;
    double r, w;
};

constexpr double kLogFloor = -1e300;

void append_group(CollisionTable& t, const std::array<int, 3>& u, const RawEntry* first, const RawEntry* last,
                  bool compress, int r_nodes) {
    TableGroup G;
    G.u = u;
    G.dl = first->dl;
    G.s = first->s;
    G.begin = static_cast<std::uint32_t>(t.rho.size());
    for (const RawEntry* e = first; e != last; ++e) {
        G.W0 += e->w;
        G.W1 += e->w * e->r;
    }
    const std::size_t count = static_cast<std::size_t>(last - first);
    const bool zero_r = first->r == 0.0;
    if (zero_r) {
        t.rho.push_back(0.0);
        t.W.push_back(G.W0);
        t.V.push_back(0.0);
    } else if (!compress || count <= static_cast<std::size_t>(r_nodes)) {
        for (const RawEntry* e = first; e != last; ++e) {
            t.rho.push_back(e->r);
            t.W.push_back(e->w);
            t.V.push_back(e->w * e->r);
        }
    } else {
        t.exact = false;
        double rmin = first->r, rmax = first->r;
        for (const RawEntry* e = first; e != last; ++e) {
            rmin = std::min(rmin, e->r);
            rmax = std::max(rmax, e->r);
        }
        std::vector<double> nodes;
        if (rmax - rmin < 1e-12) {
            nodes.push_back(G.W1 / G.W0);
        } else {
            const double c = 0.5 * (rmin + rmax), hw = 0.5 * (rmax - rmin);
            for (int j = 0; j < r_nodes; ++j) nodes.push_back(c + hw * std::cos((2.0 * j + 1.0) * kPi / (2.0 * r_nodes)));
        }
        const std::size_t m = nodes.size();
        std::vector<double> Wn(m, 0.0), Vn(m, 0.0);
        for (const RawEntry* e = first; e != last; ++e) {
            for (std::size_t j = 0; j < m; ++j) {
                double l = 1.0;
                for (std::size_t k = 0; k < m; ++k)
                    if (k != j) l *= (e->r - nodes[k]) / (nodes[j] - nodes[k]);
                Wn[j] += e->w * l;
                Vn[j] += e->w * e->r * l;
            }
        }
        for (std::size_t j = 0; j < m; ++j) {
            t.rho.push_back(nodes[j]);
            t.W.push_back(Wn[j]);
            t.V.push_back(Vn[j]);
        }
    }
    G.end = static_cast<std::uint32_t>(t.rho.size());
    t.groups.push_back(G);
}

std::shared_ptr<CollisionTable> build_table(const VelocityGrid& grid, const KernelParams& kp,
                                            const AngularQuadrature& aq, bool compress, int r_nodes, double max_mb) {
    const int n = grid.n;
    const SphereRule sr = make_sphere_rule(aq, kp);
    const double est_mb = 0.5 * std::pow(2.0 * n - 1.0, 3) * sr.size() * 80.0 / 1048576.0;
    if (est_mb > max_mb) {
        std::ostringstream os;
        os << "fast collision table needs about " << est_mb << " MB, above the configured limit " << max_mb;
        throw std::invalid_argument(os.str());
    }
    auto t = std::make_shared<CollisionTable>();
    t->n = n;
    std::vector<RawEntry> raw;
    raw.reserve(sr.size());
    for (int ux = 0; ux < n; ++ux)
        for (int uy = -(n - 1); uy < n; ++uy)
            for (int uz = -(n - 1); uz < n; ++uz) {
                const std::array<int, 3> u{ux, uy, uz};
                if (!offset_is_canonical(u)) continue;
                const OffsetFrame fr = offset_frame(u);
                const double ph = phi(fr.norm * grid.spacing, kp);
                raw.clear();
                double unresolved = 0.0;
                for (int it = 0; it < sr.n_theta; ++it)
                    for (int ip = 0; ip < sr.n_phi; ++ip) {
                        const double w = ph * sr.b[it] * sr.weight[static_cast<std::size_t>(it) * sr.n_phi + ip];
                        const EventProjection pr =
                            project_event(u, fr, sr.cos_theta[it], sr.sin_theta[it], sr.cos_phi[ip], sr.sin_phi[ip]);
                        if (!pr.valid) {
                            unresolved += w;
                            continue;
                        }
                        if (pr.noop()) continue;
                        bool reachable = true;
                        for (int d = 0; d < 3; ++d) {
                            const int c[4] = {pr.dl[d], pr.dl[d] + pr.s[d], u[d] + pr.dl[d], u[d] + pr.dl[d] + pr.s[d]};
                            for (int x : c)
                                if (std::abs(x) >= n) reachable = false;
                        }
                        if (!reachable) continue;
                        raw.push_back({pr.dl, pr.s, pr.r, w});
                    }
                if (unresolved > 0.0) t->unresolved.push_back({u, unresolved});
                t->events += raw.size();
                std::sort(raw.begin(), raw.end(), [](const RawEntry& a, const RawEntry& b) {
                    return std::tie(a.dl, a.s, a.r) < std::tie(b.dl, b.s, b.r);
                });
                std::size_t i = 0;
                while (i < raw.size()) {
                    std::size_t j = i + 1;
                    while (j < raw.size() && raw[j].dl == raw[i].dl && raw[j].s == raw[i].s &&
                           (raw[j].r == 0.0) == (raw[i].r == 0.0))
                        ++j;
                    append_group(*t, u, raw.data() + i, raw.data() + j, compress, r_nodes);
                    i = j;
                }
            }
    return t;
}

}  // namespace

std::shared_ptr<const CollisionTable> get_table(const VelocityGrid& grid, const KernelParams& kp,
                                                const AngularQuadrature& aq, bool compress, int r_nodes,
                                                double max_mb) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const CollisionTable>> cache;
    std::ostringstream key;
    key.precision(17);
    key << grid.n << ':' << grid.radius << ':' << kp.gamma << ':' << kp.s << ':' << kp.b0 << ':' << kp.eps_theta << ':'
        << kp.delta_rel << ':' << aq.n_theta << ':' << aq.n_phi << ':' << aq.grading << ':' << compress << ':'
        << (compress ? r_nodes : 0);
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key.str()); it != cache.end()) return it->second;
    if (cache.size() > 8) cache.clear();
    auto t = build_table(grid, kp, aq, compress, r_nodes, max_mb);
    cache[key.str()] = t;
    return t;
}

}  // namespace detail

void FastConfig::validate(int n) const {
    if (r_nodes < 1 || r_nodes > 8) throw std::invalid_argument("fast config: r_nodes must lie in [1,8]");
    if (n > 64) throw std::invalid_argument("fast config: grid too large for the event table");
    if (!(max_table_mb > 0.0)) throw std::invalid_argument("fast config: max_table_mb must be positive");
}

namespace {

using detail::RowBox;
using detail::TableGroup;

// Sum over alpha, beta in the cube of f_alpha g_{alpha-u}, for the leakage statistic.
double pair_sum(const Distribution& g, const Distribution& f, const std::array<int, 3>& u) {
    const int n = f.grid.n;
    double s = 0.0;
    for (int z = std::max(0, u[2]); z < std::min(n, n + u[2]); ++z)
        for (int y = std::max(0, u[1]); y < std::min(n, n + u[1]); ++y)
            for (int x = std::max(0, u[0]); x < std::min(n, n + u[0]); ++x)
                s += f.values[f.grid.index(x, y, z)] * g.values[f.grid.index(x - u[0], y - u[1], z - u[2])];
    return s;
}

void eval_group_rows(const detail::CollisionTable& t, const TableGroup& G, int o, int n, const double* g,
                     const double* f, const double* Lg, const double* Lf, double* __restrict QA,
                     double* __restrict QL, double* __restrict QLS, double& y_inside) {
    const RowBox bx = detail::make_box(G, o, n);
    if (bx.empty()) return;
    const std::uint32_t nb = G.end - G.begin;
    const double* rho = t.rho.data() + G.begin;
    const double* W = t.W.data() + G.begin;
    const double* V = t.V.data() + G.begin;
    const double hW0 = 0.5 * G.W0, hW1 = 0.5 * G.W1;
    const int len = bx.hi[0] - bx.lo[0];
    double ysum = 0.0;
    for (int z = bx.lo[2]; z < bx.hi[2]; ++z)
        for (int y = bx.lo[1]; y < bx.hi[1]; ++y) {
            const long base = bx.lo[0] + static_cast<long>(n) * (y + static_cast<long>(n) * z);
            const double* fa = f + base;
            const double* gb = g + base + bx.off_b;
            double* qa = QA + base;
            double* ql = QL + base + bx.off_l;
            double* qls = QLS + base + bx.off_ls;
            if (rho[0] == 0.0) {
                const double* gm = g + base + bx.off_m;
                const double* fl = f + base + bx.off_l;
                for (int i = 0; i < len; ++i) {
                    const double Y = gb[i] * fa[i];
                    const double D = hW0 * (gm[i] * fl[i] - Y);
                    qa[i] += D;
                    ql[i] -= D;
                    ysum += Y;
                }
                continue;
            }
            const double* lgm = Lg + base + bx.off_m;
            const double* lfl = Lf + base + bx.off_l;
            const double* lgms = Lg + base + bx.off_ms;
            const double* lfls = Lf + base + bx.off_ls;
            for (int i = 0; i < len; ++i) {
                const double A = lgm[i] + lfl[i];
                const double B = lgms[i] + lfls[i] - A;
                double S0 = 0.0, S1 = 0.0;
                for (std::uint32_t j = 0; j < nb; ++j) {
                    const double E = std::exp(A + rho[j] * B);
                    S0 += W[j] * E;
                    S1 += V[j] * E;
                }
                const double Y = gb[i] * fa[i];
                qa[i] += 0.5 * S0 - hW0 * Y;
                ql[i] -= 0.5 * (S0 - S1) - (hW0 - hW1) * Y;
                qls[i] -= 0.5 * S1 - hW1 * Y;
                ysum += Y;
            }
        }
    y_inside += ysum * G.W0;
}

}  // namespace

CollisionOutput q_fast(const Distribution& g, const Distribution& f, const KernelParams& kp,
                       const AngularQuadrature& aq, const FastConfig& cfg) {
    if (g.grid != f.grid) throw std::invalid_argument("q_fast: grid mismatch");
    kp.validate();
    cfg.validate(f.grid.n);
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = detail::get_table(f.grid, kp, aq, cfg.compress, cfg.r_nodes, cfg.max_table_mb);
    const int n = f.grid.n;
    const std::size_t N = f.grid.size();
    std::vector<double> Lg(N), Lf(N), QA(N, 0.0), QL(N, 0.0), QLS(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        Lg[i] = g.values[i] > 0.0 ? std::log(g.values[i]) : detail::kLogFloor;
        Lf[i] = f.values[i] > 0.0 ? std::log(f.values[i]) : detail::kLogFloor;
    }
    double y_inside = 0.0;
    for (const auto& G : table->groups)
        for (int o : {1, -1})
            eval_group_rows(*table, G, o, n, g.values.data(), f.values.data(), Lg.data(), Lf.data(), QA.data(),
                                    QL.data(), QLS.data(), y_inside);

    // leakage: total rate of table events minus the part evaluated inside the cube
    std::map<std::array<int, 3>, double> wsum;
    for (const auto& G : table->groups) wsum[G.u] += G.W0;
    for (const auto& [u, w] : table->unresolved) wsum[u] += w;
    double total = 0.0;
    for (const auto& [u, w] : wsum) {
        const std::array<int, 3> mu{-u[0], -u[1], -u[2]};
        total += w * (pair_sum(g, f, u) + pair_sum(g, f, mu));
    }

    const double h3 = f.grid.cell_volume();
    CollisionOutput out;
    out.q_values = Distribution(f.grid);
    out.q_values.time_tag = f.time_tag;
    for (std::size_t i = 0; i < N; ++i) out.q_values.values[i] = (QA[i] + QL[i] + QLS[i]) * h3;
    out.eval_stats.kernel_evals = 2 * table->rho.size();
    out.eval_stats.leakage = std::max(0.0, total - y_inside) * h3 * h3;
    out.eval_stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

double max_loss_rate(const Distribution& g, const KernelParams& kp, const AngularQuadrature& aq) {
    const auto table = detail::get_table(g.grid, kp, aq, true, 3);
    const int n = g.grid.n;
    std::vector<double> rate(g.grid.size(), 0.0);
    for (const auto& G : table->groups)
        for (int o : {1, -1}) {
            const RowBox bx = detail::make_box(G, o, n);
            if (bx.empty()) continue;
            for (int z = bx.lo[2]; z < bx.hi[2]; ++z)
                for (int y = bx.lo[1]; y < bx.hi[1]; ++y)
                    for (int x = bx.lo[0]; x < bx.hi[0]; ++x) {
                        const long a = x + static_cast<long>(n) * (y + static_cast<long>(n) * z);
                        rate[a] += G.W0 * g.values[a + bx.off_b];
                    }
        }
    return *std::max_element(rate.begin(), rate.end()) * g.grid.cell_volume();
}

}  // namespace boltzlp
