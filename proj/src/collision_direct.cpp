#include "boltzlp/collision.hpp"

#include "collision_events.hpp"

#include <chrono>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace boltzlp {

CollisionOutput q_direct(const Distribution& g, const Distribution& f, const KernelParams& kp,
                         const AngularQuadrature& aq, const CollisionOptions& opts) {
    if (g.grid != f.grid) throw std::invalid_argument("q_direct: grid mismatch");
    kp.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const VelocityGrid& grid = f.grid;
    const SphereRule sr = make_sphere_rule(aq, kp);
    const std::size_t N = grid.size();
    const int n = grid.n;

    int nthreads = 1;
#ifdef _OPENMP
    nthreads = omp_get_max_threads();
#endif
    std::vector<std::vector<double>> qbuf(nthreads, std::vector<double>(N, 0.0));
    std::vector<double> loss(opts.gain_loss_split ? N : 0, 0.0);
    std::vector<std::uint64_t> evals(nthreads, 0), dropped(nthreads, 0);
    std::vector<double> leak(nthreads, 0.0);

#pragma omp parallel for schedule(dynamic, 1)
    for (int ak = 0; ak < n; ++ak) {
        int tid = 0;
#ifdef _OPENMP
        tid = omp_get_thread_num();
#endif
        std::vector<double>& q = qbuf[tid];
        for (int aj = 0; aj < n; ++aj)
            for (int ai = 0; ai < n; ++ai) {
                double loss_here = 0.0;
                detail::visit_alpha_events(grid, kp, sr, opts.periodic, ai, aj, ak, [&](const detail::ResolvedEvent& ev) {
                    if (ev.noop) return;
                    const double Y = g.values[ev.b] * f.values[ev.a];
                    if (!ev.valid || !ev.in_domain) {
                        leak[tid] += ev.w * Y;
                        ++dropped[tid];
                        return;
                    }
                    ++evals[tid];
                    const double X = detail::gain_product(g.values[ev.mu], f.values[ev.lam], g.values[ev.mus],
                                                          f.values[ev.lams], ev.r);
                    const double D = 0.5 * ev.w * (X - Y);
                    q[ev.a] += D;
                    q[ev.lam] -= (1.0 - ev.r) * D;
                    q[ev.lams] -= ev.r * D;
                    loss_here += ev.w * Y;
                });
                if (opts.gain_loss_split) loss[grid.index(ai, aj, ak)] = loss_here;
            }
    }

    const double h3 = grid.cell_volume();
    CollisionOutput out;
    out.q_values = Distribution(grid);
    for (int t = 0; t < nthreads; ++t) {
        for (std::size_t i = 0; i < N; ++i) out.q_values.values[i] += qbuf[t][i];
        out.eval_stats.kernel_evals += evals[t];
        out.eval_stats.dropped_events += dropped[t];
        out.eval_stats.leakage += leak[t];
    }
    for (double& v : out.q_values.values) v *= h3;
    out.eval_stats.leakage *= h3 * h3;
    out.q_values.time_tag = f.time_tag;
    if (opts.gain_loss_split) {
        Distribution lossd(grid), gaind(grid);
        for (std::size_t i = 0; i < N; ++i) {
            lossd.values[i] = loss[i] * h3;
            gaind.values[i] = out.q_values.values[i] + lossd.values[i];
        }
        out.gain_loss_split = std::make_pair(std::move(gaind), std::move(lossd));
    }
    out.eval_stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace boltzlp
