#include "boltzlp/functionals.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace boltzlp {
namespace {

std::mutex& plan_mutex() {
    static std::mutex mu;
    return mu;
}

}  // namespace

double sobolev_weighted(const Distribution& g, double s_ord, double rho_weight, int padding) {
    if (padding < 2) throw std::invalid_argument("sobolev_weighted: padding must be at least 2");
    if (s_ord < 0.0) throw std::invalid_argument("sobolev_weighted: negative order");
    const VelocityGrid& grid = g.grid;
    const int n = grid.n;
    const int M = n * padding;
    const int Mh = M / 2 + 1;
    double* in = fftw_alloc_real(static_cast<std::size_t>(M) * M * M);
    fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(M) * M * Mh);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft_r2c_3d(M, M, M, in, out, FFTW_ESTIMATE);
    }
    std::fill(in, in + static_cast<std::size_t>(M) * M * M, 0.0);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const std::size_t idx = grid.index(i, j, k);
                double v = g.values[idx];
                if (rho_weight != 0.0) v *= std::pow(japanese(grid.node(idx)), rho_weight);
                in[(static_cast<std::size_t>(k) * M + j) * M + i] = v;
            }
    fftw_execute(plan);
    const double L = M * grid.spacing;
    const double dk = 2.0 * kPi / L;
    double acc = 0.0;
    for (int k = 0; k < M; ++k) {
        const double kz = dk * (k <= M / 2 ? k : k - M);
        for (int j = 0; j < M; ++j) {
            const double ky = dk * (j <= M / 2 ? j : j - M);
            for (int i = 0; i < Mh; ++i) {
                const double kx = dk * i;
                const fftw_complex& c = out[(static_cast<std::size_t>(k) * M + j) * Mh + i];
                const double mag2 = c[0] * c[0] + c[1] * c[1];
                const double mult = (i == 0 || i == M / 2) ? 1.0 : 2.0;
                const double xi2 = kx * kx + ky * ky + kz * kz;
                acc += mult * mag2 * (s_ord == 0.0 ? 1.0 : std::pow(1.0 + xi2, s_ord));
            }
        }
    }
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    const double h3 = grid.cell_volume();
    return std::sqrt(acc * h3 / (static_cast<double>(M) * M * M));
}

double hs_gamma_half_sq(const Distribution& f, double p, const KernelParams& kp, int padding) {
    Distribution fp(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) fp.values[i] = std::pow(std::max(f.values[i], 0.0), 0.5 * p);
    const double v = sobolev_weighted(fp, kp.s, 0.5 * kp.gamma, padding);
    return v * v;
}

}  // namespace boltzlp
