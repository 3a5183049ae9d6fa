#include "boltzlp/kernel_grid.hpp"

#include "boltzlp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace boltzlp {

const char* regime_name(Regime r) { return r == Regime::moderately_soft ? "moderately_soft" : "very_soft"; }

void KernelParams::validate() const {
    if (!(gamma > -3.0 && gamma < 0.0)) throw std::invalid_argument("gamma must lie in (-3,0)");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
    if (!(b0 > 0.0)) throw std::invalid_argument("b0 must be positive");
    if (!(eps_theta > 0.0 && eps_theta < kPi / 2)) throw std::invalid_argument("eps_theta must lie in (0,pi/2)");
    if (!(delta_rel >= 0.0)) throw std::invalid_argument("delta_rel must be nonnegative");
}

Vec3 VelocityGrid::node(std::size_t idx) const {
    const int i = static_cast<int>(idx % n);
    const int j = static_cast<int>((idx / n) % n);
    const int k = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
    return {coord(i), coord(j), coord(k)};
}

VelocityGrid make_grid(int n, double radius) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("grid size n must be even and >= 4");
    if (!(radius > 0.0)) throw std::invalid_argument("grid radius must be positive");
    return VelocityGrid{n, radius, 2.0 * radius / n};
}

double Distribution::mass() const {
    double m = 0.0;
    for (double v : values) m += v;
    return m * grid.cell_volume();
}

double Distribution::max_value() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

bool Distribution::nonnegative() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0; });
}

double phi(double r, const KernelParams& kp) {
    if (r < 0.0) throw std::invalid_argument("phi: negative relative speed");
    const double r2 = r * r + kp.delta_rel * kp.delta_rel;
    if (r2 == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(r2, 0.5 * kp.gamma);
}

bool phi_is_singular(double value) { return std::isinf(value); }

double phi_cell_average(double h, double gamma) {
    // Split the cube into six pyramids with apex at the centre; the radial
    // factor integrates to 1/(gamma+3), leaving a smooth face integral.
    const auto gl = gauss_legendre(24);
    const double a = 0.5 * h;
    double face = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
            const double x = a * gl.nodes[i], y = a * gl.nodes[j];
            face += gl.weights[i] * gl.weights[j] * std::pow(x * x + y * y + a * a, 0.5 * gamma);
        }
    }
    face *= a * a;
    const double integral = 6.0 * a * face / (gamma + 3.0);
    return integral / (h * h * h);
}

double phi_lattice(double r, double h, const KernelParams& kp) {
    if (r == 0.0 && kp.delta_rel == 0.0) return phi_cell_average(h, kp.gamma);
    return phi(r, kp);
}

double b_of_theta(double theta, const KernelParams& kp) {
    if (theta > kPi / 2) return 0.0;
    const double t = std::max(theta, kp.eps_theta);
    return kp.b0 * std::pow(t, -(1.0 + 2.0 * kp.s)) / std::sin(t);
}

double b_angular(double cos_theta, const KernelParams& kp) {
    if (!(cos_theta >= -1.0 && cos_theta <= 1.0)) throw std::invalid_argument("b_angular: cos_theta outside [-1,1]");
    return b_of_theta(std::acos(cos_theta), kp);
}

double b_sphere_integral(const KernelParams& kp, int nodes) {
    const double eps = kp.eps_theta;
    const double plateau = b_of_theta(eps, kp) * (1.0 - std::cos(eps));
    // substitute theta = eps * (pi/(2 eps))^t to resolve the algebraic singularity
    const auto gl = gauss_legendre(nodes);
    const double L = std::log(kPi / (2.0 * eps));
    double tail = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double t = 0.5 * (gl.nodes[i] + 1.0);
        const double th = eps * std::exp(L * t);
        tail += 0.5 * gl.weights[i] * b_of_theta(th, kp) * std::sin(th) * th * L;
    }
    return 2.0 * kPi * (plateau + tail);
}

KernelParams from_inverse_power_law(double ell_pow) {
    KernelParams kp;
    kp.gamma = (ell_pow - 4.0) / ell_pow;
    kp.s = 1.0 / ell_pow;
    if (!(kp.gamma > -3.0 && kp.gamma < 0.0) || !(kp.s > 0.0 && kp.s < 1.0))
        throw std::invalid_argument("inverse power law exponent must lie in (1,4)");
    return kp;
}

Distribution maxwellian(const VelocityGrid& grid, double rho, const Vec3& u, double T) {
    if (!(rho > 0.0) || !(T > 0.0)) throw std::invalid_argument("maxwellian: rho and T must be positive");
    Distribution f(grid);
    const double norm = rho * std::pow(2.0 * kPi * T, -1.5);
    for (int k = 0; k < grid.n; ++k)
        for (int j = 0; j < grid.n; ++j)
            for (int i = 0; i < grid.n; ++i) {
                const double dx = grid.coord(i) - u[0], dy = grid.coord(j) - u[1], dz = grid.coord(k) - u[2];
                f.at(i, j, k) = norm * std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * T));
            }
    return f;
}

Distribution bump(const VelocityGrid& grid, const Vec3& center, double width, double mass) {
    if (!(width > 0.0) || !(mass > 0.0)) throw std::invalid_argument("bump: width and mass must be positive");
    Distribution f(grid);
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3 v = grid.node(i);
        const double r2 = ((v[0] - center[0]) * (v[0] - center[0]) + (v[1] - center[1]) * (v[1] - center[1]) +
                           (v[2] - center[2]) * (v[2] - center[2])) /
                          (width * width);
        if (r2 < 1.0) f.values[i] = (1.0 - r2) * (1.0 - r2);
        sum += f.values[i];
    }
    if (!(sum > 0.0)) throw std::invalid_argument("bump: support contains no grid node");
    const double scale = mass / (sum * grid.cell_volume());
    for (double& x : f.values) x *= scale;
    return f;
}

Distribution spike(const VelocityGrid& grid, int i, int j, int k, double mass) {
    if (i < 0 || j < 0 || k < 0 || i >= grid.n || j >= grid.n || k >= grid.n)
        throw std::invalid_argument("spike: node outside grid");
    Distribution f(grid);
    f.at(i, j, k) = mass / grid.cell_volume();
    return f;
}

std::string ClassUReport::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << "check_name=class_u\nmass=" << mass << "\nentropy_energy=" << entropy_energy
       << "\nmass_ok=" << mass_ok << "\nenergy_ok=" << energy_ok << "\npass=" << pass << "\n";
    return os.str();
}

ClassUReport check_class_u(const Distribution& f, const ClassUParams& params) {
    ClassUReport rep;
    const double dv = f.grid.cell_volume();
    double m = 0.0, e = 0.0;
    for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
        const double v = f.values[idx];
        if (v <= 0.0) continue;
        const Vec3 x = f.grid.node(idx);
        m += v;
        e += v * (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + std::log1p(v));
    }
    rep.mass = m * dv;
    rep.entropy_energy = e * dv;
    rep.mass_ok = rep.mass >= params.d0 && rep.mass > 0.0;
    rep.energy_ok = rep.entropy_energy <= params.e0;
    rep.pass = rep.mass_ok && rep.energy_ok;
    return rep;
}

}  // namespace boltzlp
