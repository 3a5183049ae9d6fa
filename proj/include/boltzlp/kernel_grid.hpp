#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace boltzlp {

using Vec3 = std::array<double, 3>;

inline constexpr double kPi = 3.14159265358979323846;

enum class Regime { moderately_soft, very_soft };

const char* regime_name(Regime r);

struct KernelParams {
    double gamma = -1.0;
    double s = 0.5;
    double b0 = 1.0;
    double eps_theta = 0.05;
    double delta_rel = 0.0;  // mollification length of Phi (velocity units)

    Regime regime() const { return gamma > -2.0 * s ? Regime::moderately_soft : Regime::very_soft; }
    // throws std::invalid_argument on out-of-range fields
    void validate() const;
};

struct VelocityGrid {
    int n = 0;
    double radius = 0.0;
    double spacing = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
    double cell_volume() const { return spacing * spacing * spacing; }
    // Cell-center coordinate; (i + 1/2 - n/2) is exact so c(i) == -c(n-1-i) bitwise.
    double coord(int i) const { return (i + 0.5 - 0.5 * n) * spacing; }
    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(n) * (j + static_cast<std::size_t>(n) * k);
    }
    Vec3 node(std::size_t idx) const;
    bool operator==(const VelocityGrid& o) const { return n == o.n && radius == o.radius; }
    bool operator!=(const VelocityGrid& o) const { return !(*this == o); }
};

VelocityGrid make_grid(int n, double radius);

struct Distribution {
    VelocityGrid grid;
    std::vector<double> values;
    double time_tag = 0.0;

    Distribution() = default;
    explicit Distribution(const VelocityGrid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

    double& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
    double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
    double mass() const;
    double max_value() const;
    bool nonnegative() const;
};

// Phi(r) = (r^2 + delta^2)^{gamma/2}; +inf when delta == 0 and r == 0.
double phi(double r, const KernelParams& kp);
bool phi_is_singular(double value);
// Cell average of |w|^gamma over a cube of side h centred at 0 (delta = 0 diagonal).
double phi_cell_average(double h, double gamma);
// Phi for a lattice pair; uses the cell average on the diagonal when delta == 0.
double phi_lattice(double r, double h, const KernelParams& kp);

double b_angular(double cos_theta, const KernelParams& kp);
double b_of_theta(double theta, const KernelParams& kp);
// 2*pi * int_0^{pi/2} b sin(theta) dtheta, including the plateau below eps_theta.
double b_sphere_integral(const KernelParams& kp, int nodes = 2000);

KernelParams from_inverse_power_law(double ell_pow);

Distribution maxwellian(const VelocityGrid& grid, double rho, const Vec3& u, double T);
// Compact bump (1 - |v-c|^2/width^2)_+^2, scaled so the grid mass equals `mass`.
// Not a Maxwellian, so it evolves under Q.
Distribution bump(const VelocityGrid& grid, const Vec3& center, double width, double mass);
Distribution spike(const VelocityGrid& grid, int i, int j, int k, double mass);

struct ClassUParams {
    double d0 = 0.0;
    double e0 = 0.0;
    double w = 5.0;
};

struct ClassUReport {
    double mass = 0.0;
    double entropy_energy = 0.0;  // int f (1 + |v|^2 + log(1+f))
    bool mass_ok = false;
    bool energy_ok = false;
    bool pass = false;
    std::string to_string() const;
};

ClassUReport check_class_u(const Distribution& f, const ClassUParams& params);

inline double japanese(const Vec3& v) { return std::sqrt(1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace boltzlp
