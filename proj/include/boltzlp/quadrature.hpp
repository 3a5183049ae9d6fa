#pragma once

#include "boltzlp/kernel_grid.hpp"

#include <vector>

namespace boltzlp {

struct GaussRule {
    std::vector<double> nodes;  // on [-1,1]
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

struct AngularQuadrature {
    int n_theta = 16;
    int n_phi = 8;
    double grading = 2.0;
    void validate() const;
};

// Tensor rule on the cap theta in [eps_theta, pi/2]; weights include sin(theta)
// and the azimuthal factor, so they sum to 2*pi*cos(eps_theta).
struct SphereRule {
    std::vector<double> theta;
    std::vector<double> cos_theta;
    std::vector<double> sin_theta;
    std::vector<double> cos_phi;
    std::vector<double> sin_phi;
    std::vector<double> weight;  // per (theta, phi) node, theta-major
    std::vector<double> b;       // b(cos theta) per theta node
    int n_theta = 0;
    int n_phi = 0;
    std::size_t size() const { return weight.size(); }
};

SphereRule make_sphere_rule(const AngularQuadrature& aq, const KernelParams& kp);

}  // namespace boltzlp
