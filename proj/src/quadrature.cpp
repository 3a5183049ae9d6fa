#include "boltzlp/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace boltzlp {

GaussRule gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    cache[n] = r;
    return r;
}

void AngularQuadrature::validate() const {
    if (n_theta < 4 || n_phi < 4) throw std::invalid_argument("angular quadrature needs n_theta, n_phi >= 4");
    if (!(grading >= 1.0)) throw std::invalid_argument("angular grading must be >= 1");
}

SphereRule make_sphere_rule(const AngularQuadrature& aq, const KernelParams& kp) {
    aq.validate();
    SphereRule r;
    r.n_theta = aq.n_theta;
    r.n_phi = aq.n_phi;
    const auto gl = gauss_legendre(aq.n_theta);
    const double span = kPi / 2 - kp.eps_theta;
    std::vector<double> wt(aq.n_theta);
    for (int i = 0; i < aq.n_theta; ++i) {
        const double t = 0.5 * (gl.nodes[i] + 1.0);
        const double th = kp.eps_theta + span * std::pow(t, aq.grading);
        const double jac = span * aq.grading * std::pow(t, aq.grading - 1.0);
        r.theta.push_back(th);
        r.cos_theta.push_back(std::cos(th));
        r.sin_theta.push_back(std::sin(th));
        r.b.push_back(b_of_theta(th, kp));
        wt[i] = 0.5 * gl.weights[i] * jac * std::sin(th);
    }
    const double dphi = 2.0 * kPi / aq.n_phi;
    for (int j = 0; j < aq.n_phi; ++j) {
        const double ph = dphi * (j + 0.5);
        r.cos_phi.push_back(std::cos(ph));
        r.sin_phi.push_back(std::sin(ph));
    }
    for (int i = 0; i < aq.n_theta; ++i)
        for (int j = 0; j < aq.n_phi; ++j) r.weight.push_back(wt[i] * dphi);
    return r;
}

}  // namespace boltzlp
