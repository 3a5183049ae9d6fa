#pragma once

#include "boltzlp/kernel_grid.hpp"
#include "boltzlp/quadrature.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace boltzlp {

std::pair<Vec3, Vec3> post_collision_velocities(const Vec3& v, const Vec3& v_star, const Vec3& sigma);

struct CollisionStats {
    std::uint64_t kernel_evals = 0;
    std::uint64_t dropped_events = 0;
    double wall_ms = 0.0;
    double leakage = 0.0;  // collision rate of events whose stencil leaves the cube
    std::string to_string() const;
};

struct CollisionOutput {
    Distribution q_values;
    std::optional<std::pair<Distribution, Distribution>> gain_loss_split;  // (gain, loss), q = gain - loss
    CollisionStats eval_stats;
};

struct CollisionOptions {
    bool periodic = false;  // wrap indices instead of dropping boundary events
    bool gain_loss_split = false;
};

// Post-collision projection of one event, relative to the pre-collision node.
// The pair (v', v'_*) is distributed on lattice nodes (lambda, mu) with weight
// 1-r and (lambda+s, mu-s) with weight r, where mu = alpha + beta - lambda.
struct EventProjection {
    std::array<int, 3> dl{};
    std::array<int, 3> s{};
    double r = 0.0;
    bool valid = true;
    bool noop() const { return valid && r == 0.0 && dl[0] == 0 && dl[1] == 0 && dl[2] == 0; }
};

struct OffsetFrame {
    Vec3 k{}, e1{}, e2{};
    double norm = 0.0;  // |u| in index units
};

// u is canonical when it is lexicographically positive.
bool offset_is_canonical(const std::array<int, 3>& u);
OffsetFrame offset_frame(const std::array<int, 3>& u);
// Projection for a canonical offset u = alpha - beta and one quadrature direction.
EventProjection project_event(const std::array<int, 3>& u, const OffsetFrame& fr, double cos_t, double sin_t,
                              double cos_p, double sin_p, Vec3* rel_post = nullptr);

CollisionOutput q_direct(const Distribution& g, const Distribution& f, const KernelParams& kp,
                         const AngularQuadrature& aq, const CollisionOptions& opts = {});

struct FastConfig {
    bool compress = true;  // merge events sharing a stencil, Chebyshev nodes in r
    int r_nodes = 3;
    double max_table_mb = 2048.0;
    void validate(int n) const;
};

CollisionOutput q_fast(const Distribution& g, const Distribution& f, const KernelParams& kp,
                       const AngularQuadrature& aq, const FastConfig& cfg = {});

// Largest per-node loss rate sum_{beta,sigma} omega g_beta over non-trivial events.
double max_loss_rate(const Distribution& g, const KernelParams& kp, const AngularQuadrature& aq);

using PhiFn = std::function<double(const Vec3&)>;

double pairing_direct(const CollisionOutput& q, const PhiFn& phi_fn);

struct PairingOptions {
    bool printed_variant = false;  // use g'_* f_* in place of g'_* f'
    bool periodic = false;
    bool exact_post = false;       // asym only: phi at the exact v', loss side only (no pre/post image)
};

double q_weak_pairing_sym(const Distribution& g, const Distribution& f, const PhiFn& phi_fn,
                          const KernelParams& kp, const AngularQuadrature& aq, const PairingOptions& opts = {});
double q_weak_pairing_asym(const Distribution& g, const Distribution& f, const PhiFn& phi_fn,
                           const KernelParams& kp, const AngularQuadrature& aq, const PairingOptions& opts = {});

struct Moments {
    double mass = 0.0;
    Vec3 momentum{};
    double energy = 0.0;
};

Moments moments(const Distribution& f);
double h_functional(const Distribution& f);

void save_collision_output(const std::string& path_prefix, const CollisionOutput& out);

}  // namespace boltzlp
