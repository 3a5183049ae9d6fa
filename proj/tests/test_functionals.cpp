#include "doctest.h"

#include "boltzlp/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace boltzlp;

namespace {

const KernelParams kKernel{-1.0, 0.5, 1.0, 0.05, 0.5};

Distribution scaled(Distribution f, double c) {
    for (double& v : f.values) v *= c;
    return f;
}

Distribution random_field(const VelocityGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.8, 0.8), w(0.6, 1.4);
    Distribution f = maxwellian(g, w(rng), {u(rng), u(rng), u(rng)}, w(rng));
    const Distribution b = bump(g, {u(rng), u(rng), u(rng)}, 1.5 + w(rng), w(rng));
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += b.values[i];
    return f;
}

}  // namespace

TEST_CASE("lebesgue norms") {
    const VelocityGrid g = make_grid(8, 4.0);
    Distribution one(g, 1.0);
    const double vol = g.cell_volume() * g.size();
    CHECK(lp_norm(one, 1.0) == doctest::Approx(vol));
    CHECK(lp_norm(one, 2.0) == doctest::Approx(std::sqrt(vol)));
    CHECK(lp_norm(one, kInfP) == 1.0);
    const Distribution s = spike(g, 2, 3, 4, 1.0);
    CHECK(lp_norm(s, kInfP) == doctest::Approx(1.0 / g.cell_volume()));
    CHECK(lp_norm(s, 1.0) == doctest::Approx(1.0));
    // L^p interpolates between L^1 and L^inf for the spike
    CHECK(lp_norm(s, 3.0) == doctest::Approx(std::pow(g.cell_volume(), 1.0 / 3.0 - 1.0)));
    CHECK(weighted_lp(one, 2.0, 0.0) == doctest::Approx(lp_norm(one, 2.0)));
}

TEST_CASE("weighted L1 of the unit Maxwellian") {
    const VelocityGrid g = make_grid(24, 8.0);
    const Distribution M = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
    // <v>^2 = 1 + |v|^2 integrates to 1 + 3
    CHECK(weighted_l1(M, 2.0) == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(weighted_l1(M, 0.0) == doctest::Approx(1.0).epsilon(1e-6));
    const double l2 = weighted_l2(M, 0.0);
    CHECK(l2 * l2 == doctest::Approx(std::pow(4.0 * kPi, -1.5)).epsilon(1e-6));
}

TEST_CASE("fractional Sobolev norm") {
    const VelocityGrid g = make_grid(16, 6.0);
    const Distribution M = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
    CHECK(sobolev_weighted(M, 0.0, 0.0) == doctest::Approx(lp_norm(M, 2.0)).epsilon(1e-12));
    CHECK(sobolev_weighted(scaled(M, 3.0), 0.5, 0.0) == doctest::Approx(3.0 * sobolev_weighted(M, 0.5, 0.0)).epsilon(1e-12));
    CHECK(sobolev_weighted(M, 0.25, 0.0) < sobolev_weighted(M, 0.75, 0.0));
    // Gaussian oracle: |hat M|^2 = (2 pi)^-3 exp(-|xi|^2), so ||M||_{H^1}^2 = (4pi)^{-3/2} (1 + 3/2)
    const double h1 = sobolev_weighted(M, 1.0, 0.0, 4);
    CHECK(h1 * h1 == doctest::Approx(std::pow(4.0 * kPi, -1.5) * 2.5).epsilon(2e-3));
    CHECK_THROWS_AS(sobolev_weighted(M, 0.5, 0.0, 1), std::invalid_argument);
}

TEST_CASE("norm report fields") {
    const VelocityGrid g = make_grid(8, 4.0);
    const Distribution M = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
    const NormReport r = norm_report(M, 2.0, 5.0, kKernel);
    CHECK(r.lp == doctest::Approx(lp_norm(M, 2.0)));
    CHECK(r.l1_w == doctest::Approx(weighted_l1(M, 5.0)));
    CHECK(r.hs_gamma_half_of_fp2 * r.hs_gamma_half_of_fp2 == doctest::Approx(hs_gamma_half_sq(M, 2.0, kKernel)));
}

TEST_CASE("discrete I_p and J_p: signs, homogeneity, constants") {
    const VelocityGrid g = make_grid(8, 4.0);
    const AngularQuadrature aq;
    std::mt19937_64 rng(23);
    const Distribution a = random_field(g, rng), b = random_field(g, rng);
    for (double p : {1.5, 2.0, 3.0}) {
        const double I = eval_Ip(a, b, p, kKernel, aq).value;
        const double J = eval_Jp(a, b, p, kKernel, aq).value;
        CHECK(std::isfinite(I));
        CHECK(J >= 0.0);
        // linear in g, degree p in f
        CHECK(eval_Ip(scaled(a, 2.0), b, p, kKernel, aq).value == doctest::Approx(2.0 * I).epsilon(1e-10));
        CHECK(eval_Ip(a, scaled(b, 2.0), p, kKernel, aq).value == doctest::Approx(std::pow(2.0, p) * I).epsilon(1e-10));
        CHECK(eval_Jp(a, scaled(b, 2.0), p, kKernel, aq).value == doctest::Approx(std::pow(2.0, p) * J).epsilon(1e-10));
        FunctionalOptions ex;
        ex.exact_table = true;
        CHECK(eval_Ip(a, b, p, kKernel, aq, ex).value == doctest::Approx(I).epsilon(1e-2));
    }
    FunctionalOptions per;
    per.periodic = true;
    const Distribution c(g, 0.3);
    CHECK(std::abs(eval_Ip(a, c, 2.0, kKernel, aq, per).value) <= 1e-14);
    CHECK(eval_Jp(a, c, 2.0, kKernel, aq, per).value <= 1e-14);
}

TEST_CASE("I_p against the Monte Carlo estimator") {
    const VelocityGrid g = make_grid(8, 4.0);
    const AngularQuadrature aq;
    const Distribution a = maxwellian(g, 1.0, {0.4, 0, 0}, 0.8);
    const Distribution b = bump(g, {-0.3, 0.2, 0}, 2.5, 1.0);
    const double I = eval_Ip(a, b, 2.0, kKernel, aq).value;
    const MonteCarloEstimate mc = eval_Ip_monte_carlo(a, b, 2.0, kKernel, aq, 200000, 3);
    CHECK(mc.samples >= 199000);
    CHECK(mc.samples <= 200000);
    CHECK(mc.std_error > 0.0);
    CHECK(std::abs(I - mc.value) <= 3.0 * mc.std_error);
}

TEST_CASE("upper functional") {
    const VelocityGrid g = make_grid(8, 4.0);
    const Distribution M = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
    const Distribution s = spike(g, 3, 3, 3, 1.0);
    // a spike against itself only sees the diagonal cell average
    const double v = eval_Ip_upper(s, s, 2.0, kKernel).value;
    const double h3 = g.cell_volume();
    CHECK(v == doctest::Approx(phi_lattice(0.0, g.spacing, kKernel) / h3).epsilon(1e-12));
    CHECK(eval_Ip_upper(M, M, 2.0, kKernel).value > 0.0);
    CHECK(eval_Ip_upper(scaled(M, 2.0), M, 2.0, kKernel).value == doctest::Approx(2.0 * eval_Ip_upper(M, M, 2.0, kKernel).value));
    KernelParams flat = kKernel;
    flat.gamma = 0.0;
    // gamma = 0: Phi = 1, so the functional factorises into mass times ||f||_p^p
    CHECK(eval_Ip_upper(M, M, 2.0, flat).value == doctest::Approx(M.mass() * std::pow(lp_norm(M, 2.0), 2.0)).epsilon(1e-10));
}

TEST_CASE("entropy-type inequality for Q(g,f) against f^{p-1}") {
    const VelocityGrid g = make_grid(8, 4.0);
    const AngularQuadrature aq;
    std::mt19937_64 rng(29);
    for (int t = 0; t < 3; ++t) {
        const Distribution a = random_field(g, rng), b = random_field(g, rng);
        for (double p : {1.5, 2.0, 3.0}) {
            const Lemma21Result r = lemma21_check(a, b, p, kKernel, aq);
            CHECK(r.pass);
            CHECK(r.lhs <= r.rhs + 1e-12 * std::abs(r.rhs));
            CHECK(r.jp >= 0.0);
        }
    }
}

TEST_CASE("coercivity fit") {
    const VelocityGrid g = make_grid(8, 4.0);
    const AngularQuadrature aq;
    const Distribution M = maxwellian(g, 1.0, {0, 0, 0}, 0.6);
    const CoercivityFit one = coercivity_fit({M}, 2.0, kKernel, aq);
    CHECK(one.feasible);
    CHECK(one.c0_positive);
    CHECK(one.c1 == doctest::Approx(0.0));
    CHECK(one.c0 == doctest::Approx(one.jp[0] / one.hs_sq[0]).epsilon(1e-9));
    std::vector<Distribution> fam;
    for (double T : {0.4, 0.7, 1.0}) fam.push_back(maxwellian(g, 1.0, {0, 0, 0}, T));
    const CoercivityFit fit = coercivity_fit(fam, 2.0, kKernel, aq);
    CHECK(fit.feasible);
    for (std::size_t i = 0; i < fam.size(); ++i)
        CHECK(fit.jp[i] >= fit.c0 * fit.hs_sq[i] - fit.c1 * fit.l2_sq[i] - 1e-10 * fit.jp[i]);
    CHECK_THROWS_AS(coercivity_fit({}, 2.0, kKernel, aq), std::invalid_argument);
}

TEST_CASE("hardy check") {
    const VelocityGrid g = make_grid(8, 4.0);
    const CheckReport zero = hardy_check(Distribution(g), 0.5);
    CHECK(zero.pass);
    const Distribution M = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
    const CheckReport r = hardy_check(M, 0.5);
    CHECK(r.lhs > 0.0);
    CHECK(r.rhs > 0.0);
    CHECK(r.ratio == doctest::Approx(r.lhs / r.rhs));
    // both sides scale quadratically
    const CheckReport r2 = hardy_check(scaled(M, 3.0), 0.5);
    CHECK(r2.ratio == doctest::Approx(r.ratio).epsilon(1e-10));
    CHECK_THROWS_AS(hardy_check(M, 1.0), std::invalid_argument);
}

TEST_CASE("HLS exponent relation") {
    CHECK(hls_exponent(1.0, 1.5) == doctest::Approx(3.0));
    CHECK(hls_exponent(0.5, 2.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(hls_exponent(2.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(hls_exponent(1.0, 1.0), std::invalid_argument);
    const VelocityGrid g = make_grid(8, 4.0);
    const Distribution M = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
    CHECK_THROWS_AS(hls_check(M, 1.0, 1.5, 2.0), std::invalid_argument);
    const CheckReport r = hls_check(M, 1.0, 1.5, 3.0);
    CHECK(r.pass);
    CHECK(r.ratio > 0.0);
    CHECK(hls_check(scaled(M, 2.0), 1.0, 1.5, 3.0).ratio == doctest::Approx(r.ratio).epsilon(1e-12));
}

TEST_CASE("Sobolev embedding exponent") {
    CHECK(sobolev_exponent(2.0, 0.5) == doctest::Approx(3.0));
    CHECK(sobolev_exponent(1.0, 0.75) == doctest::Approx(2.0));
    CHECK(conjugate(2.0) == 2.0);
    CHECK(conjugate(3.0) == 1.5);
    const VelocityGrid g = make_grid(8, 4.0);
    const Distribution M = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
    const CheckReport r = sobolev_embedding_check(M, 2.0, 0.5, -1.0);
    CHECK(r.pass);
    CHECK(r.extra.front().first == "p_s");
    CHECK_THROWS_AS(sobolev_embedding_check(M, 2.0, 1.0, -1.0), std::invalid_argument);
}
