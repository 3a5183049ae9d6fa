#include "doctest.h"

#include "boltzlp/analysis_params.hpp"

#include <cmath>
#include <stdexcept>

using namespace boltzlp;
namespace ex = boltzlp::exponents;

namespace {

bool margins_positive(const ExponentSolution& sol) {
    for (const auto& [k, m] : sol.margins)
        if (!(m >= kFeasibleSlack)) return false;
    return true;
}

}  // namespace

TEST_CASE("system id names round trip") {
    for (SystemId id : {SystemId::theta3, SystemId::lemma26ii, SystemId::lemma26iii, SystemId::theta4, SystemId::theta5,
                        SystemId::theta67r, SystemId::theta89lq, SystemId::theta1011, SystemId::alphas, SystemId::K_threshold})
        CHECK(parse_system_id(system_id_name(id)) == id);
    CHECK_THROWS_AS(parse_system_id("theta12"), std::invalid_argument);
}

TEST_CASE("theta3 at p = 2, s = 1/2") {
    const ExponentSolution sol = solve_theta3(2.0, 0.5);
    CHECK(sol.feasible);
    CHECK(sol.at("p_s") == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(std::abs(sol.at("theta3") - 0.75) <= 1e-12);
    CHECK(std::abs(sol.at("alpha1") - 3.0) <= 1e-12);
    // hand oracle: 1/2 = (1 - t) + t/3  =>  t = 3/4
    const double t = sol.at("theta3");
    CHECK(std::abs((1.0 - t) + t / 3.0 - 0.5) <= 1e-15);
    CHECK(ex::theta3(Rational(2), Rational(1, 2)) == Rational(3, 4));
    CHECK(ex::alpha1(Rational(3, 4)) == Rational(3));
    CHECK_THROWS_AS(solve_theta3(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(solve_theta3(0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(solve_theta3(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sol.at("theta99"), std::out_of_range);
}

TEST_CASE("theta3 and alpha1 increase with p") {
    for (double s = 0.1; s <= 0.9 + 1e-9; s += 0.1) {
        double prev_t = 0.0, prev_a = 0.0;
        for (double p = 1.01; p <= 10.0; p += 0.01) {
            const ExponentSolution sol = solve_theta3(p, s);
            CHECK(sol.feasible);
            CHECK(sol.at("theta3") > prev_t);
            CHECK(sol.at("alpha1") > prev_a);
            CHECK(sol.at("alpha1") > 0.0);
            prev_t = sol.at("theta3");
            prev_a = sol.at("alpha1");
        }
    }
}

TEST_CASE("interpolation exponents q and theta1, theta2") {
    const ExponentSolution ii = solve_lemma26(1.2, -1.0, 0.5, Lemma26Variant::ii);
    CHECK(ii.feasible);
    // independent recomputation of the arithmetic
    const double q = 1.0 / (2.0 - 1.0 / 3.0 - 1.0 / 1.2);
    const double ps = 3.0 * 1.2 / 2.0;
    const double th1 = (1.0 / (1.2 * q) - 1.0 / ps) / (1.0 - 1.0 / ps);
    CHECK(q == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(ii.at("q") == doctest::Approx(q).epsilon(1e-14));
    CHECK(ii.at("theta1") == doctest::Approx(0.3125).epsilon(1e-12));
    CHECK(ii.at("theta1") == doctest::Approx(th1).epsilon(1e-12));
    const Rational rq = Rational(1) / ex::inv_q(Rational(6, 5), Rational(-1));
    CHECK(rq == Rational(6, 5));
    CHECK(ex::interp_theta(Rational(1) / (Rational(6, 5) * rq), ex::sobolev_ps(Rational(6, 5), Rational(1, 2))) == Rational(5, 16));

    const ExponentSolution bad = solve_lemma26(1.6, -1.0, 0.5, Lemma26Variant::ii);
    CHECK_FALSE(bad.feasible);
    REQUIRE_FALSE(bad.violated.empty());
    CHECK(bad.violated.front() == "p_lt_p_upper");

    const ExponentSolution iii = solve_lemma26(4.0, -1.0, 0.5, Lemma26Variant::iii, 1.2);
    CHECK(iii.feasible);
    CHECK(iii.at("q0") == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(iii.at("p_s") == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(iii.margins.at("pq_lt_ps") == doctest::Approx(6.0 - 4.8).epsilon(1e-12));
    CHECK_THROWS_AS(solve_lemma26(4.0, -1.0, 0.5, Lemma26Variant::iii), std::invalid_argument);
}

TEST_CASE("theta4 and theta5") {
    for (double gamma : {-0.5, -1.0, -2.0, -2.5})
        for (double s = 0.1; s <= 0.9 + 1e-9; s += 0.1) {
            if (3.0 + gamma + 2.0 * s <= 0.0) continue;
            const AdmissibleRange ar = admissible_range(gamma, s);
            const double p_lo = std::max(ar.p_lower, 1.0);
            for (double f = 0.1; f < 0.95; f += 0.2) {
                const double p0 = p_lo + f * (ar.p_upper_lemma - p_lo);
                const ExponentSolution t4 = solve_theta4(p0, gamma, s);
                if (t4.feasible) CHECK(t4.at("inv_theta4") > p0);
                const ExponentSolution t5 = solve_theta5(p0 + 2.0, p0, gamma, s);
                if (t5.feasible) CHECK(margins_positive(t5));
            }
        }
    const ExponentSolution t4 = solve_theta4(1.2, -1.0, 0.5);
    CHECK(t4.feasible);
    CHECK(t4.at("inv_theta4") > 1.2);
}

TEST_CASE("theta67 and r at p = 2, s = 1/2") {
    const ExponentSolution sol = solve_theta67_r(2.0, 0.5);
    CHECK(sol.feasible);
    CHECK(sol.at("theta6") == 0.01);
    CHECK(std::abs(sol.at("theta7") - 2.0 / 3.0) <= 1e-12);
    CHECK(std::abs(sol.at("r") - 347.0 / 150.0) <= 1e-12);
    CHECK(sol.at("r") > 2.0);
    CHECK(sol.at("r") < 3.0);
    const Rational r = ex::r_value(Rational(2), Rational(1, 2), Rational(1, 100), ex::theta7_default(Rational(2), Rational(1, 2)));
    CHECK(r == Rational(347, 150));
    CHECK(ex::all_satisfied(ex::constraints_theta67(Rational(2), Rational(1, 2), Rational(1, 100), Rational(2, 3))));

    const ExponentSolution bad = solve_theta67_r(2.0, 0.5, 0.99, 2.0 / 3.0);
    CHECK_FALSE(bad.feasible);
    CHECK(bad.margins.at("theta6_plus_theta7_lt_1") < 0.0);
}

TEST_CASE("theta89, ell and q") {
    const ExponentSolution sol = solve_theta89_lq(2.0, 0.5, 1.05);
    CHECK(sol.feasible);
    CHECK(sol.at("ell") == doctest::Approx(347.0 / 150.0 / 1.05).epsilon(1e-12));
    CHECK(sol.at("ell") == doctest::Approx(2.2032).epsilon(1e-4));
    const ExponentSolution def = solve_theta89_lq(2.0, 0.5);
    CHECK(def.feasible);
    CHECK(def.at("q") == doctest::Approx(1.05));
    const double r = 347.0 / 150.0;
    const ExponentSolution edge = solve_theta89_lq(2.0, 0.5, r / 2.0);
    CHECK_FALSE(edge.feasible);
    CHECK(edge.margins.at("ell_gt_p") <= kFeasibleSlack);
    for (double q = 1.001; q < 1.15; q += 0.002) CHECK(solve_theta89_lq(2.0, 0.5, q).feasible);
}

TEST_CASE("theta10 and theta11") {
    const ExponentSolution sol = solve_theta1011(0.5);
    CHECK(sol.feasible);
    CHECK(sol.at("alpha") == doctest::Approx(0.01 + 2.0 / 3.0 + 3.0 * (1.0 - 0.01 - 1.0 / 3.0) - 1.0).epsilon(1e-12));
    CHECK(sol.at("alpha") == doctest::Approx(1.6467).epsilon(1e-4));
    CHECK_FALSE(solve_theta1011(0.5, 0.7, 0.4).feasible);
    for (double s = 0.1; s <= 0.9 + 1e-9; s += 0.05) {
        const ExponentSolution x = solve_theta1011(s);
        CHECK(x.feasible);
        CHECK(x.margins.at("tail_le_1") >= 0.0);
    }
}

TEST_CASE("De Giorgi exponents at p = 2, s = 1/2") {
    const ExponentSolution s67 = solve_theta67_r(2.0, 0.5);
    const ExponentSolution s89 = solve_theta89_lq(2.0, 0.5);
    const ExponentSolution d = derive_degiorgi_exponents(2.0, 0.5, s67, s89, 1.0);
    CHECK(d.feasible);
    CHECK(std::abs(d.at("alpha3") - 691.0 / 600.0) <= 1e-12);
    CHECK(ex::alpha3(Rational(2), Rational(1, 2), Rational(1, 100), Rational(2, 3)) == Rational(691, 600));
    CHECK(d.at("alpha4") > 1.0);
    // W0 = C = 1 closed form
    const double a3 = d.at("alpha3"), a4 = d.at("alpha4"), a = d.at("a"), b = d.at("b");
    const double R0 = std::max(std::pow(2.0, a4 + a * a3 / (a3 - 1.0)), std::pow(2.0, 1.0 + a * a3 / (a3 - 1.0)));
    CHECK(d.at("R0") == doctest::Approx(R0).epsilon(1e-12));
    CHECK(d.at("K_threshold") == doctest::Approx(std::pow(R0, 1.0 / b)).epsilon(1e-10));
    CHECK(a == doctest::Approx(std::max(d.at("r") - 1.0, d.at("ell") - 1.0)));
    // R0 > 1 here, so b is the smaller gap
    CHECK(b == doctest::Approx(std::min(d.at("r") - 2.0, d.at("ell") - 2.0)));
    // a tiny W0 pushes R0 below 1 and b switches to the larger gap
    const ExponentSolution small = derive_degiorgi_exponents(2.0, 0.5, s67, s89, 1e-300);
    CHECK(small.at("log2_R0") < 0.0);
    CHECK(small.at("b") == doctest::Approx(std::max(d.at("r") - 2.0, d.at("ell") - 2.0)));
    CHECK_THROWS_AS(derive_degiorgi_exponents(2.0, 0.5, s67, s89, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(derive_degiorgi_exponents(2.0, 0.5, solve_theta67_r(2.0, 0.5, 0.99, 0.5), s89, 1.0),
                    std::invalid_argument);
}

TEST_CASE("exponent sweep stays feasible") {
    for (double gamma : {-0.5, -1.0, -2.0, -2.5})
        for (double s = 0.1; s <= 0.9 + 1e-9; s += 0.1) {
            if (3.0 + gamma + 2.0 * s <= 0.0) continue;
            const AdmissibleRange ar = admissible_range(gamma, s);
            for (double p = std::max(1.1, ar.p_lower + 0.05); p <= 10.0; p += 0.25) {
                const ExponentSolution t3 = solve_theta3(p, s);
                const ExponentSolution s67 = solve_theta67_r(p, s);
                const ExponentSolution s89 = solve_theta89_lq(p, s);
                CHECK(t3.feasible);
                CHECK(s67.feasible);
                CHECK(s89.feasible);
                CHECK(margins_positive(s67));
                CHECK(margins_positive(s89));
                const ExponentSolution d = derive_degiorgi_exponents(p, s, s67, s89, 1.0);
                CHECK(d.feasible);
                CHECK(d.at("alpha3") > 1.0);
                CHECK(d.at("alpha4") > 1.0);
                CHECK(solve_alphas(p, s, 1.0).feasible);
            }
        }
}

TEST_CASE("alphas composite") {
    const ExponentSolution a = solve_alphas(2.0, 0.5, 2.0);
    CHECK(a.feasible);
    CHECK(a.at("alpha6") == doctest::Approx(2.0 * (a.at("alpha3") + a.at("alpha4") - 2.0)));
    CHECK_FALSE(solve_alphas(2.0, 0.5, 0.0).feasible);
}

TEST_CASE("admissible range") {
    const AdmissibleRange a = admissible_range(-1.0, 0.5);
    CHECK(a.p_lower == doctest::Approx(1.0));
    CHECK(a.p_upper_lemma == doctest::Approx(1.5));
    const AdmissibleRange b = admissible_range(-2.0, 0.9);
    CHECK(b.p_lower == doctest::Approx(3.0 / 2.8));
    CHECK(b.p_upper_lemma == doctest::Approx(3.0));
    const AdmissibleRange c = admissible_range(-2.9, 0.05);
    CHECK(c.p_lower == doctest::Approx(15.0));
    CHECK(c.p_upper_lemma == doctest::Approx(30.0));
    CHECK(c.regime == Regime::very_soft);
    CHECK_THROWS_AS(admissible_range(-3.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(admissible_range(0.5, 0.5), std::invalid_argument);
    for (double gamma = -2.5; gamma < 0.0; gamma += 0.1)
        for (double s = 0.1; s < 0.95; s += 0.1) {
            if (3.0 + gamma + 2.0 * s <= 0.0) continue;
            const AdmissibleRange r = admissible_range(gamma, s);
            CHECK((r.p_lower > 1.0) == (gamma + 2.0 * s < 0.0));
            CHECK(r.p_lower < r.p_upper_lemma);
        }
}

TEST_CASE("Landau limit of the lower exponent") {
    const CheckReport r = check_landau_consistency(-3.0 + 1e-6, 1.0 - 1e-6);
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(1.5).epsilon(1e-8));
    const double eps = 1e-6;
    CHECK(3.0 / (3.0 + (-3.0 + eps) + 2.0 * (1.0 - eps)) == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(admissible_range(-1.0, 0.5).p_lower == doctest::Approx(1.0));
    // p_lower decreases as gamma increases
    double prev = 1e300;
    for (double gamma = -2.5; gamma < 0.0; gamma += 0.05) {
        const double p = admissible_range(gamma, 0.5).p_lower;
        CHECK(p < prev);
        prev = p;
    }
}
