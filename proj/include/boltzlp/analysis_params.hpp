#pragma once

#include "boltzlp/kernel_grid.hpp"
#include "boltzlp/rational.hpp"
#include "boltzlp/report.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace boltzlp {

enum class SystemId { theta3, lemma26ii, lemma26iii, theta4, theta5, theta67r, theta89lq, theta1011, alphas, K_threshold };

const char* system_id_name(SystemId id);
// throws std::invalid_argument for unknown names
SystemId parse_system_id(const std::string& name);

inline constexpr double kFeasibleSlack = 1e-12;

struct ExponentSolution {
    SystemId system = SystemId::theta3;
    std::map<std::string, double> values;
    std::map<std::string, double> margins;  // positive = satisfied
    bool feasible = false;
    std::vector<std::string> violated;

    double at(const std::string& key) const;
    std::string to_string() const;  // key=value lines
};

struct AdmissibleRange {
    double gamma = 0.0;
    double s = 0.0;
    double p_lower = 0.0;
    double p_upper_lemma = 0.0;
    Regime regime = Regime::moderately_soft;
};

// Closed forms shared by the floating-point solvers and exact rational checks.
namespace exponents {

template <class T>
struct Constraint {
    std::string name;
    T margin;
    bool strict = true;
};

template <class T>
T sobolev_ps(const T& p, const T& s) {
    return T(3) * p / (T(3) - T(2) * s);
}

// 1/p = (1 - theta) + theta/p_s
template <class T>
T theta3(const T& p, const T& s) {
    return (T(1) - T(1) / p) / (T(1) - T(1) / sobolev_ps(p, s));
}

template <class T>
T alpha1(const T& theta) {
    return theta / (T(1) - theta);
}

// 1/q = 2 + gamma/3 - 1/p
template <class T>
T inv_q(const T& p, const T& gamma) {
    return T(2) + gamma / T(3) - T(1) / p;
}

// x = theta + (1 - theta)/p_s solved for theta
template <class T>
T interp_theta(const T& x, const T& ps) {
    return (x - T(1) / ps) / (T(1) - T(1) / ps);
}

template <class T>
T theta7_default(const T& p, const T& s) {
    return T(1) - p / (T(2) * sobolev_ps(p, s));
}

template <class T>
T r_value(const T& p, const T& s, const T& th6, const T& th7) {
    return th6 + p * th7 + sobolev_ps(p, s) * (T(1) - th6 - th7);
}

template <class T>
T ell_value(const T& p, const T& s, const T& th8, const T& th9, const T& q) {
    return r_value(p, s, th8, th9) / q;
}

template <class T>
T alpha3(const T& p, const T& s, const T& th6, const T& th7) {
    return th7 + sobolev_ps(p, s) / p * (T(1) - th6 - th7);
}

template <class T>
T alpha4(const T& p, const T& s, const T& th8, const T& th9, const T& q) {
    return th9 / q + sobolev_ps(p, s) / (p * q) * (T(1) - th8 - th9);
}

template <class T>
T alpha_1011(const T& s, const T& th10, const T& th11) {
    return th10 + T(2) * th11 + T(6) / (T(3) - T(2) * s) * (T(1) - th10 - th11) - T(1);
}

template <class T>
void unit_interval(std::vector<Constraint<T>>& out, const std::string& name, const T& v) {
    out.push_back({name + "_gt_0", v, true});
    out.push_back({name + "_lt_1", T(1) - v, true});
}

template <class T>
std::vector<Constraint<T>> constraints_theta3(const T& p, const T& s) {
    std::vector<Constraint<T>> c;
    unit_interval(c, "theta3", theta3(p, s));
    return c;
}

// Shared by lemma26 (ii)/(iii), theta4 and theta5: q from p0, interpolation at p.
template <class T>
std::vector<Constraint<T>> constraints_interp(const T& p, const T& p0, const T& gamma, const T& s,
                                             const std::string& theta_name) {
    std::vector<Constraint<T>> c;
    const T iq = inv_q(p0, gamma);
    const T ps = sobolev_ps(p, s);
    c.push_back({"q_gt_1", T(1) - iq, true});
    const T pq = p / iq;
    c.push_back({"pq_gt_1", pq - T(1), true});
    c.push_back({"pq_lt_ps", ps - pq, true});
    unit_interval(c, theta_name, interp_theta(T(1) / pq, ps));
    return c;
}

template <class T>
std::vector<Constraint<T>> constraints_theta67(const T& p, const T& s, const T& th6, const T& th7) {
    std::vector<Constraint<T>> c;
    const T ps = sobolev_ps(p, s);
    unit_interval(c, "theta6", th6);
    unit_interval(c, "theta7", th7);
    c.push_back({"theta6_plus_theta7_lt_1", T(1) - th6 - th7, true});
    c.push_back({"ps_tail_lt_p", p - ps * (T(1) - th6 - th7), true});
    c.push_back({"p_theta7_plus_tail_gt_p", p * th7 + ps * (T(1) - th6 - th7) - p, true});
    const T r = r_value(p, s, th6, th7);
    c.push_back({"r_gt_p", r - p, true});
    c.push_back({"r_lt_ps", ps - r, true});
    return c;
}

template <class T>
std::vector<Constraint<T>> constraints_theta89(const T& p, const T& s, const T& th8, const T& th9, const T& q) {
    std::vector<Constraint<T>> c;
    const T ps = sobolev_ps(p, s);
    unit_interval(c, "theta8", th8);
    unit_interval(c, "theta9", th9);
    c.push_back({"theta8_plus_theta9_lt_1", T(1) - th8 - th9, true});
    c.push_back({"ps_tail_lt_pq", p * q - ps * (T(1) - th8 - th9), true});
    c.push_back({"p_theta9_plus_tail_gt_pq", p * th9 + ps * (T(1) - th8 - th9) - p * q, true});
    c.push_back({"q_gt_1", q - T(1), true});
    c.push_back({"ell_gt_p", ell_value(p, s, th8, th9, q) - p, true});
    return c;
}

template <class T>
std::vector<Constraint<T>> constraints_theta1011(const T& s, const T& th10, const T& th11) {
    std::vector<Constraint<T>> c;
    const T k = T(3) / (T(3) - T(2) * s);
    unit_interval(c, "theta10", th10);
    unit_interval(c, "theta11", th11);
    c.push_back({"sum_gt_0", th10 + th11, true});
    c.push_back({"sum_lt_1", T(1) - th10 - th11, true});
    c.push_back({"theta11_plus_tail_gt_1", th11 + k * (T(1) - th10 - th11) - T(1), true});
    c.push_back({"tail_le_1", T(1) - k * (T(1) - th10 - th11), false});
    c.push_back({"alpha_gt_1", alpha_1011(s, th10, th11) - T(1), true});
    return c;
}

template <class T>
bool all_satisfied(const std::vector<Constraint<T>>& cs) {
    for (const auto& c : cs)
        if (c.strict ? !(c.margin > T(0)) : c.margin < T(0)) return false;
    return true;
}

}  // namespace exponents

ExponentSolution solve_theta3(double p, double s);

enum class Lemma26Variant { ii, iii };
// variant ii uses p itself for q; variant iii requires p0.
ExponentSolution solve_lemma26(double p, double gamma, double s, Lemma26Variant variant,
                               std::optional<double> p0 = std::nullopt);
ExponentSolution solve_theta4(double p0, double gamma, double s);
ExponentSolution solve_theta5(double p, double p0, double gamma, double s);
ExponentSolution solve_theta67_r(double p, double s, std::optional<double> theta6_hint = std::nullopt,
                                 std::optional<double> theta7_hint = std::nullopt);
ExponentSolution solve_theta89_lq(double p, double s, std::optional<double> q_hint = std::nullopt,
                                  std::optional<double> theta8_hint = std::nullopt,
                                  std::optional<double> theta9_hint = std::nullopt);
ExponentSolution solve_theta1011(double s, std::optional<double> theta10_hint = std::nullopt,
                                 std::optional<double> theta11_hint = std::nullopt);

// alpha3, alpha4, a, b, R0 and the K threshold R0^{1/b}.
ExponentSolution derive_degiorgi_exponents(double p, double s, const ExponentSolution& sol67,
                                           const ExponentSolution& sol89, double W0, double C = 1.0);

// alpha1, alpha3, alpha4 and the composite alpha6 = alpha5 (alpha3 + alpha4 - 2) for a fitted alpha5.
ExponentSolution solve_alphas(double p, double s, double alpha5);

// throws std::invalid_argument when 3 + gamma + 2s <= 0
AdmissibleRange admissible_range(double gamma, double s);
CheckReport check_landau_consistency(double gamma, double s);

}  // namespace boltzlp
