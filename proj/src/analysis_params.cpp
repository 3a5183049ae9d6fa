#include "boltzlp/analysis_params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace boltzlp {

namespace {

struct NamedId {
    SystemId id;
    const char* name;
};

constexpr NamedId kIds[] = {
    {SystemId::theta3, "theta3"},         {SystemId::lemma26ii, "lemma26ii"}, {SystemId::lemma26iii, "lemma26iii"},
    {SystemId::theta4, "theta4"},         {SystemId::theta5, "theta5"},       {SystemId::theta67r, "theta67r"},
    {SystemId::theta89lq, "theta89lq"},   {SystemId::theta1011, "theta1011"}, {SystemId::alphas, "alphas"},
    {SystemId::K_threshold, "K_threshold"},
};

void apply_constraints(ExponentSolution& sol, const std::vector<exponents::Constraint<double>>& cs) {
    sol.feasible = true;
    for (const auto& c : cs) {
        sol.margins[c.name] = c.margin;
        const bool ok = c.strict ? c.margin > kFeasibleSlack : c.margin >= -kFeasibleSlack;
        if (!ok) {
            sol.feasible = false;
            sol.violated.push_back(c.name);
        }
    }
}

void require_s(double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
}

double default_theta6(double s) { return std::min(0.01, s * (3.0 - 2.0 * s) / 18.0); }

}  // namespace

const char* system_id_name(SystemId id) {
    for (const auto& e : kIds)
        if (e.id == id) return e.name;
    return "unknown";
}

SystemId parse_system_id(const std::string& name) {
    for (const auto& e : kIds)
        if (name == e.name) return e.id;
    throw std::invalid_argument("unknown system id: " + name);
}

double ExponentSolution::at(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw std::out_of_range("no value named " + key);
    return it->second;
}

std::string ExponentSolution::to_string() const {
    std::ostringstream os;
    os << "system=" << system_id_name(system) << '\n' << "feasible=" << (feasible ? "true" : "false") << '\n';
    for (const auto& [k, v] : values) os << k << '=' << format_double(v) << '\n';
    for (const auto& [k, v] : margins) os << "margin." << k << '=' << format_double(v) << '\n';
    for (const auto& v : violated) os << "violated=" << v << '\n';
    return os.str();
}

ExponentSolution solve_theta3(double p, double s) {
    require_s(s);
    if (p == 1.0) throw std::invalid_argument("theta3: p = 1 gives the degenerate theta3 = 0");
    if (!(p > 1.0)) throw std::invalid_argument("theta3: p must exceed 1");
    ExponentSolution sol;
    sol.system = SystemId::theta3;
    const double th = exponents::theta3(p, s);
    sol.values = {{"p", p}, {"s", s}, {"p_s", exponents::sobolev_ps(p, s)}, {"theta3", th}, {"alpha1", exponents::alpha1(th)}};
    apply_constraints(sol, exponents::constraints_theta3(p, s));
    return sol;
}

namespace {

ExponentSolution solve_interp(SystemId id, const std::string& theta_name, const std::string& q_name, double p,
                              double p0, double gamma, double s, bool window_on_p) {
    require_s(s);
    const AdmissibleRange ar = admissible_range(gamma, s);
    ExponentSolution sol;
    sol.system = id;
    auto cs = exponents::constraints_interp(p, p0, gamma, s, theta_name);
    const std::string w = window_on_p ? "p0" : "p";
    cs.insert(cs.begin(), {{w + "_gt_p_lower", p0 - ar.p_lower, true}, {w + "_lt_p_upper", ar.p_upper_lemma - p0, true}});
    if (window_on_p && p != p0) cs.insert(cs.begin(), {"p_gt_p_lower", p - ar.p_lower, true});
    const double iq = exponents::inv_q(p0, gamma);
    const double ps = exponents::sobolev_ps(p, s);
    sol.values = {{"p", p}, {"p0", p0}, {"gamma", gamma}, {"s", s}, {"p_s", ps}, {q_name, 1.0 / iq},
                  {theta_name, exponents::interp_theta(iq / p, ps)}};
    apply_constraints(sol, cs);
    return sol;
}

}  // namespace

ExponentSolution solve_lemma26(double p, double gamma, double s, Lemma26Variant variant, std::optional<double> p0) {
    if (variant == Lemma26Variant::ii) return solve_interp(SystemId::lemma26ii, "theta1", "q", p, p, gamma, s, false);
    if (!p0) throw std::invalid_argument("lemma26 variant iii needs p0");
    return solve_interp(SystemId::lemma26iii, "theta2", "q0", p, *p0, gamma, s, true);
}

ExponentSolution solve_theta4(double p0, double gamma, double s) {
    ExponentSolution sol = solve_interp(SystemId::theta4, "theta4", "q0", p0, p0, gamma, s, false);
    const double th = sol.values.at("theta4");
    if (th > 0.0) {
        sol.values["inv_theta4"] = 1.0 / th;
        const double m = 1.0 / th - p0;
        sol.margins["inv_theta4_gt_p0"] = m;
        if (!(m > kFeasibleSlack)) {
            sol.feasible = false;
            sol.violated.push_back("inv_theta4_gt_p0");
        }
    }
    return sol;
}

ExponentSolution solve_theta5(double p, double p0, double gamma, double s) {
    return solve_interp(SystemId::theta5, "theta5", "q0", p, p0, gamma, s, true);
}

ExponentSolution solve_theta67_r(double p, double s, std::optional<double> theta6_hint, std::optional<double> theta7_hint) {
    require_s(s);
    if (!(p > 1.0)) throw std::invalid_argument("theta67: p must exceed 1");
    const double th6 = theta6_hint.value_or(default_theta6(s));
    const double th7 = theta7_hint.value_or(exponents::theta7_default(p, s));
    ExponentSolution sol;
    sol.system = SystemId::theta67r;
    sol.values = {{"p", p},         {"s", s},       {"p_s", exponents::sobolev_ps(p, s)},
                  {"theta6", th6}, {"theta7", th7}, {"r", exponents::r_value(p, s, th6, th7)}};
    apply_constraints(sol, exponents::constraints_theta67(p, s, th6, th7));
    return sol;
}

ExponentSolution solve_theta89_lq(double p, double s, std::optional<double> q_hint, std::optional<double> theta8_hint,
                                  std::optional<double> theta9_hint) {
    require_s(s);
    if (!(p > 1.0)) throw std::invalid_argument("theta89: p must exceed 1");
    const double th8 = theta8_hint.value_or(default_theta6(s));
    const double th9 = theta9_hint.value_or(exponents::theta7_default(p, s));
    double q;
    if (q_hint) {
        q = *q_hint;
    } else {
        // largest q keeping both strict upper constraints: q < (r - theta8)/p
        const double q_max = (exponents::r_value(p, s, th8, th9) - th8) / p;
        q = 1.0 + std::min(0.05, 0.5 * (q_max - 1.0));
    }
    ExponentSolution sol;
    sol.system = SystemId::theta89lq;
    sol.values = {{"p", p},         {"s", s}, {"p_s", exponents::sobolev_ps(p, s)},
                  {"theta8", th8}, {"theta9", th9}, {"q", q},
                  {"ell", exponents::ell_value(p, s, th8, th9, q)}, {"q_conjugate", q / (q - 1.0)}};
    apply_constraints(sol, exponents::constraints_theta89(p, s, th8, th9, q));
    return sol;
}

ExponentSolution solve_theta1011(double s, std::optional<double> theta10_hint, std::optional<double> theta11_hint) {
    require_s(s);
    const double th10 = theta10_hint.value_or(0.01);
    const double th11 = theta11_hint.value_or(2.0 * s / 3.0);
    ExponentSolution sol;
    sol.system = SystemId::theta1011;
    sol.values = {{"s", s}, {"theta10", th10}, {"theta11", th11}, {"alpha", exponents::alpha_1011(s, th10, th11)}};
    apply_constraints(sol, exponents::constraints_theta1011(s, th10, th11));
    return sol;
}

ExponentSolution derive_degiorgi_exponents(double p, double s, const ExponentSolution& sol67,
                                           const ExponentSolution& sol89, double W0, double C) {
    if (!sol67.feasible || !sol89.feasible) throw std::invalid_argument("degiorgi exponents: infeasible inputs");
    if (!(W0 > 0.0) || !(C > 0.0)) throw std::invalid_argument("degiorgi exponents: W0 and C must be positive");
    const double th6 = sol67.at("theta6"), th7 = sol67.at("theta7"), r = sol67.at("r");
    const double th8 = sol89.at("theta8"), th9 = sol89.at("theta9"), q = sol89.at("q"), ell = sol89.at("ell");
    const double a3 = exponents::alpha3(p, s, th6, th7);
    const double a4 = exponents::alpha4(p, s, th8, th9, q);
    ExponentSolution sol;
    sol.system = SystemId::K_threshold;
    sol.values = {{"p", p}, {"s", s}, {"alpha3", a3}, {"alpha4", a4}, {"r", r}, {"ell", ell}, {"W0", W0}, {"C", C}};
    // The recursion is used with c1 = alpha3 and c2 = alpha4; record how that ordering fares.
    sol.values["alpha4_minus_alpha3"] = a4 - a3;
    apply_constraints(sol, std::vector<exponents::Constraint<double>>{{"alpha3_gt_1", a3 - 1.0, true}, {"alpha4_gt_1", a4 - 1.0, true}});
    if (!sol.feasible) return sol;
    const double a = std::max(r - p + 1.0, ell - p + 1.0);
    const double e = a * a3 / (a3 - 1.0);
    // log2 of the two candidates to stay finite for large exponents
    const double l1 = std::log2(C) + a4 + e + (a3 + a4 - 2.0) * std::log2(W0);
    const double l2 = std::log2(C) + 1.0 + e + (a3 - 1.0) * std::log2(W0);
    const double log2_R0 = std::max(l1, l2);
    const double b = log2_R0 > 0.0 ? std::min(r - p, ell - p) : std::max(r - p, ell - p);
    sol.values["a"] = a;
    sol.values["b"] = b;
    sol.values["log2_R0"] = log2_R0;
    sol.values["R0"] = std::exp2(log2_R0);
    sol.values["K_threshold"] = std::exp2(log2_R0 / b);
    return sol;
}

ExponentSolution solve_alphas(double p, double s, double alpha5) {
    const ExponentSolution t3 = solve_theta3(p, s);
    const ExponentSolution s67 = solve_theta67_r(p, s);
    const ExponentSolution s89 = solve_theta89_lq(p, s);
    ExponentSolution sol;
    sol.system = SystemId::alphas;
    sol.values = {{"p", p}, {"s", s}, {"alpha1", t3.at("alpha1")}, {"alpha5", alpha5}};
    sol.feasible = t3.feasible && s67.feasible && s89.feasible;
    if (!t3.feasible) sol.violated.push_back("theta3");
    if (!s67.feasible) sol.violated.push_back("theta67r");
    if (!s89.feasible) sol.violated.push_back("theta89lq");
    if (s67.feasible && s89.feasible) {
        const double a3 = exponents::alpha3(p, s, s67.at("theta6"), s67.at("theta7"));
        const double a4 = exponents::alpha4(p, s, s89.at("theta8"), s89.at("theta9"), s89.at("q"));
        sol.values["alpha3"] = a3;
        sol.values["alpha4"] = a4;
        sol.values["alpha6"] = alpha5 * (a3 + a4 - 2.0);
        sol.margins["alpha3_gt_1"] = a3 - 1.0;
        sol.margins["alpha4_gt_1"] = a4 - 1.0;
        sol.margins["alpha5_gt_0"] = alpha5;
        for (const auto& [k, m] : sol.margins)
            if (!(m > kFeasibleSlack)) {
                sol.feasible = false;
                sol.violated.push_back(k);
            }
    }
    return sol;
}

AdmissibleRange admissible_range(double gamma, double s) {
    if (!(gamma > -3.0 && gamma < 0.0)) throw std::invalid_argument("admissible_range: gamma must lie in (-3,0)");
    require_s(s);
    if (!(3.0 + gamma + 2.0 * s > 0.0)) throw std::invalid_argument("admissible_range: 3 + gamma + 2s <= 0");
    AdmissibleRange ar;
    ar.gamma = gamma;
    ar.s = s;
    ar.p_lower = 3.0 / (3.0 + gamma + 2.0 * s);
    ar.p_upper_lemma = 3.0 / (3.0 + gamma);
    KernelParams kp;
    kp.gamma = gamma;
    kp.s = s;
    ar.regime = kp.regime();
    return ar;
}

CheckReport check_landau_consistency(double gamma, double s) {
    CheckReport rep;
    rep.check_name = "landau_consistency";
    const double p_lower = 3.0 / (3.0 + gamma + 2.0 * s);
    const double eps = 1e-9;
    const double limit = 3.0 / (3.0 + (-3.0 + eps) + 2.0 * (1.0 - eps));
    rep.lhs = limit;
    rep.rhs = 1.5;
    rep.ratio = limit / 1.5;
    rep.pass = std::abs(limit - 1.5) < 1e-8;
    rep.add("gamma", gamma);
    rep.add("s", s);
    rep.add("p_lower", p_lower);
    rep.add("p_lower_at_landau_limit", limit);
    return rep;
}

}  // namespace boltzlp
