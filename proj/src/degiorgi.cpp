#include "boltzlp/degiorgi.hpp"

#include "boltzlp/collision.hpp"
#include "boltzlp/functionals.hpp"
#include "boltzlp/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace boltzlp {

const char* schedule_name(ScheduleVariant v) { return v == ScheduleVariant::strong_soft ? "strong_soft" : "weak_soft"; }

double LevelSetLadder::level(int k) const { return K * (1.0 - std::ldexp(1.0, -k)); }

double LevelSetLadder::time(int k) const {
    const double f = 1.0 - std::ldexp(1.0, -(k + 1));
    return variant == ScheduleVariant::strong_soft ? 0.5 * t_star * f : t_star * f;
}

void LevelSetLadder::validate() const {
    if (!(K > 0.0)) throw std::invalid_argument("ladder: K must be positive");
    if (k_max < 1) throw std::invalid_argument("ladder: k_max must be >= 1");
    if (!(t_star > 0.0)) throw std::invalid_argument("ladder: t_star must be positive");
}

Distribution level_truncate(const Distribution& f, double K, int k) {
    if (!(K > 0.0) || k < 0) throw std::invalid_argument("level_truncate: K > 0 and k >= 0 required");
    const double Kk = K * (1.0 - std::ldexp(1.0, -k));
    Distribution out(f.grid);
    out.time_tag = f.time_tag;
    for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = std::max(f.values[i] - Kk, 0.0);
    return out;
}

CheckReport inhomog_bound_check(double fval, double K, int k, double beta, double alpha) {
    if (!(beta >= 1.0 && beta <= k)) throw std::invalid_argument("inhomog: beta must lie in [1,k]");
    if (!(alpha >= 0.0) || !(fval >= 0.0) || !(K > 0.0)) throw std::invalid_argument("inhomog: bad scalar input");
    const double Kk = K * (1.0 - std::ldexp(1.0, -k));
    const double Kkb = K * (1.0 - std::exp2(-(k - beta)));
    CheckReport rep;
    rep.check_name = "inhomog_bound";
    rep.lhs = fval >= Kk ? 1.0 : 0.0;
    const double fkb = std::max(fval - Kkb, 0.0);
    const double base = std::ldexp(1.0, k) / K * fkb / (std::exp2(beta) - 1.0);
    rep.rhs = alpha == 0.0 ? 1.0 : std::pow(base, alpha);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs > 0.0 ? INFINITY : 0.0);
    // a few ulps of rounding in K_k and K_{k-beta} at the boundary fval = K_k
    rep.pass = rep.lhs <= rep.rhs * (1.0 + 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, alpha));
    rep.add("fval", fval);
    rep.add("K", K);
    rep.add("k", static_cast<double>(k));
    rep.add("beta", beta);
    rep.add("alpha", alpha);
    return rep;
}

std::string EnergySequence::to_csv() const {
    std::ostringstream os;
    os << "k,t_k,K_k,sup_term,integral_term,W_k\n";
    for (std::size_t k = 0; k < w.size(); ++k)
        os << k << ',' << format_double(t_k[k]) << ',' << format_double(K_k[k]) << ',' << format_double(sup_term[k])
           << ',' << format_double(integral_term[k]) << ',' << format_double(w[k]) << '\n';
    return os.str();
}

namespace {

double window_end(const std::vector<Distribution>& traj, const LevelSetLadder& ladder) {
    // strong: sup over [t_k, t*]; weak: sup over [t_k, T] with T the last snapshot
    return ladder.variant == ScheduleVariant::strong_soft ? ladder.t_star : traj.back().time_tag;
}

double time_slack(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

void check_sorted(const std::vector<Distribution>& traj) {
    if (traj.empty()) throw std::invalid_argument("trajectory is empty");
    for (std::size_t i = 1; i < traj.size(); ++i)
        if (traj[i].time_tag < traj[i - 1].time_tag) throw std::invalid_argument("trajectory not sorted by time");
}

struct LevelTerms {
    double sup = 0.0;
    double integral = 0.0;
};

LevelTerms level_terms(const std::vector<Distribution>& traj, double t_lo, double t_hi, double Kk, double p,
                       const KernelParams& kp, bool need_integral) {
    LevelTerms out;
    double prev_t = 0.0, prev_v = 0.0;
    bool have_prev = false;
    for (const auto& f : traj) {
        const double t = f.time_tag;
        if (t < t_lo - time_slack(t_lo) || t > t_hi + time_slack(t_hi)) continue;
        double lp = 0.0;
        bool any = false;
        for (double v : f.values)
            if (v > Kk) {
                lp += std::pow(v - Kk, p);
                any = true;
            }
        lp *= f.grid.cell_volume();
        out.sup = std::max(out.sup, lp);
        double hs = 0.0;
        if (need_integral && any) {
            Distribution fk(f.grid);
            for (std::size_t i = 0; i < f.values.size(); ++i) fk.values[i] = std::max(f.values[i] - Kk, 0.0);
            hs = hs_gamma_half_sq(fk, p, kp);
        }
        if (have_prev) out.integral += 0.5 * (t - prev_t) * (hs + prev_v);
        prev_t = t;
        prev_v = hs;
        have_prev = true;
    }
    return out;
}

}  // namespace

EnergySequence energy_sequence(const std::vector<Distribution>& trajectory, const LevelSetLadder& ladder, double p,
                               const KernelParams& kp, const EnergyOptions& opts) {
    ladder.validate();
    if (!(p > 1.0)) throw std::invalid_argument("energy_sequence: p must exceed 1");
    check_sorted(trajectory);
    const int windows = std::min(opts.checked_windows, ladder.k_max);
    for (int k = 1; k <= windows; ++k) {
        const double a = ladder.time(k - 1), b = ladder.time(k);
        int count = 0;
        for (const auto& f : trajectory)
            if (f.time_tag >= a - time_slack(a) && f.time_tag <= b + time_slack(b)) ++count;
        if (count < opts.min_snapshots_per_window) {
            std::ostringstream os;
            os << "trajectory too sparse: " << count << " snapshots in dyadic window " << k << " [" << a << ", " << b
               << "]";
            throw std::runtime_error(os.str());
        }
    }
    const double t_end = window_end(trajectory, ladder);
    EnergySequence es;
    es.p = p;
    es.c_front = opts.c_front;
    for (int k = 0; k <= ladder.k_max; ++k) {
        const LevelTerms lt = level_terms(trajectory, ladder.time(k), t_end, ladder.level(k), p, kp, opts.c_front != 0.0);
        es.t_k.push_back(ladder.time(k));
        es.K_k.push_back(ladder.level(k));
        es.sup_term.push_back(lt.sup);
        es.integral_term.push_back(lt.integral);
        es.w.push_back(lt.sup + opts.c_front * lt.integral);
    }
    return es;
}

std::vector<double> ladder_snapshot_times(const LevelSetLadder& ladder, int windows, int per_window, double t_end,
                                          int tail_points) {
    std::vector<double> ts;
    for (int k = 1; k <= windows; ++k) {
        const double a = ladder.time(k - 1), b = ladder.time(k);
        for (int j = 0; j <= per_window; ++j) ts.push_back(a + (b - a) * j / per_window);
    }
    const double tail0 = ladder.time(windows);
    for (int j = 1; j <= tail_points; ++j) ts.push_back(tail0 + (t_end - tail0) * j / tail_points);
    if (ladder.variant == ScheduleVariant::strong_soft) ts.push_back(ladder.t_star);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(), [](double x, double y) { return std::abs(x - y) <= time_slack(x); }),
             ts.end());
    while (!ts.empty() && ts.back() > t_end + time_slack(t_end)) ts.pop_back();
    return ts;
}

void RecursionParams::validate(RecursionVariant v) const {
    if (!(C > 0.0 && a > 0.0 && b > 0.0 && W0 > 0.0 && K > 0.0))
        throw std::invalid_argument("recursion: C, a, b, W0, K must be positive");
    if (!(c1 > 1.0)) throw std::invalid_argument("recursion: c must exceed 1");
    if (v == RecursionVariant::two_c && !(c2 >= c1)) throw std::invalid_argument("recursion: c1 <= c2 required");
}

namespace {

long double log2_threshold_b(const RecursionParams& rp, RecursionVariant v) {
    const long double lc = std::log2(static_cast<long double>(rp.C));
    const long double lw = std::log2(static_cast<long double>(rp.W0));
    const long double c1 = rp.c1, c2 = rp.c2, a = rp.a;
    const long double e = a * c1 / (c1 - 1.0L);
    if (v == RecursionVariant::single_c) return lc + e + (c1 - 1.0L) * lw;
    return std::max(lc + c2 + e + (c1 + c2 - 2.0L) * lw, lc + 1.0L + e + (c1 - 1.0L) * lw);
}

}  // namespace

double recursion_threshold(const RecursionParams& rp, RecursionVariant v) {
    RecursionParams probe = rp;
    probe.K = 1.0;
    probe.validate(v);
    // round up so that K = threshold never lands below the exact value
    const long double t = std::exp2(log2_threshold_b(rp, v) / static_cast<long double>(rp.b));
    double d = static_cast<double>(t);
    if (static_cast<long double>(d) < t) d = std::nextafter(d, std::numeric_limits<double>::infinity());
    return d;
}

std::string DecayReport::to_string() const {
    std::ostringstream os;
    os << "pass=" << (pass ? "true" : "false") << " below_threshold=" << (below_threshold ? "true" : "false")
       << " first_violation=" << first_violation << " threshold=" << format_double(threshold)
       << " worst_log_ratio=" << format_double(worst_log_ratio);
    return os.str();
}

DecayReport verify_decay(const RecursionParams& rp, RecursionVariant v, int k_max, double log_tol) {
    rp.validate(v);
    if (k_max < 1) throw std::invalid_argument("verify_decay: k_max must be >= 1");
    DecayReport rep;
    const long double ln2 = std::log(2.0L);
    const long double lthr = log2_threshold_b(rp, v) / static_cast<long double>(rp.b) * ln2;
    rep.threshold = static_cast<double>(std::exp(lthr));
    const long double lK = std::log(static_cast<long double>(rp.K));
    rep.below_threshold = lK < lthr;
    const long double lC = std::log(static_cast<long double>(rp.C));
    const long double L0 = std::log(static_cast<long double>(rp.W0));
    const long double c1 = rp.c1, c2 = rp.c2, a = rp.a, b = rp.b;
    long double L = L0;
    rep.w.push_back(rp.W0);
    rep.bound.push_back(rp.W0);
    for (int k = 1; k <= k_max; ++k) {
        long double growth;
        if (v == RecursionVariant::single_c) {
            growth = c1 * L;
        } else {
            const long double x = c1 * L, y = c2 * L;
            const long double m = std::max(x, y);
            growth = m + std::log1p(std::exp(std::min(x, y) - m));
        }
        L = lC + a * k * ln2 - b * lK + growth;
        const long double B = L0 - k * a / (c1 - 1.0L) * ln2;
        const long double diff = L - B;
        rep.w.push_back(static_cast<double>(std::exp(L)));
        rep.bound.push_back(static_cast<double>(std::exp(B)));
        rep.worst_log_ratio = std::max(rep.worst_log_ratio, static_cast<double>(diff));
        if (diff > log_tol * std::max(1.0L, std::abs(B)) && rep.first_violation < 0) {
            rep.first_violation = k;
            rep.pass = false;
        }
    }
    return rep;
}

CheckReport level_energy_inequality_check(const Distribution& f, const LevelSetLadder& ladder, int k, double p,
                                          const KernelParams& kp, const AngularQuadrature& aq,
                                          const Distribution* q_ff) {
    ladder.validate();
    if (k < 1) throw std::invalid_argument("level energy: k must be >= 1");
    if (!(p > 1.0)) throw std::invalid_argument("level energy: p must exceed 1");
    Distribution q_local;
    if (!q_ff) {
        FastConfig exact;
        exact.compress = false;
        q_local = q_fast(f, f, kp, aq, exact).q_values;
        q_ff = &q_local;
    }
    const Distribution fk = level_truncate(f, ladder.K, k);
    double lhs = 0.0;
    for (std::size_t i = 0; i < fk.values.size(); ++i)
        if (fk.values[i] > 0.0) lhs += q_ff->values[i] * std::pow(fk.values[i], p - 1.0);
    lhs *= f.grid.cell_volume();
    const double Kk = ladder.level(k);
    FunctionalOptions fo;
    fo.exact_table = true;
    const double i_pm1 = eval_Ip(f, fk, p - 1.0, kp, aq, fo).value;
    const double i_p = eval_Ip(f, fk, p, kp, aq, fo).value;
    const double j_p = eval_Jp(f, fk, p, kp, aq, fo).value;
    const double pc = conjugate(p);
    CheckReport rep;
    rep.check_name = "level_energy";
    rep.n = f.grid.n;
    rep.eps_theta = kp.eps_theta;
    rep.delta = kp.delta_rel;
    rep.lhs = lhs;
    rep.rhs = Kk * i_pm1 + i_p / pc - j_p / std::max(p, pc);
    const double slack = 1e-8 + 1e-3 * std::abs(rep.rhs);
    rep.ratio = rep.rhs != 0.0 ? rep.lhs / rep.rhs : 0.0;
    rep.pass = rep.lhs - rep.rhs <= slack;
    rep.add("k", static_cast<double>(k));
    rep.add("K", ladder.K);
    rep.add("K_k", Kk);
    rep.add("I_pm1", i_pm1);
    rep.add("I_p", i_p);
    rep.add("J_p", j_p);
    rep.add("slack", slack);
    return rep;
}

std::string LinftyEstimate::to_string() const {
    std::ostringstream os;
    os << "K_star=" << format_double(K_star) << " sup_norm=" << format_double(sup_norm)
       << " bracketed=" << (bracketed ? "true" : "false") << " sound=" << (sound ? "true" : "false")
       << " probes=" << probes;
    return os.str();
}

LinftyEstimate estimate_linfty(const std::vector<Distribution>& trajectory, const LevelSetLadder& ladder, double p,
                               const KernelParams& kp, const LinftySearch& search) {
    ladder.validate();
    check_sorted(trajectory);
    LinftyEstimate est;
    const double half = 0.5 * ladder.t_star;
    double global_sup = 0.0;
    for (const auto& f : trajectory) {
        global_sup = std::max(global_sup, f.max_value());
        if (f.time_tag >= half - time_slack(half) && f.time_tag <= ladder.t_star + time_slack(ladder.t_star))
            est.sup_norm = std::max(est.sup_norm, f.max_value());
    }
    const double t_end = window_end(trajectory, ladder);
    const int km = ladder.k_max;
    auto vanished = [&](double K) {
        ++est.probes;
        LevelSetLadder lad = ladder;
        lad.K = K;
        const double tol = search.tol_zero_rel *
                           [&] {
                               const LevelTerms l0 = level_terms(trajectory, lad.time(0), t_end, 0.0, p, kp, search.c_front != 0.0);
                               return l0.sup + search.c_front * l0.integral;
                           }();
        // the sup term alone decides whenever it already exceeds the tolerance
        const LevelTerms s = level_terms(trajectory, lad.time(km), t_end, lad.level(km), p, kp, false);
        if (s.sup > tol) return false;
        const LevelTerms full = level_terms(trajectory, lad.time(km), t_end, lad.level(km), p, kp, search.c_front != 0.0);
        return full.sup + search.c_front * full.integral <= tol;
    };
    if (!(global_sup > 0.0)) return est;
    double lo = 0.0, hi = 2.0 * global_sup;
    if (!vanished(hi)) return est;
    est.bracketed = true;
    for (int it = 0; it < search.iterations && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (vanished(mid))
            hi = mid;
        else
            lo = mid;
    }
    est.K_star = hi;
    est.sound = est.K_star >= est.sup_norm - search.soundness_tol;
    LevelSetLadder lad = ladder;
    lad.K = est.K_star;
    EnergyOptions eo;
    eo.c_front = search.c_front;
    eo.min_snapshots_per_window = 0;
    est.at_k_star = energy_sequence(trajectory, lad, p, kp, eo);
    return est;
}

std::vector<Distribution> load_trajectory(const std::string& dir) {
    std::vector<Distribution> out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".bin") out.push_back(load_binary(e.path().string()));
    std::sort(out.begin(), out.end(), [](const Distribution& a, const Distribution& b) { return a.time_tag < b.time_tag; });
    return out;
}

}  // namespace boltzlp
