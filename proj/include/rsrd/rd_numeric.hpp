#ifndef RSRD_RD_NUMERIC_HPP
#define RSRD_RD_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rsrd/distortion.hpp"
#include "rsrd/util.hpp"

namespace rsrd {

struct SolverParams {
    double t_min = -10.0;  // initial slope bracket (doubled as needed)
    double s_max = 2.0;    // initial exponent-multiplier bracket
    int tau_max = 5000;    // iteration cap per component solve
    // rate/distortion tolerances are per component and scaled by the
    // number of components in the factored drivers
    double eps_r = 1e-4;
    double eps_d = 1e-4;
    double conv_tol = 1e-10;  // successive rate change cutoff
    int max_doublings = 40;
    int bisect_iters = 100;
};

struct ComponentPoint {
    double f = 0.0, r = 0.0, d = 0.0;
    std::vector<double> q;
    bool converged = true;
};

namespace detail {

// mutual information of source p through channel w, against w's own
// output marginal; and the mean distortion
inline void rate_distortion_of(const std::vector<double>& p, const std::vector<double>& w,
                               const std::vector<double>& delta, int nx, int nk, double& r_out,
                               double& d_out) {
    std::vector<double> qbar(nk, 0.0);
    for (int j = 0; j < nx; ++j)
        for (int k = 0; k < nk; ++k) qbar[k] += p[j] * w[static_cast<size_t>(j) * nk + k];
    double r = 0.0, d = 0.0;
    for (int j = 0; j < nx; ++j) {
        if (p[j] <= 0.0) continue;
        for (int k = 0; k < nk; ++k) {
            double wv = w[static_cast<size_t>(j) * nk + k];
            if (wv <= 0.0) continue;
            r += p[j] * wv * std::log2(wv / qbar[k]);
            d += p[j] * wv * delta[static_cast<size_t>(j) * nk + k];
        }
    }
    r_out = std::max(0.0, r);
    d_out = d;
}

}  // namespace detail

namespace detail {

// Both parametric objectives are convex in q, so a vertex satisfying the
// KKT directional conditions is a global optimum; returning it exactly
// avoids the slow asymptotic collapse of the multiplicative updates.
// Blahut vertex condition at q = e_k: sum_j p_j 2^{t (d_jk' - d_jk)} <= 1
// for every k'.
inline int blahut_vertex(const std::vector<double>& p_row, const std::vector<double>& delta,
                         int nk, double t) {
    const int nx = static_cast<int>(p_row.size());
    int best = -1;
    double best_obj = 0.0, best_d = 0.0;
    for (int k = 0; k < nk; ++k) {
        bool ok = true;
        for (int k2 = 0; k2 < nk && ok; ++k2) {
            if (k2 == k) continue;
            double acc = 0.0;
            for (int j = 0; j < nx; ++j)
                if (p_row[j] > 0.0)
                    acc += p_row[j] * std::exp2(t * (delta[static_cast<size_t>(j) * nk + k2] -
                                                     delta[static_cast<size_t>(j) * nk + k]));
            ok = acc <= 1.0 + 1e-12;
        }
        if (!ok) continue;
        double mean_d = 0.0;
        for (int j = 0; j < nx; ++j) mean_d += p_row[j] * delta[static_cast<size_t>(j) * nk + k];
        double obj = -t * mean_d;  // potential V(e_k) = -sum_j p_j log2 z_jk
        if (best < 0 || obj < best_obj - 1e-15 ||
            (std::abs(obj - best_obj) <= 1e-15 && mean_d < best_d)) {
            best = k;
            best_obj = obj;
            best_d = mean_d;
        }
    }
    return best;
}

// Arimoto vertex condition at q = e_k, compared in the log domain:
// log2 sum_j p_j 2^{t(d_jk' - (s+1) d_jk)} <= log2 sum_j p_j 2^{-s t d_jk}.
inline double lse2(const std::vector<double>& expo) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double e : expo) mx = std::max(mx, e);
    if (!std::isfinite(mx)) return mx;
    double acc = 0.0;
    for (double e : expo) acc += std::exp2(e - mx);
    return mx + std::log2(acc);
}

inline int arimoto_vertex(const std::vector<double>& p_row, const std::vector<double>& delta,
                          int nk, double s, double t) {
    const int nx = static_cast<int>(p_row.size());
    int best = -1;
    double best_obj = 0.0;
    std::vector<double> lhs, rhs;
    for (int k = 0; k < nk; ++k) {
        rhs.clear();
        for (int j = 0; j < nx; ++j)
            if (p_row[j] > 0.0)
                rhs.push_back(std::log2(p_row[j]) -
                              s * t * delta[static_cast<size_t>(j) * nk + k]);
        double log_f = lse2(rhs);
        bool ok = true;
        for (int k2 = 0; k2 < nk && ok; ++k2) {
            if (k2 == k) continue;
            lhs.clear();
            for (int j = 0; j < nx; ++j)
                if (p_row[j] > 0.0)
                    lhs.push_back(std::log2(p_row[j]) +
                                  t * (delta[static_cast<size_t>(j) * nk + k2] -
                                       (s + 1.0) * delta[static_cast<size_t>(j) * nk + k]));
            ok = lse2(lhs) <= log_f + 1e-12;
        }
        if (ok && (best < 0 || log_f < best_obj)) {
            best = k;
            best_obj = log_f;
        }
    }
    return best;
}

}  // namespace detail

// Single-source Blahut iteration at slope multiplier t <= 0. Exponents are
// normalized per row (delta_jk - min_k delta_jk) so extreme slopes do not
// underflow; the row scaling cancels from the test channel.
inline ComponentPoint blahut_component(const std::vector<double>& p_row,
                                       const std::vector<double>& delta, int nk, double t,
                                       const SolverParams& params = {}) {
    const int nx = static_cast<int>(p_row.size());
    ComponentPoint out;
    if (int vk = detail::blahut_vertex(p_row, delta, nk, t); vk >= 0) {
        out.q.assign(nk, 0.0);
        out.q[vk] = 1.0;
        out.r = 0.0;
        out.d = 0.0;
        for (int j = 0; j < nx; ++j)
            out.d += p_row[j] * delta[static_cast<size_t>(j) * nk + vk];
        return out;
    }
    std::vector<double> dmin_row(nx, 0.0);
    for (int j = 0; j < nx; ++j) {
        double mn = delta[static_cast<size_t>(j) * nk];
        for (int k = 1; k < nk; ++k) mn = std::min(mn, delta[static_cast<size_t>(j) * nk + k]);
        dmin_row[j] = mn;
    }
    std::vector<double> a(static_cast<size_t>(nx) * nk);
    for (int j = 0; j < nx; ++j)
        for (int k = 0; k < nk; ++k)
            a[static_cast<size_t>(j) * nk + k] =
                std::exp2(t * (delta[static_cast<size_t>(j) * nk + k] - dmin_row[j]));

    std::vector<double> q(nk, 1.0 / nk), qn(nk);
    out.converged = false;
    double r_prev = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < params.tau_max; ++iter) {
        std::fill(qn.begin(), qn.end(), 0.0);
        // parametric rate at the current q: R = t*D - sum_j p_j log2 c_j
        // (with the row normalization added back; it cancels against t*D)
        double m_acc = 0.0, d_acc = 0.0;
        for (int j = 0; j < nx; ++j) {
            if (p_row[j] <= 0.0) continue;
            const double* aj = &a[static_cast<size_t>(j) * nk];
            double cj = 0.0, dj = 0.0;
            for (int k = 0; k < nk; ++k) {
                double v = q[k] * aj[k];
                cj += v;
                dj += v * delta[static_cast<size_t>(j) * nk + k];
            }
            m_acc += p_row[j] * (std::log2(cj) + t * dmin_row[j]);
            d_acc += p_row[j] * dj / cj;
            for (int k = 0; k < nk; ++k) qn[k] += p_row[j] * aj[k] / cj;
        }
        double qmove = 0.0;
        double qsum = 0.0;
        for (int k = 0; k < nk; ++k) {
            double next = q[k] * qn[k];
            qmove = std::max(qmove, std::abs(next - q[k]));
            q[k] = next;
            qsum += next;
        }
        for (auto& v : q) v /= qsum;
        double r_param = t * d_acc - m_acc;
        if (std::abs(r_param - r_prev) < params.conv_tol && qmove < 1e-10) {
            out.converged = true;
            break;
        }
        r_prev = r_param;
    }

    std::vector<double> w(static_cast<size_t>(nx) * nk, 0.0);
    for (int j = 0; j < nx; ++j) {
        const double* aj = &a[static_cast<size_t>(j) * nk];
        double cj = 0.0;
        for (int k = 0; k < nk; ++k) cj += q[k] * aj[k];
        for (int k = 0; k < nk; ++k) w[static_cast<size_t>(j) * nk + k] = q[k] * aj[k] / cj;
    }
    detail::rate_distortion_of(p_row, w, delta, nx, nk, out.r, out.d);
    out.q = std::move(q);
    return out;
}

// Single-source Arimoto iteration at multipliers s >= 0, t <= 0, solving
// min_q sum_j p_j (sum_k q_k 2^{t delta_jk})^{-s}. At the fixed point the
// tilted source p~_j ~ p_j lambda_j^{-s} gives (F, R, D). s = 0 reduces to
// the Blahut point with F = 0.
inline ComponentPoint arimoto_component(const std::vector<double>& p_row,
                                        const std::vector<double>& delta, int nk, double s,
                                        double t, const SolverParams& params = {}) {
    const int nx = static_cast<int>(p_row.size());
    if (s <= 0.0) {
        auto out = blahut_component(p_row, delta, nk, t, params);
        out.f = 0.0;
        return out;
    }
    if (int vk = detail::arimoto_vertex(p_row, delta, nk, s, t); vk >= 0) {
        // exact vertex solution: the test channel is deterministic, so the
        // rate is zero and the tilt acts through lambda_j = 2^{t d_jk}
        ComponentPoint out;
        out.q.assign(nk, 0.0);
        out.q[vk] = 1.0;
        std::vector<double> lp(nx, -std::numeric_limits<double>::infinity());
        double mx = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < nx; ++j) {
            if (p_row[j] <= 0.0) continue;
            lp[j] = std::log2(p_row[j]) - s * t * delta[static_cast<size_t>(j) * nk + vk];
            mx = std::max(mx, lp[j]);
        }
        double zsum = 0.0;
        std::vector<double> ptilde(nx, 0.0);
        for (int j = 0; j < nx; ++j)
            if (p_row[j] > 0.0) {
                ptilde[j] = std::exp2(lp[j] - mx);
                zsum += ptilde[j];
            }
        for (auto& v : ptilde) v /= zsum;
        out.r = 0.0;
        out.d = 0.0;
        out.f = 0.0;
        for (int j = 0; j < nx; ++j) {
            out.d += ptilde[j] * delta[static_cast<size_t>(j) * nk + vk];
            if (ptilde[j] > 0.0 && p_row[j] > 0.0)
                out.f += ptilde[j] * std::log2(ptilde[j] / p_row[j]);
        }
        out.f = std::max(0.0, out.f);
        return out;
    }
    std::vector<double> dmin_row(nx, 0.0);
    for (int j = 0; j < nx; ++j) {
        double mn = delta[static_cast<size_t>(j) * nk];
        for (int k = 1; k < nk; ++k) mn = std::min(mn, delta[static_cast<size_t>(j) * nk + k]);
        dmin_row[j] = mn;
    }
    std::vector<double> a(static_cast<size_t>(nx) * nk);
    for (int j = 0; j < nx; ++j)
        for (int k = 0; k < nk; ++k)
            a[static_cast<size_t>(j) * nk + k] =
                std::exp2(t * (delta[static_cast<size_t>(j) * nk + k] - dmin_row[j]));

    std::vector<double> q(nk, 1.0 / nk), g(nk), log_lambda(nx), expo(static_cast<size_t>(nx) * nk);
    ComponentPoint out;
    out.converged = false;
    double metric_prev = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < params.tau_max; ++iter) {
        // log2 lambda_j with the row normalization restored
        for (int j = 0; j < nx; ++j) {
            const double* aj = &a[static_cast<size_t>(j) * nk];
            double lj = 0.0;
            for (int k = 0; k < nk; ++k) lj += q[k] * aj[k];
            log_lambda[j] = std::log2(lj) + t * dmin_row[j];
        }
        // g_k = sum_j p_j lambda_j^{-s-1} 2^{t delta_jk}, computed in logs
        double emax = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < nx; ++j) {
            if (p_row[j] <= 0.0) continue;
            double base = std::log2(p_row[j]) - (s + 1.0) * log_lambda[j];
            for (int k = 0; k < nk; ++k) {
                double e = base + t * delta[static_cast<size_t>(j) * nk + k];
                expo[static_cast<size_t>(j) * nk + k] = e;
                if (q[k] > 0.0) emax = std::max(emax, e);
            }
        }
        std::fill(g.begin(), g.end(), 0.0);
        for (int j = 0; j < nx; ++j) {
            if (p_row[j] <= 0.0) continue;
            for (int k = 0; k < nk; ++k)
                g[k] += std::exp2(expo[static_cast<size_t>(j) * nk + k] - emax);
        }
        double f = 0.0;
        for (int k = 0; k < nk; ++k) f += q[k] * g[k];
        double qmove = 0.0, qsum = 0.0;
        for (int k = 0; k < nk; ++k) {
            double next = q[k] * g[k] / f;
            qmove = std::max(qmove, std::abs(next - q[k]));
            q[k] = next;
            qsum += next;
        }
        for (auto& v : q) v /= qsum;
        double metric = std::log2(f) + emax;  // log2 of the true objective
        if (std::abs(metric - metric_prev) < params.conv_tol && qmove < 1e-10) {
            out.converged = true;
            break;
        }
        metric_prev = metric;
    }

    // tilted source and test channel at the solution
    std::vector<double> lp(nx);
    double lpmax = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < nx; ++j) {
        const double* aj = &a[static_cast<size_t>(j) * nk];
        double lj = 0.0;
        for (int k = 0; k < nk; ++k) lj += q[k] * aj[k];
        log_lambda[j] = std::log2(lj) + t * dmin_row[j];
        lp[j] = p_row[j] > 0.0 ? std::log2(p_row[j]) - s * log_lambda[j]
                               : -std::numeric_limits<double>::infinity();
        lpmax = std::max(lpmax, lp[j]);
    }
    std::vector<double> ptilde(nx, 0.0);
    double psum = 0.0;
    for (int j = 0; j < nx; ++j) {
        if (p_row[j] <= 0.0) continue;
        ptilde[j] = std::exp2(lp[j] - lpmax);
        psum += ptilde[j];
    }
    for (auto& v : ptilde) v /= psum;

    std::vector<double> w(static_cast<size_t>(nx) * nk, 0.0);
    for (int j = 0; j < nx; ++j) {
        const double* aj = &a[static_cast<size_t>(j) * nk];
        double lj = 0.0;
        for (int k = 0; k < nk; ++k) lj += q[k] * aj[k];
        for (int k = 0; k < nk; ++k) w[static_cast<size_t>(j) * nk + k] = q[k] * aj[k] / lj;
    }
    detail::rate_distortion_of(ptilde, w, delta, nx, nk, out.r, out.d);
    double fexp = 0.0;
    for (int j = 0; j < nx; ++j)
        if (ptilde[j] > 0.0 && p_row[j] > 0.0) fexp += ptilde[j] * std::log2(ptilde[j] / p_row[j]);
    out.f = std::max(0.0, fexp);
    out.q = std::move(q);
    return out;
}

struct FactoredPoint {
    double f = 0.0, r = 0.0, d = 0.0;
    std::vector<std::vector<double>> q;
    std::vector<ComponentPoint> components;
    bool converged = true;
};

inline FactoredPoint factored_blahut(const SourceDist& P, const DistortionSpec& spec, double t,
                                     const SolverParams& params = {}) {
    FactoredPoint out;
    out.components.reserve(P.p.size());
    for (const auto& row : P.p) {
        auto cp = blahut_component(row, spec.delta, spec.rep_size, t, params);
        out.r += cp.r;
        out.d += cp.d;
        out.converged = out.converged && cp.converged;
        out.q.push_back(cp.q);
        out.components.push_back(std::move(cp));
    }
    return out;
}

inline FactoredPoint factored_arimoto(const SourceDist& P, const DistortionSpec& spec, double s,
                                      double t, const SolverParams& params = {}) {
    FactoredPoint out;
    out.components.reserve(P.p.size());
    for (const auto& row : P.p) {
        auto cp = arimoto_component(row, spec.delta, spec.rep_size, s, t, params);
        out.f += cp.f;
        out.r += cp.r;
        out.d += cp.d;
        out.converged = out.converged && cp.converged;
        out.q.push_back(cp.q);
        out.components.push_back(std::move(cp));
    }
    return out;
}

// (F, R, D) solution point with the multipliers that produced it.
struct RDEPoint {
    enum class Status { ok, infeasible, bracket_failure };
    Status status = Status::ok;
    double f = 0.0, r = 0.0, d = 0.0;
    double s = 0.0, t = 0.0;
    std::vector<std::vector<double>> q;
    bool converged = true;

    bool ok() const { return status == Status::ok; }
};

namespace detail {

inline double max_rate_of(const SourceDist& P) {
    double acc = 0.0;
    for (const auto& row : P.p) {
        double h = 0.0;
        for (double v : row)
            if (v > 0.0) h -= v * std::log2(v);
        acc += h;
    }
    return acc;
}

// Degenerate Q at R = 0: a unit vector on the best single letter per row.
inline std::vector<std::vector<double>> singleton_q(const SourceDist& P,
                                                    const DistortionSpec& spec) {
    auto letters = d_max_letters(P, spec);
    std::vector<std::vector<double>> q(letters.size());
    for (size_t i = 0; i < letters.size(); ++i) {
        q[i].assign(spec.rep_size, 0.0);
        q[i][letters[i] - spec.rep_min] = 1.0;
    }
    return q;
}

}  // namespace detail

// RD curve sampler: slope bisection per the doubling-then-bisect schedule,
// returning the distortion and test channel at the requested rate.
inline RDEPoint rd_at_rate(const SourceDist& P, const DistortionSpec& spec, double r_target,
                           const SolverParams& params = {}) {
    const double n_comp = static_cast<double>(P.p.size());
    const double eps_r = params.eps_r * n_comp;
    RDEPoint out;
    if (r_target < 0.0 || r_target > detail::max_rate_of(P) + 1e-9)
        throw UsageError("rd_at_rate: rate outside [0, sum H(p_i)]");
    if (r_target <= 0.0) {
        out.d = d_max(P, spec);
        out.t = 0.0;
        out.q = detail::singleton_q(P, spec);
        return out;
    }

    double t_lo = params.t_min;  // R(t_lo) must exceed the target
    int doublings = 0;
    FactoredPoint fp = factored_blahut(P, spec, t_lo, params);
    while (fp.r <= r_target) {
        if (++doublings > params.max_doublings) {
            out.status = RDEPoint::Status::bracket_failure;
            return out;
        }
        t_lo *= 2.0;
        fp = factored_blahut(P, spec, t_lo, params);
    }
    double t_hi = 0.0;  // R -> 0 as t -> 0^-
    double t_mid = t_lo;
    for (int it = 0; it < params.bisect_iters; ++it) {
        if (std::abs(fp.r - r_target) <= eps_r) break;
        t_mid = 0.5 * (t_lo + t_hi);
        fp = factored_blahut(P, spec, t_mid, params);
        if (fp.r > r_target) t_lo = t_mid; else t_hi = t_mid;
    }
    out.r = fp.r;
    out.d = fp.d;
    out.t = t_mid == t_lo || t_mid == t_hi ? t_mid : 0.5 * (t_lo + t_hi);
    out.t = std::min(out.t, 0.0);
    out.q = std::move(fp.q);
    out.converged = fp.converged;
    if (std::abs(fp.r - r_target) > eps_r) out.status = RDEPoint::Status::bracket_failure;
    return out;
}

namespace detail {

// inner bisection: find t with R|_{s,t} = r_target, doubling t_min as needed
inline bool rde_inner_t(const SourceDist& P, const DistortionSpec& spec, double s,
                        double r_target, double eps_r, double& t_min_io,
                        const SolverParams& params, FactoredPoint& fp_out, double& t_out) {
    double t_lo = t_min_io;
    FactoredPoint fp = factored_arimoto(P, spec, s, t_lo, params);
    int doublings = 0;
    while (fp.r <= r_target) {
        if (++doublings > params.max_doublings) return false;
        t_lo *= 2.0;
        fp = factored_arimoto(P, spec, s, t_lo, params);
    }
    t_min_io = t_lo;
    double t_hi = 0.0;
    double t_cur = t_lo;
    for (int it = 0; it < params.bisect_iters; ++it) {
        if (std::abs(fp.r - r_target) <= eps_r) break;
        t_cur = 0.5 * (t_lo + t_hi);
        fp = factored_arimoto(P, spec, s, t_cur, params);
        if (fp.r > r_target) t_lo = t_cur; else t_hi = t_cur;
    }
    fp_out = std::move(fp);
    t_out = t_cur;
    return std::abs(fp_out.r - r_target) <= eps_r;
}

}  // namespace detail

// RDE solve at a designed (R, D): outer bisection on s matching the
// distortion, inner bisection on t matching the rate. Returns a typed
// infeasibility when D lies below the RD curve at rate R.
inline RDEPoint rde_at(const SourceDist& P, const DistortionSpec& spec, double r_target,
                       double d_target, const SolverParams& params = {}) {
    const double n_comp = static_cast<double>(P.p.size());
    const double eps_r = params.eps_r * n_comp;
    const double eps_d = params.eps_d * n_comp;
    RDEPoint out;

    if (r_target <= 0.0) {
        // zero-exponent limit; positive exponents at R = 0 live in the
        // closed-form rate-0 evaluator
        double dm = d_max(P, spec);
        if (d_target < dm - eps_d) {
            out.status = RDEPoint::Status::infeasible;
            return out;
        }
        out.d = dm;
        out.q = detail::singleton_q(P, spec);
        return out;
    }

    // s = 0 gives the RD curve; D below it is infeasible (no positive
    // exponent exists), D at it means F = 0.
    RDEPoint rd = rd_at_rate(P, spec, r_target, params);
    if (rd.status == RDEPoint::Status::bracket_failure) {
        out.status = RDEPoint::Status::bracket_failure;
        return out;
    }
    if (d_target < rd.d - eps_d) {
        out.status = RDEPoint::Status::infeasible;
        return out;
    }
    if (std::abs(d_target - rd.d) <= eps_d) {
        out.f = 0.0;
        out.r = rd.r;
        out.d = rd.d;
        out.t = rd.t;
        out.q = std::move(rd.q);
        return out;
    }

    double s_hi = params.s_max;
    double t_min = params.t_min;
    FactoredPoint fp;
    double t_at = 0.0;
    int doublings = 0;
    while (true) {
        if (!detail::rde_inner_t(P, spec, s_hi, r_target, eps_r, t_min, params, fp, t_at)) {
            out.status = RDEPoint::Status::bracket_failure;
            return out;
        }
        if (fp.d > d_target) break;
        if (std::abs(fp.d - d_target) <= eps_d) break;
        if (++doublings > params.max_doublings) {
            out.status = RDEPoint::Status::bracket_failure;
            return out;
        }
        s_hi *= 2.0;
    }

    double s_lo = 0.0, s_cur = s_hi;
    for (int it = 0; it < params.bisect_iters; ++it) {
        if (std::abs(fp.d - d_target) <= eps_d) break;
        s_cur = 0.5 * (s_lo + s_hi);
        if (!detail::rde_inner_t(P, spec, s_cur, r_target, eps_r, t_min, params, fp, t_at)) {
            out.status = RDEPoint::Status::bracket_failure;
            return out;
        }
        if (fp.d < d_target) s_lo = s_cur; else s_hi = s_cur;
    }
    if (std::abs(fp.d - d_target) > eps_d) {
        out.status = RDEPoint::Status::bracket_failure;
        return out;
    }
    out.f = fp.f;
    out.r = fp.r;
    out.d = fp.d;
    out.s = s_cur;
    out.t = t_at;
    out.q = std::move(fp.q);
    out.converged = fp.converged;
    return out;
}

// Left/right slope estimates of the component RDE around a solution point;
// a visible gap flags a possible slope discontinuity of the true curve.
struct SlopeDiagnostic {
    double left = 0.0, right = 0.0;
    double gap() const { return std::abs(left - right); }
};

inline SlopeDiagnostic rde_component_slope(const std::vector<double>& p_row,
                                           const std::vector<double>& delta, int nk, double s,
                                           double t, double h = 1e-4,
                                           const SolverParams& params = {}) {
    auto at = [&](double tv) { return arimoto_component(p_row, delta, nk, s, tv, params); };
    auto c0 = at(t), cl = at(t - h), cr = at(t + h);
    SlopeDiagnostic out;
    double dl = c0.d - cl.d, dr = cr.d - c0.d;
    out.left = dl != 0.0 ? (c0.f - cl.f) / dl : 0.0;
    out.right = dr != 0.0 ? (cr.f - c0.f) / dr : 0.0;
    return out;
}

}  // namespace rsrd

#endif
