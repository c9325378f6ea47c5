#ifndef RSRD_RD_CLOSED_HPP
#define RSRD_RD_CLOSED_HPP

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "rsrd/distortion.hpp"
#include "rsrd/util.hpp"

namespace rsrd {

struct WaterfillResult {
    bool feasible = true;
    double r_total = 0.0;
    double lambda = 0.0;
    std::vector<double> d_i;                 // per-component distortion
    std::vector<std::array<double, 2>> q;    // test-channel rows (q_{i,0}, q_{i,1})
};

// Conventional errors-and-erasures RD function: R(D) = sum [H(p_i) - H(Dt_i)]^+
// with Dt_i = D_i + p_i - 1 at a common water level.
inline WaterfillResult rd_mbm1_closed(const std::vector<double>& p1, double d_target) {
    const int n = static_cast<int>(p1.size());
    WaterfillResult out;
    double d_min = 0.0, cap_sum = 0.0, cap_max = 0.0;
    std::vector<double> cap(n);
    for (int i = 0; i < n; ++i) {
        cap[i] = std::min(p1[i], 1.0 - p1[i]);
        d_min += 1.0 - p1[i];
        cap_sum += cap[i];
        cap_max = std::max(cap_max, cap[i]);
    }
    double target = d_target - d_min;  // = sum Dt_i
    if (target < -1e-12) {
        out.feasible = false;
        return out;
    }
    double lambda;
    if (target >= cap_sum) {
        lambda = cap_max;  // every component saturated: R = 0
    } else {
        lambda = bisect_monotone(
            [&](double lv) {
                double acc = 0.0;
                for (int i = 0; i < n; ++i) acc += std::min(lv, cap[i]);
                return acc;
            },
            0.0, cap_max, target, /*increasing=*/true);
    }
    out.lambda = lambda;
    out.d_i.resize(n);
    out.q.resize(n);
    for (int i = 0; i < n; ++i) {
        double dt = std::min(lambda, cap[i]);
        out.d_i[i] = dt + 1.0 - p1[i];
        double r_i = entropy2(p1[i]) - entropy2(dt);
        if (r_i > 0.0) out.r_total += r_i;
        double den = 1.0 - 2.0 * dt;
        if (std::abs(den) < 1e-12) {
            out.q[i] = {0.5, 0.5};
        } else {
            out.q[i] = {(1.0 - p1[i] - dt) / den, (p1[i] - dt) / den};
        }
    }
    return out;
}

namespace detail {

inline double basd_rate_component(double r1, double lam) {
    double u = (1.0 + lam) / (1.0 + lam + lam * lam);
    return entropy2(r1) - entropy2(u) + (r1 - u) * entropy2(lam / (1.0 + lam));
}

inline double basd_dist_component(double r1, double lam) {
    if (basd_rate_component(r1, lam) > 0.0) {
        double l2 = lam * lam;
        return (1.0 + 2.0 * lam + 3.0 * l2) / (1.0 + lam + l2) -
               r1 * (1.0 + 2.0 * lam) / (1.0 + lam);
    }
    return std::min(1.0, 3.0 * (1.0 - r1));
}

}  // namespace detail

// Bit-level ASD RD function with its own water level lambda in (0,1).
inline WaterfillResult rd_basd_closed(const std::vector<double>& r1, double d_target) {
    const int n = static_cast<int>(r1.size());
    WaterfillResult out;
    double d_min = 0.0, d_max_v = 0.0;
    for (double r : r1) {
        d_min += 1.0 - r;
        d_max_v += std::min(1.0, 3.0 * (1.0 - r));
    }
    if (d_target < d_min - 1e-12) {
        out.feasible = false;
        return out;
    }
    double lam;
    if (d_target >= d_max_v) {
        lam = 1.0;
    } else {
        lam = bisect_monotone(
            [&](double lv) {
                double acc = 0.0;
                for (double r : r1) acc += detail::basd_dist_component(r, lv);
                return acc;
            },
            1e-12, 1.0 - 1e-12, d_target, /*increasing=*/true);
    }
    out.lambda = lam;
    out.d_i.resize(n);
    out.q.resize(n);
    for (int i = 0; i < n; ++i) {
        out.d_i[i] = detail::basd_dist_component(r1[i], lam);
        double rate_i = detail::basd_rate_component(r1[i], lam);
        if (rate_i > 0.0 && d_target < d_max_v) {
            out.r_total += rate_i;
            double l2 = lam * lam;
            double s0 = ((1.0 + lam) - r1[i] * (1.0 + lam + l2)) / (1.0 - l2);
            out.q[i] = {s0, 1.0 - s0};
        } else {
            // saturated bit: the single best reproduction letter
            out.q[i] = 3.0 * (1.0 - r1[i]) < 1.0 ? std::array<double, 2>{0.0, 1.0}
                                                 : std::array<double, 2>{1.0, 0.0};
        }
    }
    return out;
}

// --- closed-form RDE over the m-ary symmetric channel (conventional
// scheme, hard decision correct with probability p) ---

// h(u) = H(u) - H(u + Dbar - 1), strictly decreasing on [1-Dbar, 1-Dbar/2)
inline double msc_h(double u, double dbar) { return entropy2(u) - entropy2(u + dbar - 1.0); }

inline double msc_h_inverse(double rbar, double dbar) {
    if (!(rbar > 0.0 && rbar <= entropy2(1.0 - dbar) + 1e-12))
        throw DomainError("h^{-1}: rate outside (0, H(1-D/N)]");
    return bisect_monotone([&](double u) { return msc_h(u, dbar); }, 1.0 - dbar,
                           1.0 - dbar / 2.0, rbar, /*increasing=*/false);
}

inline double msc_g_inverse(double fbar, double p, double dbar) {
    if (p < 1.0 - dbar) throw DomainError("g^{-1}: need p >= 1 - D/N");
    double fmax = kl2(1.0 - dbar, p);
    if (!(fbar >= 0.0 && fbar <= fmax + 1e-12))
        throw DomainError("g^{-1}: exponent outside [0, D_KL(1-D/N || p)]");
    if (fbar <= 0.0) return p;
    return bisect_monotone([&](double u) { return kl2(u, p); }, 1.0 - dbar, p, fbar,
                           /*increasing=*/false);
}

// Best achievable exponent for 2^R attempts at threshold D = N-K+1.
// Rates below the RD curve cannot decay the failure probability: F = 0.
inline double rde_msc_F(double p, int n, int k, double r) {
    double dbar = static_cast<double>(n - k + 1) / n;
    double rbar = r / n;
    double u = msc_h_inverse(rbar, dbar);
    if (u >= p) return 0.0;
    return n * kl2(u, p);
}

// Minimum rate for a target exponent F (Lagrange-dual direction).
inline double rde_msc_R(double p, int n, int k, double f) {
    double dbar = static_cast<double>(n - k + 1) / n;
    double u = msc_g_inverse(f / n, p, dbar);
    double r = entropy2(u) - entropy2(u + dbar - 1.0);
    return n * std::max(0.0, r);
}

// Per-component closed-form RDE point of the conventional scheme at
// multipliers (s, t): the minimizer of f(q1) sits at 0, 1, or the interior
// stationary point beta depending on where p falls.
struct MscRdePoint {
    int case_id = 3;
    double f = 0.0, r = 0.0, d = 0.0;
    double q1 = 0.0;
};

inline MscRdePoint msc_rde_point(double p, double s, double t) {
    MscRdePoint out;
    const double pb = 1.0 - p;
    const double e_t = std::exp2(t);
    if (p <= e_t / (1.0 + e_t)) {
        out.case_id = 1;
        out.q1 = 0.0;
        out.d = 1.0;
        return out;
    }
    if (p >= 1.0 / (1.0 + std::exp2(t * (2.0 * s + 1.0)))) {
        out.case_id = 2;
        out.q1 = 1.0;
        out.d = 2.0 * pb / (p * std::exp2(2.0 * t * s) + pb);
        double u = 1.0 - out.d / 2.0;
        out.f = kl2(u, p);
        return out;
    }
    out.case_id = 3;
    double num = std::exp2(s * t / (s + 1.0)) * std::pow(p, 1.0 / (s + 1.0));
    double u = num / (num + std::pow(pb, 1.0 / (s + 1.0)));
    out.d = e_t / (1.0 + e_t) + 1.0 - u;
    out.r = entropy2(u) - entropy2(u + out.d - 1.0);
    out.f = kl2(u, p);
    out.q1 = (1.0 - out.d) / (3.0 - 2.0 * (u + out.d));
    return out;
}

// --- single decoding attempt: the R = 0 exponent ---

namespace detail {

// log2 of the per-letter moment generating sum M(alpha) = sum_j p_j 2^{alpha delta_jk}
inline double rate0_logm(const std::vector<double>& row, const DistortionSpec& spec, int k,
                         double alpha) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < spec.src_size; ++j)
        if (row[j] > 0.0)
            mx = std::max(mx, alpha * spec.delta[static_cast<size_t>(j) * spec.rep_size + k]);
    double acc = 0.0;
    for (int j = 0; j < spec.src_size; ++j)
        if (row[j] > 0.0)
            acc += row[j] *
                   std::exp2(alpha * spec.delta[static_cast<size_t>(j) * spec.rep_size + k] - mx);
    return mx + std::log2(acc);
}

}  // namespace detail

// Tilted mean distortion D(alpha) for reproduction letter k (0-based column)
inline double rate0_dist(const std::vector<double>& row, const DistortionSpec& spec, int k,
                         double alpha) {
    double logm = detail::rate0_logm(row, spec, k, alpha);
    double acc = 0.0;
    for (int j = 0; j < spec.src_size; ++j) {
        if (row[j] <= 0.0) continue;
        double d = spec.delta[static_cast<size_t>(j) * spec.rep_size + k];
        acc += row[j] * std::exp2(alpha * d - logm) * d;
    }
    return acc;
}

// Large-deviation rate function G_k(alpha) = alpha D(alpha) - log2 M(alpha)
inline double rate0_gk(const std::vector<double>& row, const DistortionSpec& spec, int k,
                       double alpha) {
    return alpha * rate0_dist(row, spec, k, alpha) - detail::rate0_logm(row, spec, k, alpha);
}

struct Rate0Result {
    bool feasible = true;
    double f = 0.0;
    double alpha = 0.0;
    Pattern letters;  // the deterministic single erasure pattern
};

// RDE at R = 0: maximize alpha*D - sum_i min_k log2 M_i^k(alpha) over the
// common tilt alpha >= 0. The per-position argmin letters give the single
// deterministic pattern of the induced codebook.
inline Rate0Result rde_rate0(const SourceDist& P, const DistortionSpec& spec, double d_target) {
    Rate0Result out;
    const double dm = d_max(P, spec);
    if (d_target < dm - 1e-9) {
        out.feasible = false;
        return out;
    }

    auto psi = [&](double alpha) {
        double acc = alpha * d_target;
        for (const auto& row : P.p) {
            double best = detail::rate0_logm(row, spec, 0, alpha);
            for (int k = 1; k < spec.rep_size; ++k)
                best = std::min(best, detail::rate0_logm(row, spec, k, alpha));
            acc -= best;
        }
        return acc;
    };

    // coarse geometric scan, then ternary refinement around the best point
    std::vector<double> grid{0.0};
    for (double a = 1.0 / 1024.0; a <= 256.0; a *= 2.0) grid.push_back(a);
    size_t best_idx = 0;
    double best_val = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        double v = psi(grid[i]);
        if (v > best_val) {
            best_val = v;
            best_idx = i;
        }
    }
    double lo = best_idx > 0 ? grid[best_idx - 1] : 0.0;
    double hi = best_idx + 1 < grid.size() ? grid[best_idx + 1] : grid.back() * 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (psi(m1) < psi(m2)) lo = m1; else hi = m2;
    }
    out.alpha = 0.5 * (lo + hi);
    out.f = std::max(0.0, psi(out.alpha));

    out.letters.reserve(P.p.size());
    for (const auto& row : P.p) {
        int best_k = 0;
        double best = detail::rate0_logm(row, spec, 0, out.alpha);
        for (int k = 1; k < spec.rep_size; ++k) {
            double v = detail::rate0_logm(row, spec, k, out.alpha);
            if (v < best) {
                best = v;
                best_k = k;
            }
        }
        out.letters.push_back(static_cast<Letter>(best_k + spec.rep_min));
    }
    return out;
}

}  // namespace rsrd

#endif
