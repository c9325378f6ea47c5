#ifndef RSRD_UTIL_HPP
#define RSRD_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsrd {

// All information quantities are in bits (base-2 logs), with 0*log(0) = 0.

inline double log2_safe(double x) { return x > 0.0 ? std::log2(x) : 0.0; }

inline double entropy2(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return -u * std::log2(u) - (1.0 - u) * std::log2(1.0 - u);
}

// D_KL(u || p) between Bernoulli(u) and Bernoulli(p), in bits.
inline double kl2(double u, double p) {
    double acc = 0.0;
    if (u > 0.0) acc += u * std::log2(u / p);
    if (u < 1.0) acc += (1.0 - u) * std::log2((1.0 - u) / (1.0 - p));
    return acc;
}

inline double kl_vec(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (size_t j = 0; j < a.size(); ++j)
        if (a[j] > 0.0) acc += a[j] * std::log2(a[j] / b[j]);
    return acc;
}

// Bisection for a continuous monotone function on [lo, hi]. Assumes
// f(lo) and f(hi) bracket the target; `increasing` selects orientation.
template <class F>
double bisect_monotone(F f, double lo, double hi, double target, bool increasing,
                       double xtol = 1e-12, int max_iter = 200) {
    for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = f(mid);
        bool go_right = increasing ? (v < target) : (v > target);
        if (go_right) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct WilsonInterval {
    double lo = 0.0, hi = 1.0;
};

// 95% Wilson score interval for a binomial proportion.
inline WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Fixed 9-significant-digit formatting used by every CSV surface.
inline std::string fmt_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rsrd

#endif
