#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ukcm {

struct Estimate {
    double value = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    std::int64_t trials = 0;
};

inline double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0;
    for (double x : xs) s += x;
    return s / (double)xs.size();
}

inline double sample_sd(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0;
    double m = mean_of(xs), s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / (double)(xs.size() - 1));
}

inline double median_of(std::vector<double> xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// binomial proportion with a normal-approximation interval
inline Estimate proportion_estimate(std::int64_t hits, std::int64_t trials,
                                    double z = 1.959963984540054) {
    Estimate e;
    e.trials = trials;
    if (trials <= 0) return e;
    double p = (double)hits / (double)trials;
    double s = std::sqrt(std::max(p * (1 - p), 0.0) / (double)trials);
    e.value = p;
    e.ci_lo = std::max(0.0, p - z * s);
    e.ci_hi = std::min(1.0, p + z * s);
    return e;
}

namespace detail {

// regularized lower incomplete gamma P(a,x), series expansion
inline double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// regularized upper incomplete gamma Q(a,x), Lentz continued fraction
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// survival function of the chi-square distribution with dof degrees
inline double chi_square_sf(double x, double dof) {
    if (x <= 0) return 1;
    double a = dof / 2, hx = x / 2;
    if (hx < a + 1) return 1 - detail::gamma_p_series(a, hx);
    return detail::gamma_q_cf(a, hx);
}

}  // namespace ukcm
