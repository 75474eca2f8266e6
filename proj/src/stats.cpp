#include "shapebench/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace shapebench {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return h;
        }
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) {
        throw std::invalid_argument("incomplete_beta: a and b must be positive");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("incomplete_beta: x must lie in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_upper(double t, double df) {
    if (!(df > 0.0)) {
        throw std::invalid_argument("student_t: df must be positive");
    }
    if (std::isinf(t)) {
        return t > 0 ? 0.0 : 1.0;
    }
    // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
    const double x = df / (df + t * t);
    const double two_sided = incomplete_beta(0.5 * df, 0.5, x);
    return t >= 0.0 ? 0.5 * two_sided : 1.0 - 0.5 * two_sided;
}

double student_t_cdf(double t, double df) {
    return 1.0 - student_t_upper(t, df);
}

SignificanceResult paired_one_sided_t_test(std::span<const double> candidate,
                                           std::span<const double> best, double alpha) {
    if (candidate.size() != best.size()) {
        throw std::invalid_argument("paired t-test: sample sizes differ (" +
                                    std::to_string(candidate.size()) + " vs " +
                                    std::to_string(best.size()) + ")");
    }
    const std::size_t n = candidate.size();
    if (n < 2) {
        throw std::invalid_argument("paired t-test: need at least 2 pairs");
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean += best[i] - candidate[i];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = (best[i] - candidate[i]) - mean;
        ss += e * e;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    SignificanceResult r;
    r.df = static_cast<int>(n - 1);
    if (sd == 0.0) {
        if (mean > 0.0) {
            r.t_stat = std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
        } else if (mean < 0.0) {
            r.t_stat = -std::numeric_limits<double>::infinity();
            r.p_value = 1.0;
        } else {
            r.t_stat = 0.0;
            r.p_value = 0.5;
        }
    } else {
        r.t_stat = mean / (sd / std::sqrt(static_cast<double>(n)));
        r.p_value = student_t_upper(r.t_stat, static_cast<double>(r.df));
    }
    r.significant = r.p_value < alpha;
    return r;
}

}  // namespace shapebench
