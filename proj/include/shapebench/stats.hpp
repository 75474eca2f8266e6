/**
 * @file stats.hpp
 * @brief Student-t machinery for the one-sided paired t-test.
 */
#pragma once

#include <span>

namespace shapebench {

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
/// Accurate to ~1e-14 for the parameter ranges used here.
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// P(T > t), computed without cancellation for large positive t.
double student_t_upper(double t, double df);

struct SignificanceResult {
    double t_stat = 0.0;
    int df = 0;
    double p_value = 1.0;
    bool significant = false;
};

/**
 * One-sided paired t-test of H1: mean(best - candidate) > 0.
 *
 * d = best - candidate, t = mean(d) / (sd(d) / sqrt(n)) with the n-1 sample
 * standard deviation, p = P(T_{n-1} > t). When sd(d) == 0 the statistic is
 * taken at its limit: mean > 0 gives p = 0, mean < 0 gives p = 1, and an
 * all-zero difference gives t = 0, p = 0.5.
 *
 * Throws std::invalid_argument if the sizes differ or n < 2.
 */
SignificanceResult paired_one_sided_t_test(std::span<const double> candidate,
                                           std::span<const double> best, double alpha = 0.05);

}  // namespace shapebench
