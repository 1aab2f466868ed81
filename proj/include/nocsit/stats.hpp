#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nocsit::stats {

/// Welford running mean/variance; merge() combines chunks (Chan et al.).
class MeanAccumulator {
public:
    void add(double x);
    void merge(const MeanAccumulator& other);

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    /// Sample variance (n-1 denominator); 0 for fewer than two samples.
    double variance() const noexcept;
    /// sample stddev / sqrt(n)
    double stderr_of_mean() const noexcept;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0; // asymptotic Kolmogorov distribution
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

/// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// coefficient * sqrt((n1 + n2) / (n1 * n2)); 1.63 is roughly the 1% level.
double ks_critical_value(double coefficient, std::size_t n1, std::size_t n2);

/// Complementary Kolmogorov CDF, Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0; // propagated from y_stderr when given, else from residuals
    double residual_rms = 0.0;
    double max_abs_residual = 0.0;
    double r_squared = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y,
                        std::span<const double> y_stderr = {});

} // namespace nocsit::stats
