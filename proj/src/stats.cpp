#include "nocsit/stats.hpp"

#include "nocsit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nocsit::stats {

void MeanAccumulator::add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void MeanAccumulator::merge(const MeanAccumulator& other) {
    if (other.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double delta = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    n_ += other.n_;
}

double MeanAccumulator::variance() const noexcept {
    return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double MeanAccumulator::stderr_of_mean() const noexcept {
    return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) {
        return 1.0;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-12 * std::fabs(sum)) {
            break;
        }
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw ParameterError("KS test needs two nonempty samples");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) {
            ++i;
        }
        while (j < b.size() && b[j] <= x) {
            ++j;
        }
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    const double sq = std::sqrt(ne);
    return {d, kolmogorov_q((sq + 0.12 + 0.11 / sq) * d), a.size(), b.size()};
}

double ks_critical_value(double coefficient, std::size_t n1, std::size_t n2) {
    const double a = static_cast<double>(n1);
    const double b = static_cast<double>(n2);
    return coefficient * std::sqrt((a + b) / (a * b));
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y,
                        std::span<const double> y_stderr) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n || (!y_stderr.empty() && y_stderr.size() != n)) {
        throw ParameterError("least squares needs matching x/y with at least two points");
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0.0) {
        throw ParameterError("least squares: x values are all equal");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - (fit.intercept + fit.slope * x[k]);
        ss_res += r * r;
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::fabs(r));
    }
    fit.residual_rms = std::sqrt(ss_res / static_cast<double>(n));
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    if (!y_stderr.empty()) {
        double var = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double w = (x[k] - mx) / sxx;
            var += w * w * y_stderr[k] * y_stderr[k];
        }
        fit.slope_stderr = std::sqrt(var);
    } else if (n > 2) {
        fit.slope_stderr = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

} // namespace nocsit::stats
