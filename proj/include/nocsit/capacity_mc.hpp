#pragma once

// Monte Carlo ergodic capacities of i.i.d. Rayleigh MIMO links, the
// broadcast outer region with per-user caps, the CDIT capacity region for
// channels whose squared singular values share one law, and DoF slope
// extraction from power sweeps. Rates are in nats per channel use.

#include "nocsit/random.hpp"
#include "nocsit/rational.hpp"
#include "nocsit/region_geometry.hpp"
#include "nocsit/stats.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nocsit::capacity {

/// Total transmit power, linear scale.
class PowerLevel {
public:
    explicit PowerLevel(double p);
    double value() const noexcept { return p_; }

private:
    double p_;
};

/// H in C^{M x N}; the receiver sees H^H x + z.
struct ChannelSample {
    Eigen::MatrixXcd H;
};

struct CapacityEstimate {
    double mean = 0.0; // nats
    double std_error = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Draws per chunk; each chunk has its own derived stream.
inline constexpr std::size_t kChunkDraws = 1024;
inline constexpr std::size_t kMinSamples = 100;
inline constexpr std::size_t kDefaultSamples = 10'000;

/// i.i.d. CN(0,1) entries (real and imaginary parts N(0, 1/2)).
ChannelSample sample_channel(int M, int N, rng::Engine& engine);

/// Eigenvalues of the N x N Gram matrix H^H H, ascending, clamped at 0.
Eigen::VectorXd gram_eigenvalues(const ChannelSample& h);

/// ln(1 + x), exact in the last place whenever 1 + x is representable.
double log_one_plus(double x);

/// sum_i ln(1 + (P/M) lambda_i(H^H H)).
double log_det_rate(const ChannelSample& h, PowerLevel P);

/// ln det(I_N + H^H Q H) for an arbitrary input covariance Q (M x M).
double log_det_rate(const ChannelSample& h, const Eigen::MatrixXcd& Q);

CapacityEstimate ergodic_capacity(int M, int N, PowerLevel P, std::size_t n_samples,
                                  std::uint64_t seed);

/// Law q of the squared singular values.
struct EigenDistSpec {
    struct Degenerate {
        double lambda;
    };
    struct Empirical {
        std::vector<double> samples;
    };
    std::variant<Degenerate, Empirical> law;

    static EigenDistSpec degenerate(double lambda);
    static EigenDistSpec empirical(std::vector<double> samples);
};

struct BoundEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0; // 0 for an exact value
};

/// E_q[ln(1 + (P/M) lambda)].
BoundEstimate theorem2_bound(const EigenDistSpec& q, int M, PowerLevel P);

/// The min(M,N) nonzero eigenvalues of H^H H per draw, pooled in randomized
/// within-draw order. Uses the same channel draws as ergodic_capacity with
/// the same (M, N, seed, n_samples).
EigenDistSpec eigen_samples(int M, int N, std::size_t n_samples, std::uint64_t seed);

/// Optional per-user caps plus one weighted-sum constraint
/// sum_i weights_i * R_i <= bound.
struct RateRegion {
    int dim = 0;
    std::vector<double> caps; // empty: no per-user caps
    std::vector<double> cap_stderr;
    std::vector<Rational> weights;
    double bound = 0.0;
    double bound_stderr = 0.0;
};

/// Requires M >= N_1 >= ... >= N_K.
RateRegion bc_outer_region(const region::BcConfig& cfg, PowerLevel P, std::size_t n_samples,
                           std::uint64_t seed);

/// Single constraint sum_i R_i / N_i <= theorem2_bound(q, M, P). Requires
/// M >= N_1 >= ... >= N_K.
RateRegion theorem2_region(const region::BcConfig& cfg, const EigenDistSpec& q, PowerLevel P);

struct KsPair {
    int user_a = 0; // 1-based
    int user_b = 0;
    stats::KsResult ks;
    double critical = 0.0;
    bool same_law = false;
};

struct CovarianceProbe {
    int user = 0; // 1-based; channel shape (M, N_user)
    int alternative = 0;
    double mean_gain = 0.0; // rate(isotropic) - rate(alternative), nats
    double std_error = 0.0;
    bool isotropic_not_beaten = false; // mean_gain >= -3 std_error
};

struct ThetaOptions {
    double ks_coefficient = 1.63;
    int covariance_alternatives = 20;
    double probe_power = 10.0;
};

struct ThetaClassReport {
    std::vector<KsPair> pairs;
    std::vector<CovarianceProbe> probes;
    bool all_same_law = true;
    bool isotropic_optimal = true;
};

/// Statistical membership checks for the equal-law class. Requires N_list
/// nonincreasing with every N_i <= M.
ThetaClassReport theta_class_report(int M, const std::vector<int>& N_list, std::size_t n_samples,
                                    std::uint64_t seed, const ThetaOptions& options = {});

/// Isotropy probe for one shape: rate(P/M I) - rate(Q) over common draws.
CovarianceProbe covariance_probe(int M, int N, const Eigen::MatrixXcd& Q, PowerLevel P,
                                 std::size_t n_samples, std::uint64_t seed);

/// Random trace-P positive semidefinite M x M covariance.
Eigen::MatrixXcd random_covariance(int M, PowerLevel P, rng::Engine& engine);

struct RatePoint {
    double P = 0.0;
    double rate = 0.0;   // nats
    double std_error = 0.0; // optional
};

/// Least-squares slope of rate against ln P. Needs >= 3 points spanning at
/// least two decades of P.
stats::LinearFit dof_slope(std::span<const RatePoint> points);

/// Logarithmically spaced grid of `count` powers from `lo` to `hi`.
std::vector<double> log_grid(double lo, double hi, int count);

enum class Units { Nats, Bits };
double in_units(double nats, Units u);
std::string_view units_name(Units u);

/// Region text format with a units annotation; bounds printed as decimals.
void write_rate_region(std::ostream& out, const RateRegion& region, Units units);

} // namespace nocsit::capacity
