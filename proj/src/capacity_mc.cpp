#include "nocsit/capacity_mc.hpp"

#include "nocsit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

namespace nocsit::capacity {

PowerLevel::PowerLevel(double p) : p_(p) {
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw ParameterError("transmit power must be positive and finite");
    }
}

ChannelSample sample_channel(int M, int N, rng::Engine& engine) {
    if (M < 1 || N < 1) {
        throw ConfigError("antenna counts must be >= 1");
    }
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    ChannelSample s{Eigen::MatrixXcd(M, N)};
    // Column-major fill order is part of the reproducibility contract.
    for (Eigen::Index c = 0; c < N; ++c) {
        for (Eigen::Index r = 0; r < M; ++r) {
            const double re = gauss(engine);
            const double im = gauss(engine);
            s.H(r, c) = {re, im};
        }
    }
    return s;
}

double log_one_plus(double x) {
    const double y = 1.0 + x;
    return (y - 1.0 == x) ? std::log(y) : std::log1p(x);
}

namespace {

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& g) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw NumericError("Hermitian eigensolver failed");
    }
    Eigen::VectorXd lambda = eig.eigenvalues();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (!std::isfinite(lambda(i))) {
            throw NumericError("non-finite eigenvalue");
        }
        lambda(i) = std::max(0.0, lambda(i));
    }
    return lambda;
}

double rate_from_eigenvalues(const Eigen::VectorXd& lambda, double snr_per_antenna) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        r += log_one_plus(snr_per_antenna * lambda(i));
    }
    return r;
}

void require_samples(std::size_t n) {
    if (n < kMinSamples) {
        throw ParameterError("Monte Carlo estimates need at least " + std::to_string(kMinSamples) +
                             " samples");
    }
}

void require_sorted(const region::BcConfig& cfg) {
    int prev = cfg.M;
    for (int i = 0; i < cfg.users(); ++i) {
        const int n = cfg.N[static_cast<std::size_t>(i)];
        if (n > prev) {
            throw PreconditionError(
                "requires M >= N1 >= N2 >= ... >= NK; sort users by receive antennas "
                "(descending) and keep every N_i <= M");
        }
        prev = n;
    }
}

// Calls visit(chunk, draw_index_in_chunk, sample, eigenvalues) for every
// draw of the (seed, n) stream; per-chunk state is owned by the caller.
template <typename ChunkFn>
void for_each_chunk(std::size_t n, const ChunkFn& fn) {
    const std::size_t chunks = (n + kChunkDraws - 1) / kChunkDraws;
    rng::parallel_for(chunks, [&](std::size_t c) {
        const std::size_t begin = c * kChunkDraws;
        const std::size_t count = std::min(kChunkDraws, n - begin);
        fn(c, count);
    });
}

} // namespace

Eigen::VectorXd gram_eigenvalues(const ChannelSample& h) {
    return hermitian_eigenvalues(h.H.adjoint() * h.H);
}

double log_det_rate(const ChannelSample& h, PowerLevel P) {
    return rate_from_eigenvalues(gram_eigenvalues(h), P.value() / static_cast<double>(h.H.rows()));
}

double log_det_rate(const ChannelSample& h, const Eigen::MatrixXcd& Q) {
    if (Q.rows() != h.H.rows() || Q.cols() != h.H.rows()) {
        throw ParameterError("input covariance must be M x M");
    }
    const Eigen::MatrixXcd g = h.H.adjoint() * Q * h.H;
    return rate_from_eigenvalues(hermitian_eigenvalues(0.5 * (g + g.adjoint())), 1.0);
}

CapacityEstimate ergodic_capacity(int M, int N, PowerLevel P, std::size_t n_samples,
                                  std::uint64_t seed) {
    require_samples(n_samples);
    const double snr = P.value() / M;
    const std::size_t chunks = (n_samples + kChunkDraws - 1) / kChunkDraws;
    std::vector<stats::MeanAccumulator> acc(chunks);
    for_each_chunk(n_samples, [&](std::size_t c, std::size_t count) {
        rng::Engine engine = rng::derive(seed, c);
        for (std::size_t k = 0; k < count; ++k) {
            acc[c].add(rate_from_eigenvalues(gram_eigenvalues(sample_channel(M, N, engine)), snr));
        }
    });
    stats::MeanAccumulator total;
    for (const auto& a : acc) {
        total.merge(a);
    }
    return {total.mean(), total.stderr_of_mean(), n_samples, seed};
}

EigenDistSpec EigenDistSpec::degenerate(double lambda) {
    if (!(lambda >= 0.0)) {
        throw DomainError("eigenvalue law must be supported on lambda >= 0");
    }
    return {Degenerate{lambda}};
}

EigenDistSpec EigenDistSpec::empirical(std::vector<double> samples) {
    if (samples.empty()) {
        throw DomainError("empirical eigenvalue law needs samples");
    }
    for (double v : samples) {
        if (!(v >= 0.0)) {
            throw DomainError("eigenvalue law must be supported on lambda >= 0");
        }
    }
    return {Empirical{std::move(samples)}};
}

BoundEstimate theorem2_bound(const EigenDistSpec& q, int M, PowerLevel P) {
    if (M < 1) {
        throw ConfigError("transmit antenna count must be >= 1");
    }
    const double snr = P.value() / M;
    if (const auto* d = std::get_if<EigenDistSpec::Degenerate>(&q.law)) {
        if (!(d->lambda >= 0.0)) {
            throw DomainError("negative eigenvalue in law");
        }
        return {log_one_plus(snr * d->lambda), 0.0, 0};
    }
    const auto& samples = std::get<EigenDistSpec::Empirical>(q.law).samples;
    stats::MeanAccumulator acc;
    for (double v : samples) {
        if (!(v >= 0.0)) {
            throw DomainError("negative eigenvalue in law");
        }
        acc.add(log_one_plus(snr * v));
    }
    return {acc.mean(), acc.stderr_of_mean(), samples.size()};
}

EigenDistSpec eigen_samples(int M, int N, std::size_t n_samples, std::uint64_t seed) {
    require_samples(n_samples);
    const std::size_t r = static_cast<std::size_t>(std::min(M, N));
    std::vector<double> pooled(n_samples * r);
    for_each_chunk(n_samples, [&](std::size_t c, std::size_t count) {
        rng::Engine engine = rng::derive(seed, c);
        rng::Engine shuffler = rng::derive(seed, c, 1);
        std::vector<double> draw(r);
        for (std::size_t k = 0; k < count; ++k) {
            const Eigen::VectorXd lambda = gram_eigenvalues(sample_channel(M, N, engine));
            // Ascending order: the last r are the nonzero ones.
            for (std::size_t i = 0; i < r; ++i) {
                draw[i] = lambda(lambda.size() - static_cast<Eigen::Index>(r - i));
            }
            std::shuffle(draw.begin(), draw.end(), shuffler);
            std::copy(draw.begin(), draw.end(), pooled.begin() + static_cast<std::ptrdiff_t>((c * kChunkDraws + k) * r));
        }
    });
    return EigenDistSpec::empirical(std::move(pooled));
}

RateRegion bc_outer_region(const region::BcConfig& cfg, PowerLevel P, std::size_t n_samples,
                           std::uint64_t seed) {
    require_sorted(cfg);
    const int k = cfg.users();
    RateRegion region;
    region.dim = k;
    for (int i = 0; i < k; ++i) {
        const auto est = ergodic_capacity(cfg.M, cfg.N[static_cast<std::size_t>(i)], P, n_samples, seed);
        region.caps.push_back(est.mean);
        region.cap_stderr.push_back(est.std_error);
        region.weights.emplace_back(1, cfg.rank(i));
    }
    const double rk = cfg.rank(k - 1);
    region.bound = region.caps.back() / rk;
    region.bound_stderr = region.cap_stderr.back() / rk;
    return region;
}

RateRegion theorem2_region(const region::BcConfig& cfg, const EigenDistSpec& q, PowerLevel P) {
    require_sorted(cfg);
    const auto b = theorem2_bound(q, cfg.M, P);
    RateRegion region;
    region.dim = cfg.users();
    for (int i = 0; i < cfg.users(); ++i) {
        region.weights.emplace_back(1, cfg.N[static_cast<std::size_t>(i)]);
    }
    region.bound = b.value;
    region.bound_stderr = b.std_error;
    return region;
}

Eigen::MatrixXcd random_covariance(int M, PowerLevel P, rng::Engine& engine) {
    const Eigen::MatrixXcd g = sample_channel(M, M, engine).H;
    Eigen::MatrixXcd q = g * g.adjoint();
    q *= P.value() / q.trace().real();
    return 0.5 * (q + q.adjoint());
}

CovarianceProbe covariance_probe(int M, int N, const Eigen::MatrixXcd& Q, PowerLevel P,
                                 std::size_t n_samples, std::uint64_t seed) {
    require_samples(n_samples);
    const Eigen::MatrixXcd iso =
        Eigen::MatrixXcd::Identity(M, M) * std::complex<double>(P.value() / M, 0.0);
    const std::size_t chunks = (n_samples + kChunkDraws - 1) / kChunkDraws;
    std::vector<stats::MeanAccumulator> acc(chunks);
    for_each_chunk(n_samples, [&](std::size_t c, std::size_t count) {
        rng::Engine engine = rng::derive(seed, c);
        for (std::size_t k = 0; k < count; ++k) {
            const ChannelSample h = sample_channel(M, N, engine);
            acc[c].add(log_det_rate(h, iso) - log_det_rate(h, Q));
        }
    });
    stats::MeanAccumulator total;
    for (const auto& a : acc) {
        total.merge(a);
    }
    CovarianceProbe probe;
    probe.mean_gain = total.mean();
    probe.std_error = total.stderr_of_mean();
    probe.isotropic_not_beaten = probe.mean_gain >= -3.0 * probe.std_error;
    return probe;
}

ThetaClassReport theta_class_report(int M, const std::vector<int>& N_list, std::size_t n_samples,
                                    std::uint64_t seed, const ThetaOptions& options) {
    const region::BcConfig cfg(M, N_list);
    require_sorted(cfg);
    require_samples(n_samples);
    const PowerLevel probe_power(options.probe_power);

    ThetaClassReport report;
    std::vector<std::vector<double>> laws;
    for (int i = 0; i < cfg.users(); ++i) {
        auto spec = eigen_samples(M, N_list[static_cast<std::size_t>(i)], n_samples,
                                  rng::mix(seed, static_cast<std::uint64_t>(i) + 1));
        laws.push_back(std::move(std::get<EigenDistSpec::Empirical>(spec.law).samples));
    }
    for (int i = 0; i < cfg.users(); ++i) {
        for (int j = i + 1; j < cfg.users(); ++j) {
            KsPair pair;
            pair.user_a = i + 1;
            pair.user_b = j + 1;
            pair.ks = stats::ks_two_sample(laws[static_cast<std::size_t>(i)], laws[static_cast<std::size_t>(j)]);
            pair.critical = stats::ks_critical_value(options.ks_coefficient, pair.ks.n1, pair.ks.n2);
            pair.same_law = pair.ks.statistic <= pair.critical;
            report.all_same_law = report.all_same_law && pair.same_law;
            report.pairs.push_back(pair);
        }
    }
    rng::Engine cov_engine = rng::derive(seed, 0, 2);
    std::vector<Eigen::MatrixXcd> alternatives;
    for (int a = 0; a < options.covariance_alternatives; ++a) {
        alternatives.push_back(random_covariance(M, probe_power, cov_engine));
    }
    for (int i = 0; i < cfg.users(); ++i) {
        for (int a = 0; a < options.covariance_alternatives; ++a) {
            auto probe = covariance_probe(M, N_list[static_cast<std::size_t>(i)],
                                          alternatives[static_cast<std::size_t>(a)], probe_power,
                                          n_samples, rng::mix(seed, 1000 + static_cast<std::uint64_t>(i)));
            probe.user = i + 1;
            probe.alternative = a + 1;
            report.isotropic_optimal = report.isotropic_optimal && probe.isotropic_not_beaten;
            report.probes.push_back(probe);
        }
    }
    return report;
}

stats::LinearFit dof_slope(std::span<const RatePoint> points) {
    if (points.size() < 3) {
        throw ParameterError("DoF slope needs at least 3 (P, rate) points");
    }
    double lo = points.front().P;
    double hi = lo;
    bool have_stderr = false;
    for (const auto& p : points) {
        if (!(p.P > 0.0)) {
            throw ParameterError("powers must be positive");
        }
        lo = std::min(lo, p.P);
        hi = std::max(hi, p.P);
        have_stderr = have_stderr || p.std_error > 0.0;
    }
    if (hi / lo < 100.0 * (1.0 - 1e-12)) {
        throw ParameterError("power grid must span at least two decades");
    }
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> se;
    for (const auto& p : points) {
        x.push_back(std::log(p.P));
        y.push_back(p.rate);
        se.push_back(p.std_error);
    }
    return stats::least_squares(x, y, have_stderr ? std::span<const double>(se) : std::span<const double>());
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi >= lo) || count < 1 || (count == 1 && hi != lo)) {
        throw ParameterError("log grid needs 0 < lo <= hi and count >= 1 (count 1 only when lo == hi)");
    }
    std::vector<double> g;
    if (count == 1) {
        return {lo};
    }
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int k = 0; k < count; ++k) {
        g.push_back(std::pow(10.0, a + (b - a) * k / (count - 1)));
    }
    return g;
}

double in_units(double nats, Units u) {
    return u == Units::Nats ? nats : nats / std::numbers::ln2;
}

std::string_view units_name(Units u) {
    return u == Units::Nats ? "nats" : "bits";
}

void write_rate_region(std::ostream& out, const RateRegion& region, Units units) {
    const auto old = out.precision(17);
    out << "dim " << region.dim << '\n';
    out << "# units " << units_name(units) << '\n';
    for (std::size_t i = 0; i < region.caps.size(); ++i) {
        for (int j = 0; j < region.dim; ++j) {
            out << (static_cast<std::size_t>(j) == i ? "1" : "0") << ' ';
        }
        out << "<= " << in_units(region.caps[i], units) << '\n';
    }
    for (const Rational& w : region.weights) {
        out << to_string(w) << ' ';
    }
    out << "<= " << in_units(region.bound, units) << '\n';
    out.precision(old);
}

} // namespace nocsit::capacity
