#include "nocsit/achievability_sim.hpp"

#include "nocsit/errors.hpp"
#include "nocsit/stats.hpp"

#include <cmath>
#include <sstream>

namespace nocsit::achievability {

namespace {

constexpr std::size_t kSlotChunk = 512;

struct SlotOutcome {
    std::vector<stats::MeanAccumulator> per_user;
    double max_leakage = 0.0;
};

SimResult finish(std::vector<SlotOutcome>& chunks, std::size_t users, std::size_t n_slots,
                 double P, std::uint64_t seed, std::string scheme) {
    SimResult res;
    res.P = P;
    res.n_slots = n_slots;
    res.seed = seed;
    res.scheme = std::move(scheme);
    std::vector<stats::MeanAccumulator> total(users);
    for (auto& c : chunks) {
        for (std::size_t u = 0; u < users; ++u) {
            total[u].merge(c.per_user[u]);
        }
        res.max_leakage_ratio = std::max(res.max_leakage_ratio, c.max_leakage);
    }
    for (std::size_t u = 0; u < users; ++u) {
        const double frac = static_cast<double>(total[u].count()) / static_cast<double>(n_slots);
        res.rates.push_back({frac * total[u].mean(), frac * total[u].stderr_of_mean(), total[u].count()});
    }
    return res;
}

template <typename SlotFn>
std::vector<SlotOutcome> run_slots(std::size_t n_slots, std::size_t users, const SlotFn& slot) {
    const std::size_t chunks = (n_slots + kSlotChunk - 1) / kSlotChunk;
    std::vector<SlotOutcome> out(chunks);
    rng::parallel_for(chunks, [&](std::size_t c) {
        out[c].per_user.resize(users);
        const std::size_t end = std::min(n_slots, (c + 1) * kSlotChunk);
        for (std::size_t t = c * kSlotChunk; t < end; ++t) {
            slot(t, out[c]);
        }
    });
    return out;
}

} // namespace

SimResult simulate_bc_time_sharing(const region::BcConfig& cfg, const region::Schedule& schedule,
                                   capacity::PowerLevel P, std::size_t n_slots, std::uint64_t seed) {
    const auto k = static_cast<std::size_t>(cfg.users());
    if (schedule.fractions.size() != k) {
        throw ParameterError("schedule has " + std::to_string(schedule.fractions.size()) +
                             " fractions for " + std::to_string(k) + " users");
    }
    for (double a : schedule.fractions) {
        if (!(a >= 0.0)) {
            throw ParameterError("schedule fractions must be nonnegative");
        }
    }
    if (schedule.total() > 1.0 + 1e-12) {
        throw ParameterError("schedule fractions sum above 1");
    }
    if (n_slots < 1) {
        throw ParameterError("simulation needs at least one slot");
    }
    const region::FrameRealization frame =
        schedule.frame ? *schedule.frame
                       : region::realize_frame(schedule.fractions, static_cast<int>(n_slots));
    if (frame.slots.size() != k) {
        throw ParameterError("frame realization does not match the number of users");
    }

    const double snr = P.value() / cfg.M;
    auto chunks = run_slots(n_slots, k, [&](std::size_t t, SlotOutcome& out) {
        const int user = frame.user_of_slot(static_cast<int>(t % static_cast<std::size_t>(frame.length)));
        if (user < 0) {
            return;
        }
        rng::Engine engine = rng::derive(seed, t);
        const auto h = capacity::sample_channel(cfg.M, cfg.N[static_cast<std::size_t>(user)], engine);
        double rate = 0.0;
        const Eigen::VectorXd lambda = capacity::gram_eigenvalues(h);
        for (Eigen::Index i = 0; i < lambda.size(); ++i) {
            rate += capacity::log_one_plus(snr * lambda(i));
        }
        out.per_user[static_cast<std::size_t>(user)].add(rate);
    });
    return finish(chunks, k, n_slots, P.value(), seed, "bc-time-sharing");
}

std::vector<std::vector<int>> zero_forcing_groups(const region::IcConfig& cfg, Grouping grouping) {
    if (!region::satisfies(cfg, region::Tightness::EqualNgeEqualM)) {
        throw PreconditionError("receive zero-forcing needs N_i = N >= M = M_i for all users");
    }
    const int k = cfg.users();
    const int n = cfg.N.front();
    const int m = cfg.M.front();
    std::vector<std::vector<int>> groups;
    if (n >= cfg.total_transmit()) {
        groups.emplace_back();
        for (int i = 0; i < k; ++i) {
            groups.back().push_back(i);
        }
        return groups;
    }
    const int g = n / m;
    if (grouping == Grouping::RoundRobin) {
        for (int first = 0; first < k; first += g) {
            groups.emplace_back();
            for (int i = first; i < std::min(k, first + g); ++i) {
                groups.back().push_back(i);
            }
        }
    } else {
        for (int first = 0; first < k; ++first) {
            groups.emplace_back();
            for (int j = 0; j < g; ++j) {
                groups.back().push_back((first + j) % k);
            }
        }
    }
    return groups;
}

SimResult simulate_ic_zero_forcing(const region::IcConfig& cfg, capacity::PowerLevel P,
                                   std::size_t n_slots, std::uint64_t seed, Grouping grouping) {
    const auto groups = zero_forcing_groups(cfg, grouping);
    if (n_slots < 1) {
        throw ParameterError("simulation needs at least one slot");
    }
    const int n = cfg.N.front();
    const int m = cfg.M.front();
    const double snr = P.value() / m;
    const auto users = static_cast<std::size_t>(cfg.users());

    auto chunks = run_slots(n_slots, users, [&](std::size_t t, SlotOutcome& out) {
        const auto& active = groups[t % groups.size()];
        rng::Engine engine = rng::derive(seed, t);
        const std::size_t g = active.size();
        // h[r][s]: from active transmitter s to active receiver r, M x N.
        std::vector<std::vector<Eigen::MatrixXcd>> h(g, std::vector<Eigen::MatrixXcd>(g));
        for (std::size_t r = 0; r < g; ++r) {
            for (std::size_t s = 0; s < g; ++s) {
                h[r][s] = capacity::sample_channel(m, n, engine).H;
            }
        }
        for (std::size_t r = 0; r < g; ++r) {
            Eigen::MatrixXcd basis; // orthonormal basis of the interference-free subspace
            if (g == 1) {
                basis = Eigen::MatrixXcd::Identity(n, n);
            } else {
                Eigen::MatrixXcd interference(n, static_cast<Eigen::Index>((g - 1) * static_cast<std::size_t>(m)));
                Eigen::Index col = 0;
                for (std::size_t s = 0; s < g; ++s) {
                    if (s != r) {
                        interference.middleCols(col, m) = h[r][s].adjoint();
                        col += m;
                    }
                }
                const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(interference);
                const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
                basis = q.rightCols(n - interference.cols());
            }
            const Eigen::MatrixXcd own = basis.adjoint() * h[r][r].adjoint(); // d x M
            const Eigen::MatrixXcd gram = own.adjoint() * own;
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
            double rate = 0.0;
            for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
                rate += capacity::log_one_plus(snr * std::max(0.0, eig.eigenvalues()(i)));
            }
            double leak = 0.0;
            for (std::size_t s = 0; s < g; ++s) {
                if (s != r) {
                    leak += snr * (basis.adjoint() * h[r][s].adjoint()).squaredNorm();
                }
            }
            auto& o = out;
            o.per_user[static_cast<std::size_t>(active[r])].add(rate);
            o.max_leakage = std::max(o.max_leakage, leak / P.value());
        }
    });
    const std::string scheme =
        grouping == Grouping::RoundRobin ? "ic-zero-forcing" : "ic-zero-forcing-cyclic";
    return finish(chunks, users, n_slots, P.value(), seed, scheme);
}

namespace {

void flag(GapReport& report, std::string label, double slack, double se) {
    Slack s{std::move(label), slack, se, slack < -3.0 * se};
    report.any_violation = report.any_violation || s.violated;
    report.entries.push_back(std::move(s));
}

} // namespace

GapReport gap_to_outer(const SimResult& sim, const capacity::RateRegion& region) {
    if (static_cast<int>(sim.rates.size()) != region.dim ||
        static_cast<int>(region.weights.size()) != region.dim) {
        throw ParameterError("simulation and region dimensions differ");
    }
    GapReport report;
    for (std::size_t i = 0; i < region.caps.size(); ++i) {
        const double se = std::hypot(sim.rates[i].std_error,
                                     i < region.cap_stderr.size() ? region.cap_stderr[i] : 0.0);
        flag(report, "R" + std::to_string(i + 1) + " <= cap", region.caps[i] - sim.rates[i].mean, se);
    }
    double lhs = 0.0;
    double var = region.bound_stderr * region.bound_stderr;
    for (std::size_t i = 0; i < sim.rates.size(); ++i) {
        const double w = to_double(region.weights[i]);
        lhs += w * sim.rates[i].mean;
        var += w * w * sim.rates[i].std_error * sim.rates[i].std_error;
    }
    flag(report, "weighted sum <= bound", region.bound - lhs, std::sqrt(var));
    return report;
}

SlopeSet sweep_slopes(const std::vector<SimResult>& sweep) {
    if (sweep.empty()) {
        throw ParameterError("empty sweep");
    }
    const std::size_t users = sweep.front().rates.size();
    SlopeSet out;
    for (std::size_t u = 0; u < users; ++u) {
        std::vector<capacity::RatePoint> pts;
        for (const auto& r : sweep) {
            if (r.rates.size() != users) {
                throw ParameterError("sweep results disagree on user count");
            }
            pts.push_back({r.P, r.rates[u].mean, r.rates[u].std_error});
        }
        const auto fit = capacity::dof_slope(pts);
        out.slopes.push_back(fit.slope);
        out.std_error.push_back(fit.slope_stderr);
    }
    return out;
}

GapReport gap_to_outer(const SlopeSet& slopes, const region::DofRegion& region) {
    if (static_cast<int>(slopes.slopes.size()) != region.dim) {
        throw ParameterError("slope and region dimensions differ");
    }
    GapReport report;
    for (std::size_t i = 0; i < slopes.slopes.size(); ++i) {
        if (slopes.slopes[i] < 0.0) {
            flag(report, "d" + std::to_string(i + 1) + " >= 0", slopes.slopes[i], slopes.std_error[i]);
        }
    }
    for (const auto& c : region.constraints) {
        double lhs = 0.0;
        double var = 0.0;
        for (std::size_t i = 0; i < c.a.size(); ++i) {
            const double w = to_double(c.a[i]);
            lhs += w * slopes.slopes[i];
            var += w * w * slopes.std_error[i] * slopes.std_error[i];
        }
        flag(report, c.label, to_double(c.b) - lhs, std::sqrt(var));
    }
    return report;
}

} // namespace nocsit::achievability
