// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "nocsit/achievability_sim.hpp"
#include "nocsit/capacity_mc.hpp"
#include "nocsit/entropy_cone.hpp"
#include "nocsit/induction_trace.hpp"
#include "nocsit/region_geometry.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace nocsit;
using capacity::PowerLevel;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_s) {
        o.pass = false;
        o.detail += " [over the " + std::to_string(static_cast<int>(budget_s)) + " s budget]";
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " (" << secs << " s)" << std::endl;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// ---- independent membership oracles (formulas, not constraint lists) ----

bool bc_oracle(const region::BcConfig& c, const std::vector<double>& d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 0) return false;
        s += d[i] / std::min(c.M, c.N[i]);
    }
    return s <= 1.0 + 1e-12;
}

bool ic2_oracle(const region::IcConfig& c, const std::vector<double>& d) {
    const double r1 = std::min(c.M[1], c.N[0]);
    const double r2 = std::min(c.M[1], c.N[1]);
    for (int i = 0; i < 2; ++i) {
        if (d[i] < 0 || d[i] > std::min(c.M[i], c.N[i]) + 1e-12) return false;
    }
    return d[0] / r1 + d[1] / r2 <= std::min(c.N[0], c.M[0] + c.M[1]) / r1 + 1e-12;
}

bool ick_oracle(const region::IcConfig& c, const std::vector<double>& d) {
    int mt = 0;
    for (int m : c.M) mt += m;
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 0 || d[i] > std::min(c.M[i], c.N[i]) + 1e-12) return false;
        s += d[i] / std::min(mt, c.N[i]);
    }
    return s <= 1.0 + 1e-12;
}

// Grid points of spacing 0.25 over [0, hi]^K where contains() disagrees with the oracle.
int grid_mismatches(const region::DofRegion& reg, const std::function<bool(const std::vector<double>&)>& oracle,
                    double hi, int& checked) {
    const int steps = static_cast<int>(hi / 0.25) + 1;
    std::vector<int> idx(static_cast<std::size_t>(reg.dim), 0);
    int bad = 0;
    while (true) {
        std::vector<double> d(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) d[k] = 0.25 * idx[k];
        bad += region::contains(reg, region::DofPoint{d}) != oracle(d);
        ++checked;
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] > steps) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    return bad;
}

std::vector<achievability::SimResult> bc_sweep(const region::BcConfig& cfg, const std::vector<double>& alpha) {
    std::vector<achievability::SimResult> out;
    for (double p : capacity::log_grid(1e2, 1e6, 5)) {
        out.push_back(achievability::simulate_bc_time_sharing(cfg, region::Schedule{alpha, std::nullopt},
                                                              PowerLevel(p), 10000, 7));
    }
    return out;
}

std::vector<achievability::SimResult> ic_sweep(const region::IcConfig& cfg, achievability::Grouping g) {
    std::vector<achievability::SimResult> out;
    for (double p : capacity::log_grid(1e2, 1e6, 5)) {
        out.push_back(achievability::simulate_ic_zero_forcing(cfg, PowerLevel(p), 10000, 7, g));
    }
    return out;
}

} // namespace

int main() {
    std::cout.precision(4);

    criterion("lemma certification (N <= 5, both forms, exact replay)", 60, [] {
        const auto report = entropy::verify_lemma_family(5);
        int replayed = 0;
        for (const auto& inst : report.instances) {
            const bool same_target =
                inst.certificate.target == entropy::sliding_window_inequality(inst.N, inst.m, inst.conditioned);
            replayed += same_target && entropy::replay(inst.certificate) == inst.certificate.target &&
                        entropy::certificate_is_valid(inst.certificate);
        }
        const bool ok = report.instances.size() == 20 && replayed == 20;
        return Outcome{ok, std::to_string(replayed) + "/" + std::to_string(report.instances.size()) +
                               " certificates replay exactly"};
    });

    criterion("gaussian lemma check (1000 covariances, n = 6)", 30, [] {
        const auto r = entropy::gaussian_lemma_check(1000, 5, 2024);
        const bool ok = r.trials == 1000 && r.min_slack >= -1e-9 && r.max_diagonal_deviation <= 1e-9;
        return Outcome{ok, "min slack " + fmt(r.min_slack) + " over " + std::to_string(r.evaluations) +
                               " evaluations, diagonal deviation " + fmt(r.max_diagonal_deviation)};
    });

    criterion("induction trace soundness (N = 5, m = 2)", 60, [] {
        const auto t = entropy::induction_trace(5, 2, true);
        entropy::LinearInequality first_expected(t.vars());
        first_expected.add_conditional(entropy::range_mask(1, 5), entropy::bit(6), 3);
        entropy::LinearInequality last_expected(first_expected);
        last_expected.add(entropy::sliding_window_inequality(5, 2, true));
        const bool endpoints = t.steps.front().lhs.canonical() == first_expected &&
                               t.steps.back().rhs.canonical() == last_expected;
        bool linked = true;
        for (std::size_t k = 0; k + 1 < t.steps.size(); ++k) linked = linked && t.steps[k].rhs == t.steps[k + 1].lhs;
        int failed = 0;
        for (std::uint64_t s = 0; s < 100; ++s) {
            const auto h = entropy::gaussian_entropy_vector(entropy::random_gaussian_covariance(6, 31, s));
            for (const auto& step : t.steps) failed += !entropy::step_holds(step, h, 1e-9);
        }
        return Outcome{endpoints && linked && failed == 0,
                       std::to_string(t.steps.size()) + " steps x 100 vectors, " + std::to_string(failed) +
                           " failures; endpoints " + (endpoints ? "exact" : "MISMATCH")};
    });

    criterion("broadcast/interference DoF geometry", 60, [] {
        const auto v = region::vertices(region::bc_dof_region(region::BcConfig(4, {3, 2, 1})));
        const std::vector<std::vector<double>> expected{{0, 0, 0}, {0, 0, 1}, {0, 2, 0}, {3, 0, 0}};
        bool exact = v.size() == expected.size();
        for (std::size_t k = 0; exact && k < v.size(); ++k) exact = v[k].d == expected[k];
        int bad = 0;
        int checked = 0;
        for (const auto& c : {region::BcConfig(4, {3, 2, 1}), region::BcConfig(2, {2, 1}), region::BcConfig(1, {3, 2}),
                              region::BcConfig(3, {2, 3, 1})}) {
            bad += grid_mismatches(region::bc_dof_region(c), [&](const auto& d) { return bc_oracle(c, d); }, 3.5,
                                   checked);
        }
        for (const auto& c : {region::IcConfig({2, 2}, {2, 3}), region::IcConfig({1, 3}, {2, 4}),
                              region::IcConfig({5, 5}, {1, 1}), region::IcConfig({3, 2}, {2, 2})}) {
            bad += grid_mismatches(region::ic2_outer_region(c), [&](const auto& d) { return ic2_oracle(c, d); }, 3.5,
                                   checked);
            bad += grid_mismatches(region::ick_outer_region(c), [&](const auto& d) { return ick_oracle(c, d); }, 3.5,
                                   checked);
        }
        for (const auto& c : {region::IcConfig({2, 2, 2}, {6, 4, 2}), region::IcConfig({1, 1, 1}, {2, 2, 2}),
                              region::IcConfig({1, 2, 3}, {3, 2, 1})}) {
            bad += grid_mismatches(region::ick_outer_region(c), [&](const auto& d) { return ick_oracle(c, d); }, 3.5,
                                   checked);
        }
        return Outcome{exact && bad == 0, std::string("vertices ") + (exact ? "exact" : "WRONG") + ", " +
                                              std::to_string(bad) + " grid mismatches in " +
                                              std::to_string(checked) + " points"};
    });

    criterion("DoF slope reproduction (broadcast time sharing)", 120, [] {
        const region::BcConfig cfg(2, {2, 1});
        const auto s = achievability::sweep_slopes(bc_sweep(cfg, {0.5, 0.5}));
        const double sum = s.slopes[0] / 2 + s.slopes[1] / 1;
        const bool ok = std::abs(sum - 1.0) <= 0.05 && std::abs(s.slopes[0] - 1.0) <= 0.05 &&
                        std::abs(s.slopes[1] - 0.5) <= 0.025;
        return Outcome{ok, "slopes (" + fmt(s.slopes[0]) + ", " + fmt(s.slopes[1]) + "), sum slope/r " + fmt(sum)};
    });

    criterion("ergodic capacity oracle (M = N = 1, P = 10)", 60, [] {
        boost::math::quadrature::exp_sinh<double> integrator;
        const double oracle = integrator.integrate([](double x) { return std::log1p(10.0 * x) * std::exp(-x); });
        const auto e = capacity::ergodic_capacity(1, 1, PowerLevel(10), 100000, 7);
        const double z = std::abs(e.mean - oracle) / e.std_error;
        return Outcome{z < 3.0, "estimate " + fmt(e.mean) + " vs quadrature " + fmt(oracle) + " (" + fmt(z) +
                                    " stderr)"};
    });

    criterion("degenerate eigenvalue law bound", 10, [] {
        const double ln6 = std::log(6.0);
        const auto b = capacity::theorem2_bound(capacity::EigenDistSpec::degenerate(1.0), 2, PowerLevel(10));
        const auto r = capacity::theorem2_region(region::BcConfig(2, {2, 1}), capacity::EigenDistSpec::degenerate(1.0),
                                                 PowerLevel(10));
        const bool ok = b.value == ln6 && r.bound == ln6 && r.caps.empty() &&
                        r.weights == std::vector<Rational>{Rational(1) / 2, Rational(1)};
        std::ostringstream os;
        capacity::write_rate_region(os, r, capacity::Units::Nats);
        std::string text = os.str();
        text = text.substr(text.rfind('\n', text.size() - 2) + 1);
        text.pop_back();
        return Outcome{ok, "bound " + std::to_string(b.value) + " == ln 6, region '" + text + "'"};
    });

    criterion("isotropic input optimality probe (M = N = 2, P = 10)", 60, [] {
        auto engine = rng::derive(77, 0);
        int beaten = 0;
        double worst = 1e300;
        for (int a = 0; a < 20; ++a) {
            const auto Q = capacity::random_covariance(2, PowerLevel(10), engine);
            const auto p = capacity::covariance_probe(2, 2, Q, PowerLevel(10), 10000, 500 + a);
            beaten += !p.isotropic_not_beaten;
            worst = std::min(worst, p.mean_gain / p.std_error);
        }
        return Outcome{beaten == 0, std::to_string(beaten) + "/20 alternatives beat P/M I; smallest gain " +
                                        fmt(worst) + " stderr"};
    });

    criterion("interference zero forcing (K = 2, M = 1, N = 2)", 120, [] {
        const region::IcConfig cfg({1, 1}, {2, 2});
        const auto sweep = ic_sweep(cfg, achievability::Grouping::RoundRobin);
        double leak = 0.0;
        for (const auto& r : sweep) leak = std::max(leak, r.max_leakage_ratio);
        const auto s = achievability::sweep_slopes(sweep);
        const double sum = (s.slopes[0] + s.slopes[1]) / 2;
        const bool ok = std::abs(s.slopes[0] - 1.0) <= 0.05 && std::abs(s.slopes[1] - 1.0) <= 0.05 &&
                        std::abs(sum - 1.0) <= 0.05 && leak < 1e-20;
        return Outcome{ok, "slopes (" + fmt(s.slopes[0]) + ", " + fmt(s.slopes[1]) + "), sum d/2 " + fmt(sum) +
                               ", max leakage/P " + fmt(leak)};
    });

    criterion("outer-bound soundness and negative control", 300, [] {
        int checks = 0;
        int flagged = 0;
        auto tally = [&](const achievability::GapReport& g) {
            ++checks;
            flagged += g.any_violation;
        };
        // Broadcast sweeps against the rate region at each power and the DoF region.
        const std::vector<std::pair<region::BcConfig, std::vector<double>>> bcs{
            {region::BcConfig(2, {2, 1}), {0.5, 0.5}},
            {region::BcConfig(1, {1}), {1.0}},
            {region::BcConfig(4, {3, 2, 1}), {0.5, 0.25, 0.25}}};
        for (const auto& [cfg, alpha] : bcs) {
            const auto sweep = bc_sweep(cfg, alpha);
            for (const auto& r : sweep) {
                tally(achievability::gap_to_outer(r, capacity::bc_outer_region(cfg, PowerLevel(r.P), 10000, 99)));
            }
            tally(achievability::gap_to_outer(achievability::sweep_slopes(sweep), region::bc_dof_region(cfg)));
        }
        // Interference sweeps against the cooperative DoF bound.
        for (const auto& [cfg, g] : {std::pair{region::IcConfig({1, 1}, {2, 2}), achievability::Grouping::RoundRobin},
                                     std::pair{region::IcConfig({1, 1, 1}, {2, 2, 2}),
                                               achievability::Grouping::RoundRobin},
                                     std::pair{region::IcConfig({1, 1, 1}, {2, 2, 2}),
                                               achievability::Grouping::CyclicWindows}}) {
            tally(achievability::gap_to_outer(achievability::sweep_slopes(ic_sweep(cfg, g)),
                                              region::ick_outer_region(cfg)));
        }
        // Negative control: a doubled rate tuple must be flagged.
        const region::BcConfig cfg(2, {2, 1});
        const auto outer = capacity::bc_outer_region(cfg, PowerLevel(100), 10000, 99);
        auto fake = achievability::simulate_bc_time_sharing(cfg, region::Schedule{{0.5, 0.5}, std::nullopt},
                                                            PowerLevel(100), 10000, 5);
        for (auto& u : fake.rates) u.mean *= 2;
        const bool control = achievability::gap_to_outer(fake, outer).any_violation;
        return Outcome{control && flagged == 0, std::to_string(flagged) + "/" + std::to_string(checks) +
                                                    " genuine tuples flagged; inflated tuple " +
                                                    (control ? "flagged" : "NOT flagged")};
    });

    std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
