#include <doctest.h>

#include "nocsit/achievability_sim.hpp"
#include "nocsit/errors.hpp"

#include <boost/math/special_functions/expint.hpp>

#include <cmath>

using namespace nocsit;
using namespace nocsit::achievability;
using capacity::PowerLevel;

namespace {

std::vector<SimResult> bc_sweep(const region::BcConfig& cfg, const region::Schedule& s, std::size_t slots) {
    std::vector<SimResult> out;
    for (double p : capacity::log_grid(1e2, 1e6, 5)) {
        out.push_back(simulate_bc_time_sharing(cfg, s, PowerLevel(p), slots, 7));
    }
    return out;
}

std::vector<SimResult> ic_sweep(const region::IcConfig& cfg, Grouping g, std::size_t slots) {
    std::vector<SimResult> out;
    for (double p : capacity::log_grid(1e2, 1e6, 5)) {
        out.push_back(simulate_ic_zero_forcing(cfg, PowerLevel(p), slots, 7, g));
    }
    return out;
}

} // namespace

TEST_SUITE("achievability") {

TEST_CASE("single-user time sharing reaches the SISO ergodic capacity") {
    const region::BcConfig cfg(1, {1});
    const auto r = simulate_bc_time_sharing(cfg, region::Schedule{{1.0}, std::nullopt}, PowerLevel(10), 100000, 3);
    const double oracle = std::exp(0.1) * boost::math::expint(1, 0.1);
    CHECK(std::abs(r.rates[0].mean - oracle) < 3 * r.rates[0].std_error);
    CHECK(r.rates[0].active_slots == 100000);
    CHECK(r.scheme == "bc-time-sharing");
}

TEST_CASE("an idle schedule achieves nothing") {
    const region::BcConfig cfg(2, {2, 1});
    const auto r = simulate_bc_time_sharing(cfg, region::Schedule{{0.0, 0.0}, std::nullopt}, PowerLevel(10), 1000, 3);
    for (const auto& u : r.rates) {
        CHECK(u.mean == 0.0);
        CHECK(u.active_slots == 0);
    }
}

TEST_CASE("schedule and configuration must agree") {
    const region::BcConfig cfg(2, {2, 1});
    CHECK_THROWS_AS(simulate_bc_time_sharing(cfg, region::Schedule{{1.0}, std::nullopt}, PowerLevel(10), 100, 1),
                    ParameterError);
    CHECK_THROWS_AS(
        simulate_bc_time_sharing(cfg, region::Schedule{{0.7, 0.7}, std::nullopt}, PowerLevel(10), 100, 1),
        ParameterError);
}

TEST_CASE("time sharing is deterministic and follows the frame") {
    const region::BcConfig cfg(2, {2, 1});
    region::Schedule s{{0.5, 0.25}, region::realize_frame({0.5, 0.25}, 4)};
    const auto a = simulate_bc_time_sharing(cfg, s, PowerLevel(100), 4000, 9);
    const auto b = simulate_bc_time_sharing(cfg, s, PowerLevel(100), 4000, 9);
    CHECK(a.rates[0].mean == b.rates[0].mean);
    CHECK(a.rates[1].std_error == b.rates[1].std_error);
    CHECK(a.rates[0].active_slots == 2000);
    CHECK(a.rates[1].active_slots == 1000);
}

TEST_CASE("broadcast time sharing slopes") {
    const region::BcConfig cfg(2, {2, 1});
    const auto slopes = sweep_slopes(bc_sweep(cfg, region::Schedule{{0.5, 0.5}, std::nullopt}, 10000));
    CHECK(std::abs(slopes.slopes[0] - 1.0) <= 0.05);
    CHECK(std::abs(slopes.slopes[1] - 0.5) <= 0.025);
    CHECK(std::abs(slopes.slopes[0] / 2 + slopes.slopes[1] - 1.0) <= 0.05);
    CHECK_FALSE(gap_to_outer(slopes, region::bc_dof_region(cfg)).any_violation);
}

TEST_CASE("zero-forcing groups") {
    using G = std::vector<std::vector<int>>;
    CHECK(zero_forcing_groups(region::IcConfig({1, 1}, {2, 2}), Grouping::RoundRobin) == G{{0, 1}});
    CHECK(zero_forcing_groups(region::IcConfig({1, 1, 1}, {2, 2, 2}), Grouping::RoundRobin) == G{{0, 1}, {2}});
    CHECK(zero_forcing_groups(region::IcConfig({1, 1, 1}, {2, 2, 2}), Grouping::CyclicWindows) ==
          G{{0, 1}, {1, 2}, {2, 0}});
    CHECK(zero_forcing_groups(region::IcConfig({2, 2, 2}, {5, 5, 5}), Grouping::RoundRobin) == G{{0, 1}, {2}});
    CHECK_THROWS_AS(zero_forcing_groups(region::IcConfig({1, 3}, {2, 4}), Grouping::RoundRobin), PreconditionError);
    CHECK_THROWS_AS(simulate_ic_zero_forcing(region::IcConfig({1, 2}, {2, 2}), PowerLevel(10), 100, 1),
                    PreconditionError);
}

TEST_CASE("two-user zero forcing reaches slope one with no leakage") {
    const region::IcConfig cfg({1, 1}, {2, 2});
    const auto sweep = ic_sweep(cfg, Grouping::RoundRobin, 10000);
    for (const auto& r : sweep) CHECK(r.max_leakage_ratio < 1e-20);
    const auto s = sweep_slopes(sweep);
    CHECK(std::abs(s.slopes[0] - 1.0) <= 0.05);
    CHECK(std::abs(s.slopes[1] - 1.0) <= 0.05);
    CHECK(std::abs((s.slopes[0] + s.slopes[1]) / 2 - 1.0) <= 0.05);
    CHECK_FALSE(gap_to_outer(s, region::ick_outer_region(cfg)).any_violation);
}

TEST_CASE("three users on two receive antennas") {
    const region::IcConfig cfg({1, 1, 1}, {2, 2, 2});
    // Round robin over {1,2},{3}: every user is active in half the slots.
    const auto rr = simulate_ic_zero_forcing(cfg, PowerLevel(100), 3000, 7, Grouping::RoundRobin);
    for (const auto& u : rr.rates) CHECK(u.active_slots == 1500);
    const auto s = sweep_slopes(ic_sweep(cfg, Grouping::RoundRobin, 6000));
    double weighted = 0.0;
    for (double d : s.slopes) {
        CHECK(std::abs(d - 0.5) <= 0.025);
        weighted += d / 2;
    }
    CHECK(std::abs(weighted - 0.75) <= 0.0375);

    // Cyclic windows {1,2},{2,3},{3,1}: every user is active in two thirds.
    const auto cyc = simulate_ic_zero_forcing(cfg, PowerLevel(100), 3000, 7, Grouping::CyclicWindows);
    for (const auto& u : cyc.rates) CHECK(u.active_slots == 2000);
    const auto sc = sweep_slopes(ic_sweep(cfg, Grouping::CyclicWindows, 6000));
    double wc = 0.0;
    for (double d : sc.slopes) wc += d / 2;
    CHECK(std::abs(wc - 1.0) <= 0.05);
    CHECK_FALSE(gap_to_outer(sc, region::ick_outer_region(cfg)).any_violation);
}

TEST_CASE("gap to the outer rate region") {
    const region::BcConfig cfg(2, {2, 1});
    const auto outer = capacity::bc_outer_region(cfg, PowerLevel(100), 10000, 11);

    SimResult zero{{{0, 0, 0}, {0, 0, 0}}, 100, 1, 0, "zero", 0};
    const auto zr = gap_to_outer(zero, outer);
    REQUIRE(zr.entries.size() == 3);
    CHECK(zr.entries[0].slack == outer.caps[0]);
    CHECK(zr.entries[1].slack == outer.caps[1]);
    CHECK(zr.entries[2].slack == outer.bound);
    CHECK_FALSE(zr.any_violation);

    const auto sim = simulate_bc_time_sharing(cfg, region::Schedule{{0.5, 0.5}, std::nullopt}, PowerLevel(100),
                                              10000, 12);
    CHECK_FALSE(gap_to_outer(sim, outer).any_violation);

    // Negative control: a full-time single-user rate doubled must exceed the cap.
    auto fake = simulate_bc_time_sharing(cfg, region::Schedule{{1.0, 0.0}, std::nullopt}, PowerLevel(100), 10000, 12);
    for (auto& u : fake.rates) u.mean *= 2;
    CHECK(gap_to_outer(fake, outer).any_violation);

    SimResult wrong{{{0, 0, 0}}, 100, 1, 0, "x", 0};
    CHECK_THROWS_AS(gap_to_outer(wrong, outer), ParameterError);
}

}
