#pragma once

// Slot-level simulation of the no-CSIT achievable schemes: broadcast time
// sharing and interference-channel receive zero-forcing with time sharing.
// Every slot draws fresh channels from its own derived stream.

#include "nocsit/capacity_mc.hpp"
#include "nocsit/region_geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nocsit::achievability {

struct UserRate {
    double mean = 0.0; // nats per channel use, averaged over all slots
    double std_error = 0.0;
    std::size_t active_slots = 0;
};

struct SimResult {
    std::vector<UserRate> rates;
    double P = 0.0;
    std::size_t n_slots = 0;
    std::uint64_t seed = 0;
    std::string scheme;
    // Zero-forcing only: max over slots of residual interference power / P.
    double max_leakage_ratio = 0.0;
};

/// Users served in slot t follow the schedule's frame realization repeated
/// over the run (or a fresh realization over n_slots when it has none).
SimResult simulate_bc_time_sharing(const region::BcConfig& cfg, const region::Schedule& schedule,
                                   capacity::PowerLevel P, std::size_t n_slots, std::uint64_t seed);

enum class Grouping {
    RoundRobin,    // ceil(K/g) consecutive groups of g users
    CyclicWindows, // K groups {i, ..., i+g-1 mod K}; every user active g/K of the time
};

/// Simultaneously active user groups (0-based). All users form one group
/// when N >= M_T; otherwise g = floor(N/M) users per group.
std::vector<std::vector<int>> zero_forcing_groups(const region::IcConfig& cfg, Grouping grouping);

/// Requires N_i = N >= M = M_i for all i.
SimResult simulate_ic_zero_forcing(const region::IcConfig& cfg, capacity::PowerLevel P,
                                   std::size_t n_slots, std::uint64_t seed,
                                   Grouping grouping = Grouping::RoundRobin);

struct Slack {
    std::string label;
    double slack = 0.0; // bound - measured
    double std_error = 0.0;
    bool violated = false; // slack < -3 std_error
};

struct GapReport {
    std::vector<Slack> entries;
    bool any_violation = false;
};

/// Measured rates against a rate region at the same power.
GapReport gap_to_outer(const SimResult& sim, const capacity::RateRegion& region);

struct SlopeSet {
    std::vector<double> slopes;
    std::vector<double> std_error;
};

/// Per-user DoF slopes regressed over a power sweep of results.
SlopeSet sweep_slopes(const std::vector<SimResult>& sweep);

/// Regressed slopes against a DoF region.
GapReport gap_to_outer(const SlopeSet& slopes, const region::DofRegion& region);

} // namespace nocsit::achievability
