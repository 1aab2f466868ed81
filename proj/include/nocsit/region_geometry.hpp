#pragma once

// Degrees-of-freedom regions of the no-CSIT broadcast and interference
// channels as bounded halfspace polytopes in the nonnegative orthant.

#include "nocsit/rational.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nocsit::region {

/// One transmitter with M antennas, K receivers with N_i antennas.
struct BcConfig {
    int M = 0;
    std::vector<int> N;

    BcConfig(int M, std::vector<int> N);

    int users() const noexcept { return static_cast<int>(N.size()); }
    /// r_i = min(M, N_i), 0-based user index.
    int rank(int user) const { return std::min(M, N.at(static_cast<std::size_t>(user))); }
};

/// K transmitter/receiver pairs with M_i and N_i antennas.
struct IcConfig {
    std::vector<int> M;
    std::vector<int> N;

    IcConfig(std::vector<int> M, std::vector<int> N);

    int users() const noexcept { return static_cast<int>(N.size()); }
    int total_transmit() const;
};

struct DofPoint {
    std::vector<double> d;
};

/// a . d <= b
struct Constraint {
    std::vector<Rational> a;
    Rational b;
    std::string label;

    double lhs(const DofPoint& p) const;
};

/// { d >= 0 : a_k . d <= b_k for every constraint }; nonnegativity is implicit.
struct DofRegion {
    int dim = 0;
    std::vector<Constraint> constraints;
};

inline constexpr double kMembershipSlack = 1e-12;
inline constexpr double kVertexFeasibilitySlack = 1e-9;
inline constexpr double kVertexDedupDistance = 1e-7;
inline constexpr int kMaxVertexDim = 8;

DofRegion bc_dof_region(const BcConfig& cfg);

/// Two-user outer bound, stated for N_1 <= N_2 with r_i = min(M_2, N_i).
/// Throws PreconditionError when N_1 > N_2; see relabel_ic2.
DofRegion ic2_outer_region(const IcConfig& cfg);

/// K-user outer bound from full transmitter cooperation (M_T = sum M_i).
DofRegion ick_outer_region(const IcConfig& cfg);

enum class Tightness {
    AllNleM,        // N_i <= M_i for all i: time sharing
    EqualNgeEqualM, // N_i = N >= M = M_i for all i: receive zero-forcing + time sharing
    Unknown,
};

std::string_view tightness_name(Tightness t);

/// When both conditions hold (N_i = M_i = const) AllNleM is reported.
Tightness tightness_class(const IcConfig& cfg);
bool satisfies(const IcConfig& cfg, Tightness t);

bool contains(const DofRegion& region, const DofPoint& p);

/// Throws StructuralError for an unbounded region.
void require_bounded(const DofRegion& region);
bool is_bounded(const DofRegion& region);

/// Exact vertex set by active-constraint enumeration; K <= 8. Sorted
/// lexicographically.
std::vector<DofPoint> vertices(const DofRegion& region);

/// Convex-combination feasibility by LP.
bool in_convex_hull(const std::vector<DofPoint>& points, const DofPoint& p, double tolerance = 1e-9);

struct FrameRealization {
    int length = 0;
    std::vector<int> slots; // per user; sum <= length

    /// User served in slot t (0-based) of the frame, or -1 when idle. Users
    /// occupy contiguous blocks in index order.
    int user_of_slot(int t) const;
};

struct Schedule {
    std::vector<double> fractions;
    std::optional<FrameRealization> frame;

    double total() const;
};

/// alpha_i = d_i / r_i, with an integer frame realization when frame > 0. Throws
/// InfeasiblePointError when p lies outside the broadcast DoF region.
Schedule time_sharing_schedule(const BcConfig& cfg, const DofPoint& p, int frame);

/// Largest-remainder rounding of fractions onto `length` slots.
FrameRealization realize_frame(const std::vector<double>& fractions, int length);

struct Relabeling {
    IcConfig config;
    std::array<int, 2> permutation; // permutation[k] = original 1-based label of new user k
    bool swapped = false;
};

/// Sorts the two users by N ascending (stable on ties).
Relabeling relabel_ic2(const IcConfig& cfg);

// Text format:
//   dim K
//   a_1 ... a_K <= b        (exact rationals)
void write_region(std::ostream& out, const DofRegion& region);
DofRegion read_region(std::istream& in);
void write_vertices_csv(std::ostream& out, const std::vector<DofPoint>& vertices);

} // namespace nocsit::region
