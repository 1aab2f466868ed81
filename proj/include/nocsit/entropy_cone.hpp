#pragma once

// Entropic vectors over finite variable sets, the Shannon elemental
// inequalities, and LP certificates that a linear information inequality is
// Shannon-type. Entropies are in nats throughout.
//
// Subset indexing: variable v (1-based) is bit v-1 of a mask. When a
// conditioning variable A is present it occupies the highest bit.

#include "nocsit/lp.hpp"
#include "nocsit/rational.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nocsit::entropy {

using Mask = std::uint32_t;

constexpr Mask bit(int var) { return Mask{1} << (var - 1); }

/// Cyclic block of `size` consecutive variables out of `count`, starting at
/// variable `start` (1-based): start, start+1, ... wrapping past `count`.
Mask window_mask(int count, int start, int size);

/// Contiguous range [first, last] of 1-based variables; empty when last < first.
Mask range_mask(int first, int last);

class VarSet {
public:
    static constexpr int kMin = 2;
    static constexpr int kMax = 12;

    explicit VarSet(int n);

    int size() const noexcept { return n_; }
    Mask full() const noexcept { return (Mask{1} << n_) - 1; }
    /// Number of nonempty subsets, 2^n - 1.
    std::size_t subset_count() const noexcept { return (std::size_t{1} << n_) - 1; }
    bool admits(Mask s) const noexcept { return s != 0 && (s & ~full()) == 0; }

    friend bool operator==(const VarSet&, const VarSet&) = default;

private:
    int n_;
};

class EntropyVector {
public:
    /// All-zero vector.
    explicit EntropyVector(VarSet vars);
    /// `values[s]` for s in [1, 2^n - 1]; values[0] must be 0.
    EntropyVector(VarSet vars, std::vector<double> values);

    const VarSet& vars() const noexcept { return vars_; }

    double operator[](Mask s) const { return values_[s]; }
    double& operator[](Mask s) { return values_[s]; }

    /// h(s | given) = h(s u given) - h(given).
    double conditional(Mask s, Mask given) const { return values_[s | given] - values_[given]; }

    /// Indexed by mask; entry 0 is the empty set (always 0).
    std::span<const double> values() const noexcept { return values_; }

    /// Entropy vector of the listed variables, renumbered 1..k in list order.
    EntropyVector marginal(std::span<const int> vars) const;

private:
    VarSet vars_;
    std::vector<double> values_;
};

/// A rational linear functional over an EntropyVector. As an inequality it
/// asserts sum_s coeffs[s] * h(s) >= 0.
class LinearInequality {
public:
    explicit LinearInequality(VarSet vars) : vars_(vars) {}

    const VarSet& vars() const noexcept { return vars_; }
    const std::map<Mask, Rational>& coeffs() const noexcept { return coeffs_; }

    /// Adds `c` to the coefficient of h(s). Zero coefficients are not stored;
    /// s == 0 (empty set, entropy 0) is ignored.
    void add(Mask s, const Rational& c);
    /// Adds c * h(s | given).
    void add_conditional(Mask s, Mask given, const Rational& c);
    void add(const LinearInequality& other, const Rational& scale = 1);

    Rational coefficient(Mask s) const;
    bool empty() const noexcept { return coeffs_.empty(); }

    double evaluate(const EntropyVector& h) const;

    /// Coefficients as doubles indexed by mask (entry 0 is 0).
    std::vector<double> dense() const;

    std::string to_string() const;

    friend bool operator==(const LinearInequality&, const LinearInequality&) = default;

private:
    VarSet vars_;
    std::map<Mask, Rational> coeffs_;
};

struct ElementalInequality {
    enum class Kind {
        ConditionalEntropy, // h(X_i | rest) >= 0
        MutualInformation,  // I(X_i; X_j | X_K) >= 0
    };

    int id = 0;
    Kind kind = Kind::ConditionalEntropy;
    int i = 0;
    int j = 0;       // MutualInformation only
    Mask given = 0;  // MutualInformation only
    LinearInequality inequality;

    std::string label() const;
};

/// n conditional-entropy forms (ids 0..n-1, by variable) followed by the
/// C(n,2) * 2^(n-2) mutual-information forms, ordered by pair (i<j) then by
/// ascending conditioning mask.
std::vector<ElementalInequality> elemental_inequalities(int n);

/// Number of elemental inequalities, n + C(n,2) * 2^(n-2).
std::size_t elemental_count(int n);

/// sum_{i=1..N} h(Psi_i | A) - (N-m) h(Y_1..Y_N | A) >= 0 with Psi_i the
/// cyclic window of size N-m starting at Y_i. With `conditioned`, A is
/// variable N+1; otherwise there are N variables and no A.
LinearInequality sliding_window_inequality(int N, int m, bool conditioned);

struct ProofCertificate {
    LinearInequality target;
    std::map<int, Rational> multipliers; // elemental id -> multiplier >= 0
    std::size_t lp_pivots = 0;
    bool exact_resolve = false; // rounding alone failed; support re-solved exactly
};

struct NotShannonProvable {
    lp::Status status;
    double residual;
    std::string message;
};

using ShannonVerdict = std::variant<ProofCertificate, NotShannonProvable>;

/// Finds nonnegative multipliers on the elemental inequalities summing to
/// `target` exactly. Float LP followed by rational reconstruction; every
/// returned certificate has passed exact replay.
ShannonVerdict verify_shannon_type(const LinearInequality& target);

/// sum_e multiplier_e * elemental_e, in exact arithmetic.
LinearInequality replay(const ProofCertificate& cert);

/// Exact replay equals the target and every multiplier is >= 0.
bool certificate_is_valid(const ProofCertificate& cert);

struct LemmaInstance {
    int N = 0;
    int m = 0;
    bool conditioned = false;
    ProofCertificate certificate;
};

struct LemmaFamilyReport {
    int n_max = 0;
    std::vector<LemmaInstance> instances;
};

/// Certifies the sliding-window inequality for every 2 <= N <= n_max,
/// 1 <= m <= N-1, conditioned and unconditioned. Any unprovable instance
/// throws MathematicalFailure.
LemmaFamilyReport verify_lemma_family(int n_max);

inline constexpr int kLemmaFamilyMaxN = 7;

/// h(S) = |S|/2 ln(2 pi e) + 1/2 ln det(cov_S) for every nonempty S.
EntropyVector gaussian_entropy_vector(const Eigen::MatrixXd& cov);

struct GaussianLemmaReport {
    std::size_t trials = 0;
    std::size_t evaluations = 0;       // inequality evaluations on random covariances
    double min_slack = 0.0;            // over random covariances
    int worst_N = 0;
    int worst_m = 0;
    bool worst_conditioned = false;
    double max_diagonal_deviation = 0.0; // |value| over independent (diagonal) covariances
};

/// G G^T + ridge I with G standard normal, n x n.
Eigen::MatrixXd random_gaussian_covariance(int n, std::uint64_t seed, std::uint64_t stream,
                                           double ridge = 1e-3);

/// Evaluates every sliding-window instance with N <= n_max (A = variable
/// n_max + 1, conditioned and unconditioned) on `trials` random covariances
/// over n_max + 1 variables, and on `trials` random diagonal covariances.
GaussianLemmaReport gaussian_lemma_check(int trials, int n_max, std::uint64_t seed);

// Certificate text format:
//   n <n> target <c_1> ... <c_{2^n-1}>
//   <elemental-id> <num>/<den>      (ascending id)
void write_certificate(std::ostream& out, const ProofCertificate& cert);
/// Parses and replays; throws FormatError or InternalConsistencyError.
ProofCertificate read_certificate(std::istream& in);

} // namespace nocsit::entropy
