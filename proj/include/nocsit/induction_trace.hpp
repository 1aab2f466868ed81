#pragma once

// Unrolled induction proof of the sliding-window inequality. Starting from
// (N-m) h(Y_1..Y_N | A), each step rewrites the running expression until it
// reaches sum_i h(Psi_i | A). Intermediate levels work over merged
// variables: at level L the virtual variables are Y_1, ..., Y_{L-1} and the
// block Y_L..Y_N.

#include "nocsit/entropy_cone.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace nocsit::entropy {

/// coeff * h(target | given)
struct Term {
    Rational coeff;
    Mask target = 0;
    Mask given = 0;

    friend bool operator==(const Term&, const Term&) = default;
};

/// A sum of conditional-entropy terms, kept unsimplified so the trace reads
/// like the proof.
class Expression {
public:
    explicit Expression(VarSet vars) : vars_(vars) {}

    const VarSet& vars() const noexcept { return vars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    Expression& add(const Rational& coeff, Mask target, Mask given = 0);
    Expression& append(const Expression& other);

    /// Expanded to unconditional entropies with like terms combined.
    LinearInequality canonical() const;
    double evaluate(const EntropyVector& h) const;

    std::string render(const std::vector<std::string>& names) const;

    friend bool operator==(const Expression&, const Expression&) = default;

private:
    VarSet vars_;
    std::vector<Term> terms_;
};

enum class Rule {
    BaseSubadditivity,
    HypothesisSplit,
    WindowReidentification,
    ChainRule,
    ChainRuleExpansion,
    ConditioningReduction,
    ChainRuleMerge,
};

enum class Relation { Equal, LessEqual };

std::string_view rule_name(Rule r);
/// The polymatroid fact that licenses the rule.
std::string_view rule_justification(Rule r);

struct TraceStep {
    int level = 0; // number of virtual variables the step works over
    Rule rule = Rule::BaseSubadditivity;
    Relation relation = Relation::Equal;
    Expression lhs;
    Expression rhs;
};

struct InductionTrace {
    int N = 0;
    int m = 0;
    bool conditioned = true;
    std::vector<TraceStep> steps;

    VarSet vars() const { return steps.front().lhs.vars(); }
    /// Number of induction layers above the base case, N - (m+1).
    int layers() const { return N - (m + 1); }
};

/// Requires N >= m+1 >= 2.
InductionTrace induction_trace(int N, int m, bool conditioned = true);

/// Variable names: Y1..YN and, when conditioned, A.
std::vector<std::string> trace_variable_names(const InductionTrace& trace);

/// rhs - lhs for LessEqual steps, rhs - lhs (which must vanish) for Equal.
LinearInequality step_gap(const TraceStep& step);

/// Equal steps: canonical forms agree exactly. LessEqual steps: the gap
/// evaluated on `h` is >= -slack.
bool step_holds(const TraceStep& step, const EntropyVector& h, double slack);
bool step_is_identity(const TraceStep& step);

/// Window of size `size` starting at virtual variable `start` of level `level`,
/// expressed over the original variables Y_1..Y_N.
Mask level_window(int N, int level, int start, int size);

std::string render(const InductionTrace& trace);

} // namespace nocsit::entropy
