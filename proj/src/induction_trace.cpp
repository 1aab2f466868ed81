#include "nocsit/induction_trace.hpp"

#include "nocsit/errors.hpp"

#include <sstream>

namespace nocsit::entropy {

Expression& Expression::add(const Rational& coeff, Mask target, Mask given) {
    if (!vars_.admits(target) || (given != 0 && !vars_.admits(given))) {
        throw ParameterError("expression term outside the variable set");
    }
    terms_.push_back({coeff, target, given});
    return *this;
}

Expression& Expression::append(const Expression& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

LinearInequality Expression::canonical() const {
    LinearInequality f(vars_);
    for (const Term& t : terms_) {
        f.add_conditional(t.target, t.given, t.coeff);
    }
    return f;
}

double Expression::evaluate(const EntropyVector& h) const {
    double s = 0.0;
    for (const Term& t : terms_) {
        s += to_double(t.coeff) * h.conditional(t.target, t.given);
    }
    return s;
}

namespace {

std::string set_name(Mask s, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t v = 0; v < names.size(); ++v) {
        if (s & (Mask{1} << v)) {
            out += names[v];
        }
    }
    return out;
}

} // namespace

std::string Expression::render(const std::vector<std::string>& names) const {
    std::ostringstream os;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const Term& t = terms_[k];
        if (k > 0) {
            os << " + ";
        }
        if (t.coeff != 1) {
            os << to_string(t.coeff);
        }
        os << "h(" << set_name(t.target, names);
        if (t.given != 0) {
            os << "|" << set_name(t.given, names);
        }
        os << ")";
    }
    return os.str();
}

std::string_view rule_name(Rule r) {
    switch (r) {
    case Rule::BaseSubadditivity: return "base case";
    case Rule::HypothesisSplit: return "induction split";
    case Rule::WindowReidentification: return "window re-identification";
    case Rule::ChainRule: return "chain rule";
    case Rule::ChainRuleExpansion: return "chain-rule expansion";
    case Rule::ConditioningReduction: return "conditioning reduction";
    case Rule::ChainRuleMerge: return "chain-rule merge";
    }
    return "unknown";
}

std::string_view rule_justification(Rule r) {
    switch (r) {
    case Rule::BaseSubadditivity: return "subadditivity of joint entropy";
    case Rule::HypothesisSplit: return "identity; hypothesis at the next level down applies to the merged set";
    case Rule::WindowReidentification: return "identity; windows past the overlap coincide under the merge";
    case Rule::ChainRule:
    case Rule::ChainRuleExpansion:
    case Rule::ChainRuleMerge: return "chain rule (identity)";
    case Rule::ConditioningReduction: return "conditioning does not increase entropy";
    }
    return "";
}

Mask level_window(int N, int level, int start, int size) {
    Mask s = 0;
    for (int k = 0; k < size; ++k) {
        const int v = ((start - 1 + k) % level) + 1;
        s |= v < level ? bit(v) : range_mask(level, N);
    }
    return s;
}

namespace {

// Virtual variables [first, last] of `level`, over Y_1..Y_N.
Mask level_range(int N, int level, int first, int last) {
    Mask s = 0;
    for (int v = first; v <= last; ++v) {
        s |= v < level ? bit(v) : range_mask(level, N);
    }
    return s;
}

} // namespace

InductionTrace induction_trace(int N, int m, bool conditioned) {
    if (m < 1 || N < m + 1) {
        throw ParameterError("induction trace needs N >= m+1 >= 2, got N=" + std::to_string(N) +
                             " m=" + std::to_string(m));
    }
    const VarSet vars(conditioned ? N + 1 : N);
    const Mask a = conditioned ? bit(N + 1) : 0;
    const Mask all = range_mask(1, N);
    const int base = m + 1;

    InductionTrace trace{N, m, conditioned, {}};

    // One pending h(all|A) per level still above the current one.
    auto context = [&](int level) {
        Expression e(vars);
        for (int k = 0; k < N - level; ++k) {
            e.add(1, all, a);
        }
        return e;
    };
    auto windows = [&](int level, int first, int last, int size) {
        Expression e(vars);
        for (int i = first; i <= last; ++i) {
            e.add(1, level_window(N, level, i, size), a);
        }
        return e;
    };

    for (int level = N; level >= base + 1; --level) {
        Expression lhs = context(level);
        lhs.add(level - m, all, a);
        Expression rhs = context(level);
        rhs.add(1, all, a);
        rhs.add(level - 1 - m, all, a);
        trace.steps.push_back({level, Rule::HypothesisSplit, Relation::Equal, lhs, rhs});
    }

    {
        Expression lhs = context(base);
        lhs.add(1, all, a);
        Expression rhs = context(base);
        rhs.append(windows(base, 1, base, 1));
        trace.steps.push_back({base, Rule::BaseSubadditivity, Relation::LessEqual, lhs, rhs});
    }

    for (int level = base + 1; level <= N; ++level) {
        const int prev = level - 1;
        const int small = prev - m;  // window size one level down
        const int large = level - m; // window size at this level
        const Expression ctx = context(level);

        Expression e7 = ctx;
        e7.add(1, all, a);
        e7.append(windows(prev, 1, prev, small));

        Expression e8 = ctx;
        e8.add(1, all, a);
        e8.append(windows(prev, 1, m, small));
        e8.append(windows(level, m + 1, prev, large));
        trace.steps.push_back({level, Rule::WindowReidentification, Relation::Equal, e7, e8});

        // h(all|A) = h(Y_[L-m:L-1] | Y_L, Y_[1:L-1-m], A) + h(Psi_L | A)
        Expression e9 = ctx;
        e9.add(1, level_range(N, level, level - m, level - 1),
               level_range(N, level, level, level) | level_range(N, level, 1, level - 1 - m) | a);
        e9.append(windows(prev, 1, m, small));
        e9.append(windows(level, m + 1, level, large));
        trace.steps.push_back({level, Rule::ChainRule, Relation::Equal, e8, e9});

        Expression e10 = ctx;
        for (int i = 1; i <= m; ++i) {
            e10.add(1, level_range(N, level, level - 1 - m + i, level - 1 - m + i),
                    level_range(N, level, level, level) |
                        level_range(N, level, 1, level - 2 - m + i) | a);
        }
        for (int i = 1; i <= m; ++i) {
            e10.add(1, level_range(N, level, i, level - 2 - m + i), a);
        }
        e10.append(windows(level, m + 1, level, large));
        trace.steps.push_back({level, Rule::ChainRuleExpansion, Relation::Equal, e9, e10});

        Expression e11 = ctx;
        for (int i = 1; i <= m; ++i) {
            e11.add(1, level_range(N, level, level - 1 - m + i, level - 1 - m + i),
                    level_range(N, level, i, level - 2 - m + i) | a);
        }
        for (int i = 1; i <= m; ++i) {
            e11.add(1, level_range(N, level, i, level - 2 - m + i), a);
        }
        e11.append(windows(level, m + 1, level, large));
        trace.steps.push_back({level, Rule::ConditioningReduction, Relation::LessEqual, e10, e11});

        Expression e12 = ctx;
        e12.append(windows(level, 1, level, large));
        trace.steps.push_back({level, Rule::ChainRuleMerge, Relation::Equal, e11, e12});
    }
    return trace;
}

std::vector<std::string> trace_variable_names(const InductionTrace& trace) {
    std::vector<std::string> names;
    for (int v = 1; v <= trace.N; ++v) {
        names.push_back("Y" + std::to_string(v));
    }
    if (trace.conditioned) {
        names.emplace_back("A");
    }
    return names;
}

LinearInequality step_gap(const TraceStep& step) {
    LinearInequality gap = step.rhs.canonical();
    gap.add(step.lhs.canonical(), -1);
    return gap;
}

bool step_is_identity(const TraceStep& step) {
    return step_gap(step).empty();
}

bool step_holds(const TraceStep& step, const EntropyVector& h, double slack) {
    if (step.relation == Relation::Equal) {
        return step_is_identity(step);
    }
    return step.rhs.evaluate(h) - step.lhs.evaluate(h) >= -slack;
}

std::string render(const InductionTrace& trace) {
    const auto names = trace_variable_names(trace);
    std::ostringstream os;
    os << "induction trace N=" << trace.N << " m=" << trace.m
       << (trace.conditioned ? " conditioned" : " unconditioned") << " (" << trace.layers()
       << " layer" << (trace.layers() == 1 ? "" : "s") << " above the base case)\n";
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const TraceStep& s = trace.steps[k];
        os << "step " << k + 1 << " [level " << s.level << "] " << rule_name(s.rule) << " -- "
           << rule_justification(s.rule) << "\n";
        os << "  " << s.lhs.render(names) << "\n";
        os << "  " << (s.relation == Relation::Equal ? "=" : "<=") << " " << s.rhs.render(names)
           << "\n";
    }
    return os.str();
}

} // namespace nocsit::entropy
