#include <doctest.h>

#include "nocsit/errors.hpp"
#include "nocsit/induction_trace.hpp"

#include <algorithm>

using namespace nocsit;
using namespace nocsit::entropy;

namespace {

int count_rule(const InductionTrace& t, Rule r) {
    return static_cast<int>(std::count_if(t.steps.begin(), t.steps.end(),
                                          [r](const TraceStep& s) { return s.rule == r; }));
}

} // namespace

TEST_SUITE("induction_trace") {

TEST_CASE("base case is a single subadditivity step") {
    for (int m = 1; m <= 5; ++m) {
        const auto t = induction_trace(m + 1, m);
        REQUIRE(t.steps.size() == 1);
        CHECK(t.steps[0].rule == Rule::BaseSubadditivity);
        CHECK(t.steps[0].relation == Relation::LessEqual);
        CHECK(t.layers() == 0);
    }
}

TEST_CASE("one layer above the base case uses conditioning reduction once") {
    const auto t = induction_trace(3, 1);
    CHECK(t.layers() == 1);
    CHECK(count_rule(t, Rule::BaseSubadditivity) == 1);
    CHECK(count_rule(t, Rule::ConditioningReduction) == 1);
}

TEST_CASE("layer count is N - (m+1)") {
    const auto t = induction_trace(5, 2);
    CHECK(t.layers() == 2);
    CHECK(count_rule(t, Rule::ConditioningReduction) == 2);
    CHECK(count_rule(t, Rule::HypothesisSplit) == 2);
    CHECK(count_rule(t, Rule::WindowReidentification) == 2);
    CHECK_THROWS_AS(induction_trace(2, 2), ParameterError);
    CHECK_THROWS_AS(induction_trace(3, 0), ParameterError);
}

TEST_CASE("steps chain and endpoints match the window inequality") {
    for (int N = 2; N <= 7; ++N) {
        for (int m = 1; m <= N - 1; ++m) {
            for (bool conditioned : {false, true}) {
                const auto t = induction_trace(N, m, conditioned);
                for (std::size_t k = 0; k + 1 < t.steps.size(); ++k) {
                    CHECK(t.steps[k].rhs == t.steps[k + 1].lhs);
                }
                LinearInequality first = t.steps.front().lhs.canonical();
                LinearInequality expected_first(t.vars());
                expected_first.add_conditional(range_mask(1, N), conditioned ? bit(N + 1) : 0, N - m);
                CHECK(first == expected_first);

                LinearInequality span = t.steps.back().rhs.canonical();
                span.add(first, -1);
                CHECK(span == sliding_window_inequality(N, m, conditioned));

                for (const auto& s : t.steps) {
                    if (s.relation == Relation::Equal) {
                        CHECK(step_is_identity(s));
                    }
                }
            }
        }
    }
}

TEST_CASE("inequality steps are Shannon-type") {
    for (int N = 2; N <= 5; ++N) {
        for (int m = 1; m <= N - 1; ++m) {
            const auto t = induction_trace(N, m, true);
            for (const auto& s : t.steps) {
                if (s.relation == Relation::LessEqual) {
                    const auto verdict = verify_shannon_type(step_gap(s));
                    CHECK(std::holds_alternative<ProofCertificate>(verdict));
                }
            }
        }
    }
}

TEST_CASE("every step holds on Gaussian entropy vectors") {
    for (int N = 2; N <= 6; ++N) {
        for (int m = 1; m <= N - 1; ++m) {
            const auto t = induction_trace(N, m, true);
            for (std::uint64_t s = 0; s < 20; ++s) {
                const auto h = gaussian_entropy_vector(random_gaussian_covariance(N + 1, 17, s));
                for (const auto& step : t.steps) {
                    CHECK(step_holds(step, h, 1e-9));
                }
            }
        }
    }
}

TEST_CASE("rendering names the rules") {
    const std::string text = render(induction_trace(3, 1));
    CHECK(text.find("conditioning does not increase entropy") != std::string::npos);
    CHECK(text.find("h(Y1Y2Y3|A)") != std::string::npos);
    CHECK(text.find("subadditivity") != std::string::npos);
}

}
