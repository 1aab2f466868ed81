#pragma once

// Dense two-phase primal simplex for
//
//     minimize  c . x   subject to  A x = b,  x >= 0.
//
// Sized for the small, highly degenerate systems this project produces
// (Shannon-cone certificates up to a few hundred rows, polytope queries).
// Dantzig pricing with a switch to Bland's rule on degenerate stalls.

#include <cstddef>
#include <string_view>
#include <vector>

namespace nocsit::lp {

enum class Status { Optimal, Infeasible, Unbounded, PivotLimit };

std::string_view status_name(Status s);

struct Problem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a; // row-major rows x cols
    std::vector<double> b;
    std::vector<double> c; // empty: feasibility only

    Problem() = default;
    Problem(std::size_t r, std::size_t n) : rows(r), cols(n), a(r * n, 0.0), b(r, 0.0) {}

    double& at(std::size_t r, std::size_t j) { return a[r * cols + j]; }
    double at(std::size_t r, std::size_t j) const { return a[r * cols + j]; }
};

struct Options {
    double tolerance = 1e-9;
    std::size_t max_pivots = 2'000'000;
    std::size_t degenerate_stall = 50;
};

struct Solution {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    std::size_t pivots = 0;
    // Structural columns basic at termination (artificials excluded).
    std::vector<std::size_t> basic_columns;
    // Phase-1 residual: sum of artificial values at the end of phase 1.
    double infeasibility = 0.0;
};

Solution solve(const Problem& problem, const Options& options = {});

} // namespace nocsit::lp
