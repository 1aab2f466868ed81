#include "nocsit/lp.hpp"

#include "nocsit/errors.hpp"
#include "nocsit/kernels.hpp"

#include <cmath>
#include <limits>
#include <span>

namespace nocsit::lp {

std::string_view status_name(Status s) {
    switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::PivotLimit: return "pivot-limit";
    }
    return "unknown";
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class Tableau {
public:
    Tableau(const Problem& p, const Options& opt)
        : m_(p.rows), n_(p.cols), width_(p.cols + p.rows + 1), opt_(opt),
          t_(m_ * width_, 0.0), obj_(width_, 0.0), basis_(m_) {
        for (std::size_t r = 0; r < m_; ++r) {
            const double sign = p.b[r] < 0 ? -1.0 : 1.0;
            double* row = row_ptr(r);
            for (std::size_t j = 0; j < n_; ++j) {
                row[j] = sign * p.at(r, j);
            }
            row[n_ + r] = 1.0;
            row[width_ - 1] = sign * p.b[r];
            basis_[r] = n_ + r;
        }
    }

    // Phase 1: minimize the sum of artificials.
    Status phase_one() {
        std::fill(obj_.begin(), obj_.end(), 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            const double* row = row_ptr(r);
            for (std::size_t j = 0; j < n_; ++j) {
                obj_[j] -= row[j];
            }
            obj_[width_ - 1] -= row[width_ - 1];
        }
        return iterate();
    }

    double phase_one_residual() const { return -obj_[width_ - 1]; }

    // Pivot zero-level artificials out of the basis where a structural
    // column allows it; otherwise the row is redundant and stays inert.
    void drive_out_artificials() {
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_) {
                continue;
            }
            const double* row = row_ptr(r);
            std::size_t best = kNone;
            double best_abs = opt_.tolerance;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::fabs(row[j]) > best_abs) {
                    best_abs = std::fabs(row[j]);
                    best = j;
                }
            }
            if (best != kNone) {
                pivot(r, best);
            }
        }
    }

    Status phase_two(std::span<const double> cost) {
        std::fill(obj_.begin(), obj_.end(), 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            obj_[j] = cost[j];
        }
        for (std::size_t r = 0; r < m_; ++r) {
            const std::size_t bcol = basis_[r];
            const double cb = bcol < n_ ? cost[bcol] : 0.0;
            if (cb != 0.0) {
                kernels::axpy(-cb, std::span<const double>(row_ptr(r), width_), obj_);
            }
        }
        return iterate();
    }

    double objective() const { return -obj_[width_ - 1]; }
    std::size_t pivots() const { return pivots_; }

    std::vector<double> primal() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_) {
                x[basis_[r]] = t_[r * width_ + width_ - 1];
            }
        }
        return x;
    }

    std::vector<std::size_t> basic_columns() const {
        std::vector<std::size_t> cols;
        for (std::size_t b : basis_) {
            if (b < n_) {
                cols.push_back(b);
            }
        }
        return cols;
    }

private:
    double* row_ptr(std::size_t r) { return t_.data() + r * width_; }
    const double* row_ptr(std::size_t r) const { return t_.data() + r * width_; }

    Status iterate() {
        std::size_t stall = 0;
        for (;;) {
            if (pivots_ >= opt_.max_pivots) {
                return Status::PivotLimit;
            }
            const bool bland = stall >= opt_.degenerate_stall;
            const std::size_t enter = choose_entering(bland);
            if (enter == kNone) {
                return Status::Optimal;
            }
            const std::size_t leave = choose_leaving(enter);
            if (leave == kNone) {
                return Status::Unbounded;
            }
            const bool degenerate = t_[leave * width_ + width_ - 1] <= opt_.tolerance;
            pivot(leave, enter);
            stall = degenerate ? stall + 1 : 0;
        }
    }

    // Artificial columns never re-enter.
    std::size_t choose_entering(bool bland) const {
        std::size_t best = kNone;
        double best_val = -opt_.tolerance;
        for (std::size_t j = 0; j < n_; ++j) {
            if (obj_[j] < best_val) {
                best = j;
                if (bland) {
                    break;
                }
                best_val = obj_[j];
            }
        }
        return best;
    }

    std::size_t choose_leaving(std::size_t enter) const {
        std::size_t best = kNone;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m_; ++r) {
            const double coef = t_[r * width_ + enter];
            if (coef <= opt_.tolerance) {
                continue;
            }
            const double ratio = t_[r * width_ + width_ - 1] / coef;
            if (ratio < best_ratio - opt_.tolerance ||
                (ratio <= best_ratio + opt_.tolerance && best != kNone && basis_[r] < basis_[best])) {
                best_ratio = std::min(best_ratio, ratio);
                best = r;
            }
        }
        return best;
    }

    void pivot(std::size_t r, std::size_t j) {
        double* prow = row_ptr(r);
        kernels::scale(1.0 / prow[j], std::span<double>(prow, width_));
        prow[j] = 1.0;
        const std::span<const double> pivot_row(prow, width_);
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) {
                continue;
            }
            double* row = row_ptr(i);
            const double f = row[j];
            if (f != 0.0) {
                kernels::axpy(-f, pivot_row, std::span<double>(row, width_));
                row[j] = 0.0;
            }
        }
        const double f = obj_[j];
        if (f != 0.0) {
            kernels::axpy(-f, pivot_row, obj_);
            obj_[j] = 0.0;
        }
        basis_[r] = j;
        ++pivots_;
    }

    std::size_t m_;
    std::size_t n_;
    std::size_t width_;
    Options opt_;
    std::vector<double> t_;
    std::vector<double> obj_;
    std::vector<std::size_t> basis_;
    std::size_t pivots_ = 0;
};

} // namespace

Solution solve(const Problem& problem, const Options& options) {
    if (problem.a.size() != problem.rows * problem.cols || problem.b.size() != problem.rows ||
        (!problem.c.empty() && problem.c.size() != problem.cols)) {
        throw ParameterError("lp::solve: inconsistent problem dimensions");
    }
    Tableau tab(problem, options);
    Solution sol;

    double scale = 1.0;
    for (double v : problem.b) {
        scale += std::fabs(v);
    }

    Status st = tab.phase_one();
    sol.infeasibility = tab.phase_one_residual();
    if (st == Status::PivotLimit) {
        sol.status = st;
        sol.pivots = tab.pivots();
        return sol;
    }
    if (sol.infeasibility > options.tolerance * scale) {
        sol.status = Status::Infeasible;
        sol.pivots = tab.pivots();
        return sol;
    }
    tab.drive_out_artificials();

    if (!problem.c.empty()) {
        st = tab.phase_two(problem.c);
        sol.objective = tab.objective();
    } else {
        st = Status::Optimal;
    }
    sol.status = st;
    sol.pivots = tab.pivots();
    sol.x = tab.primal();
    sol.basic_columns = tab.basic_columns();
    return sol;
}

} // namespace nocsit::lp
