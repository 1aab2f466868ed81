#include "nocsit/entropy_cone.hpp"

#include "nocsit/errors.hpp"
#include "nocsit/random.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <random>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nocsit::entropy {

Mask window_mask(int count, int start, int size) {
    Mask s = 0;
    for (int k = 0; k < size; ++k) {
        s |= bit(((start - 1 + k) % count) + 1);
    }
    return s;
}

Mask range_mask(int first, int last) {
    Mask s = 0;
    for (int v = first; v <= last; ++v) {
        s |= bit(v);
    }
    return s;
}

VarSet::VarSet(int n) : n_(n) {
    if (n < kMin || n > kMax) {
        throw ConfigError("variable count " + std::to_string(n) + " outside [" +
                          std::to_string(kMin) + ", " + std::to_string(kMax) + "]");
    }
}

EntropyVector::EntropyVector(VarSet vars)
    : vars_(vars), values_(vars.subset_count() + 1, 0.0) {}

EntropyVector::EntropyVector(VarSet vars, std::vector<double> values)
    : vars_(vars), values_(std::move(values)) {
    if (values_.size() != vars_.subset_count() + 1) {
        throw ParameterError("entropy vector needs 2^n values (index 0 = empty set)");
    }
    if (values_[0] != 0.0) {
        throw ParameterError("entropy of the empty set must be 0");
    }
}

EntropyVector EntropyVector::marginal(std::span<const int> vars) const {
    VarSet sub(static_cast<int>(vars.size()));
    std::vector<Mask> map(vars.size());
    for (std::size_t k = 0; k < vars.size(); ++k) {
        if (vars[k] < 1 || vars[k] > vars_.size()) {
            throw ParameterError("marginal: variable index out of range");
        }
        map[k] = bit(vars[k]);
    }
    EntropyVector out(sub);
    for (Mask t = 1; t <= sub.full(); ++t) {
        Mask s = 0;
        for (std::size_t k = 0; k < vars.size(); ++k) {
            if (t & (Mask{1} << k)) {
                s |= map[k];
            }
        }
        out.values_[t] = values_[s];
    }
    return out;
}

void LinearInequality::add(Mask s, const Rational& c) {
    if (s == 0 || c == 0) {
        return;
    }
    if (!vars_.admits(s)) {
        throw ParameterError("subset mask outside the variable set");
    }
    auto [it, inserted] = coeffs_.try_emplace(s, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            coeffs_.erase(it);
        }
    }
}

void LinearInequality::add_conditional(Mask s, Mask given, const Rational& c) {
    add(s | given, c);
    add(given, -c);
}

void LinearInequality::add(const LinearInequality& other, const Rational& scale) {
    if (!(other.vars_ == vars_)) {
        throw ParameterError("cannot combine functionals over different variable sets");
    }
    for (const auto& [s, c] : other.coeffs_) {
        add(s, c * scale);
    }
}

Rational LinearInequality::coefficient(Mask s) const {
    const auto it = coeffs_.find(s);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

double LinearInequality::evaluate(const EntropyVector& h) const {
    if (!(h.vars() == vars_)) {
        throw ParameterError("entropy vector and inequality disagree on variable count");
    }
    double s = 0.0;
    for (const auto& [mask, c] : coeffs_) {
        s += to_double(c) * h[mask];
    }
    return s;
}

std::vector<double> LinearInequality::dense() const {
    std::vector<double> d(vars_.subset_count() + 1, 0.0);
    for (const auto& [mask, c] : coeffs_) {
        d[mask] = to_double(c);
    }
    return d;
}

std::string LinearInequality::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [mask, c] : coeffs_) {
        const bool neg = c < 0;
        const Rational mag = neg ? Rational(-c) : c;
        if (first) {
            os << (neg ? "-" : "");
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        if (mag != 1) {
            os << nocsit::to_string(mag) << "*";
        }
        os << "h(";
        for (int v = 1; v <= vars_.size(); ++v) {
            if (mask & bit(v)) {
                os << "X" << v;
            }
        }
        os << ")";
    }
    if (first) {
        os << "0";
    }
    os << " >= 0";
    return os.str();
}

std::string ElementalInequality::label() const {
    const int n = inequality.vars().size();
    std::ostringstream os;
    if (kind == Kind::ConditionalEntropy) {
        os << "H(X" << i << "|rest)";
        return os.str();
    }
    os << "I(X" << i << ";X" << j;
    if (given != 0) {
        os << "|";
        for (int v = 1; v <= n; ++v) {
            if (given & bit(v)) {
                os << "X" << v;
            }
        }
    }
    os << ")";
    return os.str();
}

std::size_t elemental_count(int n) {
    VarSet check(n);
    const auto nn = static_cast<std::size_t>(n);
    return nn + nn * (nn - 1) / 2 * (std::size_t{1} << (nn - 2));
}

std::vector<ElementalInequality> elemental_inequalities(int n) {
    const VarSet vars(n);
    std::vector<ElementalInequality> out;
    out.reserve(elemental_count(n));
    int id = 0;
    const Mask full = vars.full();
    for (int i = 1; i <= n; ++i) {
        ElementalInequality e{id++, ElementalInequality::Kind::ConditionalEntropy, i, 0, 0,
                              LinearInequality(vars)};
        e.inequality.add_conditional(bit(i), full & ~bit(i), 1);
        out.push_back(std::move(e));
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const Mask rest = full & ~bit(i) & ~bit(j);
            // Ascending submasks of `rest`, including the empty set.
            for (Mask k = 0;; k = (k - rest) & rest) {
                ElementalInequality e{id++, ElementalInequality::Kind::MutualInformation, i, j, k,
                                      LinearInequality(vars)};
                auto& q = e.inequality;
                q.add(bit(i) | k, 1);
                q.add(bit(j) | k, 1);
                q.add(bit(i) | bit(j) | k, -1);
                q.add(k, -1);
                out.push_back(std::move(e));
                if (k == rest) {
                    break;
                }
            }
        }
    }
    return out;
}

LinearInequality sliding_window_inequality(int N, int m, bool conditioned) {
    if (N < 2) {
        throw ParameterError("sliding window needs N >= 2, got " + std::to_string(N));
    }
    if (m < 1 || m > N - 1) {
        throw ParameterError("overlap deficit m=" + std::to_string(m) + " outside [1, " +
                             std::to_string(N - 1) + "]");
    }
    const VarSet vars(conditioned ? N + 1 : N);
    const Mask a = conditioned ? bit(N + 1) : 0;
    LinearInequality q(vars);
    for (int i = 1; i <= N; ++i) {
        q.add_conditional(window_mask(N, i, N - m), a, 1);
    }
    q.add_conditional(range_mask(1, N), a, -(N - m));
    return q;
}

namespace {

// Dense tableau ceiling (entries); keeps the LP under ~1.2 GB.
constexpr double kTableauBudget = 1.5e8;

// Exact solve of sum_{e in support} y_e * E_e = target. Returns false if the
// system is inconsistent or the unique solution has a negative entry.
bool exact_resolve(const LinearInequality& target, const std::vector<ElementalInequality>& elems,
                   const std::vector<std::size_t>& support, std::map<int, Rational>& result) {
    const std::size_t rows = target.vars().subset_count();
    const std::size_t k = support.size();
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(k + 1));
    for (std::size_t c = 0; c < k; ++c) {
        for (const auto& [mask, v] : elems[support[c]].inequality.coeffs()) {
            a[mask - 1][c] = v;
        }
    }
    for (const auto& [mask, v] : target.coeffs()) {
        a[mask - 1][k] = v;
    }
    std::vector<std::size_t> pivot_col_of_row;
    std::size_t r = 0;
    for (std::size_t c = 0; c < k && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) {
            ++p;
        }
        if (p == rows) {
            continue;
        }
        std::swap(a[p], a[r]);
        const Rational inv = 1 / a[r][c];
        for (std::size_t j = c; j <= k; ++j) {
            if (a[r][j] != 0) {
                a[r][j] *= inv;
            }
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) {
                continue;
            }
            const Rational f = a[i][c];
            for (std::size_t j = c; j <= k; ++j) {
                if (a[r][j] != 0) {
                    a[i][j] -= f * a[r][j];
                }
            }
        }
        pivot_col_of_row.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i) {
        if (a[i][k] != 0) {
            return false;
        }
    }
    result.clear();
    for (std::size_t i = 0; i < r; ++i) {
        const Rational& y = a[i][k];
        if (y < 0) {
            return false;
        }
        if (y != 0) {
            result.emplace(elems[support[pivot_col_of_row[i]]].id, y);
        }
    }
    return true;
}

} // namespace

LinearInequality replay(const ProofCertificate& cert) {
    const int n = cert.target.vars().size();
    const auto elems = elemental_inequalities(n);
    LinearInequality sum(cert.target.vars());
    for (const auto& [id, y] : cert.multipliers) {
        if (id < 0 || static_cast<std::size_t>(id) >= elems.size()) {
            throw FormatError("elemental id " + std::to_string(id) + " out of range");
        }
        sum.add(elems[static_cast<std::size_t>(id)].inequality, y);
    }
    return sum;
}

bool certificate_is_valid(const ProofCertificate& cert) {
    for (const auto& [id, y] : cert.multipliers) {
        if (y < 0) {
            return false;
        }
    }
    return replay(cert) == cert.target;
}

ShannonVerdict verify_shannon_type(const LinearInequality& target) {
    const int n = target.vars().size();
    const auto elems = elemental_inequalities(n);
    const std::size_t rows = target.vars().subset_count();
    const std::size_t cols = elems.size();
    if (static_cast<double>(rows) * static_cast<double>(rows + cols) > kTableauBudget) {
        throw ParameterError("Shannon LP over " + std::to_string(n) +
                             " variables exceeds the dense tableau budget");
    }

    lp::Problem prob(rows, cols);
    for (std::size_t e = 0; e < cols; ++e) {
        for (const auto& [mask, v] : elems[e].inequality.coeffs()) {
            prob.at(mask - 1, e) = to_double(v);
        }
    }
    for (const auto& [mask, v] : target.coeffs()) {
        prob.b[mask - 1] = to_double(v);
    }

    const lp::Solution sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal) {
        return NotShannonProvable{sol.status, sol.infeasibility,
                                  "no nonnegative combination of elemental inequalities (" +
                                      std::string(lp::status_name(sol.status)) + ")"};
    }

    ProofCertificate cert{target, {}, sol.pivots, false};
    constexpr std::int64_t kMaxDen = std::int64_t{1} << 16;
    for (std::size_t col : sol.basic_columns) {
        const double y = sol.x[col];
        if (y <= 1e-9) {
            continue;
        }
        Rational q = approximate(y, kMaxDen);
        if (q > 0) {
            cert.multipliers.emplace(elems[col].id, q);
        }
    }
    if (certificate_is_valid(cert)) {
        return cert;
    }

    std::map<int, Rational> exact;
    if (exact_resolve(target, elems, sol.basic_columns, exact)) {
        cert.multipliers = std::move(exact);
        cert.exact_resolve = true;
        if (certificate_is_valid(cert)) {
            return cert;
        }
    }
    throw InternalConsistencyError("LP located a certificate for '" + target.to_string() +
                                   "' but exact replay failed after rounding and re-solve");
}

LemmaFamilyReport verify_lemma_family(int n_max) {
    if (n_max < 2) {
        throw ParameterError("lemma family needs N_max >= 2, got " + std::to_string(n_max));
    }
    if (n_max > kLemmaFamilyMaxN) {
        throw ParameterError("lemma family limited to N_max <= " +
                             std::to_string(kLemmaFamilyMaxN) + " (conditioned LP size)");
    }
    LemmaFamilyReport report{n_max, {}};
    for (int N = 2; N <= n_max; ++N) {
        for (int m = 1; m <= N - 1; ++m) {
            for (bool conditioned : {false, true}) {
                auto verdict = verify_shannon_type(sliding_window_inequality(N, m, conditioned));
                if (auto* fail = std::get_if<NotShannonProvable>(&verdict)) {
                    throw MathematicalFailure("sliding-window instance N=" + std::to_string(N) +
                                              " m=" + std::to_string(m) +
                                              (conditioned ? " (conditioned)" : "") +
                                              " not certified: " + fail->message);
                }
                report.instances.push_back(
                    {N, m, conditioned, std::move(std::get<ProofCertificate>(verdict))});
            }
        }
    }
    return report;
}

EntropyVector gaussian_entropy_vector(const Eigen::MatrixXd& cov) {
    if (cov.rows() != cov.cols()) {
        throw DomainError("covariance must be square");
    }
    const VarSet vars(static_cast<int>(cov.rows()));
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw DomainError("covariance is not symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 1e-10) {
        throw DomainError("covariance is not positive definite (min eigenvalue <= 1e-10)");
    }

    const double half_log_2pie = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
    const int n = vars.size();
    EntropyVector h(vars);
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(n));
    for (Mask s = 1; s <= vars.full(); ++s) {
        idx.clear();
        for (int v = 0; v < n; ++v) {
            if (s & (Mask{1} << v)) {
                idx.push_back(v);
            }
        }
        const auto k = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd sub(k, k);
        for (Eigen::Index r = 0; r < k; ++r) {
            for (Eigen::Index c = 0; c < k; ++c) {
                sub(r, c) = cov(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
            }
        }
        const Eigen::LLT<Eigen::MatrixXd> llt(sub);
        if (llt.info() != Eigen::Success) {
            throw DomainError("principal minor is not positive definite");
        }
        const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
        h[s] = static_cast<double>(k) * half_log_2pie + 0.5 * log_det;
    }
    return h;
}

Eigen::MatrixXd random_gaussian_covariance(int n, std::uint64_t seed, std::uint64_t stream, double ridge) {
    auto eng = rng::derive(seed, stream);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            g(r, c) = normal(eng);
        }
    }
    Eigen::MatrixXd cov = g * g.transpose();
    cov += ridge * Eigen::MatrixXd::Identity(n, n);
    return 0.5 * (cov + cov.transpose());
}

GaussianLemmaReport gaussian_lemma_check(int trials, int n_max, std::uint64_t seed) {
    if (trials < 1) {
        throw ParameterError("gaussian check needs at least one trial");
    }
    if (n_max < 2 || n_max + 1 > VarSet::kMax) {
        throw ParameterError("gaussian check needs 2 <= N_max <= " + std::to_string(VarSet::kMax - 1));
    }
    struct Instance {
        int N;
        int m;
        bool conditioned;
        std::vector<int> vars; // original variables, renumbered 1..k by marginal()
        std::vector<double> coeffs;
    };
    const int n = n_max + 1;
    std::vector<Instance> instances;
    for (int N = 2; N <= n_max; ++N) {
        for (int m = 1; m <= N - 1; ++m) {
            for (bool conditioned : {false, true}) {
                std::vector<int> vars;
                for (int v = 1; v <= N; ++v) {
                    vars.push_back(v);
                }
                if (conditioned) {
                    vars.push_back(n);
                }
                instances.push_back({N, m, conditioned, std::move(vars),
                                     sliding_window_inequality(N, m, conditioned).dense()});
            }
        }
    }

    auto value = [](const Instance& inst, const EntropyVector& h) {
        const EntropyVector sub = h.marginal(inst.vars);
        double sum = 0.0;
        for (std::size_t s = 1; s < inst.coeffs.size(); ++s) {
            sum += inst.coeffs[s] * sub[static_cast<Mask>(s)];
        }
        return sum;
    };

    GaussianLemmaReport report;
    report.trials = static_cast<std::size_t>(trials);
    report.min_slack = std::numeric_limits<double>::infinity();
    std::uniform_real_distribution<double> variance(0.25, 4.0);
    for (int t = 0; t < trials; ++t) {
        const EntropyVector h = gaussian_entropy_vector(
            random_gaussian_covariance(n, seed, static_cast<std::uint64_t>(t)));
        auto eng = rng::derive(seed, static_cast<std::uint64_t>(t), 1);
        Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(n, n);
        for (int v = 0; v < n; ++v) {
            diag(v, v) = variance(eng);
        }
        const EntropyVector hd = gaussian_entropy_vector(diag);
        for (const auto& inst : instances) {
            const double slack = value(inst, h);
            ++report.evaluations;
            if (slack < report.min_slack) {
                report.min_slack = slack;
                report.worst_N = inst.N;
                report.worst_m = inst.m;
                report.worst_conditioned = inst.conditioned;
            }
            report.max_diagonal_deviation = std::max(report.max_diagonal_deviation, std::abs(value(inst, hd)));
        }
    }
    return report;
}

} // namespace nocsit::entropy
