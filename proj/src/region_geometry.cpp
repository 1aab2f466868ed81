#include "nocsit/region_geometry.hpp"

#include "nocsit/errors.hpp"
#include "nocsit/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace nocsit::region {

namespace {

void require_positive(const std::vector<int>& counts, const char* what) {
    for (int c : counts) {
        if (c < 1) {
            throw ConfigError(std::string(what) + " antenna counts must be >= 1");
        }
    }
}

std::string user_label(int i) { return "d" + std::to_string(i + 1); }

Constraint box(int dim, int user, int cap) {
    Constraint c{std::vector<Rational>(static_cast<std::size_t>(dim), 0), cap, {}};
    c.a[static_cast<std::size_t>(user)] = 1;
    c.label = user_label(user) + " <= " + std::to_string(cap);
    return c;
}

std::string weighted_label(const std::vector<Rational>& a, const Rational& b) {
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) {
            continue;
        }
        if (!s.empty()) {
            s += " + ";
        }
        s += (a[i] == 1 ? "" : to_string(a[i]) + "*") + user_label(static_cast<int>(i));
    }
    return s + " <= " + to_string(b);
}

} // namespace

BcConfig::BcConfig(int m, std::vector<int> n) : M(m), N(std::move(n)) {
    if (N.empty()) {
        throw ConfigError("broadcast channel needs at least one user");
    }
    if (M < 1) {
        throw ConfigError("transmit antenna count must be >= 1");
    }
    require_positive(N, "receive");
}

IcConfig::IcConfig(std::vector<int> m, std::vector<int> n) : M(std::move(m)), N(std::move(n)) {
    if (M.size() != N.size()) {
        throw ConfigError("interference channel needs one transmit and one receive count per user");
    }
    if (N.size() < 2) {
        throw ConfigError("interference channel needs K >= 2 users");
    }
    require_positive(M, "transmit");
    require_positive(N, "receive");
}

int IcConfig::total_transmit() const {
    return std::accumulate(M.begin(), M.end(), 0);
}

double Constraint::lhs(const DofPoint& p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0) {
            s += to_double(a[i]) * p.d[i];
        }
    }
    return s;
}

DofRegion bc_dof_region(const BcConfig& cfg) {
    const int k = cfg.users();
    Constraint sum{std::vector<Rational>(static_cast<std::size_t>(k)), 1, {}};
    for (int i = 0; i < k; ++i) {
        sum.a[static_cast<std::size_t>(i)] = Rational(1, cfg.rank(i));
    }
    sum.label = weighted_label(sum.a, sum.b);
    return {k, {sum}};
}

DofRegion ic2_outer_region(const IcConfig& cfg) {
    if (cfg.users() != 2) {
        throw ConfigError("two-user outer bound needs exactly K = 2");
    }
    if (cfg.N[0] > cfg.N[1]) {
        throw PreconditionError("two-user outer bound assumes N1 <= N2 (got N1=" +
                                std::to_string(cfg.N[0]) + ", N2=" + std::to_string(cfg.N[1]) +
                                "); relabel the users first");
    }
    const int r1 = std::min(cfg.M[1], cfg.N[0]);
    const int r2 = std::min(cfg.M[1], cfg.N[1]);
    DofRegion region{2, {}};
    for (int i = 0; i < 2; ++i) {
        region.constraints.push_back(
            box(2, i, std::min(cfg.M[static_cast<std::size_t>(i)], cfg.N[static_cast<std::size_t>(i)])));
    }
    Constraint sum{{Rational(1, r1), Rational(1, r2)},
                   Rational(std::min(cfg.N[0], cfg.M[0] + cfg.M[1]), r1),
                   {}};
    sum.label = weighted_label(sum.a, sum.b);
    region.constraints.push_back(sum);
    return region;
}

DofRegion ick_outer_region(const IcConfig& cfg) {
    const int k = cfg.users();
    const int mt = cfg.total_transmit();
    DofRegion region{k, {}};
    for (int i = 0; i < k; ++i) {
        region.constraints.push_back(
            box(k, i, std::min(cfg.M[static_cast<std::size_t>(i)], cfg.N[static_cast<std::size_t>(i)])));
    }
    Constraint sum{std::vector<Rational>(static_cast<std::size_t>(k)), 1, {}};
    for (int i = 0; i < k; ++i) {
        sum.a[static_cast<std::size_t>(i)] = Rational(1, std::min(mt, cfg.N[static_cast<std::size_t>(i)]));
    }
    sum.label = weighted_label(sum.a, sum.b);
    region.constraints.push_back(sum);
    return region;
}

std::string_view tightness_name(Tightness t) {
    switch (t) {
    case Tightness::AllNleM: return "all-N-le-M";
    case Tightness::EqualNgeEqualM: return "equal-N-ge-equal-M";
    case Tightness::Unknown: return "unknown";
    }
    return "unknown";
}

bool satisfies(const IcConfig& cfg, Tightness t) {
    switch (t) {
    case Tightness::AllNleM:
        for (int i = 0; i < cfg.users(); ++i) {
            if (cfg.N[static_cast<std::size_t>(i)] > cfg.M[static_cast<std::size_t>(i)]) {
                return false;
            }
        }
        return true;
    case Tightness::EqualNgeEqualM: {
        const int n = cfg.N.front();
        const int m = cfg.M.front();
        const bool equal_n = std::all_of(cfg.N.begin(), cfg.N.end(), [n](int v) { return v == n; });
        const bool equal_m = std::all_of(cfg.M.begin(), cfg.M.end(), [m](int v) { return v == m; });
        return equal_n && equal_m && n >= m;
    }
    case Tightness::Unknown: return true;
    }
    return false;
}

Tightness tightness_class(const IcConfig& cfg) {
    if (satisfies(cfg, Tightness::AllNleM)) {
        return Tightness::AllNleM;
    }
    if (satisfies(cfg, Tightness::EqualNgeEqualM)) {
        return Tightness::EqualNgeEqualM;
    }
    return Tightness::Unknown;
}

bool contains(const DofRegion& region, const DofPoint& p) {
    if (static_cast<int>(p.d.size()) != region.dim) {
        throw ParameterError("point has dimension " + std::to_string(p.d.size()) +
                             ", region has " + std::to_string(region.dim));
    }
    for (double v : p.d) {
        if (!(v >= -kMembershipSlack)) {
            return false;
        }
    }
    return std::all_of(region.constraints.begin(), region.constraints.end(), [&](const Constraint& c) {
        return c.lhs(p) <= to_double(c.b) + kMembershipSlack;
    });
}

bool is_bounded(const DofRegion& region) {
    const std::size_t k = static_cast<std::size_t>(region.dim);
    const std::size_t c = region.constraints.size();
    lp::Problem prob(c, k + c);
    prob.c.assign(k + c, 0.0);
    for (std::size_t r = 0; r < c; ++r) {
        for (std::size_t i = 0; i < k; ++i) {
            prob.at(r, i) = to_double(region.constraints[r].a[i]);
        }
        prob.at(r, k + r) = 1.0;
        prob.b[r] = to_double(region.constraints[r].b);
    }
    for (std::size_t i = 0; i < k; ++i) {
        prob.c[i] = -1.0;
    }
    return lp::solve(prob).status != lp::Status::Unbounded;
}

void require_bounded(const DofRegion& region) {
    if (!is_bounded(region)) {
        throw StructuralError("region is unbounded");
    }
}

namespace {

// Exact solve of the square system rows `active` (indices into the combined
// list where index >= constraints.size() means d_i >= 0).
std::optional<std::vector<Rational>> exact_vertex(const DofRegion& region,
                                                  const std::vector<std::size_t>& active) {
    const std::size_t k = static_cast<std::size_t>(region.dim);
    const std::size_t c = region.constraints.size();
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1, 0));
    for (std::size_t r = 0; r < k; ++r) {
        if (active[r] < c) {
            const Constraint& con = region.constraints[active[r]];
            for (std::size_t i = 0; i < k; ++i) {
                a[r][i] = con.a[i];
            }
            a[r][k] = con.b;
        } else {
            a[r][active[r] - c] = 1; // d_i = 0
        }
    }
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t p = col;
        while (p < k && a[p][col] == 0) {
            ++p;
        }
        if (p == k) {
            return std::nullopt;
        }
        std::swap(a[p], a[col]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col || a[r][col] == 0) {
                continue;
            }
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t j = col; j <= k; ++j) {
                a[r][j] -= f * a[col][j];
            }
        }
    }
    std::vector<Rational> x(k);
    for (std::size_t i = 0; i < k; ++i) {
        x[i] = a[i][k] / a[i][i];
    }
    return x;
}

} // namespace

std::vector<DofPoint> vertices(const DofRegion& region) {
    const int k = region.dim;
    if (k < 1 || k > kMaxVertexDim) {
        throw ParameterError("vertex enumeration supports 1 <= K <= " + std::to_string(kMaxVertexDim));
    }
    require_bounded(region);

    const std::size_t c = region.constraints.size();
    const std::size_t total = c + static_cast<std::size_t>(k);
    const auto kk = static_cast<std::size_t>(k);

    Eigen::MatrixXd all(static_cast<Eigen::Index>(total), k);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(total));
    all.setZero();
    for (std::size_t r = 0; r < c; ++r) {
        for (std::size_t i = 0; i < kk; ++i) {
            all(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) =
                to_double(region.constraints[r].a[i]);
        }
        rhs(static_cast<Eigen::Index>(r)) = to_double(region.constraints[r].b);
    }
    for (std::size_t i = 0; i < kk; ++i) {
        all(static_cast<Eigen::Index>(c + i), static_cast<Eigen::Index>(i)) = 1.0;
        rhs(static_cast<Eigen::Index>(c + i)) = 0.0;
    }

    std::vector<DofPoint> out;
    std::vector<bool> pick(total, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    std::vector<std::size_t> active(kk);
    Eigen::MatrixXd sys(k, k);
    Eigen::VectorXd b(k);
    // Enumerate K-subsets of the combined constraint list.
    do {
        std::size_t r = 0;
        for (std::size_t j = 0; j < total; ++j) {
            if (pick[j]) {
                active[r++] = j;
            }
        }
        for (std::size_t row = 0; row < kk; ++row) {
            sys.row(static_cast<Eigen::Index>(row)) = all.row(static_cast<Eigen::Index>(active[row]));
            b(static_cast<Eigen::Index>(row)) = rhs(static_cast<Eigen::Index>(active[row]));
        }
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
        if (!lu.isInvertible()) {
            continue;
        }
        const Eigen::VectorXd x = lu.solve(b);
        DofPoint p{std::vector<double>(x.data(), x.data() + k)};
        bool feasible = std::all_of(p.d.begin(), p.d.end(),
                                    [](double v) { return v >= -kVertexFeasibilitySlack; });
        for (std::size_t q = 0; feasible && q < c; ++q) {
            feasible = region.constraints[q].lhs(p) <= to_double(region.constraints[q].b) +
                                                          kVertexFeasibilitySlack;
        }
        if (!feasible) {
            continue;
        }
        if (auto exact = exact_vertex(region, active)) {
            for (std::size_t i = 0; i < kk; ++i) {
                p.d[i] = to_double((*exact)[i]);
            }
        }
        const bool dup = std::any_of(out.begin(), out.end(), [&](const DofPoint& v) {
            for (std::size_t i = 0; i < kk; ++i) {
                if (std::fabs(v.d[i] - p.d[i]) > kVertexDedupDistance) {
                    return false;
                }
            }
            return true;
        });
        if (!dup) {
            out.push_back(std::move(p));
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));

    std::sort(out.begin(), out.end(),
              [](const DofPoint& x, const DofPoint& y) { return x.d < y.d; });
    return out;
}

bool in_convex_hull(const std::vector<DofPoint>& points, const DofPoint& p, double tolerance) {
    if (points.empty()) {
        return false;
    }
    const std::size_t k = p.d.size();
    const std::size_t v = points.size();
    lp::Problem prob(k + 1, v);
    for (std::size_t j = 0; j < v; ++j) {
        if (points[j].d.size() != k) {
            throw ParameterError("hull test: dimension mismatch");
        }
        for (std::size_t i = 0; i < k; ++i) {
            prob.at(i, j) = points[j].d[i];
        }
        prob.at(k, j) = 1.0;
    }
    for (std::size_t i = 0; i < k; ++i) {
        prob.b[i] = p.d[i];
    }
    prob.b[k] = 1.0;
    lp::Options opt;
    opt.tolerance = tolerance;
    return lp::solve(prob, opt).status == lp::Status::Optimal;
}

int FrameRealization::user_of_slot(int t) const {
    int edge = 0;
    for (std::size_t u = 0; u < slots.size(); ++u) {
        edge += slots[u];
        if (t < edge) {
            return static_cast<int>(u);
        }
    }
    return -1;
}

double Schedule::total() const {
    return std::accumulate(fractions.begin(), fractions.end(), 0.0);
}

FrameRealization realize_frame(const std::vector<double>& fractions, int length) {
    if (length < 1) {
        throw ParameterError("frame length must be >= 1");
    }
    FrameRealization fr{length, std::vector<int>(fractions.size(), 0)};
    std::vector<double> remainder(fractions.size());
    double exact_total = 0.0;
    int assigned = 0;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const double exact = fractions[i] * length;
        exact_total += exact;
        fr.slots[i] = static_cast<int>(std::floor(exact));
        remainder[i] = exact - fr.slots[i];
        assigned += fr.slots[i];
    }
    const int target = std::min(length, static_cast<int>(std::llround(exact_total)));
    std::vector<std::size_t> order(fractions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return remainder[x] > remainder[y]; });
    for (std::size_t k = 0; assigned < target && k < order.size(); ++k) {
        ++fr.slots[order[k]];
        ++assigned;
    }
    // Rounding the total up can only overshoot if floors already exceeded the
    // frame, which Sum(fractions) <= 1 rules out.
    return fr;
}

Schedule time_sharing_schedule(const BcConfig& cfg, const DofPoint& p, int frame) {
    const int k = cfg.users();
    if (static_cast<int>(p.d.size()) != k) {
        throw ParameterError("point dimension does not match the number of users");
    }
    Schedule s;
    s.fractions.resize(static_cast<std::size_t>(k));
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        const double d = p.d[static_cast<std::size_t>(i)];
        if (d < 0) {
            throw InfeasiblePointError("negative DoF for user " + std::to_string(i + 1),
                                       user_label(i) + " >= 0", -d);
        }
        s.fractions[static_cast<std::size_t>(i)] = d / cfg.rank(i);
        total += s.fractions[static_cast<std::size_t>(i)];
    }
    if (total > 1.0 + 1e-12) {
        const std::string label = bc_dof_region(cfg).constraints.front().label;
        std::ostringstream os;
        os << "point violates " << label << " by " << total - 1.0;
        throw InfeasiblePointError(os.str(), label, total - 1.0);
    }
    if (frame > 0) {
        s.frame = realize_frame(s.fractions, frame);
    }
    return s;
}

Relabeling relabel_ic2(const IcConfig& cfg) {
    if (cfg.users() != 2) {
        throw ConfigError("relabeling is defined for two users");
    }
    if (cfg.N[0] <= cfg.N[1]) {
        return {cfg, {1, 2}, false};
    }
    return {IcConfig({cfg.M[1], cfg.M[0]}, {cfg.N[1], cfg.N[0]}), {2, 1}, true};
}

void write_region(std::ostream& out, const DofRegion& region) {
    out << "dim " << region.dim << '\n';
    for (const Constraint& c : region.constraints) {
        for (const Rational& v : c.a) {
            out << to_string(v) << ' ';
        }
        out << "<= " << to_string(c.b) << '\n';
    }
}

DofRegion read_region(std::istream& in) {
    std::string line;
    DofRegion region;
    bool have_dim = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream row(line);
        if (!have_dim) {
            std::string tag;
            if (!(row >> tag >> region.dim) || tag != "dim" || region.dim < 1) {
                throw FormatError("region: first line must be 'dim K'");
            }
            have_dim = true;
            continue;
        }
        Constraint c;
        std::string tok;
        while (row >> tok && tok != "<=") {
            c.a.push_back(parse_rational(tok));
        }
        if (tok != "<=" || !(row >> tok) || static_cast<int>(c.a.size()) != region.dim) {
            throw FormatError("region: malformed constraint '" + line + "'");
        }
        c.b = parse_rational(tok);
        c.label = weighted_label(c.a, c.b);
        region.constraints.push_back(std::move(c));
    }
    if (!have_dim) {
        throw FormatError("region: empty input");
    }
    return region;
}

void write_vertices_csv(std::ostream& out, const std::vector<DofPoint>& verts) {
    if (verts.empty()) {
        return;
    }
    const std::size_t k = verts.front().d.size();
    for (std::size_t i = 0; i < k; ++i) {
        out << (i ? "," : "") << "d" << i + 1;
    }
    out << '\n';
    for (const DofPoint& v : verts) {
        for (std::size_t i = 0; i < k; ++i) {
            out << (i ? "," : "") << v.d[i];
        }
        out << '\n';
    }
}

} // namespace nocsit::region
