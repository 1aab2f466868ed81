#include <doctest.h>

#include "nocsit/errors.hpp"
#include "nocsit/region_geometry.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

using namespace nocsit;
using namespace nocsit::region;

namespace {

// Formulas evaluated directly, independent of the constraint lists.
bool bc_oracle(const BcConfig& c, const std::vector<double>& d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 0) return false;
        s += d[i] / std::min(c.M, c.N[i]);
    }
    return s <= 1.0 + 1e-12;
}

bool ic2_oracle(const IcConfig& c, const std::vector<double>& d) {
    const double r1 = std::min(c.M[1], c.N[0]);
    const double r2 = std::min(c.M[1], c.N[1]);
    for (int i = 0; i < 2; ++i) {
        if (d[i] < 0 || d[i] > std::min(c.M[i], c.N[i]) + 1e-12) return false;
    }
    return d[0] / r1 + d[1] / r2 <= std::min(c.N[0], c.M[0] + c.M[1]) / r1 + 1e-12;
}

bool ick_oracle(const IcConfig& c, const std::vector<double>& d) {
    int mt = 0;
    for (int m : c.M) mt += m;
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 0 || d[i] > std::min(c.M[i], c.N[i]) + 1e-12) return false;
        s += d[i] / std::min(mt, c.N[i]);
    }
    return s <= 1.0 + 1e-12;
}

// Every point of a 0.25 grid over [0, hi]^K.
void for_grid(int K, double hi, const std::function<void(const std::vector<double>&)>& f) {
    const int steps = static_cast<int>(hi / 0.25) + 1;
    std::vector<int> idx(static_cast<std::size_t>(K), 0);
    while (true) {
        std::vector<double> d(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) d[k] = 0.25 * idx[k];
        f(d);
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] > steps) idx[k++] = 0;
        if (k == idx.size()) break;
    }
}

void grid_agrees(const DofRegion& reg, const std::function<bool(const std::vector<double>&)>& oracle, double hi) {
    const auto verts = vertices(reg);
    int inside = 0;
    for_grid(reg.dim, hi, [&](const std::vector<double>& d) {
        const bool in = contains(reg, DofPoint{d});
        CHECK(in == oracle(d));
        if (in) {
            ++inside;
            CHECK(in_convex_hull(verts, DofPoint{d}));
        }
    });
    CHECK(inside > 0);
}

std::vector<std::vector<double>> coords(const std::vector<DofPoint>& v) {
    std::vector<std::vector<double>> out;
    for (const auto& p : v) out.push_back(p.d);
    return out;
}

} // namespace

TEST_SUITE("region") {

TEST_CASE("broadcast region constraints") {
    const auto r = bc_dof_region(BcConfig(4, {3, 2, 1}));
    REQUIRE(r.constraints.size() == 1);
    CHECK(r.constraints[0].a == std::vector<Rational>{Rational(1) / 3, Rational(1) / 2, Rational(1)});
    CHECK(r.constraints[0].b == 1);

    const auto one = bc_dof_region(BcConfig(1, {4, 2, 7}));
    CHECK(one.constraints[0].a == std::vector<Rational>{1, 1, 1});

    const auto sym = bc_dof_region(BcConfig(2, {2, 2}));
    CHECK(sym.constraints[0].a == std::vector<Rational>{Rational(1) / 2, Rational(1) / 2});

    CHECK_THROWS_AS(BcConfig(0, {1}), ConfigError);
    CHECK_THROWS_AS(BcConfig(2, {}), ConfigError);
    CHECK_THROWS_AS(BcConfig(2, {1, 0}), ConfigError);
}

TEST_CASE("two-user interference region") {
    auto check = [](IcConfig c, std::vector<Rational> caps, std::vector<Rational> a, Rational b) {
        const auto r = ic2_outer_region(c);
        REQUIRE(r.constraints.size() == 3);
        CHECK(r.constraints[0].a == std::vector<Rational>{1, 0});
        CHECK(r.constraints[0].b == caps[0]);
        CHECK(r.constraints[1].a == std::vector<Rational>{0, 1});
        CHECK(r.constraints[1].b == caps[1]);
        // Sum constraint compared up to positive scaling.
        const auto& s = r.constraints[2];
        CHECK(s.a[0] * b == a[0] * s.b);
        CHECK(s.a[1] * b == a[1] * s.b);
    };
    check(IcConfig({2, 2}, {2, 3}), {2, 2}, {1, 1}, 2);
    check(IcConfig({1, 3}, {2, 4}), {1, 3}, {Rational(1) / 2, Rational(1) / 3}, 1);
    check(IcConfig({5, 5}, {1, 1}), {1, 1}, {1, 1}, 1);
    CHECK_THROWS_AS(ic2_outer_region(IcConfig({2, 2}, {3, 2})), PreconditionError);
    CHECK_THROWS_AS(ic2_outer_region(IcConfig({1, 1, 1}, {1, 1, 1})), ConfigError);
}

TEST_CASE("K-user interference region") {
    const auto r = ick_outer_region(IcConfig({2, 2, 2}, {6, 4, 2}));
    REQUIRE(r.constraints.size() == 4);
    for (int i = 0; i < 3; ++i) CHECK(r.constraints[static_cast<std::size_t>(i)].b == 2);
    CHECK(r.constraints[3].a == std::vector<Rational>{Rational(1) / 6, Rational(1) / 4, Rational(1) / 2});
    CHECK(r.constraints[3].b == 1);
    CHECK_FALSE(contains(r, DofPoint{{2, 2, 2}}));

    const auto u = ick_outer_region(IcConfig({1, 1}, {1, 1}));
    CHECK(u.constraints[2].a == std::vector<Rational>{1, 1});
    CHECK_THROWS_AS(IcConfig({1}, {1}), ConfigError);
}

TEST_CASE("tightness classes") {
    CHECK(tightness_class(IcConfig({3, 2}, {2, 2})) == Tightness::AllNleM);
    CHECK(tightness_class(IcConfig({2, 2, 2}, {5, 5, 5})) == Tightness::EqualNgeEqualM);
    CHECK(tightness_class(IcConfig({1, 3}, {2, 4})) == Tightness::Unknown);
    // Both conditions hold when N_i = M_i = const.
    const IcConfig both({2, 2}, {2, 2});
    CHECK(tightness_class(both) == Tightness::AllNleM);
    CHECK(satisfies(both, Tightness::EqualNgeEqualM));
}

TEST_CASE("membership examples") {
    const auto r = bc_dof_region(BcConfig(4, {3, 2, 1}));
    CHECK(contains(r, DofPoint{{0, 0, 0}}));
    CHECK(contains(r, DofPoint{{1.5, 0.5, 0.25}}));
    CHECK_FALSE(contains(r, DofPoint{{3, 0.1, 0}}));
    CHECK_FALSE(contains(r, DofPoint{{-0.1, 0, 0}}));
    CHECK_THROWS_AS(contains(r, DofPoint{{1, 1}}), ParameterError);
}

TEST_CASE("vertex sets") {
    using V = std::vector<std::vector<double>>;
    CHECK(coords(vertices(bc_dof_region(BcConfig(4, {3, 2, 1})))) == V{{0, 0, 0}, {0, 0, 1}, {0, 2, 0}, {3, 0, 0}});
    CHECK(coords(vertices(ic2_outer_region(IcConfig({2, 2}, {2, 3})))) == V{{0, 0}, {0, 2}, {2, 0}});

    const auto ick = ick_outer_region(IcConfig({2, 2, 2}, {6, 4, 2}));
    const auto v = vertices(ick);
    for (const auto& p : v) CHECK(contains(ick, p));
    const auto cv = coords(v);
    CHECK(std::find(cv.begin(), cv.end(), std::vector<double>{2, 2, 2}) == cv.end());
    // Mixed facets: d1 = 2, d2 = 2 and the sum constraint give d3 = 1/3.
    bool found = false;
    for (const auto& p : v) {
        found = found || (p.d[0] == 2 && p.d[1] == 2 && std::abs(p.d[2] - 1.0 / 3.0) < 1e-12);
    }
    CHECK(found);

    DofRegion unbounded{2, {{{1, -1}, 1, "d1 - d2 <= 1"}}};
    CHECK_FALSE(is_bounded(unbounded));
    CHECK_THROWS_AS(vertices(unbounded), StructuralError);
}

TEST_CASE("grid oracle agrees with contains for every region kind") {
    for (const auto& c : {BcConfig(4, {3, 2, 1}), BcConfig(2, {2, 1}), BcConfig(3, {1, 3, 2}), BcConfig(1, {2, 2})}) {
        grid_agrees(bc_dof_region(c), [&](const auto& d) { return bc_oracle(c, d); }, 3.5);
    }
    for (const auto& c : {IcConfig({2, 2}, {2, 3}), IcConfig({1, 3}, {2, 4}), IcConfig({5, 5}, {1, 1}),
                          IcConfig({3, 1}, {2, 2})}) {
        grid_agrees(ic2_outer_region(c), [&](const auto& d) { return ic2_oracle(c, d); }, 3.5);
        grid_agrees(ick_outer_region(c), [&](const auto& d) { return ick_oracle(c, d); }, 3.5);
    }
    for (const auto& c : {IcConfig({2, 2, 2}, {6, 4, 2}), IcConfig({1, 1, 1}, {2, 2, 2})}) {
        grid_agrees(ick_outer_region(c), [&](const auto& d) { return ick_oracle(c, d); }, 2.5);
    }
}

TEST_CASE("enlarging antenna counts never shrinks the broadcast region") {
    const BcConfig base(2, {2, 1});
    for (const auto& bigger : {BcConfig(3, {2, 1}), BcConfig(2, {3, 1}), BcConfig(2, {2, 2}), BcConfig(4, {4, 4})}) {
        const auto big = bc_dof_region(bigger);
        for (const auto& p : vertices(bc_dof_region(base))) CHECK(contains(big, p));
    }
}

TEST_CASE("two-user bound is contained in the cooperative bound") {
    for (int m1 = 1; m1 <= 3; ++m1)
        for (int m2 = 1; m2 <= 3; ++m2)
            for (int n1 = 1; n1 <= 4; ++n1)
                for (int n2 = n1; n2 <= 4; ++n2) {
                    const IcConfig c({m1, m2}, {n1, n2});
                    const auto outer = ick_outer_region(c);
                    for (const auto& p : vertices(ic2_outer_region(c))) CHECK(contains(outer, p));
                }
}

TEST_CASE("time-sharing schedules") {
    const BcConfig c(4, {3, 2, 1});
    const auto s = time_sharing_schedule(c, DofPoint{{1.5, 0.5, 0.25}}, 8);
    CHECK(s.fractions == std::vector<double>{0.5, 0.25, 0.25});
    REQUIRE(s.frame);
    CHECK(s.frame->slots == std::vector<int>{4, 2, 2});

    const auto corner = time_sharing_schedule(c, DofPoint{{0, 2, 0}}, 0);
    CHECK(corner.fractions == std::vector<double>{0, 1, 0});
    CHECK_FALSE(corner.frame);

    try {
        time_sharing_schedule(c, DofPoint{{1.5, 1, 0.5}}, 8);
        FAIL("expected an infeasible point");
    } catch (const InfeasiblePointError& e) {
        CHECK(e.excess() == doctest::Approx(0.5));
        CHECK_FALSE(e.constraint().empty());
    }

    for (int len : {1, 3, 7, 10, 97}) {
        const std::vector<double> f{0.3, 0.3, 0.3};
        const auto fr = realize_frame(f, len);
        int total = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            total += fr.slots[i];
            CHECK(std::abs(fr.slots[i] / static_cast<double>(len) - f[i]) <= 1.0 / len + 1e-12);
        }
        CHECK(total <= len);
        int served = 0;
        for (int t = 0; t < len; ++t) served += fr.user_of_slot(t) >= 0;
        CHECK(served == total);
    }
}

TEST_CASE("relabeling") {
    const auto sw = relabel_ic2(IcConfig({1, 2}, {3, 2}));
    CHECK(sw.swapped);
    CHECK(sw.permutation == std::array<int, 2>{2, 1});
    CHECK(sw.config.N == std::vector<int>{2, 3});
    CHECK(sw.config.M == std::vector<int>{2, 1});
    CHECK_FALSE(relabel_ic2(IcConfig({1, 2}, {2, 3})).swapped);
    const auto tie = relabel_ic2(IcConfig({3, 1}, {2, 2}));
    CHECK_FALSE(tie.swapped);
    CHECK(tie.permutation == std::array<int, 2>{1, 2});
}

TEST_CASE("region text format round trip") {
    const auto r = ick_outer_region(IcConfig({2, 2, 2}, {6, 4, 2}));
    std::ostringstream os;
    write_region(os, r);
    CHECK(os.str() == "dim 3\n1 0 0 <= 2\n0 1 0 <= 2\n0 0 1 <= 2\n1/6 1/4 1/2 <= 1\n");
    std::istringstream is(os.str());
    const auto back = read_region(is);
    REQUIRE(back.constraints.size() == r.constraints.size());
    for (std::size_t k = 0; k < r.constraints.size(); ++k) {
        CHECK(back.constraints[k].a == r.constraints[k].a);
        CHECK(back.constraints[k].b == r.constraints[k].b);
    }
    std::istringstream bad("dim 2\n1 <= 2\n");
    CHECK_THROWS_AS(read_region(bad), FormatError);

    std::ostringstream csv;
    write_vertices_csv(csv, vertices(bc_dof_region(BcConfig(4, {3, 2, 1}))));
    CHECK(csv.str() == "d1,d2,d3\n0,0,0\n0,0,1\n0,2,0\n3,0,0\n");
}

}
