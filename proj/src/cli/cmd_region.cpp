#include "common.hpp"

#include "nocsit/cli.hpp"
#include "nocsit/errors.hpp"
#include "nocsit/region_geometry.hpp"

#include <iomanip>
#include <memory>

namespace nocsit::cli {

namespace {

enum class Kind { Bc, Ic2, Ick };

struct RegionArgs {
    std::string M;
    std::string N;
    bool vertices = false;
    std::string contains;
    std::string schedule;
    int frame = 0;
};

int query(Context& ctx, const region::DofRegion& reg, const RegionArgs& a, const std::vector<int>& perm) {
    OutputSink sink(ctx);
    auto& os = sink.stream();
    if (!a.contains.empty()) {
        auto d = parse_double_list(a.contains, "point");
        if (static_cast<int>(d.size()) != reg.dim) {
            throw ParameterError("point has " + std::to_string(d.size()) + " coordinates, region has " +
                                 std::to_string(reg.dim));
        }
        region::DofPoint p{std::vector<double>(d.size())};
        for (std::size_t k = 0; k < d.size(); ++k) {
            p.d[k] = d[static_cast<std::size_t>(perm[k] - 1)];
        }
        const bool inside = region::contains(reg, p);
        os << "point " << join(d) << (inside ? " inside" : " outside") << "\n";
        if (!inside) {
            for (const auto& c : reg.constraints) {
                const double excess = c.lhs(p) - to_double(c.b);
                if (excess > region::kMembershipSlack) {
                    os << "violates " << c.label << " by " << std::setprecision(17) << excess << "\n";
                }
            }
            for (std::size_t k = 0; k < p.d.size(); ++k) {
                if (p.d[k] < -region::kMembershipSlack) {
                    os << "violates d" << (k + 1) << " >= 0\n";
                }
            }
        }
        return inside ? kSuccess : kNegativeResult;
    }
    if (a.vertices) {
        region::write_vertices_csv(os, region::vertices(reg));
        return kSuccess;
    }
    region::write_region(os, reg);
    return kSuccess;
}

std::vector<int> identity(int k) {
    std::vector<int> p(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        p[static_cast<std::size_t>(i)] = i + 1;
    }
    return p;
}

int run_bc(Context& ctx, const RegionArgs& a) {
    const auto M = parse_int_list(a.M, "M");
    if (M.size() != 1) {
        throw ParameterError("broadcast channel takes a single --M");
    }
    const region::BcConfig cfg(M[0], parse_int_list(a.N, "N"));
    const auto reg = region::bc_dof_region(cfg);
    if (!a.schedule.empty()) {
        const region::DofPoint p{parse_double_list(a.schedule, "point")};
        const auto sched = region::time_sharing_schedule(cfg, p, a.frame);
        OutputSink sink(ctx);
        auto& os = sink.stream();
        os << std::setprecision(17) << "user,fraction,slots\n";
        for (std::size_t i = 0; i < sched.fractions.size(); ++i) {
            os << (i + 1) << ',' << sched.fractions[i] << ','
               << (sched.frame ? std::to_string(sched.frame->slots[i]) : std::string("-")) << "\n";
        }
        if (sched.frame) {
            os << "# frame length " << sched.frame->length << "\n";
        }
        return kSuccess;
    }
    return query(ctx, reg, a, identity(cfg.users()));
}

int run_ic(Context& ctx, const RegionArgs& a, Kind kind) {
    region::IcConfig cfg(parse_int_list(a.M, "M"), parse_int_list(a.N, "N"));
    std::vector<int> perm = identity(cfg.users());
    if (kind == Kind::Ic2) {
        if (cfg.users() != 2) {
            throw ParameterError("ic2 needs exactly two users");
        }
        const auto rl = region::relabel_ic2(cfg);
        if (rl.swapped) {
            ctx.out << "# relabeled users so that N1 <= N2: new user 1 = original user " << rl.permutation[0]
                    << ", new user 2 = original user " << rl.permutation[1] << "\n";
        }
        perm = {rl.permutation[0], rl.permutation[1]};
        cfg = rl.config;
    }
    const auto reg = kind == Kind::Ic2 ? region::ic2_outer_region(cfg) : region::ick_outer_region(cfg);
    if (a.contains.empty() && !a.vertices) {
        ctx.out << "# tightness: " << region::tightness_name(region::tightness_class(cfg)) << "\n";
    }
    return query(ctx, reg, a, perm);
}

void add_query(CLI::App& sub, RegionArgs& a) {
    auto* v = sub.add_flag("--vertices", a.vertices, "Print the vertex set as CSV");
    sub.add_option("--contains", a.contains, "Membership test for a comma-separated DoF point")->excludes(v);
}

} // namespace

void register_region(CLI::App& app, Context& ctx) {
    auto args = std::make_shared<RegionArgs>();
    auto* region_cmd = app.add_subcommand("region", "DoF region polytopes");
    region_cmd->require_subcommand(1);

    auto* bc = region_cmd->add_subcommand("bc", "Broadcast channel: sum_i d_i / r_i <= 1");
    bc->add_option("--M", args->M, "Transmit antennas")->required();
    bc->add_option("--N", args->N, "Receive antennas per user, comma separated")->required();
    add_query(*bc, *args);
    bc->add_option("--schedule", args->schedule, "Time-sharing schedule for a DoF point");
    bc->add_option("--frame", args->frame, "Integer frame length for --schedule (0: none)");
    add_common(*bc, ctx.common, false, false);
    bc->callback([&ctx, args] { ctx.action = [&ctx, args] { return run_bc(ctx, *args); }; });

    auto* ic2 = region_cmd->add_subcommand("ic2", "Two-user interference channel outer bound");
    ic2->add_option("--M", args->M, "Transmit antennas M1,M2")->required();
    ic2->add_option("--N", args->N, "Receive antennas N1,N2")->required();
    add_query(*ic2, *args);
    add_common(*ic2, ctx.common, false, false);
    ic2->callback([&ctx, args] { ctx.action = [&ctx, args] { return run_ic(ctx, *args, Kind::Ic2); }; });

    auto* ick = region_cmd->add_subcommand("ick", "K-user interference channel outer bound");
    ick->add_option("--M", args->M, "Transmit antennas, comma separated")->required();
    ick->add_option("--N", args->N, "Receive antennas, comma separated")->required();
    add_query(*ick, *args);
    add_common(*ick, ctx.common, false, false);
    ick->callback([&ctx, args] { ctx.action = [&ctx, args] { return run_ic(ctx, *args, Kind::Ick); }; });
}

} // namespace nocsit::cli
