#include "common.hpp"

#include "nocsit/achievability_sim.hpp"
#include "nocsit/cli.hpp"
#include "nocsit/errors.hpp"

#include <algorithm>
#include <iomanip>
#include <memory>

namespace nocsit::cli {

namespace {

struct SimulateArgs {
    std::string M;
    std::string N;
    std::string alpha;
    int frame = 0;
    std::string P;
    std::string P_grid;
    std::string grouping = "round-robin";
};

std::vector<double> powers(const SimulateArgs& a) {
    if (a.P.empty() == a.P_grid.empty()) {
        throw ParameterError("give exactly one of --P and --P-grid");
    }
    return a.P.empty() ? parse_power_grid(a.P_grid) : parse_double_list(a.P, "power");
}

void write_rows(std::ostream& os, const achievability::SimResult& res, const std::vector<int>& r,
                capacity::Units u) {
    for (std::size_t i = 0; i < res.rates.size(); ++i) {
        os << res.P << ',' << capacity::in_units(res.rates[i].mean, u) << ','
           << capacity::in_units(res.rates[i].std_error, u) << ',' << res.n_slots << ',' << res.seed << ','
           << res.scheme << ',' << (i + 1) << ',' << r[i] << "\n";
    }
}

void write_header(std::ostream& os, capacity::Units u) {
    os << "P,mean_" << capacity::units_name(u) << ",stderr,n_samples,seed,scheme,user,r\n";
}

int do_bc(Context& ctx, const SimulateArgs& a) {
    const auto M = parse_int_list(a.M, "M");
    if (M.size() != 1) {
        throw ParameterError("broadcast channel takes a single --M");
    }
    const region::BcConfig cfg(M[0], parse_int_list(a.N, "N"));
    region::Schedule sched{parse_double_list(a.alpha, "alpha"), std::nullopt};
    if (a.frame > 0) {
        sched.frame = region::realize_frame(sched.fractions, a.frame);
    }
    const auto grid = powers(a);
    std::vector<int> r;
    for (int i = 0; i < cfg.users(); ++i) {
        r.push_back(cfg.rank(i));
    }
    std::vector<achievability::SimResult> results;
    for (double p : grid) {
        results.push_back(achievability::simulate_bc_time_sharing(cfg, sched, capacity::PowerLevel(p),
                                                                  ctx.common.samples, ctx.common.seed));
    }
    const auto u = ctx.common.units();
    OutputSink sink(ctx);
    auto& os = sink.stream();
    os << std::setprecision(17);
    os << "# simulate bc M=" << cfg.M << " N=" << join(cfg.N) << " alpha=" << join(sched.fractions)
       << " frame=" << a.frame << " P=" << join(grid) << " slots=" << ctx.common.samples
       << " seed=" << ctx.common.seed << " units=" << capacity::units_name(u) << "\n";
    write_header(os, u);
    for (const auto& res : results) {
        write_rows(os, res, r, u);
    }
    return kSuccess;
}

int do_ic(Context& ctx, const SimulateArgs& a) {
    const region::IcConfig cfg(parse_int_list(a.M, "M"), parse_int_list(a.N, "N"));
    achievability::Grouping grouping;
    if (a.grouping == "round-robin") {
        grouping = achievability::Grouping::RoundRobin;
    } else if (a.grouping == "cyclic") {
        grouping = achievability::Grouping::CyclicWindows;
    } else {
        throw ParameterError("--grouping must be round-robin or cyclic");
    }
    const auto grid = powers(a);
    std::vector<int> r;
    for (int n : cfg.N) {
        r.push_back(std::min(cfg.total_transmit(), n));
    }
    std::vector<achievability::SimResult> results;
    double leakage = 0.0;
    for (double p : grid) {
        results.push_back(achievability::simulate_ic_zero_forcing(cfg, capacity::PowerLevel(p), ctx.common.samples,
                                                                  ctx.common.seed, grouping));
        leakage = std::max(leakage, results.back().max_leakage_ratio);
    }
    const auto u = ctx.common.units();
    OutputSink sink(ctx);
    auto& os = sink.stream();
    os << std::setprecision(17);
    os << "# simulate ic M=" << join(cfg.M) << " N=" << join(cfg.N) << " grouping=" << a.grouping
       << " P=" << join(grid) << " slots=" << ctx.common.samples << " seed=" << ctx.common.seed
       << " units=" << capacity::units_name(u) << "\n";
    write_header(os, u);
    for (const auto& res : results) {
        write_rows(os, res, r, u);
    }
    os << "# max_leakage_ratio " << leakage << "\n";
    return kSuccess;
}

} // namespace

void register_simulate(CLI::App& app, Context& ctx) {
    auto args = std::make_shared<SimulateArgs>();
    auto* sim = app.add_subcommand("simulate", "Slot-level simulation of the achievable schemes (CSV)");
    sim->require_subcommand(1);

    auto* bc = sim->add_subcommand("bc", "Broadcast time sharing");
    bc->add_option("--M", args->M, "Transmit antennas")->required();
    bc->add_option("--N", args->N, "Receive antennas per user")->required();
    bc->add_option("--alpha", args->alpha, "Time fractions per user, sum <= 1")->required();
    bc->add_option("--frame", args->frame, "Repeat an integer frame of this length (0: one block per user)");
    bc->add_option("--P", args->P, "Power, or comma-separated powers");
    bc->add_option("--P-grid", args->P_grid, "Log-spaced grid lo:hi:count");
    add_common(*bc, ctx.common, true, true);
    bc->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_bc(ctx, *args); }; });

    auto* ic = sim->add_subcommand("ic", "Interference channel receive zero-forcing with time sharing");
    ic->add_option("--M", args->M, "Transmit antennas, comma separated")->required();
    ic->add_option("--N", args->N, "Receive antennas, comma separated")->required();
    ic->add_option("--P", args->P, "Power, or comma-separated powers");
    ic->add_option("--P-grid", args->P_grid, "Log-spaced grid lo:hi:count");
    ic->add_option("--grouping", args->grouping, "round-robin or cyclic")->capture_default_str();
    add_common(*ic, ctx.common, true, true);
    ic->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_ic(ctx, *args); }; });
}

} // namespace nocsit::cli
