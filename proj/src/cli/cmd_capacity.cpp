#include "common.hpp"

#include "nocsit/capacity_mc.hpp"
#include "nocsit/cli.hpp"
#include "nocsit/errors.hpp"

#include <iomanip>
#include <memory>

namespace nocsit::cli {

namespace {

struct CapacityArgs {
    int M = 0;
    std::string N;
    std::string P;
    std::string P_grid;
    std::string q;
    double ks_coefficient = 1.63;
    int alternatives = 20;
    double probe_power = 10.0;
};

std::vector<double> powers(const CapacityArgs& a) {
    if (a.P.empty() == a.P_grid.empty()) {
        throw ParameterError("give exactly one of --P and --P-grid");
    }
    return a.P.empty() ? parse_power_grid(a.P_grid) : parse_double_list(a.P, "power");
}

double single_power(const CapacityArgs& a) {
    const auto p = powers(a);
    if (p.size() != 1) {
        throw ParameterError("this subcommand takes a single power");
    }
    return p[0];
}

int do_ergodic(Context& ctx, const CapacityArgs& a) {
    const auto N = parse_int_list(a.N, "N");
    if (N.size() != 1) {
        throw ParameterError("ergodic takes a single --N");
    }
    const auto grid = powers(a);
    const auto u = ctx.common.units();
    OutputSink sink(ctx);
    auto& os = sink.stream();
    os << std::setprecision(17);
    os << "# capacity ergodic M=" << a.M << " N=" << N[0] << " P=" << join(grid) << " samples=" << ctx.common.samples
       << " seed=" << ctx.common.seed << " units=" << capacity::units_name(u) << "\n";
    os << "P,mean_" << capacity::units_name(u) << ",stderr,n_samples,seed\n";
    for (double p : grid) {
        const auto est =
            capacity::ergodic_capacity(a.M, N[0], capacity::PowerLevel(p), ctx.common.samples, ctx.common.seed);
        os << p << ',' << capacity::in_units(est.mean, u) << ',' << capacity::in_units(est.std_error, u) << ','
           << est.n_samples << ',' << est.seed << "\n";
    }
    return kSuccess;
}

int do_outer(Context& ctx, const CapacityArgs& a) {
    const region::BcConfig cfg(a.M, parse_int_list(a.N, "N"));
    const double p = single_power(a);
    const auto reg = capacity::bc_outer_region(cfg, capacity::PowerLevel(p), ctx.common.samples, ctx.common.seed);
    OutputSink sink(ctx);
    auto& os = sink.stream();
    os << "# capacity outer M=" << a.M << " N=" << a.N << " P=" << num(p)
       << " samples=" << ctx.common.samples << " seed=" << ctx.common.seed << "\n";
    capacity::write_rate_region(os, reg, ctx.common.units());
    return kSuccess;
}

capacity::EigenDistSpec parse_law(const std::string& text, std::size_t samples, std::uint64_t seed) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? std::string() : text.substr(colon + 1);
    if (kind == "degenerate" && !rest.empty()) {
        return capacity::EigenDistSpec::degenerate(parse_double_list(rest, "lambda").at(0));
    }
    if (kind == "empirical" && !rest.empty()) {
        const auto shape = parse_int_list(rest, "shape");
        if (shape.size() != 2) {
            throw ParameterError("empirical law needs empirical:M,N");
        }
        return capacity::eigen_samples(shape[0], shape[1], samples, seed);
    }
    throw ParameterError("--q must be degenerate:<lambda> or empirical:<M>,<N>, got '" + text + "'");
}

int do_theorem2(Context& ctx, const CapacityArgs& a) {
    const auto q = parse_law(a.q, ctx.common.samples, ctx.common.seed);
    const double p = single_power(a);
    const auto u = ctx.common.units();
    OutputSink sink(ctx);
    auto& os = sink.stream();
    os << std::setprecision(17);
    os << "# capacity theorem2 q=" << a.q << " M=" << a.M << " P=" << num(p);
    if (std::holds_alternative<capacity::EigenDistSpec::Empirical>(q.law)) {
        os << " samples=" << ctx.common.samples << " seed=" << ctx.common.seed;
    }
    os << " units=" << capacity::units_name(u) << "\n";
    if (a.N.empty()) {
        const auto b = capacity::theorem2_bound(q, a.M, capacity::PowerLevel(p));
        os << "bound_" << capacity::units_name(u) << ' ' << capacity::in_units(b.value, u) << "\n";
        os << "stderr " << capacity::in_units(b.std_error, u) << "\n";
        return kSuccess;
    }
    const region::BcConfig cfg(a.M, parse_int_list(a.N, "N"));
    capacity::write_rate_region(os, capacity::theorem2_region(cfg, q, capacity::PowerLevel(p)), u);
    return kSuccess;
}

int do_theta(Context& ctx, const CapacityArgs& a) {
    capacity::ThetaOptions opt;
    opt.ks_coefficient = a.ks_coefficient;
    opt.covariance_alternatives = a.alternatives;
    opt.probe_power = a.probe_power;
    const auto N = parse_int_list(a.N, "N");
    const auto report = capacity::theta_class_report(a.M, N, ctx.common.samples, ctx.common.seed, opt);
    OutputSink sink(ctx);
    auto& os = sink.stream();
    os << std::setprecision(17);
    os << "# capacity theta M=" << a.M << " N=" << a.N << " samples=" << ctx.common.samples
       << " seed=" << ctx.common.seed << " ks_coefficient=" << num(a.ks_coefficient)
       << " alternatives=" << a.alternatives << " probe_power=" << num(a.probe_power) << "\n";
    os << "ks,user_a,user_b,statistic,critical,p_value,same_law\n";
    for (const auto& pr : report.pairs) {
        os << "ks," << pr.user_a << ',' << pr.user_b << ',' << pr.ks.statistic << ',' << pr.critical << ','
           << pr.ks.p_value << ',' << (pr.same_law ? 1 : 0) << "\n";
    }
    os << "probe,user,alternative,mean_gain_nats,stderr,isotropic_not_beaten\n";
    for (const auto& pr : report.probes) {
        os << "probe," << pr.user << ',' << pr.alternative << ',' << pr.mean_gain << ',' << pr.std_error << ','
           << (pr.isotropic_not_beaten ? 1 : 0) << "\n";
    }
    os << "# all_same_law " << (report.all_same_law ? 1 : 0) << "\n";
    os << "# isotropic_optimal " << (report.isotropic_optimal ? 1 : 0) << "\n";
    return kSuccess;
}

} // namespace

void register_capacity(CLI::App& app, Context& ctx) {
    auto args = std::make_shared<CapacityArgs>();
    auto* cap = app.add_subcommand("capacity", "Monte Carlo capacities and rate bounds");
    cap->require_subcommand(1);

    auto* erg = cap->add_subcommand("ergodic", "Ergodic capacity of an M x N Rayleigh link (CSV)");
    erg->add_option("--M", args->M, "Transmit antennas")->required();
    erg->add_option("--N", args->N, "Receive antennas")->required();
    erg->add_option("--P", args->P, "Power, or comma-separated powers");
    erg->add_option("--P-grid", args->P_grid, "Log-spaced grid lo:hi:count");
    add_common(*erg, ctx.common, true, true);
    erg->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_ergodic(ctx, *args); }; });

    auto* outer = cap->add_subcommand("outer", "Broadcast outer rate region (requires M >= N1 >= ... >= NK)");
    outer->add_option("--M", args->M, "Transmit antennas")->required();
    outer->add_option("--N", args->N, "Receive antennas per user")->required();
    outer->add_option("--P", args->P, "Power")->required();
    add_common(*outer, ctx.common, true, true);
    outer->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_outer(ctx, *args); }; });

    auto* t2 = cap->add_subcommand("theorem2", "Weighted-sum bound for a common eigenvalue law");
    t2->add_option("--q", args->q, "degenerate:<lambda> or empirical:<M>,<N>")->required();
    t2->add_option("--M", args->M, "Transmit antennas")->required();
    t2->add_option("--N", args->N, "Receive antennas per user; prints the region instead of the bound");
    t2->add_option("--P", args->P, "Power")->required();
    add_common(*t2, ctx.common, true, true);
    t2->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_theorem2(ctx, *args); }; });

    auto* theta = cap->add_subcommand("theta", "Equal-law class checks: pairwise KS and isotropy probe");
    theta->add_option("--M", args->M, "Transmit antennas")->required();
    theta->add_option("--N", args->N, "Receive antennas per user, nonincreasing, each <= M")->required();
    theta->add_option("--ks-coefficient", args->ks_coefficient, "KS critical coefficient c in c*sqrt((n1+n2)/(n1 n2))")
        ->capture_default_str();
    theta->add_option("--alternatives", args->alternatives, "Random covariances per user")->capture_default_str();
    theta->add_option("--probe-power", args->probe_power, "Power used by the covariance probe")
        ->capture_default_str();
    add_common(*theta, ctx.common, true, true);
    theta->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_theta(ctx, *args); }; });
}

} // namespace nocsit::cli
