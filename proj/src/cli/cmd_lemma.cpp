#include "common.hpp"

#include "nocsit/cli.hpp"
#include "nocsit/entropy_cone.hpp"
#include "nocsit/errors.hpp"
#include "nocsit/induction_trace.hpp"

#include <fstream>
#include <iomanip>
#include <memory>

namespace nocsit::cli {

namespace {

struct LemmaArgs {
    int n_max = 0;
    int N = 0;
    int m = 0;
    bool unconditioned = false;
    int trials = 1000;
    std::string input;
};

int do_verify(Context& ctx, const LemmaArgs& a) {
    const auto report = entropy::verify_lemma_family(a.n_max);
    OutputSink sink(ctx);
    auto& os = sink.stream();
    os << "# lemma verify n_max=" << a.n_max << "\n";
    os << "N,m,form,n,multipliers,lp_pivots,exact_resolve,replay\n";
    std::size_t pairs = 0;
    for (const auto& inst : report.instances) {
        const bool ok = entropy::certificate_is_valid(inst.certificate);
        if (!ok) {
            throw InternalConsistencyError("certificate for N=" + std::to_string(inst.N) +
                                           " m=" + std::to_string(inst.m) + " failed replay");
        }
        pairs += inst.conditioned ? 0 : 1;
        os << inst.N << ',' << inst.m << ',' << (inst.conditioned ? "conditioned" : "unconditioned") << ','
           << inst.certificate.target.vars().size() << ',' << inst.certificate.multipliers.size() << ','
           << inst.certificate.lp_pivots << ',' << (inst.certificate.exact_resolve ? 1 : 0) << ",exact\n";
    }
    os << "# certified " << report.instances.size() << " instances (" << pairs << " (N,m) pairs x 2 forms)\n";
    return kSuccess;
}

entropy::ProofCertificate certify(int N, int m, bool conditioned) {
    const auto target = entropy::sliding_window_inequality(N, m, conditioned);
    auto verdict = entropy::verify_shannon_type(target);
    if (const auto* fail = std::get_if<entropy::NotShannonProvable>(&verdict)) {
        throw MathematicalFailure("no Shannon certificate for '" + target.to_string() + "': " + fail->message);
    }
    return std::get<entropy::ProofCertificate>(std::move(verdict));
}

int do_certificate(Context& ctx, const LemmaArgs& a) {
    const auto cert = certify(a.N, a.m, !a.unconditioned);
    OutputSink sink(ctx);
    entropy::write_certificate(sink.stream(), cert);
    if (!ctx.common.output.empty()) {
        ctx.out << "wrote certificate for N=" << a.N << " m=" << a.m << " ("
                << cert.multipliers.size() << " multipliers) to " << ctx.common.output << "\n";
    }
    return kSuccess;
}

int do_trace(Context& ctx, const LemmaArgs& a) {
    const auto trace = entropy::induction_trace(a.N, a.m, !a.unconditioned);
    OutputSink sink(ctx);
    sink.stream() << entropy::render(trace);
    return kSuccess;
}

int do_mc(Context& ctx, const LemmaArgs& a) {
    const auto report = entropy::gaussian_lemma_check(a.trials, a.n_max, ctx.common.seed);
    OutputSink sink(ctx);
    auto& os = sink.stream();
    os << std::setprecision(17);
    os << "# lemma mc trials=" << a.trials << " n_max=" << a.n_max << " seed=" << ctx.common.seed << "\n";
    os << "evaluations " << report.evaluations << "\n";
    os << "min_slack " << report.min_slack << " (N=" << report.worst_N << " m=" << report.worst_m
       << (report.worst_conditioned ? " conditioned" : " unconditioned") << ")\n";
    os << "max_diagonal_deviation " << report.max_diagonal_deviation << "\n";
    const bool ok = report.min_slack >= -1e-9 && report.max_diagonal_deviation <= 1e-9;
    os << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kSuccess : kMathematical;
}

int do_replay(Context& ctx, const LemmaArgs& a) {
    std::ifstream in(a.input);
    if (!in) {
        throw ParameterError("cannot open certificate '" + a.input + "'");
    }
    const auto cert = entropy::read_certificate(in);
    ctx.out << "certificate replays exactly: " << cert.target.to_string() << " ("
            << cert.multipliers.size() << " multipliers)\n";
    return kSuccess;
}

} // namespace

void register_lemma(CLI::App& app, Context& ctx) {
    auto args = std::make_shared<LemmaArgs>();
    auto* lemma = app.add_subcommand("lemma", "Sliding-window entropy inequality: certificates and checks");
    lemma->require_subcommand(1);

    auto* verify = lemma->add_subcommand("verify", "Certify every instance with N <= n-max");
    verify->add_option("--n-max", args->n_max, "Largest N")->required();
    add_common(*verify, ctx.common, false, false);
    verify->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_verify(ctx, *args); }; });

    auto* cert = lemma->add_subcommand("certificate", "Write the certificate for one (N, m)");
    cert->add_option("--N", args->N, "Number of variables Y")->required();
    cert->add_option("--m", args->m, "Overlap deficit, 1 <= m <= N-1")->required();
    cert->add_flag("--unconditioned", args->unconditioned, "Omit the conditioning variable A");
    add_common(*cert, ctx.common, false, false);
    cert->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_certificate(ctx, *args); }; });

    auto* trace = lemma->add_subcommand("trace", "Print the unrolled induction proof");
    trace->add_option("--N", args->N, "Number of variables Y")->required();
    trace->add_option("--m", args->m, "Overlap deficit, 1 <= m <= N-1")->required();
    trace->add_flag("--unconditioned", args->unconditioned, "Omit the conditioning variable A");
    add_common(*trace, ctx.common, false, false);
    trace->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_trace(ctx, *args); }; });

    auto* mc = lemma->add_subcommand("mc", "Evaluate every instance on random Gaussian entropy vectors");
    args->n_max = 5;
    mc->add_option("--n-max", args->n_max, "Largest N; A is variable n-max+1")->capture_default_str();
    mc->add_option("--trials", args->trials, "Random covariances")->capture_default_str();
    add_common(*mc, ctx.common, true, false);
    mc->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_mc(ctx, *args); }; });

    auto* replay = lemma->add_subcommand("replay", "Parse a certificate file and replay it exactly");
    replay->add_option("--input", args->input, "Certificate file")->required();
    replay->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_replay(ctx, *args); }; });
}

} // namespace nocsit::cli
