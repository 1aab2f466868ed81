#include "nocsit/cli.hpp"

#include "common.hpp"
#include "nocsit/errors.hpp"

#include <array>
#include <charconv>
#include <sstream>

namespace nocsit::cli {

void add_common(CLI::App& app, CommonFlags& flags, bool with_seed, bool with_samples) {
    if (with_seed) {
        app.add_option("--seed", flags.seed, "RNG seed")->capture_default_str();
    }
    if (with_samples) {
        app.add_option("--samples", flags.samples, "Monte Carlo samples (or slots) per point")
            ->capture_default_str();
    }
    app.add_option("--output,-o", flags.output, "Write results to this file instead of stdout");
    app.add_flag("--bits", flags.bits, "Report rates in bits instead of nats");
}

OutputSink::OutputSink(const Context& ctx) : out_(ctx.out) {
    if (!ctx.common.output.empty()) {
        file_ = std::make_unique<std::ofstream>(ctx.common.output);
        if (!*file_) {
            throw ParameterError("cannot open output file '" + ctx.common.output + "'");
        }
    }
}

namespace {

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, const char* what, Parse parse) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(parse(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw ParameterError(std::string("cannot parse ") + what + " list '" + text + "'");
        }
    }
    if (out.empty()) {
        throw ParameterError(std::string("empty ") + what + " list");
    }
    return out;
}

} // namespace

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    return parse_list<int>(text, what, [](const std::string& s, std::size_t* used) { return std::stoi(s, used); });
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    return parse_list<double>(text, what, [](const std::string& s, std::size_t* used) { return std::stod(s, used); });
}

std::vector<double> parse_power_grid(const std::string& text) {
    const auto first = text.find(':');
    if (first == std::string::npos) {
        return parse_double_list(text, "power");
    }
    const auto second = text.find(':', first + 1);
    if (second == std::string::npos) {
        throw ParameterError("power grid must read lo:hi:count");
    }
    const double lo = parse_double_list(text.substr(0, first), "power").at(0);
    const double hi = parse_double_list(text.substr(first + 1, second - first - 1), "power").at(0);
    const int count = parse_int_list(text.substr(second + 1), "count").at(0);
    return capacity::log_grid(lo, hi, count);
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + std::to_string(v[i]);
    }
    return s;
}

std::string num(double x) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + num(v[i]);
    }
    return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"nocsit: certificates, DoF regions and Monte Carlo checks for no-CSIT MIMO networks"};
    app.set_config("--config", "", "INI config file with one [command.subcommand] section per leaf; flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    Context ctx{out, err, {}, {}};
    register_lemma(app, ctx);
    register_region(app, ctx);
    register_capacity(app, ctx);
    register_simulate(app, ctx);
    register_slope(app, ctx);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    if (!ctx.action) {
        err << "usage error: missing subcommand action\n" << app.help();
        return kUsage;
    }
    try {
        return ctx.action();
    } catch (const MathematicalFailure& e) {
        err << "mathematical failure: " << e.what() << "\n";
        return kMathematical;
    } catch (const InternalConsistencyError& e) {
        err << "internal consistency failure: " << e.what() << "\n";
        return kMathematical;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kMathematical;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

} // namespace nocsit::cli
