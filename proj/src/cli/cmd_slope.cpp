#include "common.hpp"

#include "nocsit/capacity_mc.hpp"
#include "nocsit/cli.hpp"
#include "nocsit/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

namespace nocsit::cli {

namespace {

struct SlopeArgs {
    std::string input;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

struct Series {
    int r = 1;
    std::vector<capacity::RatePoint> points;
};

double number(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) {
            return v;
        }
    } catch (const std::logic_error&) {
    }
    throw FormatError("line " + std::to_string(line_no) + ": '" + s + "' is not a number");
}

int do_slope(Context& ctx, const SlopeArgs& a) {
    std::ifstream in(a.input);
    if (!in) {
        throw ParameterError("cannot open sweep '" + a.input + "'");
    }
    std::ostringstream echo;
    std::string line;
    std::vector<std::string> header;
    std::map<std::pair<std::string, int>, Series> series;
    std::size_t line_no = 0;
    double to_nats = 1.0;
    int col_p = -1, col_mean = -1, col_se = -1, col_scheme = -1, col_user = -1, col_r = -1;
    while (std::getline(in, line)) {
        ++line_no;
        echo << line << "\n";
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto cells = split(line);
        if (header.empty()) {
            header = cells;
            for (int c = 0; c < static_cast<int>(header.size()); ++c) {
                const auto& h = header[static_cast<std::size_t>(c)];
                if (h == "P") col_p = c;
                if (h == "mean_nats") col_mean = c;
                if (h == "mean_bits") col_mean = c, to_nats = std::numbers::ln2;
                if (h == "stderr") col_se = c;
                if (h == "scheme") col_scheme = c;
                if (h == "user") col_user = c;
                if (h == "r") col_r = c;
            }
            if (col_p < 0 || col_mean < 0) {
                throw FormatError("sweep header needs P and mean_nats or mean_bits columns");
            }
            continue;
        }
        if (cells.size() != header.size()) {
            throw FormatError("line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                              " cells, header has " + std::to_string(header.size()));
        }
        auto at = [&](int c) { return cells[static_cast<std::size_t>(c)]; };
        const std::string scheme = col_scheme >= 0 ? at(col_scheme) : std::string("capacity");
        const int user = col_user >= 0 ? static_cast<int>(number(at(col_user), line_no)) : 1;
        auto& s = series[{scheme, user}];
        s.r = col_r >= 0 ? static_cast<int>(number(at(col_r), line_no)) : 1;
        s.points.push_back({number(at(col_p), line_no), number(at(col_mean), line_no) * to_nats,
                            col_se >= 0 ? number(at(col_se), line_no) * to_nats : 0.0});
    }
    if (series.empty()) {
        throw FormatError("sweep '" + a.input + "' has no data rows");
    }

    OutputSink sink(ctx);
    auto& os = sink.stream();
    os << echo.str() << std::setprecision(17);
    struct Sum {
        double value = 0.0;
        double var = 0.0;
    };
    std::map<std::string, Sum> sums;
    for (const auto& [key, s] : series) {
        const auto fit = capacity::dof_slope(s.points);
        os << "# slope scheme=" << key.first << " user=" << key.second << " r=" << s.r << " slope=" << fit.slope
           << " stderr=" << fit.slope_stderr << " r_squared=" << fit.r_squared << "\n";
        auto& sum = sums[key.first];
        sum.value += fit.slope / s.r;
        sum.var += (fit.slope_stderr / s.r) * (fit.slope_stderr / s.r);
    }
    for (const auto& [scheme, sum] : sums) {
        os << "# sum_slope_over_r scheme=" << scheme << " value=" << sum.value << " stderr=" << std::sqrt(sum.var)
           << "\n";
    }
    return kSuccess;
}

} // namespace

void register_slope(CLI::App& app, Context& ctx) {
    auto args = std::make_shared<SlopeArgs>();
    auto* slope = app.add_subcommand("slope", "Regress DoF slopes from a sweep CSV and append them");
    slope->add_option("input,--input", args->input, "Sweep CSV from `capacity ergodic` or `simulate`")->required();
    add_common(*slope, ctx.common, false, false);
    slope->callback([&ctx, args] { ctx.action = [&ctx, args] { return do_slope(ctx, *args); }; });
}

} // namespace nocsit::cli
