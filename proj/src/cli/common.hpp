#pragma once

#include "nocsit/capacity_mc.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace nocsit::cli {

// Flags shared by the numeric subcommands.
struct CommonFlags {
    std::uint64_t seed = 7;
    std::size_t samples = capacity::kDefaultSamples;
    std::string output;
    bool bits = false;

    capacity::Units units() const { return bits ? capacity::Units::Bits : capacity::Units::Nats; }
};

struct Context {
    std::ostream& out;
    std::ostream& err;
    CommonFlags common;
    // The chosen leaf subcommand stores its action here; run() invokes it
    // after parsing so errors map onto exit codes in one place.
    std::function<int()> action;
};

void add_common(CLI::App& app, CommonFlags& flags, bool with_seed, bool with_samples);

/// Writes to --output when set, otherwise to ctx.out.
class OutputSink {
public:
    explicit OutputSink(const Context& ctx);
    std::ostream& stream() { return file_ ? *file_ : out_; }

private:
    std::ostream& out_;
    std::unique_ptr<std::ofstream> file_;
};

std::vector<int> parse_int_list(const std::string& text, const char* what);
std::vector<double> parse_double_list(const std::string& text, const char* what);
/// `lo:hi:count` (log spaced) or a single value.
std::vector<double> parse_power_grid(const std::string& text);

/// Shortest decimal that round-trips.
std::string num(double x);

std::string join(const std::vector<int>& v);
std::string join(const std::vector<double>& v);

void register_lemma(CLI::App& app, Context& ctx);
void register_region(CLI::App& app, Context& ctx);
void register_capacity(CLI::App& app, Context& ctx);
void register_simulate(CLI::App& app, Context& ctx);
void register_slope(CLI::App& app, Context& ctx);

} // namespace nocsit::cli
