#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "unsharp/experiment.hpp"
#include "unsharp/protocol.hpp"

namespace unsharp::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitSingular = 3,
    kExitInfeasible = 4,
    kExitIo = 5,
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct RunConfig {
    std::uint64_t seed = 1;
    std::uint64_t shots = kDefaultShots;
    double visibility = 1.0;
    double refractive_index = kDefaultRefractiveIndex;
    std::size_t grid = 201;
    std::string out;  // empty: standard output
    OutputFormat format = OutputFormat::csv;
    unsigned workers = 1;
};

struct SweepRow {
    double w_a_plus = 0.0;
    double delta_a = 0.0;
    double delta_b = 0.0;
    double c_opt = 0.0;
    double min_product = 0.0;
    double max_product = 0.0;  // +inf where c_opt is 0 or 1
    double sharp_product = 0.0;
};

/// 12 significant digits, locale independent; infinities print as "inf".
std::string format_number(double v);

/// Rows on [0.5, 1], or [0, 1] with values mirrored from 1 - w when full_range.
std::vector<SweepRow> sweep_rows(std::size_t grid, bool full_range = false);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool full_range = false);
void write_sweep_json(std::ostream& os, const std::vector<SweepRow>& rows, bool full_range = false);

struct StateArgs {
    double w_a_plus = 0.5;
    Sign sign = Sign::plus;
    std::optional<double> c;  // defaults to the optimal c
    std::size_t scan_grid = 1000;
};

void cmd_state(const StateArgs& args, std::ostream& out, std::ostream& err);

void cmd_sweep(const RunConfig& cfg, bool full_range, std::ostream& out);

void cmd_calibrate(int plate_count, const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct McArgs {
    std::optional<int> plates;
    int root = 1;
    std::optional<double> w_a_plus;
    std::optional<double> c;
    Sign sign = Sign::plus;
};

/// One simulated data point, ready to overplot on the sweep curves.
struct McPoint {
    std::string setting;
    double w_a_plus = 0.0;
    double c = 0.0;
    double measured_product = 0.0;
    double standard_error = 0.0;
    double min_product = 0.0;
    double max_product = 0.0;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    double visibility = 1.0;
    bool degenerate = false;
};

McPoint cmd_mc(const McArgs& args, const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Appends to `path`, writing the CSV header only when the file is new or empty.
void append_mc_point(const std::string& path, OutputFormat format, const McPoint& point);

int exit_code_for(const std::exception& e);

/// Parses argv, dispatches, and maps failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace unsharp::cli
