#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "unsharp/errors.hpp"

namespace unsharp::cli {
namespace {

constexpr const char* kSymmetryNote =
    "uncertainty products are symmetric in w_a_plus about 0.5; rows cover [0.5, 1]";
constexpr const char* kMirrorNote =
    "uncertainty products are symmetric in w_a_plus about 0.5; rows below 0.5 are mirrored from 1 - w_a_plus";
constexpr const char* kSweepHeader = "w_a_plus,delta_a,delta_b,c_opt,min_product,max_product,sharp_product";
constexpr const char* kMcHeader =
    "setting,w_a_plus,c,measured_product,standard_error,min_product,max_product,shots,seed,visibility";

// Rounds to the printed precision so JSON carries the same digits as CSV.
nlohmann::ordered_json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    const std::string s = format_number(v);
    double rounded = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), rounded);
    return rounded;
}

SweepRow row_at(double w) {
    const SharpUncertainties sharp = sharp_uncertainties(make_equatorial(w));
    const MinimumProduct best = min_product(sharp.delta_a, sharp.delta_b);
    SweepRow row;
    row.w_a_plus = w;
    row.delta_a = sharp.delta_a;
    row.delta_b = sharp.delta_b;
    row.c_opt = best.c_opt;
    row.min_product = best.value;
    row.max_product = best.c_opt > 0.0 && best.c_opt < 1.0 ? max_product(best.c_opt)
                                                           : std::numeric_limits<double>::infinity();
    row.sharp_product = sharp.product();
    return row;
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode) {
    std::ofstream file(path, mode);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    return file;
}

void check_written(std::ostream& os, const std::string& path) {
    os.flush();
    if (!os) throw IoError("failed writing '" + path + "'");
}

const char* sign_text(Sign s) { return s == Sign::plus ? "+" : "-"; }

}  // namespace

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    if (v == 0.0) v = 0.0;  // drop negative zero
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::vector<SweepRow> sweep_rows(std::size_t grid, bool full_range) {
    if (grid < 2) throw UsageError("sweep grid needs at least 2 points");
    const double lo = full_range ? 0.0 : 0.5;
    std::vector<SweepRow> rows;
    rows.reserve(grid);
    for (std::size_t k = 0; k < grid; ++k) {
        const double w = k + 1 == grid ? 1.0 : lo + (1.0 - lo) * static_cast<double>(k) / static_cast<double>(grid - 1);
        SweepRow row = row_at(w < 0.5 ? 1.0 - w : w);
        row.w_a_plus = w;
        rows.push_back(row);
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool full_range) {
    os << "# " << (full_range ? kMirrorNote : kSymmetryNote) << '\n' << kSweepHeader << '\n';
    for (const SweepRow& r : rows) {
        os << format_number(r.w_a_plus) << ',' << format_number(r.delta_a) << ',' << format_number(r.delta_b) << ','
           << format_number(r.c_opt) << ',' << format_number(r.min_product) << ',' << format_number(r.max_product)
           << ',' << format_number(r.sharp_product) << '\n';
    }
}

void write_sweep_json(std::ostream& os, const std::vector<SweepRow>& rows, bool full_range) {
    nlohmann::ordered_json doc;
    doc["note"] = full_range ? kMirrorNote : kSymmetryNote;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const SweepRow& r : rows) {
        doc["rows"].push_back({{"w_a_plus", json_number(r.w_a_plus)},
                               {"delta_a", json_number(r.delta_a)},
                               {"delta_b", json_number(r.delta_b)},
                               {"c_opt", json_number(r.c_opt)},
                               {"min_product", json_number(r.min_product)},
                               {"max_product", json_number(r.max_product)},
                               {"sharp_product", json_number(r.sharp_product)}});
    }
    os << doc.dump(2) << '\n';
}

void cmd_state(const StateArgs& args, std::ostream& out, std::ostream& err) {
    const EquatorialState s = make_equatorial(args.w_a_plus, args.sign);
    const SharpUncertainties sharp = sharp_uncertainties(s);
    const MinimumProduct best = min_product(sharp.delta_a, sharp.delta_b);
    const double c = args.c.value_or(best.c_opt);
    const UncertaintyReport report = unsharp_uncertainties(s, c);
    const CScanResult scan = numeric_c_scan(s, args.scan_grid);

    out << "state     w_A+ = " << format_number(s.w_a_plus) << "  sign = " << sign_text(s.sign)
        << "  amplitudes = (" << format_number(s.amplitudes[0].real()) << ", "
        << format_number(s.amplitudes[1].real()) << ")\n";
    out << "sharp     dA = " << format_number(sharp.delta_a) << "  dB = " << format_number(sharp.delta_b)
        << "  dA*dB = " << format_number(sharp.product()) << '\n';
    out << "unsharp   c = " << format_number(c) << "  dA' = " << format_number(report.delta_a_prime)
        << "  dB' = " << format_number(report.delta_b_prime)
        << "  dA'*dB' = " << format_number(report.product_simultaneous) << '\n';
    out << "optimum   c_opt = " << format_number(best.c_opt) << "  min product = " << format_number(best.value)
        << "  max product at c = " << format_number(max_product(c)) << '\n';
    out << "scan      c = " << format_number(scan.c_best) << "  product = " << format_number(scan.product_best)
        << (scan.at_boundary ? "  (grid edge)" : "") << '\n';

    const double excess = report.product_simultaneous - best.value;
    if (std::abs(excess) <= 1e-6) {
        out << "status    at optimum\n";
    } else {
        out << "status    above optimum by " << format_number(excess) << '\n';
    }
    if (scan.at_boundary || best.c_opt < 1e-3 || best.c_opt > 1.0 - 1e-3) {
        err << "warning: the optimal c lies on the boundary of (0, 1); the minimum "
            << format_number(best.value) << " is only approached as a limit\n";
    }
}

void cmd_sweep(const RunConfig& cfg, bool full_range, std::ostream& out) {
    const std::vector<SweepRow> rows = sweep_rows(cfg.grid, full_range);
    auto emit = [&](std::ostream& os) {
        if (cfg.format == OutputFormat::json) {
            write_sweep_json(os, rows, full_range);
        } else {
            write_sweep_csv(os, rows, full_range);
        }
    };
    if (cfg.out.empty()) {
        emit(out);
        return;
    }
    std::ofstream file = open_output(cfg.out, std::ios::out | std::ios::trunc | std::ios::binary);
    emit(file);
    check_written(file, cfg.out);
}

void cmd_calibrate(int plate_count, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<CalibrationPoint> roots;
    try {
        roots = calibrate_alpha(plate_count, cfg.refractive_index);
    } catch (const CalibrationInfeasibleError& e) {
        err << e.diagnostic();
        throw;
    }
    const PolarizerConfig stack = PolarizerConfig::brewster_stack(plate_count, 0.0, cfg.refractive_index);
    out << "# N=" << plate_count << " index=" << format_number(cfg.refractive_index)
        << " t_s=" << format_number(stack.t_s) << " (alpha from vertical; add pi/2 for the horizontal reference)\n";
    out << "root,alpha,c,w_a_plus,predicted_product,minimum_product,residual\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const CalibrationPoint& p = roots[i];
        out << i + 1 << ',' << format_number(p.alpha) << ',' << format_number(p.c) << ','
            << format_number(p.w_a_plus) << ',' << format_number(p.predicted_product) << ','
            << format_number(p.minimum_product) << ',' << format_number(p.residual) << '\n';
        worst = std::max({worst, std::abs(p.residual), std::abs(p.predicted_product - p.minimum_product)});
    }
    out << "# max condition residual " << format_number(worst) << (worst < 1e-8 ? " (< 1e-8)" : " (EXCEEDS 1e-8)")
        << '\n';
    if (roots.size() != 2) {
        err << "warning: expected 2 calibration angles for N=" << plate_count << ", found " << roots.size() << '\n';
    }
}

McPoint cmd_mc(const McArgs& args, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const NoiseModel noise{cfg.visibility};
    if (cfg.shots == 0) throw UsageError("shots must be at least 1");

    McPoint point;
    SettingRun run;
    if (args.plates) {
        if (args.w_a_plus || args.c) throw UsageError("give either --plates or --w/--c, not both");
        const std::vector<CalibrationPoint> roots = calibrate_alpha(*args.plates, cfg.refractive_index);
        if (args.root < 1 || static_cast<std::size_t>(args.root) > roots.size()) {
            throw UsageError("--root must be between 1 and " + std::to_string(roots.size()));
        }
        const CalibrationPoint& setting = roots[static_cast<std::size_t>(args.root - 1)];
        run = run_setting(PolarizerConfig::brewster_stack(*args.plates, setting.alpha, cfg.refractive_index),
                          cfg.shots, cfg.seed, noise, cfg.workers);
        point.setting = "N=" + std::to_string(*args.plates) + "/root=" + std::to_string(args.root);
    } else {
        if (!args.w_a_plus || !args.c) throw UsageError("mc needs --plates, or both --w and --c");
        run = run_state(make_equatorial(*args.w_a_plus, args.sign), *args.c, cfg.shots, cfg.seed, noise, cfg.workers);
        point.setting = "explicit";
    }

    const EntangledDecomposition& d = run.prepared.decomposition;
    const SharpUncertainties sharp = sharp_uncertainties(make_equatorial(d.w_a_plus, d.sign));
    point.w_a_plus = d.w_a_plus;
    point.c = d.c;
    point.measured_product = run.measured.report.product_simultaneous;
    point.standard_error = run.measured.product_standard_error;
    point.min_product = 1.0 + sharp.product();
    point.max_product = max_product(d.c);
    point.shots = cfg.shots;
    point.seed = cfg.seed;
    point.visibility = cfg.visibility;
    point.degenerate = run.measured.degenerate;

    const auto& n = run.counts.n;
    out << "setting   " << point.setting << "  w_A+ = " << format_number(point.w_a_plus)
        << "  c = " << format_number(point.c) << '\n';
    out << "counts    (B+,M+) " << n[0] << "  (B+,M-) " << n[1] << "  (B-,M+) " << n[2] << "  (B-,M-) " << n[3]
        << "  shots " << cfg.shots << "  seed " << cfg.seed << '\n';
    out << "measured  dA' = " << format_number(run.measured.report.delta_a_prime)
        << "  dB' = " << format_number(run.measured.report.delta_b_prime)
        << "  product = " << format_number(point.measured_product) << " +- " << format_number(point.standard_error)
        << '\n';
    out << "analytic  min product = " << format_number(point.min_product)
        << "  max product = " << format_number(point.max_product);
    if (point.standard_error > 0.0) {
        out << "  deviation = " << format_number((point.measured_product - point.min_product) / point.standard_error)
            << " SE";
    }
    out << '\n';
    if (point.degenerate) err << "warning: an outcome marginal has zero counts; the estimate is degenerate\n";

    if (!cfg.out.empty()) append_mc_point(cfg.out, cfg.format, point);
    return point;
}

void append_mc_point(const std::string& path, OutputFormat format, const McPoint& p) {
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
    std::ofstream file = open_output(path, std::ios::out | std::ios::app | std::ios::binary);
    if (format == OutputFormat::json) {
        nlohmann::ordered_json line = {{"setting", p.setting},
                                       {"w_a_plus", json_number(p.w_a_plus)},
                                       {"c", json_number(p.c)},
                                       {"measured_product", json_number(p.measured_product)},
                                       {"standard_error", json_number(p.standard_error)},
                                       {"min_product", json_number(p.min_product)},
                                       {"max_product", json_number(p.max_product)},
                                       {"shots", p.shots},
                                       {"seed", p.seed},
                                       {"visibility", json_number(p.visibility)}};
        file << line.dump() << '\n';
    } else {
        if (fresh) file << kMcHeader << '\n';
        file << p.setting << ',' << format_number(p.w_a_plus) << ',' << format_number(p.c) << ','
             << format_number(p.measured_product) << ',' << format_number(p.standard_error) << ','
             << format_number(p.min_product) << ',' << format_number(p.max_product) << ',' << p.shots << ','
             << p.seed << ',' << format_number(p.visibility) << '\n';
    }
    check_written(file, path);
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const UsageError*>(&e) != nullptr) return kExitUsage;
    if (dynamic_cast<const SingularRescalingError*>(&e) != nullptr) return kExitSingular;
    if (dynamic_cast<const DegenerateBasisError*>(&e) != nullptr) return kExitSingular;
    if (dynamic_cast<const CalibrationInfeasibleError*>(&e) != nullptr) return kExitInfeasible;
    if (dynamic_cast<const EmptyEnsembleError*>(&e) != nullptr) return kExitInfeasible;
    if (dynamic_cast<const IoError*>(&e) != nullptr) return kExitIo;
    return 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simultaneous unsharp measurement of complementary qubit observables", "unsharp"};
    app.set_config("--config", "", "key = value file; command-line flags override its values");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string format = "csv";
    app.add_option("--seed", cfg.seed, "Master RNG seed")->capture_default_str();
    app.add_option("--shots", cfg.shots, "Coincidences per setting")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--visibility", cfg.visibility, "Weight of the ideal outcome distribution against uniform noise")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--index", cfg.refractive_index, "Glass refractive index of the Brewster plates")
        ->capture_default_str();
    app.add_option("--grid", cfg.grid, "Sweep grid points")->capture_default_str();
    app.add_option("--out", cfg.out, "Output file (sweep: overwritten; mc: appended)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--workers", cfg.workers, "Sampling threads (0 = all cores); results do not depend on it")
        ->capture_default_str();

    StateArgs state_args;
    std::string state_sign = "+";
    CLI::App* state = app.add_subcommand("state", "Uncertainties of one equatorial state");
    state->add_option("--w", state_args.w_a_plus, "w_A+ in [0, 1]")->required();
    state->add_option("--sign", state_sign, "Relative sign of the |A-> amplitude")->check(CLI::IsMember({"+", "-"}));
    state->add_option("--c", state_args.c, "Entanglement parameter (default: optimal c)");

    bool full_range = false;
    CLI::App* sweep = app.add_subcommand("sweep", "Minimum, maximum and sharp products over w_A+");
    sweep->add_flag("--full-range", full_range, "Cover [0, 1] using the mirror symmetry about 0.5");

    int plates = 0;
    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "Polarizer angles reaching the minimum product (alpha from vertical = horizontal - pi/2)");
    calibrate->add_option("-N,--plates", plates, "Number of Brewster plates")->required();

    McArgs mc_args;
    std::string mc_sign = "+";
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo coincidence run for one setting");
    mc->add_option("-N,--plates", mc_args.plates, "Calibrated setting: number of plates");
    mc->add_option("--root", mc_args.root, "Calibrated setting: which angle (1 or 2)")->capture_default_str();
    mc->add_option("--w", mc_args.w_a_plus, "Explicit setting: w_A+");
    mc->add_option("--c", mc_args.c, "Explicit setting: entanglement parameter");
    mc->add_option("--sign", mc_sign, "Explicit setting: relative sign")->check(CLI::IsMember({"+", "-"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;

    try {
        if (state->parsed()) {
            state_args.sign = state_sign == "-" ? Sign::minus : Sign::plus;
            cmd_state(state_args, out, err);
        } else if (sweep->parsed()) {
            cmd_sweep(cfg, full_range, out);
        } else if (calibrate->parsed()) {
            cmd_calibrate(plates, cfg, out, err);
        } else if (mc->parsed()) {
            mc_args.sign = mc_sign == "-" ? Sign::minus : Sign::plus;
            cmd_mc(mc_args, cfg, out, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitOk;
}

}  // namespace unsharp::cli
