#include "unsharp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

#include "unsharp/errors.hpp"

namespace unsharp {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

EquatorialState object_state_of(const EntangledDecomposition& d) {
    return make_equatorial(std::clamp(d.w_a_plus, 0.0, 1.0), d.sign);
}

double optimal_c_for(double w_a_plus) {
    const SharpUncertainties sharp = sharp_uncertainties(make_equatorial(w_a_plus));
    return min_product(sharp.delta_a, sharp.delta_b).c_opt;
}

}  // namespace

Vec4C singlet() {
    const double h = 1.0 / std::numbers::sqrt2;
    return {0.0, h, -h, 0.0};
}

double plate_transmittance(double refractive_index) {
    if (!(refractive_index > 1.0) || !std::isfinite(refractive_index)) {
        throw UsageError("refractive index must be a finite value above 1");
    }
    // At Brewster incidence r_s = -(n^2 - 1)/(n^2 + 1) on both surfaces, and
    // the two surface intensity transmittances are equal.
    const double n2 = refractive_index * refractive_index;
    const double r = (n2 - 1.0) / (n2 + 1.0);
    const double surface = 1.0 - r * r;
    return std::sqrt(surface * surface);
}

PolarizerConfig PolarizerConfig::brewster_stack(int plate_count, double alpha, double refractive_index) {
    if (plate_count < 1) throw UsageError("plate count must be at least 1");
    if (!std::isfinite(alpha)) throw UsageError("rotation angle must be finite");
    PolarizerConfig cfg;
    cfg.plate_count = plate_count;
    cfg.refractive_index = refractive_index;
    cfg.alpha = alpha;
    cfg.t_p = 1.0;
    cfg.t_s = std::pow(plate_transmittance(refractive_index), plate_count);
    return cfg;
}

PolarizerConfig PolarizerConfig::with_transmittances(double alpha, double t_p, double t_s) {
    if (!(t_s >= 0.0 && t_s <= t_p && t_p <= 1.0) || !std::isfinite(alpha)) {
        throw UsageError("amplitude transmittances need 0 <= t_s <= t_p <= 1");
    }
    PolarizerConfig cfg;
    cfg.alpha = alpha;
    cfg.t_p = t_p;
    cfg.t_s = t_s;
    return cfg;
}

Op2C polarizer_operator(const PolarizerConfig& cfg) {
    return Op2C::rotation(cfg.alpha) * Op2C::diagonal(cfg.t_p, cfg.t_s) * Op2C::rotation(-cfg.alpha);
}

PreparedState prepare(const PolarizerConfig& cfg) {
    const Vec4C filtered = apply_to_object(polarizer_operator(cfg), singlet());
    const double yield = filtered.squared_norm();
    if (!(yield > 1e-15)) {
        throw EmptyEnsembleError("polarizer transmits nothing; the post-selected ensemble is empty");
    }
    PreparedState out;
    out.state = filtered / std::sqrt(yield);
    out.success_probability = yield;
    out.decomposition = decompose(out.state);
    return out;
}

double calibration_residual(int plate_count, double refractive_index, double alpha) {
    const PreparedState p = prepare(PolarizerConfig::brewster_stack(plate_count, alpha, refractive_index));
    return p.decomposition.c - optimal_c_for(p.decomposition.w_a_plus);
}

std::vector<CalibrationPoint> calibrate_alpha(int plate_count, double refractive_index,
                                              const CalibrationOptions& options) {
    if (plate_count < 1) throw UsageError("plate count must be at least 1");
    if (options.subdivisions < 1) throw UsageError("calibration needs at least one subdivision");
    // Validates the index before scanning.
    (void)plate_transmittance(refractive_index);

    auto residual = [&](double alpha) { return calibration_residual(plate_count, refractive_index, alpha); };
    const double lo = options.edge;
    const double hi = kQuarterPi - options.edge;
    const std::size_t n = options.subdivisions;
    auto alpha_at = [&](std::size_t k) { return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n); };

    std::vector<double> curve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) curve[k] = residual(alpha_at(k));

    std::vector<CalibrationPoint> roots;
    for (std::size_t k = 0; k < n; ++k) {
        double a = alpha_at(k);
        double b = alpha_at(k + 1);
        double fa = curve[k];
        const double fb = curve[k + 1];
        if (fa == 0.0 && k > 0) continue;  // counted as the right end of the previous bracket
        if (!(fa == 0.0 || fb == 0.0 || (fa < 0.0) != (fb < 0.0))) continue;
        if (fa != 0.0 && fb == 0.0) {
            a = b;
        } else if (fa != 0.0) {
            while (b - a > options.alpha_tolerance) {
                const double mid = 0.5 * (a + b);
                const double fm = residual(mid);
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
        }
        const double root = fa == 0.0 ? a : 0.5 * (a + b);
        const PreparedState p = prepare(PolarizerConfig::brewster_stack(plate_count, root, refractive_index));
        const EquatorialState object = object_state_of(p.decomposition);
        CalibrationPoint point;
        point.alpha = root;
        point.c = p.decomposition.c;
        point.w_a_plus = p.decomposition.w_a_plus;
        point.residual = point.c - optimal_c_for(point.w_a_plus);
        point.minimum_product = 1.0 + sharp_uncertainties(object).product();
        point.predicted_product = unsharp_uncertainties(object, point.c).product_simultaneous;
        roots.push_back(point);
    }

    if (roots.empty()) {
        std::ostringstream dump;
        dump << "# N=" << plate_count << " index=" << refractive_index
             << " residual c - sqrt(dA/(dA+dB)) over alpha in (0, pi/4)\n";
        dump << "alpha,residual\n" << std::setprecision(12);
        const std::size_t stride = std::max<std::size_t>(1, n / 40);
        for (std::size_t k = 0; k <= n; k += stride) dump << alpha_at(k) << ',' << curve[k] << '\n';
        const auto peak = std::max_element(curve.begin(), curve.end());
        dump << "# max residual " << *peak << " at alpha " << alpha_at(static_cast<std::size_t>(peak - curve.begin()))
             << '\n';
        throw CalibrationInfeasibleError("no rotation angle reaches the minimum-product condition for N = " +
                                             std::to_string(plate_count) + " plates",
                                         dump.str());
    }
    return roots;
}

JointProbabilities CoincidenceCounts::frequencies() const {
    JointProbabilities f;
    if (shots == 0) return f;
    for (std::size_t i = 0; i < 4; ++i) f.p[i] = static_cast<double>(n[i]) / static_cast<double>(shots);
    return f;
}

JointProbabilities apply_noise(const JointProbabilities& p, const NoiseModel& noise) {
    if (!(noise.visibility >= 0.0 && noise.visibility <= 1.0)) {
        throw UsageError("visibility must lie in [0, 1]");
    }
    JointProbabilities out;
    for (std::size_t i = 0; i < 4; ++i) out.p[i] = noise.visibility * p.p[i] + 0.25 * (1.0 - noise.visibility);
    return out;
}

MeasuredReport estimate_report(const CoincidenceCounts& counts, double c_measured, const ObservablePair& pair) {
    if (counts.shots == 0) throw UsageError("estimate needs at least one shot");
    const RescaledEigenvalues scaled = rescaled_eigenvalues(pair, c_measured);
    const JointProbabilities f = counts.frequencies();

    const InferredMeans means = inferred_means(f, scaled);
    const InferredUncertainties inferred = inferred_uncertainties(f, pair, c_measured);

    MeasuredReport out;
    UncertaintyReport& r = out.report;
    const double mean_a = means.a / pair.a_magnitude;
    const double mean_b = means.b / pair.b_magnitude;
    r.delta_a = std::sqrt(std::max(0.0, 1.0 - mean_a * mean_a));
    r.delta_b = std::sqrt(std::max(0.0, 1.0 - mean_b * mean_b));
    r.delta_a_prime = inferred.delta_a_prime;
    r.delta_b_prime = inferred.delta_b_prime;
    r.product_sharp = r.delta_a * r.delta_b;
    r.product_simultaneous = r.delta_a_prime * r.delta_b_prime;
    r.c_used = c_measured;

    const auto& n = counts.n;
    out.degenerate = n[0] + n[1] == 0 || n[2] + n[3] == 0 || n[0] + n[2] == 0 || n[1] + n[3] == 0;

    // Per-shot variables X = ±1 on M±, Y = ±1 on B±; the product depends on
    // their sample means through sqrt(1 - x^2)·sqrt(1 - y^2).
    const double x = f.probe_m().difference();
    const double y = f.object_b().difference();
    const double exy = f.p[0] - f.p[1] - f.p[2] + f.p[3];
    const double var_x = 1.0 - x * x;
    const double var_y = 1.0 - y * y;
    const double cov = exy - x * y;
    const double product = r.product_simultaneous;
    const double gx = var_x > 0.0 ? -product * x / var_x : 0.0;
    const double gy = var_y > 0.0 ? -product * y / var_y : 0.0;
    const double variance = (gx * gx * var_x + gy * gy * var_y + 2.0 * gx * gy * cov) / static_cast<double>(counts.shots);
    out.product_standard_error = std::sqrt(std::max(0.0, variance));
    return out;
}

namespace {

SettingRun finish_run(SettingRun run, std::uint64_t shots, std::uint64_t seed, const NoiseModel& noise,
                      unsigned workers) {
    const ObservablePair pair = ObservablePair::standard();
    // Surface singular rescaling before spending time on sampling.
    (void)rescaled_eigenvalues(pair, run.prepared.decomposition.c);
    run.basis = probe_basis(run.prepared.decomposition);
    run.probabilities = joint_probabilities(run.prepared.state, pair, run.basis);
    run.counts = sample_coincidences(run.probabilities, shots, seed, noise, workers);
    run.measured = estimate_report(run.counts, run.prepared.decomposition.c, pair);
    return run;
}

}  // namespace

SettingRun run_setting(const PolarizerConfig& cfg, std::uint64_t shots, std::uint64_t seed, const NoiseModel& noise,
                       unsigned workers) {
    SettingRun run;
    run.prepared = prepare(cfg);
    return finish_run(std::move(run), shots, seed, noise, workers);
}

SettingRun run_state(const EquatorialState& s, double c, std::uint64_t shots, std::uint64_t seed,
                     const NoiseModel& noise, unsigned workers) {
    SettingRun run;
    run.prepared.decomposition = entangled_parts(s, c);
    run.prepared.state = run.prepared.decomposition.reassemble();
    run.prepared.success_probability = 1.0;
    return finish_run(std::move(run), shots, seed, noise, workers);
}

}  // namespace unsharp
