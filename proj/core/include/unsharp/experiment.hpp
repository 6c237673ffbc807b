#pragma once

// Optical twin of the photon-pair experiment.
//
// A post-selected polarization singlet supplies the entangled object⊗probe
// state. A pile of N glass plates at Brewster incidence acts on the object
// photon as a partial polarizer; its rotation α and plate count N move the
// prepared state through (c, w_A+). Coincidence counts in the (B±, M±)
// outcomes are sampled by Monte Carlo and fed back through the same
// estimator that would be applied to measured data.
//
// Angle convention: α is the angle of the high-transmission (p) axis from the
// vertical |A+> direction. Relative to the horizontal plane it is α + π/2.

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "unsharp/protocol.hpp"
#include "unsharp/qmath.hpp"

namespace unsharp {

inline constexpr double kDefaultRefractiveIndex = 1.5;
inline constexpr std::uint64_t kDefaultShots = 100000;

/// (|↑>|→> - |→>|↑>)/sqrt(2), object first, ↑ = |A+>.
Vec4C singlet();

/// s-polarized amplitude transmittance of one plate at Brewster incidence,
/// sqrt(T1·T2) over its two surfaces. Multiple reflections are ignored.
double plate_transmittance(double refractive_index);

struct PolarizerConfig {
    int plate_count = 0;
    double refractive_index = kDefaultRefractiveIndex;
    double alpha = 0.0;
    double t_p = 1.0;
    double t_s = 1.0;

    /// Brewster pile of `plate_count` plates: t_p = 1, t_s = plate_transmittance(n)^N.
    static PolarizerConfig brewster_stack(int plate_count, double alpha,
                                          double refractive_index = kDefaultRefractiveIndex);
    /// Ideal element with explicit amplitude transmittances; plate_count stays 0.
    static PolarizerConfig with_transmittances(double alpha, double t_p, double t_s);
};

/// R(α)·diag(t_p, t_s)·R(-α) in the A basis.
Op2C polarizer_operator(const PolarizerConfig& cfg);

struct PreparedState {
    Vec4C state;
    double success_probability = 0.0;
    EntangledDecomposition decomposition;
};

/// Polarizer on the object half of the singlet, post-selected and renormalized.
PreparedState prepare(const PolarizerConfig& cfg);

struct CalibrationPoint {
    double alpha = 0.0;
    double c = 0.0;
    double w_a_plus = 0.0;
    double predicted_product = 0.0;  // analytic δA'δB' at (c, w)
    double minimum_product = 0.0;    // 1 + δAδB at w
    double residual = 0.0;           // c - sqrt(δA/(δA+δB))
};

struct CalibrationOptions {
    std::size_t subdivisions = 2000;
    double edge = 1e-4;
    double alpha_tolerance = 1e-10;
};

/// Rotation angles in (0, π/4) at which the prepared (c, w) satisfies the
/// minimum-product condition c = sqrt(δA/(δA+δB)). Roots are bracketed on a
/// uniform scan and refined by bisection. Throws CalibrationInfeasibleError,
/// carrying the scanned residual curve, when no root exists.
std::vector<CalibrationPoint> calibrate_alpha(int plate_count, double refractive_index = kDefaultRefractiveIndex,
                                              const CalibrationOptions& options = {});

/// Residual of the minimum-product condition at one rotation angle.
double calibration_residual(int plate_count, double refractive_index, double alpha);

struct NoiseModel {
    double visibility = 1.0;
};

/// Outcome counts in the order (B+,M+), (B+,M-), (B-,M+), (B-,M-).
struct CoincidenceCounts {
    std::array<std::uint64_t, 4> n{};
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    std::uint64_t n_pp() const { return n[0]; }
    std::uint64_t n_pm() const { return n[1]; }
    std::uint64_t n_mp() const { return n[2]; }
    std::uint64_t n_mm() const { return n[3]; }
    JointProbabilities frequencies() const;
};

/// visibility·p + (1 - visibility)/4.
JointProbabilities apply_noise(const JointProbabilities& p, const NoiseModel& noise);

/// Shots per independently seeded shard. Shard k draws from its own
/// generator seeded from (seed, k), so counts do not depend on `workers`.
inline constexpr std::uint64_t kShardShots = std::uint64_t{1} << 16;

/// I.i.d. categorical draws from apply_noise(p, noise). Deterministic in `seed`.
CoincidenceCounts sample_coincidences(const JointProbabilities& p, std::uint64_t shots, std::uint64_t seed,
                                      const NoiseModel& noise = {}, unsigned workers = 1);

struct MeasuredReport {
    UncertaintyReport report;
    double product_standard_error = 0.0;  // delta-method, full multinomial covariance
    bool degenerate = false;              // an outcome marginal had zero counts
};

/// Plug-in estimate of the inferred uncertainties from coincidence counts,
/// rescaled with `c_measured`. Sharp δA, δB are read off the inferred means.
MeasuredReport estimate_report(const CoincidenceCounts& counts, double c_measured,
                               const ObservablePair& pair = ObservablePair::standard());

struct SettingRun {
    PreparedState prepared;
    ProbeBasis basis;
    JointProbabilities probabilities;
    CoincidenceCounts counts;
    MeasuredReport measured;
};

/// prepare → probe basis → joint probabilities → sampling → estimate, with
/// the prepared c used as the measured entanglement parameter.
SettingRun run_setting(const PolarizerConfig& cfg, std::uint64_t shots, std::uint64_t seed,
                       const NoiseModel& noise = {}, unsigned workers = 1);

/// Same pipeline starting from an ideal entangled state of the protocol.
SettingRun run_state(const EquatorialState& s, double c, std::uint64_t shots, std::uint64_t seed,
                     const NoiseModel& noise = {}, unsigned workers = 1);

}  // namespace unsharp
