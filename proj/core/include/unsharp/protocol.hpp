#pragma once

// Simultaneous unsharp measurement of two complementary qubit observables.
//
// The object qubit is entangled with a probe qubit. B is then read sharply on
// the object and A is inferred from a projective measurement of the probe. With
// outcomes rescaled to ±B/c and ±A/sqrt(1-c^2) both inferred means equal the
// sharp means for every equatorial state, and the product of the inferred
// normalized uncertainties is bounded below by 1 + δA·δB.
//
// Basis conventions:
//   |A+> = (1, 0), |A-> = (0, 1), |B±> = (|A+> ± |A->)/sqrt(2).
//   Bloch coordinates: z is the A axis, x is the B axis, y is the pole that is
//   orthogonal to the equator holding all four eigenstates.

#include <array>
#include <cstddef>
#include <utility>

#include "unsharp/qmath.hpp"

namespace unsharp {

enum class Sign : int { plus = 1, minus = -1 };

inline double sign_value(Sign s) { return static_cast<double>(static_cast<int>(s)); }

enum class Observable { A, B };

struct OutcomePair {
    double plus = 0.0;
    double minus = 0.0;

    double difference() const { return plus - minus; }
};

struct ObservablePair {
    double a_magnitude = 1.0;
    double b_magnitude = 1.0;
    std::array<Vec2C, 2> a_basis;  // {|A+>, |A->}
    std::array<Vec2C, 2> b_basis;  // {|B+>, |B->}

    /// Complementary pair with the conventional eigenbases. Magnitudes must be positive.
    static ObservablePair standard(double a_magnitude = 1.0, double b_magnitude = 1.0);
};

/// sqrt(w)|A+> ± sqrt(1-w)|A->. Amplitudes are real.
struct EquatorialState {
    double w_a_plus = 1.0;
    Sign sign = Sign::plus;
    Vec2C amplitudes;

    double w_a_minus() const { return 1.0 - w_a_plus; }
};

EquatorialState make_equatorial(double w_a_plus, Sign sign = Sign::plus);

OutcomePair sharp_probabilities(const EquatorialState& s, Observable which);

struct SharpUncertainties {
    double delta_a = 0.0;
    double delta_b = 0.0;

    double product() const { return delta_a * delta_b; }
};

/// Normalized sharp uncertainties sqrt(1 - <A>^2/A^2), sqrt(1 - <B>^2/B^2).
SharpUncertainties sharp_uncertainties(const EquatorialState& s);

/// Conditional probe states and the overlap that fixes the entanglement.
///
/// Reassembly: sqrt(w)|A+>⊗m_plus + sign·sqrt(1-w)|A->⊗m_minus.
/// c = |<m_plus|m_minus>| and overlap_phase = arg <m_plus|m_minus>.
struct EntangledDecomposition {
    double w_a_plus = 1.0;
    Sign sign = Sign::plus;
    Vec2C m_plus;
    Vec2C m_minus;
    double c = 1.0;
    double overlap_phase = 0.0;
    // One conditional vanished: the object sits in an A eigenstate and c is
    // reported as 1 by convention.
    bool object_eigenstate = false;

    Vec4C reassemble() const;
};

/// Probe states m± = (cos θ, ±sin θ) with cos 2θ = c, symmetric about (1, 0).
std::pair<Vec2C, Vec2C> symmetric_probe_states(double c);

/// sqrt(w)|A+>⊗|m+> ± sqrt(1-w)|A->⊗|m->, with m± from symmetric_probe_states(c).
Vec4C entangle(const EquatorialState& s, double c);

/// Decomposition that entangle(s, c) builds, without reading it back from the vector.
EntangledDecomposition entangled_parts(const EquatorialState& s, double c);

/// Reads (w, m±, c) back from an object⊗probe state. Absorbs the relative sign
/// into `sign` so that Re <m_plus|m_minus> >= 0.
EntangledDecomposition decompose(const Vec4C& s);

/// Orthonormal probe measurement basis at equal angle γ from m+ and m-.
struct ProbeBasis {
    Vec2C m_big_plus;
    Vec2C m_big_minus;
    double gamma = 0.0;
};

/// Closed form cos²γ = (1 + sqrt(1-c²))/2.
double probe_basis_cos2_gamma(double c);

ProbeBasis probe_basis(const EntangledDecomposition& d);

struct RescaledEigenvalues {
    double a = 0.0;  // A / sqrt(1-c^2), attached to probe outcomes M±
    double b = 0.0;  // B / c, attached to object outcomes B±
};

RescaledEigenvalues rescaled_eigenvalues(const ObservablePair& pair, double c);

/// p(B_i, M_j) stored as {(B+,M+), (B+,M-), (B-,M+), (B-,M-)}.
struct JointProbabilities {
    std::array<double, 4> p{};

    double operator()(std::size_t b_index, std::size_t m_index) const { return p[2 * b_index + m_index]; }
    double total() const { return p[0] + p[1] + p[2] + p[3]; }
    OutcomePair object_b() const { return {p[0] + p[1], p[2] + p[3]}; }
    OutcomePair probe_m() const { return {p[0] + p[2], p[1] + p[3]}; }
};

JointProbabilities joint_probabilities(const Vec4C& s, const ObservablePair& pair, const ProbeBasis& basis);

struct InferredMeans {
    double a = 0.0;
    double b = 0.0;
};

InferredMeans inferred_means(const JointProbabilities& probs, const RescaledEigenvalues& scaled);

struct InferredUncertainties {
    double delta_a_prime = 0.0;
    double delta_b_prime = 0.0;
};

/// Standard deviations of the rescaled two-point outcome distributions,
/// normalized by A and B. Works on exact or empirical probabilities.
InferredUncertainties inferred_uncertainties(const JointProbabilities& probs, const ObservablePair& pair, double c);

struct UncertaintyReport {
    double delta_a = 0.0;
    double delta_b = 0.0;
    double delta_a_prime = 0.0;
    double delta_b_prime = 0.0;
    double product_sharp = 0.0;
    double product_simultaneous = 0.0;
    double c_used = 0.0;
};

/// Closed-form unsharp uncertainties:
///   δA' = sqrt(δA² + c²/(1-c²)),  δB' = sqrt(δB² + (1-c²)/c²).
/// Each call is cross-checked against the direct route (entangle, probe basis,
/// joint probabilities, outcome variances); a disagreement above 1e-10 throws
/// std::logic_error.
UncertaintyReport unsharp_uncertainties(const EquatorialState& s, double c);

/// Same quantities computed only through the direct route.
UncertaintyReport direct_unsharp_uncertainties(const EquatorialState& s, double c,
                                               const ObservablePair& pair = ObservablePair::standard());

struct MinimumProduct {
    double value = 1.0;
    double c_opt = 1.0;
};

/// min over c of δA'δB' = 1 + δAδB, reached at c = sqrt(δA/(δA+δB)).
MinimumProduct min_product(double delta_a, double delta_b);

/// 1/(c·sqrt(1-c²)): the product for an unbiased (pole) state at the same rescaling.
double max_product(double c);

struct CScanResult {
    double c_best = 0.0;
    double product_best = 0.0;
    bool at_boundary = false;  // minimizer sat on the first or last grid point
};

/// Brute-force minimization of δA'δB' over c: uniform grid on [1e-4, 1-1e-4]
/// followed by golden-section refinement between the grid neighbours.
CScanResult numeric_c_scan(const EquatorialState& s, std::size_t grid_size);

struct BlochVector {
    double x = 0.0;  // B axis
    double y = 0.0;  // pole
    double z = 0.0;  // A axis
};

/// Point on the A-B equator at `angle` from |A+> towards |B+>.
BlochVector equatorial_direction(double angle);

BlochVector bloch_vector(const EquatorialState& s);

/// Equatorial state with the given (x, z) Bloch direction; y is ignored.
EquatorialState equatorial_from_bloch(const BlochVector& v);

/// Probability of the + outcome of a projective measurement along `axis`.
double projective_probability(const Vec2C& state, const BlochVector& axis);

struct VonNeumannCounterexample {
    EquatorialState state_q;
    EquatorialState state_minus_q;
    double probability_q = 0.0;        // p(+) for state_q
    double probability_minus_q = 0.0;  // p(+) for state_minus_q
    double mean_a_gap = 0.0;           // |<A>_q - <A>_-q| with A = 1
    double mean_b_gap = 0.0;

    double gap() const { return mean_a_gap > mean_b_gap ? mean_a_gap : mean_b_gap; }
};

/// Two equatorial states that a projective measurement along `axis` cannot
/// tell apart although their A or B means differ. Throws UsageError when the
/// axis is (anti)parallel to the A or B axis or is the zero vector.
VonNeumannCounterexample von_neumann_counterexample(const BlochVector& axis);

}  // namespace unsharp
