#include "unsharp/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "unsharp/errors.hpp"

namespace unsharp {
namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
// Conditional probe vectors shorter than this are treated as absent.
constexpr double kConditionalFloor = 1e-9;
constexpr double kScanEdge = 1e-4;

// 1 - c^2 without cancellation near c = 1.
double one_minus_c2(double c) { return (1.0 - c) * (1.0 + c); }

void require_probability(double w, const char* name) {
    if (!(w >= 0.0 && w <= 1.0)) {
        throw UsageError(std::string(name) + " must lie in [0, 1], got " + std::to_string(w));
    }
}

void require_open_unit(double c) {
    if (!(c > 0.0 && c < 1.0)) {
        throw SingularRescalingError("entanglement parameter c = " + std::to_string(c) +
                                     " is singular: the rescaled eigenvalues need 0 < c < 1");
    }
}

double two_point_sd(const OutcomePair& p, double magnitude) {
    const double second_moment = p.plus + p.minus;
    const double mean = p.difference();
    return magnitude * std::sqrt(std::max(0.0, second_moment - mean * mean));
}

}  // namespace

ObservablePair ObservablePair::standard(double a_magnitude, double b_magnitude) {
    if (!(a_magnitude > 0.0) || !(b_magnitude > 0.0) || !std::isfinite(a_magnitude) ||
        !std::isfinite(b_magnitude)) {
        throw UsageError("eigenvalue magnitudes must be finite and positive");
    }
    ObservablePair pair;
    pair.a_magnitude = a_magnitude;
    pair.b_magnitude = b_magnitude;
    pair.a_basis = {Vec2C{1.0, 0.0}, Vec2C{0.0, 1.0}};
    pair.b_basis = {Vec2C{kInvSqrt2, kInvSqrt2}, Vec2C{kInvSqrt2, -kInvSqrt2}};
    return pair;
}

EquatorialState make_equatorial(double w_a_plus, Sign sign) {
    require_probability(w_a_plus, "w_A+");
    EquatorialState s;
    s.w_a_plus = w_a_plus;
    s.sign = sign;
    s.amplitudes = {std::sqrt(w_a_plus), sign_value(sign) * std::sqrt(1.0 - w_a_plus)};
    return s;
}

OutcomePair sharp_probabilities(const EquatorialState& s, Observable which) {
    if (which == Observable::A) return {s.w_a_plus, s.w_a_minus()};
    const double plus = 0.5 + sign_value(s.sign) * std::sqrt(s.w_a_plus * s.w_a_minus());
    return {plus, 1.0 - plus};
}

SharpUncertainties sharp_uncertainties(const EquatorialState& s) {
    // 1 - (w+ - w-)^2 = 4 w+ w-  and  1 - (wB+ - wB-)^2 = (w+ - w-)^2.
    return {2.0 * std::sqrt(s.w_a_plus * s.w_a_minus()), std::abs(s.w_a_plus - s.w_a_minus())};
}

Vec4C EntangledDecomposition::reassemble() const {
    return std::sqrt(w_a_plus) * tensor(Vec2C{1.0, 0.0}, m_plus) +
           sign_value(sign) * std::sqrt(1.0 - w_a_plus) * tensor(Vec2C{0.0, 1.0}, m_minus);
}

std::pair<Vec2C, Vec2C> symmetric_probe_states(double c) {
    require_probability(c, "c");
    const double half = 0.5 * std::acos(c);
    const double cs = std::cos(half);
    const double sn = std::sin(half);
    return {Vec2C{cs, sn}, Vec2C{cs, -sn}};
}

EntangledDecomposition entangled_parts(const EquatorialState& s, double c) {
    auto [m_plus, m_minus] = symmetric_probe_states(c);
    EntangledDecomposition d;
    d.w_a_plus = s.w_a_plus;
    d.sign = s.sign;
    d.m_plus = m_plus;
    d.m_minus = m_minus;
    d.c = c;
    d.overlap_phase = 0.0;
    // Both probe states are known here even when one branch has zero weight.
    d.object_eigenstate = false;
    return d;
}

Vec4C entangle(const EquatorialState& s, double c) { return entangled_parts(s, c).reassemble(); }

EntangledDecomposition decompose(const Vec4C& s) {
    if (!s.all_finite() || std::abs(s.norm() - 1.0) > 1e-9) {
        throw UsageError("decompose expects a normalized two-qubit state");
    }
    const Vec2C v_plus = object_conditional(Vec2C{1.0, 0.0}, s);
    const Vec2C v_minus = object_conditional(Vec2C{0.0, 1.0}, s);
    const double n_plus = v_plus.norm();
    const double n_minus = v_minus.norm();

    EntangledDecomposition d;
    if (n_plus < kConditionalFloor || n_minus < kConditionalFloor) {
        d.object_eigenstate = true;
        d.c = 1.0;
        d.sign = Sign::plus;
        if (n_plus >= n_minus) {
            d.w_a_plus = 1.0;
            d.m_plus = v_plus / n_plus;
            d.m_minus = d.m_plus;
        } else {
            d.w_a_plus = 0.0;
            d.m_minus = v_minus / n_minus;
            d.m_plus = d.m_minus;
        }
        return d;
    }

    d.w_a_plus = n_plus * n_plus;
    d.m_plus = v_plus / n_plus;
    Vec2C raw_minus = v_minus / n_minus;
    const Complex overlap = inner(d.m_plus, raw_minus);

    // The relative sign of the two branches is not observable separately from
    // the overlap phase; fold it so that Re <m+|m-> >= 0. For (near) orthogonal
    // conditionals fall back to the phase of the dominant component.
    bool flip = false;
    if (std::abs(overlap.real()) > kConditionalFloor) {
        flip = overlap.real() < 0.0;
    } else {
        const std::size_t k = std::abs(raw_minus[1]) > std::abs(raw_minus[0]) + kTolerance ? 1 : 0;
        flip = raw_minus[k].real() < 0.0;
    }
    d.sign = flip ? Sign::minus : Sign::plus;
    if (flip) raw_minus *= -1.0;
    d.m_minus = raw_minus;

    const Complex folded = flip ? -overlap : overlap;
    d.c = std::min(1.0, std::abs(folded));
    d.overlap_phase = d.c > 1e-15 ? std::arg(folded) : 0.0;
    return d;
}

double probe_basis_cos2_gamma(double c) {
    require_probability(c, "c");
    return 0.5 * (1.0 + std::sqrt(one_minus_c2(c)));
}

ProbeBasis probe_basis(const EntangledDecomposition& d) {
    if (d.object_eigenstate || d.c >= 1.0 - kTolerance) {
        throw DegenerateBasisError("probe states coincide (c = 1); the probe carries no information about A");
    }
    // Rotate m- so the overlap is real and non-negative, then orthogonalize
    // symmetrically through the sum and difference vectors.
    const Vec2C aligned = d.m_minus * std::polar(1.0, -d.overlap_phase);
    const Vec2C sum = (d.m_plus + aligned).normalized();
    const Vec2C diff = (d.m_plus - aligned).normalized();

    ProbeBasis basis;
    basis.m_big_plus = (sum + diff) * kInvSqrt2;
    basis.m_big_minus = (sum - diff) * kInvSqrt2;
    basis.gamma = std::atan2(std::abs(inner(basis.m_big_minus, d.m_plus)), std::abs(inner(basis.m_big_plus, d.m_plus)));
    return basis;
}

RescaledEigenvalues rescaled_eigenvalues(const ObservablePair& pair, double c) {
    require_open_unit(c);
    return {pair.a_magnitude / std::sqrt(one_minus_c2(c)), pair.b_magnitude / c};
}

JointProbabilities joint_probabilities(const Vec4C& s, const ObservablePair& pair, const ProbeBasis& basis) {
    const std::array<const Vec2C*, 2> probe = {&basis.m_big_plus, &basis.m_big_minus};
    JointProbabilities out;
    for (std::size_t i = 0; i < 2; ++i) {
        const Vec2C conditional = object_conditional(pair.b_basis[i], s);
        for (std::size_t j = 0; j < 2; ++j) {
            out.p[2 * i + j] = std::norm(inner(*probe[j], conditional));
        }
    }
    return out;
}

InferredMeans inferred_means(const JointProbabilities& probs, const RescaledEigenvalues& scaled) {
    if (std::abs(probs.total() - 1.0) > 1e-9) {
        throw UsageError("joint probabilities must sum to 1");
    }
    return {scaled.a * probs.probe_m().difference(), scaled.b * probs.object_b().difference()};
}

InferredUncertainties inferred_uncertainties(const JointProbabilities& probs, const ObservablePair& pair, double c) {
    const RescaledEigenvalues scaled = rescaled_eigenvalues(pair, c);
    return {two_point_sd(probs.probe_m(), scaled.a) / pair.a_magnitude,
            two_point_sd(probs.object_b(), scaled.b) / pair.b_magnitude};
}

UncertaintyReport direct_unsharp_uncertainties(const EquatorialState& s, double c, const ObservablePair& pair) {
    require_open_unit(c);
    const EntangledDecomposition parts = entangled_parts(s, c);
    const Vec4C state = parts.reassemble();
    const JointProbabilities probs = joint_probabilities(state, pair, probe_basis(parts));
    const InferredMeans means = inferred_means(probs, rescaled_eigenvalues(pair, c));
    const InferredUncertainties inferred = inferred_uncertainties(probs, pair, c);

    const double mean_a = means.a / pair.a_magnitude;
    const double mean_b = means.b / pair.b_magnitude;
    UncertaintyReport r;
    r.delta_a = std::sqrt(std::max(0.0, 1.0 - mean_a * mean_a));
    r.delta_b = std::sqrt(std::max(0.0, 1.0 - mean_b * mean_b));
    r.delta_a_prime = inferred.delta_a_prime;
    r.delta_b_prime = inferred.delta_b_prime;
    r.product_sharp = r.delta_a * r.delta_b;
    r.product_simultaneous = r.delta_a_prime * r.delta_b_prime;
    r.c_used = c;
    return r;
}

UncertaintyReport unsharp_uncertainties(const EquatorialState& s, double c) {
    require_open_unit(c);
    const SharpUncertainties sharp = sharp_uncertainties(s);
    const double rest = one_minus_c2(c);

    UncertaintyReport r;
    r.delta_a = sharp.delta_a;
    r.delta_b = sharp.delta_b;
    r.delta_a_prime = std::sqrt(sharp.delta_a * sharp.delta_a + c * c / rest);
    r.delta_b_prime = std::sqrt(sharp.delta_b * sharp.delta_b + rest / (c * c));
    r.product_sharp = sharp.product();
    r.product_simultaneous = r.delta_a_prime * r.delta_b_prime;
    r.c_used = c;

    // Rounding in the direct route grows with the rescaled eigenvalues, so the
    // agreement bound is relative once the uncertainties exceed 1.
    const UncertaintyReport direct = direct_unsharp_uncertainties(s, c);
    const double tol_a = 1e-10 * std::max(1.0, r.delta_a_prime);
    const double tol_b = 1e-10 * std::max(1.0, r.delta_b_prime);
    if (std::abs(direct.delta_a_prime - r.delta_a_prime) > tol_a ||
        std::abs(direct.delta_b_prime - r.delta_b_prime) > tol_b) {
        throw std::logic_error("closed-form and direct unsharp uncertainties disagree at w = " +
                               std::to_string(s.w_a_plus) + ", c = " + std::to_string(c));
    }
    return r;
}

MinimumProduct min_product(double delta_a, double delta_b) {
    if (!(delta_a >= 0.0) || !(delta_b >= 0.0) || !std::isfinite(delta_a) || !std::isfinite(delta_b)) {
        throw UsageError("sharp uncertainties must be finite and non-negative");
    }
    if (delta_a == 0.0 && delta_b == 0.0) {
        throw UsageError("δA = δB = 0 is impossible for a qubit state");
    }
    return {1.0 + delta_a * delta_b, std::sqrt(delta_a / (delta_a + delta_b))};
}

double max_product(double c) {
    require_open_unit(c);
    return 1.0 / (c * std::sqrt(one_minus_c2(c)));
}

CScanResult numeric_c_scan(const EquatorialState& s, std::size_t grid_size) {
    if (grid_size < 3) throw UsageError("numeric_c_scan needs at least 3 grid points");

    const double span = 1.0 - 2.0 * kScanEdge;
    auto grid_c = [&](std::size_t k) { return kScanEdge + span * static_cast<double>(k) / static_cast<double>(grid_size - 1); };
    auto product = [&](double c) { return unsharp_uncertainties(s, c).product_simultaneous; };

    std::size_t best_k = 0;
    double best = product(grid_c(0));
    for (std::size_t k = 1; k < grid_size; ++k) {
        const double v = product(grid_c(k));
        if (v < best) {
            best = v;
            best_k = k;
        }
    }

    double lo = grid_c(best_k == 0 ? 0 : best_k - 1);
    double hi = grid_c(best_k + 1 >= grid_size ? grid_size - 1 : best_k + 1);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = product(x1);
    double f2 = product(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = product(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = product(x2);
        }
    }

    CScanResult result{grid_c(best_k), best, best_k == 0 || best_k + 1 == grid_size};
    const double refined_c = 0.5 * (lo + hi);
    const double refined = product(refined_c);
    if (refined < result.product_best) {
        result.c_best = refined_c;
        result.product_best = refined;
    }
    return result;
}

BlochVector equatorial_direction(double angle) { return {std::sin(angle), 0.0, std::cos(angle)}; }

BlochVector bloch_vector(const EquatorialState& s) {
    const Complex cross = std::conj(s.amplitudes[0]) * s.amplitudes[1];
    return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(s.amplitudes[0]) - std::norm(s.amplitudes[1])};
}

EquatorialState equatorial_from_bloch(const BlochVector& v) {
    const double r = std::hypot(v.x, v.z);
    if (!(r > 0.0)) throw UsageError("direction has no component in the A-B equator");
    const double w = std::clamp(0.5 * (1.0 + v.z / r), 0.0, 1.0);
    return make_equatorial(w, v.x >= 0.0 ? Sign::plus : Sign::minus);
}

double projective_probability(const Vec2C& state, const BlochVector& axis) {
    const double r = std::sqrt(axis.x * axis.x + axis.y * axis.y + axis.z * axis.z);
    if (!(r > 0.0)) throw UsageError("measurement axis must be non-zero");
    const double theta = std::acos(std::clamp(axis.z / r, -1.0, 1.0));
    const double phi = std::atan2(axis.y, axis.x);
    const Vec2C eigen{std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi)};
    return std::norm(inner(eigen, state));
}

VonNeumannCounterexample von_neumann_counterexample(const BlochVector& axis) {
    const double r = std::sqrt(axis.x * axis.x + axis.y * axis.y + axis.z * axis.z);
    if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("measurement axis must be a finite non-zero vector");
    const BlochVector n{axis.x / r, axis.y / r, axis.z / r};
    constexpr double kParallel = 1e-9;
    if (std::hypot(n.x, n.y) < kParallel) throw UsageError("measurement axis coincides with the A axis");
    if (std::hypot(n.y, n.z) < kParallel) throw UsageError("measurement axis coincides with the B axis");

    // The plane through the origin normal to n meets the equator along n × ŷ.
    BlochVector q{-n.z, 0.0, n.x};
    if (std::hypot(q.x, q.z) < kParallel) q = {0.0, 0.0, 1.0};

    VonNeumannCounterexample out;
    out.state_q = equatorial_from_bloch(q);
    out.state_minus_q = equatorial_from_bloch({-q.x, 0.0, -q.z});
    out.probability_q = projective_probability(out.state_q.amplitudes, n);
    out.probability_minus_q = projective_probability(out.state_minus_q.amplitudes, n);

    auto mean = [](const EquatorialState& s, Observable o) { return sharp_probabilities(s, o).difference(); };
    out.mean_a_gap = std::abs(mean(out.state_q, Observable::A) - mean(out.state_minus_q, Observable::A));
    out.mean_b_gap = std::abs(mean(out.state_q, Observable::B) - mean(out.state_minus_q, Observable::B));
    return out;
}

}  // namespace unsharp
