#pragma once

// Fixed-dimension complex linear algebra for one object qubit and one probe qubit.
//
// Two-qubit vectors use object-major ordering:
//   (obj0*probe0, obj0*probe1, obj1*probe0, obj1*probe1)
// Every module relies on this ordering; do not reinterpret it locally.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>

namespace unsharp {

using Complex = std::complex<double>;

/// Shared absolute tolerance for identities that hold in exact arithmetic.
inline constexpr double kTolerance = 1e-12;

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <std::size_t N>
class CVec {
public:
    static constexpr std::size_t dimension = N;

    constexpr CVec() = default;
    constexpr CVec(std::initializer_list<Complex> values) {
        std::size_t i = 0;
        for (auto v : values) {
            if (i < N) data_[i++] = v;
        }
    }

    constexpr Complex& operator[](std::size_t i) { return data_[i]; }
    constexpr const Complex& operator[](std::size_t i) const { return data_[i]; }

    constexpr auto begin() const { return data_.begin(); }
    constexpr auto end() const { return data_.end(); }

    double squared_norm() const {
        double s = 0.0;
        for (const auto& z : data_) s += std::norm(z);
        return s;
    }
    double norm() const { return std::sqrt(squared_norm()); }

    CVec normalized() const { return *this / norm(); }

    bool is_state(double tol = kTolerance) const { return std::abs(norm() - 1.0) <= tol; }

    bool all_finite() const {
        for (const auto& z : data_) {
            if (!is_finite(z)) return false;
        }
        return true;
    }

    CVec& operator+=(const CVec& o) {
        for (std::size_t i = 0; i < N; ++i) data_[i] += o.data_[i];
        return *this;
    }
    CVec& operator-=(const CVec& o) {
        for (std::size_t i = 0; i < N; ++i) data_[i] -= o.data_[i];
        return *this;
    }
    CVec& operator*=(Complex s) {
        for (auto& z : data_) z *= s;
        return *this;
    }
    CVec& operator/=(Complex s) {
        for (auto& z : data_) z /= s;
        return *this;
    }

    friend CVec operator+(CVec a, const CVec& b) { return a += b; }
    friend CVec operator-(CVec a, const CVec& b) { return a -= b; }
    friend CVec operator-(CVec a) { return a *= -1.0; }
    friend CVec operator*(CVec a, Complex s) { return a *= s; }
    friend CVec operator*(Complex s, CVec a) { return a *= s; }
    friend CVec operator/(CVec a, Complex s) { return a /= s; }

    friend bool operator==(const CVec&, const CVec&) = default;

private:
    std::array<Complex, N> data_{};
};

using Vec2C = CVec<2>;
using Vec4C = CVec<4>;

/// Largest componentwise modulus of a - b.
template <std::size_t N>
double max_abs_diff(const CVec<N>& a, const CVec<N>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// <a|b>, conjugate-linear in the first argument. Mismatched dimensions do not compile.
template <std::size_t N>
Complex inner(const CVec<N>& a, const CVec<N>& b) {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

class Op2C {
public:
    constexpr Op2C() = default;
    constexpr Op2C(Complex m00, Complex m01, Complex m10, Complex m11) : m_{{{m00, m01}, {m10, m11}}} {}

    static constexpr Op2C identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Op2C diagonal(Complex d0, Complex d1) { return {d0, 0.0, 0.0, d1}; }
    /// Real rotation by angle theta: columns are (cos, sin) and (-sin, cos).
    static Op2C rotation(double theta);

    constexpr Complex operator()(std::size_t r, std::size_t c) const { return m_[r][c]; }
    constexpr Complex& operator()(std::size_t r, std::size_t c) { return m_[r][c]; }

    Op2C adjoint() const;
    bool is_unitary(double tol = kTolerance) const;
    bool is_hermitian(double tol = kTolerance) const;

    friend Op2C operator*(const Op2C& a, const Op2C& b);
    friend Vec2C operator*(const Op2C& a, const Vec2C& v);

    friend bool operator==(const Op2C&, const Op2C&) = default;

private:
    std::array<std::array<Complex, 2>, 2> m_{};
};

double max_abs_diff(const Op2C& a, const Op2C& b);

/// |obj> ⊗ |probe> in object-major order.
Vec4C tensor(const Vec2C& obj, const Vec2C& probe);

/// (op ⊗ I)|s>. The result is not renormalized.
Vec4C apply_to_object(const Op2C& op, const Vec4C& s);

/// (I ⊗ op)|s>. The result is not renormalized.
Vec4C apply_to_probe(const Op2C& op, const Vec4C& s);

/// Probe vector left after projecting the object onto |obj>: (<obj| ⊗ I)|s>.
Vec2C object_conditional(const Vec2C& obj, const Vec4C& s);

}  // namespace unsharp
