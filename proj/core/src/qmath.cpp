#include "unsharp/qmath.hpp"

#include <algorithm>

namespace unsharp {

Op2C Op2C::rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c, -s, s, c};
}

Op2C Op2C::adjoint() const {
    return {std::conj(m_[0][0]), std::conj(m_[1][0]), std::conj(m_[0][1]), std::conj(m_[1][1])};
}

bool Op2C::is_unitary(double tol) const {
    return max_abs_diff(adjoint() * *this, identity()) <= tol;
}

bool Op2C::is_hermitian(double tol) const { return max_abs_diff(adjoint(), *this) <= tol; }

Op2C operator*(const Op2C& a, const Op2C& b) {
    Op2C r;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            r.m_[i][j] = a.m_[i][0] * b.m_[0][j] + a.m_[i][1] * b.m_[1][j];
        }
    }
    return r;
}

Vec2C operator*(const Op2C& a, const Vec2C& v) {
    return {a.m_[0][0] * v[0] + a.m_[0][1] * v[1], a.m_[1][0] * v[0] + a.m_[1][1] * v[1]};
}

double max_abs_diff(const Op2C& a, const Op2C& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    }
    return m;
}

Vec4C tensor(const Vec2C& obj, const Vec2C& probe) {
    return {obj[0] * probe[0], obj[0] * probe[1], obj[1] * probe[0], obj[1] * probe[1]};
}

Vec4C apply_to_object(const Op2C& op, const Vec4C& s) {
    Vec4C r;
    for (std::size_t p = 0; p < 2; ++p) {
        r[p] = op(0, 0) * s[p] + op(0, 1) * s[2 + p];
        r[2 + p] = op(1, 0) * s[p] + op(1, 1) * s[2 + p];
    }
    return r;
}

Vec4C apply_to_probe(const Op2C& op, const Vec4C& s) {
    Vec4C r;
    for (std::size_t o = 0; o < 2; ++o) {
        r[2 * o] = op(0, 0) * s[2 * o] + op(0, 1) * s[2 * o + 1];
        r[2 * o + 1] = op(1, 0) * s[2 * o] + op(1, 1) * s[2 * o + 1];
    }
    return r;
}

Vec2C object_conditional(const Vec2C& obj, const Vec4C& s) {
    const Complex o0 = std::conj(obj[0]);
    const Complex o1 = std::conj(obj[1]);
    return {o0 * s[0] + o1 * s[2], o0 * s[1] + o1 * s[3]};
}

}  // namespace unsharp
