#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace rotorct {

using Vec2 = std::array<double, 2>;
using Cplx = std::complex<double>;
using CVec2 = std::array<Cplx, 2>;

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }
inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

/// 2x2 real matrix; as a velocity gradient the rows are (u_x, u_y) and (v_x, v_y).
struct Mat2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

    static Mat2 identity() { return {1, 0, 0, 1}; }
    /// 90-degree rotation generator J = [[0,1],[-1,0]]; J^{-1} = -J.
    static Mat2 rot90() { return {0, 1, -1, 0}; }

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    double frob_norm() const { return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22); }

    Vec2 apply(const Vec2& v) const { return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]}; }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2 scaled(double s) const { return {s * a11, s * a12, s * a21, s * a22}; }

    Mat2 inverse() const {
        const double dd = det();
        return {a22 / dd, -a12 / dd, -a21 / dd, a11 / dd};
    }
};

inline Mat2 operator*(double s, const Mat2& m) { return m.scaled(s); }

/// Eigen-decomposition of a 2x2 matrix with the bilinear normalization <l_i, r_i> = 1.
/// lambda2 - lambda1 is the principal square root of the discriminant, so for a real
/// matrix with complex spectrum lambda2 carries the positive imaginary part.
struct EigenDecomp {
    Cplx lambda1, lambda2;
    CVec2 l1, l2;  // left (row) eigenvectors
    CVec2 r1, r2;  // right (column) eigenvectors
};

/// Bilinear (unconjugated) pairing used throughout the eigenvector algebra.
inline Cplx pair(const CVec2& a, const CVec2& b) { return a[0] * b[0] + a[1] * b[1]; }

EigenDecomp eigen2(const Mat2& m);

/// The scaled eigenvector product <r2, J r1><l1, l2>; equals omega/eta for the
/// sign convention omega = u_y - v_x, eta = lambda2 - lambda1.
Cplx spectral_pairing_ratio(const Mat2& m);

} // namespace rotorct
