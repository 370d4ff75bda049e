#pragma once

#include <cmath>
#include <complex>

// Real quaternion q = w + x*i + y*j + z*k with the Hamilton relations
//   i^2 = j^2 = k^2 = ijk = -1,  ij = -ji = k.
// Stored as four doubles; the symplectic (Cayley-Dickson) view q = z + zeta*j
// with complex z = w + x*i, zeta = y + z*i is provided for interop with
// complex-valued code.  Note j*z = conj(z)*j, so the complex factor must stay
// on the left of j.

namespace qqm {

struct Quaternion {
    double w = 0.0;  // scalar part
    double x = 0.0;  // i component
    double y = 0.0;  // j component
    double z = 0.0;  // k component

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_)
        : w(w_), x(x_), y(y_), z(z_) {}

    static constexpr Quaternion real(double a) { return {a, 0.0, 0.0, 0.0}; }

    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Quaternion& operator*=(double a) {
        w *= a; x *= a; y *= a; z *= a;
        return *this;
    }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }

// Hamilton product (componentwise expansion of the basis table).
constexpr Quaternion qmul(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return qmul(a, b);
}

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

constexpr double norm_sq(const Quaternion& q) {
    return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}

inline double norm(const Quaternion& q) { return std::sqrt(norm_sq(q)); }

// Magnitude of the non-scalar (imaginary) part.
inline double imag_norm(const Quaternion& q) {
    return std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
}

constexpr Quaternion basis_i() { return {0.0, 1.0, 0.0, 0.0}; }
constexpr Quaternion basis_j() { return {0.0, 0.0, 1.0, 0.0}; }
constexpr Quaternion basis_k() { return {0.0, 0.0, 0.0, 1.0}; }

// [i, q] and {i, q}; the i-commutator isolates twice the j/k block, the
// i-anticommutator twice the complex block scaled by i.
constexpr Quaternion commutator_i(const Quaternion& q) {
    return qmul(basis_i(), q) - qmul(q, basis_i());
}
constexpr Quaternion anticommutator_i(const Quaternion& q) {
    return qmul(basis_i(), q) + qmul(q, basis_i());
}

// Symplectic split q = z + zeta*j.
struct SymplecticPair {
    std::complex<double> z;     // w + x*i
    std::complex<double> zeta;  // y + z*i
};

inline SymplecticPair to_symplectic(const Quaternion& q) {
    return {{q.w, q.x}, {q.y, q.z}};
}

inline Quaternion from_symplectic(const SymplecticPair& s) {
    return {s.z.real(), s.z.imag(), s.zeta.real(), s.zeta.imag()};
}

// Embed a complex number as a quaternion with zero j,k parts.
inline Quaternion from_complex(const std::complex<double>& c) {
    return {c.real(), c.imag(), 0.0, 0.0};
}

}  // namespace qqm
