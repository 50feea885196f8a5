#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace corner {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& u, const Vec3& v) { return u.x * v.x + u.y * v.y + u.z * v.z; }

inline Vec3 cross(const Vec3& u, const Vec3& v) {
    return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) {
    double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    return v / n;
}

/// Dense 3x3 matrix, row-major.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(int i, int j) { return m[3 * i + j]; }
    double operator()(int i, int j) const { return m[3 * i + j]; }

    static Mat3 zero() { return {}; }

    static Mat3 identity() {
        Mat3 a;
        a(0, 0) = a(1, 1) = a(2, 2) = 1.0;
        return a;
    }

    static Mat3 diag(double a, double b, double c) {
        Mat3 d;
        d(0, 0) = a;
        d(1, 1) = b;
        d(2, 2) = c;
        return d;
    }

    static Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
        Mat3 a;
        for (int j = 0; j < 3; ++j) {
            a(0, j) = r0[j];
            a(1, j) = r1[j];
            a(2, j) = r2[j];
        }
        return a;
    }

    static Mat3 from_cols(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        Mat3 a;
        for (int i = 0; i < 3; ++i) {
            a(i, 0) = c0[i];
            a(i, 1) = c1[i];
            a(i, 2) = c2[i];
        }
        return a;
    }

    Vec3 row(int i) const { return {(*this)(i, 0), (*this)(i, 1), (*this)(i, 2)}; }
    Vec3 col(int j) const { return {(*this)(0, j), (*this)(1, j), (*this)(2, j)}; }

    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (int k = 0; k < 9; ++k) r.m[k] = m[k] + o.m[k];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (int k = 0; k < 9; ++k) r.m[k] = m[k] - o.m[k];
        return r;
    }
    Mat3 operator*(double s) const {
        Mat3 r;
        for (int k = 0; k < 9; ++k) r.m[k] = m[k] * s;
        return r;
    }
    Mat3& operator+=(const Mat3& o) {
        for (int k = 0; k < 9; ++k) m[k] += o.m[k];
        return *this;
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat3 transpose() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    double trace() const { return m[0] + m[4] + m[8]; }
};

inline Mat3 operator*(double s, const Mat3& a) { return a * s; }

inline double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

inline Mat3 inverse(const Mat3& a) {
    double d = det(a);
    if (d == 0.0) throw std::invalid_argument("singular matrix");
    Mat3 r;
    r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / d;
    r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / d;
    r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / d;
    r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / d;
    r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / d;
    r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / d;
    r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / d;
    r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / d;
    r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / d;
    return r;
}

inline Mat3 outer(const Vec3& u, const Vec3& v) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = u[i] * v[j];
    return r;
}

/// Symmetrized tensor product u (.) v = (u (x) v + v (x) u) / 2.
inline Mat3 sym_outer(const Vec3& u, const Vec3& v) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (u[i] * v[j] + v[i] * u[j]);
    return r;
}

/// Symmetric part e(A) = (A^t + A) / 2.
inline Mat3 sym(const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (a(i, j) + a(j, i));
    return r;
}

inline double frobenius_inner(const Mat3& a, const Mat3& b) {
    double s = 0.0;
    for (int k = 0; k < 9; ++k) s += a.m[k] * b.m[k];
    return s;
}

inline double frobenius(const Mat3& a) { return std::sqrt(frobenius_inner(a, a)); }

/// Eigen-decomposition of a symmetric 3x3 matrix, eigenvalues ascending.
/// Cyclic Jacobi; deterministic for identical input. Eigenvector signs are
/// canonicalized so the first component of largest magnitude is positive.
struct SymEigen {
    std::array<double, 3> values{};
    std::array<Vec3, 3> vectors{};
};

SymEigen eigen_sym(const Mat3& a);

}  // namespace corner
