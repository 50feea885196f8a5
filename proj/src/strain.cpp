#include "corner/strain.hpp"

#include <cmath>
#include <string>

namespace corner {

Mat3 variant_strain(int i) {
    switch (i) {
        case 0: return Mat3::zero();
        case 1: return Mat3::diag(-2, 1, 1);
        case 2: return Mat3::diag(1, -2, 1);
        case 3: return Mat3::diag(1, 1, -2);
        default: throw std::invalid_argument("variant index must be in {0,1,2,3}");
    }
}

Vec3 twin_normal(int i, int j) {
    if (i == j || i < 1 || i > 3 || j < 1 || j > 3)
        throw std::invalid_argument("twin normal needs distinct indices in {1,2,3}");
    const double s = 1.0 / std::sqrt(2.0);
    if (i == 1 && j == 2) return {s, s, 0};
    if (i == 2 && j == 1) return {-s, s, 0};
    if (i == 3 && j == 1) return {s, 0, s};
    if (i == 1 && j == 3) return {s, 0, -s};
    if (i == 2 && j == 3) return {0, s, s};
    return {0, -s, s};  // (3,2)
}

int permutation_sign(int i, int j) {
    if (i == j || i < 1 || i > 3 || j < 1 || j > 3)
        throw std::invalid_argument("permutation sign needs distinct indices in {1,2,3}");
    // even permutations of (1,2,3): (1,2), (2,3), (3,1)
    return (j - i + 3) % 3 == 1 ? 1 : -1;
}

double habit_relation_residual(int i, int j) {
    int k = 6 - i - j;
    double eps = permutation_sign(i, j);
    Mat3 lhs = variant_strain(i) * (1.0 / 3.0) + variant_strain(j) * (2.0 / 3.0);
    Mat3 rhs = 2.0 * eps * sym_outer(twin_normal(j, k), twin_normal(k, j));
    return frobenius(lhs - rhs);
}

CompatibilityResult compatibility_check(const Mat3& A, const Mat3& B, double tol) {
    double input_scale = std::max({frobenius(A), frobenius(B), 1.0});
    if (frobenius(A - A.transpose()) > tol * input_scale ||
        frobenius(B - B.transpose()) > tol * input_scale)
        throw std::invalid_argument("compatibility_check expects symmetric inputs");

    Mat3 S = sym(A) - sym(B);
    double scale = frobenius(S);

    CompatibilityResult res;
    if (scale <= 1e-300) {
        res.compatible = true;  // A == B: a = b = 0
        return res;
    }

    SymEigen e = eigen_sym(S);
    double l1 = e.values[0], l2 = e.values[1], l3 = e.values[2];
    double thresh = tol * scale;

    if (std::abs(l2) > thresh || l1 > thresh || l3 < -thresh) {
        res.compatible = false;
        res.residual = std::abs(l2);
        return res;
    }

    double lo = std::max(-l1, 0.0);
    double hi = std::max(l3, 0.0);
    Vec3 a = std::sqrt(hi) * e.vectors[2] + std::sqrt(lo) * e.vectors[0];
    Vec3 b = std::sqrt(hi) * e.vectors[2] - std::sqrt(lo) * e.vectors[0];

    // deterministic sign: first nonzero component of b positive
    for (int i = 0; i < 3; ++i) {
        if (b[i] != 0.0) {
            if (b[i] < 0.0) {
                a = -a;
                b = -b;
            }
            break;
        }
    }

    res.compatible = true;
    res.a = a;
    res.b = b;
    res.residual = frobenius(S - sym_outer(a, b));
    return res;
}

namespace {

Mat3 skew_pair(const Vec3& u, const Vec3& v) { return outer(u, v) - outer(v, u); }

// Entries of the construction gradients are exact half-integers (integers for
// every pair, by cubic symmetry); snap away the rounding from the sqrt(2)
// products so the returned matrices are bit-exact.
Mat3 snap_half_integers(const Mat3& a) {
    Mat3 r = a;
    for (double& v : r.m) {
        double snapped = std::round(2.0 * v) / 2.0;
        if (std::abs(v - snapped) < 1e-9) v = snapped;
    }
    return r;
}

ConstructionGradients gradients_for_pair(int i, int j, double normal_sign) {
    int k = 6 - i - j;
    double eps = permutation_sign(i, j);
    Vec3 b_ij = twin_normal(i, j), b_ji = twin_normal(j, i);
    Vec3 b_jk = twin_normal(j, k), b_kj = twin_normal(k, j);

    // Skew parts chosen so that D1 - D2 = 6 eps b_ij (x) b_ji and
    // DM = D1/3 + 2 D2/3 = 2 eps b_jk (x) b_kj, both rank one.
    Mat3 Wj = eps * (skew_pair(b_jk, b_kj) - skew_pair(b_ij, b_ji));
    Mat3 Wi = Wj + 3.0 * eps * skew_pair(b_ij, b_ji);

    ConstructionGradients g;
    g.minority = i;
    g.majority = j;
    g.eps = static_cast<int>(eps);
    g.D1 = snap_half_integers(variant_strain(i) + Wi);
    g.D2 = snap_half_integers(variant_strain(j) + Wj);
    g.DM = snap_half_integers(g.D1 * (1.0 / 3.0) + g.D2 * (2.0 / 3.0));
    g.habit_normal = b_kj * normal_sign;
    g.habit_left = b_jk * normal_sign;  // DM = 2 eps habit_left (x) habit_normal still
    g.twin_b_ij = b_ij;
    g.twin_b_ji = b_ji;
    return g;
}

}  // namespace

ConstructionGradients construction_gradients() { return gradients_for_pair(1, 2, 1.0); }

ConstructionGradients gradients_for_normal(const Vec3& n) {
    for (int k = 1; k <= 3; ++k) {
        for (int j = 1; j <= 3; ++j) {
            if (j == k) continue;
            Vec3 b = twin_normal(k, j);
            double d = dot(normalized(n), b);
            if (std::abs(std::abs(d) - 1.0) < 1e-9) {
                int i = 6 - k - j;
                return gradients_for_pair(i, j, d > 0 ? 1.0 : -1.0);
            }
        }
    }
    throw std::invalid_argument("habit normal is not in the twin-normal table");
}

}  // namespace corner
