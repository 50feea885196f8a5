#pragma once

#include "corner/linalg.hpp"

namespace corner {

/// Stress-free strain of variant i, i in {0,1,2,3}. Variant 0 is the
/// austenite (zero strain); variants 1..3 are the tetragonal distortions
/// diag(-2,1,1), diag(1,-2,1), diag(1,1,-2).
Mat3 variant_strain(int i);

/// Twin-plane normal b_ij for distinct i, j in {1,2,3}. Unit length.
Vec3 twin_normal(int i, int j);

/// Signature of the permutation (i, j, k) where k is the index distinct
/// from i and j.
int permutation_sign(int i, int j);

/// | 1/3 e(i) + 2/3 e(j) - 2 eps_ijk b_jk (.) b_kj |, zero for all six
/// ordered pairs (the habit-plane compatibility identity).
double habit_relation_residual(int i, int j);

/// Rank-one compatibility test for symmetric strains: A and B admit a
/// continuous displacement with a planar interface iff A - B = a (.) b.
struct CompatibilityResult {
    bool compatible = false;
    Vec3 a{}, b{};     // present iff compatible; sign-normalized on b
    double residual = 0.0;  // reconstruction error if compatible, |lambda_2| otherwise
};

CompatibilityResult compatibility_check(const Mat3& A, const Mat3& B, double tol = 1e-9);

/// Displacement gradients of the two-variant construction: e(D1) = e(i),
/// e(D2) = e(j), D1 - D2 rank one across the twin plane, and the mixture
/// DM = D1/3 + 2 D2/3 rank one across the habit plane.
struct ConstructionGradients {
    Mat3 D1, D2, DM;
    int minority = 1;    // variant carried by D1 (volume fraction 1/3)
    int majority = 2;    // variant carried by D2 (volume fraction 2/3)
    Vec3 habit_normal{};     // right vector of DM (table normal, unflipped)
    Vec3 habit_left{};       // left vector of DM: DM = 2 eps habit_left (x) habit_normal
    Vec3 twin_b_ij{}, twin_b_ji{};  // twin pair of the (minority, majority) variants
    int eps = 1;
};

/// The canonical gradients for habit normal b_32 (variants 1 and 2).
ConstructionGradients construction_gradients();

/// Gradients for an arbitrary habit normal +-b_kj from the table.
ConstructionGradients gradients_for_normal(const Vec3& n);

}  // namespace corner
