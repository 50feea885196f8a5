#pragma once

#include "corner/branching.hpp"

namespace corner {

/// Constant slopes of the microscopic displacement along b2 inside the two
/// stripe types, both parallel to the twin vector b_ij, with zero slice mean
/// (minority/3 + 2 majority/3 = 0) so the field vanishes on both cell walls.
struct CellField {
    Vec3 slope_minority{}, slope_majority{};  // (D1 - DM) b2 and (D2 - DM) b2
    double c_minority = 0.0, c_majority = 0.0;  // signed magnitudes along twin_b_ij
};

CellField cell_field_constants(const HabitFrame& frame);

/// Scalar profile of the microscopic displacement on a slice: the integral
/// of the stripe slope over [0, y2], and its derivatives. The y1 derivative
/// comes from differentiating the moving breakpoints (exact, not numeric).
double u_profile(const StripeSlice& sl, double y2, double c_min, double c_maj);
double du_profile_dy1(const StripeSlice& sl, double y2, double c_min, double c_maj);
double du_profile_dy2(const StripeSlice& sl, double y2, double c_min, double c_maj);

/// Microscopic displacement at an interior point; zero on the cell walls
/// {y2 in {0, w}} and continuous across all cell faces. Throws outside the
/// interior cell region.
Vec3 u_micro_at(const BranchingLayout& layout, const Vec3& x);

/// Gradient of the microscopic field, assembled against the dual frame:
/// grad = (du/dy1) (x) b^1 + (du/dy2) (x) b^2. On a stripe interface the
/// smaller-y2 side is reported.
Mat3 grad_u_micro_at(const BranchingLayout& layout, const Vec3& x);

struct DisplacementSample {
    Vec3 u{};
    Mat3 grad{};
};

/// Total displacement: zero in the austenite and outside the slab,
/// u_micro + DM (x - z_R) in the interior (the macroscopic part vanishes on
/// the habit plane), and the linear blend (-y1) tau(y2) in the boundary
/// layer so that u = 0 on {y1 = 0} and u is continuous at {y1 = -1}.
DisplacementSample u_total_at(const BranchingLayout& layout, const Vec3& x);

}  // namespace corner
