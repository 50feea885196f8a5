#pragma once

#include <cstdint>
#include <optional>

#include "corner/strain.hpp"

namespace corner {

/// Infinite cone spanned by three unit vectors in positive order,
/// Omega = { alpha a + beta b + gamma c : alpha, beta, gamma >= 0 }.
struct CornerDomain {
    Vec3 a, b, c;
    Vec3 origin{};
    Mat3 basis;           // columns a, b, c
    Mat3 inv_basis;       // maps x - origin to cone coordinates
    std::array<Vec3, 3> face_normals{};  // inward unit normals of the three faces

    bool contains(const Vec3& x) const;
    /// Distance from x to the nearest face plane (negative outside).
    double face_distance(const Vec3& x) const;
};

/// Normalizes the spanning vectors and swaps the last two if needed to get
/// positive order. Throws on zero vectors or a coplanar triple.
CornerDomain validate_corner(Vec3 a, Vec3 b, Vec3 c, Vec3 origin = {});

/// mu = min of the three normalized triple products; in (0, 1], and 1 only
/// for an orthonormal corner.
double corner_mu(const CornerDomain& dom);

/// Scans the six twin normals in table order (b12, b31, b23, b21, b13, b32)
/// for one whose dot products with a, b, c are all strictly positive or all
/// strictly negative; returns it flipped to the all-positive orientation.
/// Empty when no habit plane cuts the corner (e.g. the coordinate corner).
std::optional<Vec3> find_habit_normal(const CornerDomain& dom);

/// Construction frame for a habit normal n: b3 = twin x n, b2 = n x b3
/// (both spanning the habit plane), b1 transverse with (D - DM) b1 = 0.
/// Coordinates are basis coordinates: x = z + y1 b1 + y2 b2 + y3 b3, so
/// {y1 = 0} is exactly the habit plane.
struct HabitFrame {
    Vec3 n;
    Vec3 b1, b2, b3;
    Mat3 basis;   // columns b1, b2, b3
    Mat3 dual;    // inverse of basis; rows are the dual vectors b^1, b^2, b^3
    ConstructionGradients grads;
    double b1_dot_n = 0.0;
    double det_basis = 0.0;  // signed; |det| is the chart volume factor
};

HabitFrame build_frame(const Vec3& n);

/// Martensite slab Omega cut by { x.n <= t } of prescribed volume, with the
/// chart box that contains it: slab inside z_R + { -R <= y1 <= 0,
/// 0 <= y2 <= R, 0 <= y3 <= R }.
struct SlabPlacement {
    double V = 0.0;
    double t = 0.0;       // habit-plane offset
    double R = 0.0;       // box sidelength
    Vec3 z_R{};           // chart origin, on the habit plane
    double bounding_c = 0.0;  // reported R / V^(1/3)
};

/// Exact coefficient nu with |Omega cut by {x.n <= t}| = nu t^3. The section
/// is a tetrahedron when the orientation condition holds; throws otherwise.
double cone_section_coefficient(const CornerDomain& dom, const Vec3& n);

SlabPlacement place_slab(const CornerDomain& dom, const HabitFrame& frame, double V,
                         double margin = 0.01);

struct VolumeEstimate {
    double volume = 0.0;
    double std_error = 0.0;
};

/// Stratified Monte-Carlo estimate of |Omega cut by {x.n <= t}| over the
/// bounding box of the section. Deterministic for fixed seed.
VolumeEstimate estimate_volume(const CornerDomain& dom, const Vec3& n, double t,
                               std::size_t samples, std::uint64_t seed);

}  // namespace corner
