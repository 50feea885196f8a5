#pragma once

#include <vector>

#include "corner/corner.hpp"

namespace corner {

/// Stripe geometry of one base-cell slice {y1 = const}. Breakpoints split
/// [0, w] into seven intervals; odd intervals carry the minority variant
/// (side stripes at w/6 and 5w/6, middle stripe at w/2), even intervals the
/// majority variant. Breakpoints move linearly in y1.
struct StripeSlice {
    std::array<double, 8> edge{};     // ascending, edge[0] = 0, edge[7] = w
    std::array<double, 8> edge_dy1{};  // d(edge)/d(y1)
};

StripeSlice stripe_slice(double y1, double w, double h);

/// Variant of the base-cell pattern at cell-local (y1, y2): 1 on the three
/// minority stripes, 2 elsewhere. Independent of y3.
int base_cell_variant(double y1, double y2, double w, double h);

/// Exact (minority, majority) length fractions of the slice at height y1;
/// (1/3, 2/3) for every slice.
std::pair<double, double> slice_fraction(double y1, double w, double h);

/// Self-similar refinement of the slab interior: generation i has cells of
/// width w_i = w / 3^i and height h_i = C1 w_i^(3/2); C1 is solved so the
/// generations exactly fill the depth R - 1 above the boundary layer.
struct BranchingSchedule {
    double R = 0.0;
    double w = 0.0;        // generation-0 width, R / K_side
    double C1 = 0.0;
    int K_side = 0;        // cylinders per side; K = K_side^2
    int M = 0;             // last generation index
    bool fallback = false;  // no (C1, M) satisfied the stop criterion
    std::vector<double> widths;    // size M+1
    std::vector<double> heights;   // size M+1
    std::vector<double> y1_edges;  // size M+2, from -R up to ~-1
};

BranchingSchedule build_schedule(double R);

/// Maximal trace disagreement between each generation's top slice and its
/// children's bottom slices, as a y2-length. Zero for every valid schedule;
/// child_shift displaces the children (test hook) and must break it.
double trace_mismatch(const BranchingSchedule& s, double child_shift = 0.0);

/// Phase indicator at a point: chi1/chi2/chi3 are the physical variant
/// indicators, pattern is the construction label (0 austenite, 1 minority
/// stripe or boundary layer, 2 majority stripe).
struct PhasePoint {
    int chi1 = 0, chi2 = 0, chi3 = 0;
    int pattern = 0;
    int sum() const { return chi1 + chi2 + chi3; }
};

/// Immutable cell decomposition of the martensite slab; all evaluations are
/// pure and safe for concurrent use.
struct BranchingLayout {
    HabitFrame frame;
    BranchingSchedule schedule;
    SlabPlacement placement;
    std::optional<CornerDomain> domain;
    bool clip = false;  // zero the fields outside Omega and the slab

    Vec3 to_chart(const Vec3& x) const { return frame.dual * (x - placement.z_R); }
    Vec3 from_chart(const Vec3& y) const {
        return placement.z_R + frame.b1 * y.x + frame.b2 * y.y + frame.b3 * y.z;
    }
};

/// Pattern-only layout over the chart box (no domain), habit normal b32.
BranchingLayout make_box_layout(double R);

/// Full pipeline for a corner and a volume: habit normal, frame, slab
/// placement, schedule. Throws if no habit plane cuts the corner.
BranchingLayout make_layout(const CornerDomain& dom, double V, bool clip = false);

/// Cell-local coordinates of an interior point.
struct CellRef {
    int gen = 0;
    double w = 0.0, h = 0.0;
    double y1_loc = 0.0, y2_loc = 0.0;
};

/// Locates the interior cell containing chart point y; false if y is not in
/// the interior region {-R <= y1 <= -1} x [0,R]^2.
bool locate_cell(const BranchingLayout& layout, const Vec3& y, CellRef& out);

PhasePoint chi_at(const BranchingLayout& layout, const Vec3& x);

}  // namespace corner
