#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "corner/linalg.hpp"

namespace corner {

/// Fractional occupancy of the two phase fields on a (possibly skewed) chart
/// grid: voxel (i,j,k) covers chart cell [i d1, (i+1) d1] x ... relative to
/// the grid corner; world point = corner + basis * chart.
struct FieldGrid {
    int n1 = 0, n2 = 0, n3 = 0;
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
    Mat3 basis = Mat3::identity();
    std::vector<float> phi1, phi2;

    std::size_t index(int i, int j, int k) const {
        return std::size_t(i) + std::size_t(n1) * (std::size_t(j) + std::size_t(n2) * k);
    }
};

/// Fills a FieldGrid by averaging a label sampler (0, 1 or 2 at a chart
/// point) over s1 x s2 x s3 sub-samples per voxel. chart_corner is the chart
/// coordinate of the grid corner. Deterministic fixed-chunk threading.
FieldGrid field_grid_from_sampler(int n1, int n2, int n3, double d1, double d2, double d3,
                                  const Mat3& basis, const Vec3& chart_corner,
                                  const std::function<int(const Vec3&)>& label_at,
                                  int s1 = 4, int s2 = 4, int s3 = 1);

/// Fills a FieldGrid from binary occupancy (field 1) with a 3^3 box filter,
/// for voxel data with no sub-voxel information.
FieldGrid field_grid_from_binary(int n1, int n2, int n3, double spacing,
                                 const std::vector<std::uint8_t>& bits);

/// Total-variation surface area by the co-area formula: the world-metric
/// integral of |grad phi| for both fields, so a 1|2 interface counts twice
/// and a phase|empty interface once. Exact for flat interfaces (monotone
/// profiles telescope); features below the voxel scale are undercounted.
/// The optional classifier maps a voxel to a bucket; returns per-bucket
/// areas.
std::vector<double> coarea_surface(const FieldGrid& grid,
                                   const std::function<int(int, int, int)>& bucket = {},
                                   int n_buckets = 1);

}  // namespace corner
