#pragma once

#include "corner/corner.hpp"
#include "corner/voxel.hpp"

namespace corner {

struct Ball {
    Vec3 center{};
    double radius = 0.0;
};

/// Centers of occupied voxels whose cubic window ((2r+1)^3, clipped to the
/// grid) has occupancy fraction >= threshold: discrete proxies for density
/// points of the set.
std::vector<Vec3> density_points(const VoxelSet& set, int window, double threshold = 0.99);

/// x-directed prefix sums of the occupancy, for O(r^2) ball counting.
struct VoxelPrefix {
    const VoxelSet* set = nullptr;
    std::vector<std::uint32_t> prefix;  // prefix[index(i,j,k)] = count over [0..i]
    explicit VoxelPrefix(const VoxelSet& s);

    /// occupied voxel centers and total lattice centers inside the ball
    std::pair<std::size_t, std::size_t> ball_counts(const Vec3& center, double radius) const;
};

/// Occupied fraction f(t) of the kappa-shrunk ball B(x + t d, kappa (r0 + mu t)),
/// d = a + b + c. The enclosing ball B(x + t d, r0 + mu t) must stay inside
/// the corner; a violation throws.
double dilation_fraction(const VoxelSet& set, const VoxelPrefix& prefix,
                         const CornerDomain& dom, const Vec3& x0, double r0, double t,
                         double kappa);

struct BandTime {
    double t = 0.0;
    double fraction = 0.0;
};

/// Walks outward along a + b + c until the shrunk-ball fraction lands in
/// [1/10, 9/10]: doubles the step to bracket, then bisects to sub-voxel size.
/// Requires f(0) >= 1/10.
BandTime find_band_time(const VoxelSet& set, const VoxelPrefix& prefix,
                        const CornerDomain& dom, const Vec3& x0, double r0, double kappa);

/// Greedy disjoint subfamily by decreasing radius (ties by center, then
/// input order); the 5x enlargements of the kept balls cover every candidate.
std::vector<Ball> vitali_select(const std::vector<Ball>& candidates);

struct CoveringReport {
    std::vector<Ball> balls;             // core balls B(x_i, r_i)
    std::vector<double> fractions;       // kappa-ball occupancy per ball
    double kappa = 0.0;
    double mu = 0.0;
    bool disjoint_ok = false;
    bool inside_ok = false;   // every core ball inside the corner
    bool coverage_ok = false;  // 15/mu enlargements cover >= 99% of the set
    bool fraction_ok = false;  // kappa-ball fractions in the widened band
    double covered_fraction = 0.0;
    double sum_r3 = 0.0;
    double proxy_sum_r73 = 0.0;  // sum r^(7/3) >= (sum r^3)^(7/9)
    double volume = 0.0;         // |M| of the input set
    double c_lower = 0.0;        // sum_r3 / volume
    std::vector<std::string> warnings;
};

struct CertifyOptions {
    int window = 2;
    double density_threshold = 0.99;
    std::size_t max_seeds = 10000;
    double coverage_target = 0.99;
};

/// Full pipeline: density points -> band times -> candidate family enlarged
/// by 3/mu -> greedy disjoint selection -> verification of disjointness,
/// containment, coverage by the 15/mu enlargements, and the per-ball
/// fraction band.
CoveringReport certify(const VoxelSet& set, const CornerDomain& dom, double kappa = 0.25,
                       const CertifyOptions& options = {});

}  // namespace corner
