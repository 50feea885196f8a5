#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "corner/branching.hpp"

namespace corner {

/// Dense cubic occupancy grid in world coordinates; voxel (i,j,k) has center
/// origin + spacing * (i + 1/2, j + 1/2, k + 1/2).
struct VoxelSet {
    int nx = 0, ny = 0, nz = 0;
    Vec3 origin{};
    double spacing = 1.0;
    std::vector<std::uint8_t> bits;  // x fastest

    std::size_t index(int i, int j, int k) const {
        return std::size_t(i) + std::size_t(nx) * (std::size_t(j) + std::size_t(ny) * k);
    }
    bool at(int i, int j, int k) const {
        if (i < 0 || j < 0 || k < 0 || i >= nx || j >= ny || k >= nz) return false;
        return bits[index(i, j, k)] != 0;
    }
    Vec3 center(int i, int j, int k) const {
        return {origin.x + spacing * (i + 0.5), origin.y + spacing * (j + 0.5),
                origin.z + spacing * (k + 0.5)};
    }
    std::size_t count() const;
    double volume() const { return double(count()) * spacing * spacing * spacing; }
};

/// Rasterizes a predicate over [lo, hi], with `resolution` voxels across the
/// largest extent.
VoxelSet rasterize(const Vec3& lo, const Vec3& hi, int resolution,
                   const std::function<bool(const Vec3&)>& inside);

/// Occupancy of the martensite set of a layout (the corner-clipped slab).
VoxelSet voxelize_layout(const BranchingLayout& layout, int resolution);

/// Text header `VOX3 nx ny nz ox oy oz spacing` followed by nx*ny*nz bytes
/// (0/1), x fastest.
void write_vox(const VoxelSet& v, const std::string& path);
VoxelSet read_vox(const std::string& path);

}  // namespace corner
