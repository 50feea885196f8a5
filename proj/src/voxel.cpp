#include "corner/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace corner {

std::size_t VoxelSet::count() const {
    std::size_t c = 0;
    for (std::uint8_t b : bits) c += b != 0;
    return c;
}

VoxelSet rasterize(const Vec3& lo, const Vec3& hi, int resolution,
                   const std::function<bool(const Vec3&)>& inside) {
    if (resolution < 1) throw std::invalid_argument("resolution must be at least 1");
    Vec3 ext = hi - lo;
    double max_ext = std::max({ext.x, ext.y, ext.z});
    if (max_ext <= 0.0) throw std::invalid_argument("rasterize: empty bounding box");

    VoxelSet v;
    v.spacing = max_ext / resolution;
    v.nx = std::max(1, static_cast<int>(std::ceil(ext.x / v.spacing - 1e-9)));
    v.ny = std::max(1, static_cast<int>(std::ceil(ext.y / v.spacing - 1e-9)));
    v.nz = std::max(1, static_cast<int>(std::ceil(ext.z / v.spacing - 1e-9)));
    v.origin = lo;
    v.bits.assign(std::size_t(v.nx) * v.ny * v.nz, 0);

    for (int k = 0; k < v.nz; ++k)
        for (int j = 0; j < v.ny; ++j)
            for (int i = 0; i < v.nx; ++i)
                if (inside(v.center(i, j, k))) v.bits[v.index(i, j, k)] = 1;
    return v;
}

VoxelSet voxelize_layout(const BranchingLayout& layout, int resolution) {
    if (!layout.domain)
        throw std::invalid_argument("voxelize_layout needs a layout with a corner domain");
    const CornerDomain& dom = *layout.domain;
    const Vec3 n = layout.frame.n;
    const double t = layout.placement.t;

    // bounding box of the slab tetrahedron
    std::array<Vec3, 4> verts = {
        dom.origin,
        dom.origin + dom.a * (t / dot(dom.a, n)),
        dom.origin + dom.b * (t / dot(dom.b, n)),
        dom.origin + dom.c * (t / dot(dom.c, n)),
    };
    Vec3 lo = verts[0], hi = verts[0];
    for (const Vec3& v : verts)
        for (int i = 0; i < 3; ++i) {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }

    return rasterize(lo, hi, resolution, [&](const Vec3& x) {
        return dom.contains(x) && dot(x - dom.origin, n) <= t;
    });
}

void write_vox(const VoxelSet& v, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(f, "VOX3 %d %d %d %.17g %.17g %.17g %.17g\n", v.nx, v.ny, v.nz, v.origin.x,
                 v.origin.y, v.origin.z, v.spacing);
    std::size_t n = v.bits.size();
    if (std::fwrite(v.bits.data(), 1, n, f) != n) {
        std::fclose(f);
        throw std::runtime_error("short write: " + path);
    }
    std::fclose(f);
}

VoxelSet read_vox(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open: " + path);
    VoxelSet v;
    char magic[8] = {};
    if (std::fscanf(f, "%7s %d %d %d %lg %lg %lg %lg", magic, &v.nx, &v.ny, &v.nz,
                    &v.origin.x, &v.origin.y, &v.origin.z, &v.spacing) != 8 ||
        std::string(magic) != "VOX3" || v.nx < 1 || v.ny < 1 || v.nz < 1 || v.spacing <= 0) {
        std::fclose(f);
        throw std::runtime_error("not a VOX3 file: " + path);
    }
    std::fgetc(f);  // newline after the header
    std::size_t n = std::size_t(v.nx) * v.ny * v.nz;
    v.bits.resize(n);
    if (std::fread(v.bits.data(), 1, n, f) != n) {
        std::fclose(f);
        throw std::runtime_error("truncated VOX3 file: " + path);
    }
    std::fclose(f);
    for (auto& b : v.bits) b = b ? 1 : 0;
    return v;
}

}  // namespace corner
