#include "corner/corner.hpp"

#include <algorithm>
#include <cmath>

namespace corner {

bool CornerDomain::contains(const Vec3& x) const { return face_distance(x) >= 0.0; }

double CornerDomain::face_distance(const Vec3& x) const {
    Vec3 r = x - origin;
    double d = dot(face_normals[0], r);
    d = std::min(d, dot(face_normals[1], r));
    d = std::min(d, dot(face_normals[2], r));
    return d;
}

CornerDomain validate_corner(Vec3 a, Vec3 b, Vec3 c, Vec3 origin) {
    if (norm(a) < 1e-12 || norm(b) < 1e-12 || norm(c) < 1e-12)
        throw std::invalid_argument("corner vectors must be nonzero");
    a = normalized(a);
    b = normalized(b);
    c = normalized(c);

    double d = dot(cross(a, b), c);
    if (std::abs(d) < 1e-9) throw std::invalid_argument("corner vectors are coplanar");
    if (d < 0.0) std::swap(b, c);  // restore positive order

    CornerDomain dom;
    dom.a = a;
    dom.b = b;
    dom.c = c;
    dom.origin = origin;
    dom.basis = Mat3::from_cols(a, b, c);
    dom.inv_basis = inverse(dom.basis);
    // inward: the normal of face span(a,b) points toward c, etc.
    dom.face_normals[0] = normalized(cross(a, b));
    dom.face_normals[1] = normalized(cross(b, c));
    dom.face_normals[2] = normalized(cross(c, a));
    return dom;
}

double corner_mu(const CornerDomain& dom) {
    double m1 = dot(normalized(cross(dom.a, dom.b)), dom.c);
    double m2 = dot(normalized(cross(dom.b, dom.c)), dom.a);
    double m3 = dot(normalized(cross(dom.c, dom.a)), dom.b);
    return std::min({m1, m2, m3});
}

std::optional<Vec3> find_habit_normal(const CornerDomain& dom) {
    const std::array<std::pair<int, int>, 6> order = {
        std::pair{1, 2}, {3, 1}, {2, 3}, {2, 1}, {1, 3}, {3, 2}};
    for (auto [i, j] : order) {
        Vec3 m = twin_normal(i, j);
        double da = dot(dom.a, m), db = dot(dom.b, m), dc = dot(dom.c, m);
        if (da > 0.0 && db > 0.0 && dc > 0.0) return m;
        if (da < 0.0 && db < 0.0 && dc < 0.0) return -m;
    }
    return std::nullopt;
}

HabitFrame build_frame(const Vec3& n) {
    HabitFrame f;
    f.grads = gradients_for_normal(n);
    f.n = f.grads.habit_normal;

    const Vec3& twin = f.grads.twin_b_ji;
    f.b3 = normalized(cross(twin, f.n));
    f.b2 = normalized(cross(f.n, f.b3));
    f.b1 = normalized(cross(f.b3, twin));

    f.basis = Mat3::from_cols(f.b1, f.b2, f.b3);
    f.det_basis = det(f.basis);
    f.dual = inverse(f.basis);
    f.b1_dot_n = dot(f.b1, f.n);
    if (std::abs(f.b1_dot_n) < 1e-12)
        throw std::invalid_argument("degenerate habit frame");
    return f;
}

double cone_section_coefficient(const CornerDomain& dom, const Vec3& n) {
    double da = dot(dom.a, n), db = dot(dom.b, n), dc = dot(dom.c, n);
    if (da <= 0.0 || db <= 0.0 || dc <= 0.0)
        throw std::invalid_argument(
            "cone section is unbounded: habit normal fails the orientation condition");
    // The section {x.n <= t} is the tetrahedron with vertices at the origin
    // and (t/(a.n)) a, (t/(b.n)) b, (t/(c.n)) c.
    return std::abs(det(dom.basis)) / (6.0 * da * db * dc);
}

SlabPlacement place_slab(const CornerDomain& dom, const HabitFrame& frame, double V,
                         double margin) {
    if (V <= 0.0) throw std::invalid_argument("slab volume must be positive");
    double nu = cone_section_coefficient(dom, frame.n);

    SlabPlacement p;
    p.V = V;
    p.t = std::cbrt(V / nu);

    // Tetrahedron vertices of the slab in world coordinates.
    std::array<Vec3, 4> verts = {
        dom.origin,
        dom.origin + dom.a * (p.t / dot(dom.a, frame.n)),
        dom.origin + dom.b * (p.t / dot(dom.b, frame.n)),
        dom.origin + dom.c * (p.t / dot(dom.c, frame.n)),
    };

    // Anchor the chart on the habit plane, then shift laterally so the slab
    // sits centered inside [0,R]^2 in (y2, y3). Offsets along n are measured
    // from the cone vertex: the slab is { (x - origin).n <= t }.
    Vec3 z0 = dom.origin + frame.n * p.t;
    double y2min = 1e300, y2max = -1e300, y3min = 1e300, y3max = -1e300, y1min = 0.0;
    for (const Vec3& v : verts) {
        Vec3 y = frame.dual * (v - z0);
        y1min = std::min(y1min, y.x);
        y2min = std::min(y2min, y.y);
        y2max = std::max(y2max, y.y);
        y3min = std::min(y3min, y.z);
        y3max = std::max(y3max, y.z);
    }
    double depth = -y1min;
    double R = std::max({depth, y2max - y2min, y3max - y3min}) * (1.0 + margin);

    double shift2 = y2min - 0.5 * (R - (y2max - y2min));
    double shift3 = y3min - 0.5 * (R - (y3max - y3min));
    p.z_R = z0 + frame.b2 * shift2 + frame.b3 * shift3;
    p.R = R;
    p.bounding_c = R / std::cbrt(V);
    return p;
}

namespace {

// splitmix64; uniform doubles derived from the top 53 bits so the stream is
// identical on every platform.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

}  // namespace

VolumeEstimate estimate_volume(const CornerDomain& dom, const Vec3& n, double t,
                               std::size_t samples, std::uint64_t seed) {
    if (t <= 0.0) return {0.0, 0.0};
    double nu_check_a = dot(dom.a, n), nu_check_b = dot(dom.b, n), nu_check_c = dot(dom.c, n);
    if (nu_check_a <= 0.0 || nu_check_b <= 0.0 || nu_check_c <= 0.0)
        throw std::invalid_argument("estimate_volume: region is unbounded");

    std::array<Vec3, 4> verts = {
        dom.origin,
        dom.origin + dom.a * (t / nu_check_a),
        dom.origin + dom.b * (t / nu_check_b),
        dom.origin + dom.c * (t / nu_check_c),
    };
    Vec3 lo = verts[0], hi = verts[0];
    for (const Vec3& v : verts)
        for (int i = 0; i < 3; ++i) {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }
    Vec3 ext = hi - lo;
    double box_vol = ext.x * ext.y * ext.z;

    // Stratified sampling on a g^3 grid of jittered cells.
    std::size_t g = std::max<std::size_t>(1, static_cast<std::size_t>(std::cbrt(double(samples))));
    Rng rng(seed);
    std::size_t hits = 0, total = g * g * g;
    for (std::size_t ix = 0; ix < g; ++ix)
        for (std::size_t iy = 0; iy < g; ++iy)
            for (std::size_t iz = 0; iz < g; ++iz) {
                Vec3 x = {lo.x + ext.x * (double(ix) + rng.next_unit()) / double(g),
                          lo.y + ext.y * (double(iy) + rng.next_unit()) / double(g),
                          lo.z + ext.z * (double(iz) + rng.next_unit()) / double(g)};
                if (dom.contains(x) && dot(x - dom.origin, n) <= t) ++hits;
            }

    double p = double(hits) / double(total);
    VolumeEstimate est;
    est.volume = box_vol * p;
    est.std_error = box_vol * std::sqrt(std::max(p * (1.0 - p), 1.0 / double(total)) /
                                        double(total));
    return est;
}

}  // namespace corner
