#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corner/corner.hpp"

using namespace corner;

namespace {

const Vec3 kA{1, 0, 1}, kB{0, 0, 1}, kC{0, -1, 0};  // worked corner, positive order

CornerDomain worked_corner() { return validate_corner(kA, kB, kC); }

}  // namespace

TEST_CASE("validate_corner accepts the coordinate axes") {
    CornerDomain d = validate_corner({1, 0, 0}, {0, 1, 0}, {0, 0, 1});
    CHECK(norm(d.a - Vec3{1, 0, 0}) == 0.0);
    CHECK(dot(cross(d.a, d.b), d.c) > 0.0);
    CHECK(d.contains({0.5, 0.2, 0.9}));
    CHECK_FALSE(d.contains({-0.1, 0.2, 0.9}));
}

TEST_CASE("validate_corner fixes parity by swapping") {
    CornerDomain d = validate_corner({1, 0, 0}, {0, 0, 1}, {0, 1, 0});
    CHECK(dot(cross(d.a, d.b), d.c) > 0.0);
    CHECK(norm(d.b - Vec3{0, 1, 0}) == 0.0);
    CHECK(norm(d.c - Vec3{0, 0, 1}) == 0.0);
}

TEST_CASE("validate_corner normalizes and rejects degenerate input") {
    CornerDomain d = validate_corner({2, 0, 0}, {0, 3, 0}, {0, 0, 0.5});
    CHECK(std::abs(norm(d.a) - 1.0) < 1e-12);
    CHECK(std::abs(norm(d.c) - 1.0) < 1e-12);

    CHECK_THROWS_AS(validate_corner({1, 0, 0}, {0, 1, 0}, normalized(Vec3{1, 1, 0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_corner({0, 0, 0}, {0, 1, 0}, {0, 0, 1}), std::invalid_argument);
}

TEST_CASE("mu of the orthonormal corner is 1") {
    CHECK(std::abs(corner_mu(validate_corner({1, 0, 0}, {0, 1, 0}, {0, 0, 1})) - 1.0) < 1e-12);
}

TEST_CASE("mu of the worked corner by direct triple products") {
    // terms: 1, 1/sqrt(2), 1/sqrt(2)
    CHECK(std::abs(corner_mu(worked_corner()) - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("mu scales linearly near a coplanar triple") {
    double mu_prev = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        Vec3 c = normalized(Vec3{std::cos(eps), std::sin(eps) * 0, std::sin(eps)});
        // c leaves span(a, b) = the xy-plane by angle eps
        CornerDomain d = validate_corner({1, 0, 0}, {0, 1, 0},
                                         {std::cos(eps), 0.0, std::sin(eps)});
        double mu = corner_mu(d);
        CHECK(mu > 0.0);
        CHECK(mu < 2.0 * eps);
        if (mu_prev > 0.0) CHECK(std::abs(mu_prev / mu - 10.0) < 0.5);
        mu_prev = mu;
        (void)c;
    }
}

TEST_CASE("mu stays in (0, 1] on random valid corners") {
    std::uint64_t state = 12345;
    auto rnd = [&]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return double(state >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    };
    int checked = 0;
    while (checked < 200) {
        Vec3 a{rnd(), rnd(), rnd()}, b{rnd(), rnd(), rnd()}, c{rnd(), rnd(), rnd()};
        if (norm(a) < 0.1 || norm(b) < 0.1 || norm(c) < 0.1) continue;
        if (std::abs(dot(cross(normalized(a), normalized(b)), normalized(c))) < 1e-3) continue;
        double mu = corner_mu(validate_corner(a, b, c));
        CHECK(mu > 0.0);
        CHECK(mu <= 1.0 + 1e-12);
        ++checked;
    }
}

TEST_CASE("coordinate corner admits no habit normal") {
    CHECK_FALSE(find_habit_normal(validate_corner({1, 0, 0}, {0, 1, 0}, {0, 0, 1})).has_value());
}

TEST_CASE("worked corner selects b32") {
    auto n = find_habit_normal(worked_corner());
    REQUIRE(n.has_value());
    CHECK(norm(*n - twin_normal(3, 2)) < 1e-15);
    CHECK(dot(worked_corner().a, *n) > 0.0);
    CHECK(dot(worked_corner().b, *n) > 0.0);
    CHECK(dot(worked_corner().c, *n) > 0.0);
}

TEST_CASE("negated corner returns the flipped normal") {
    CornerDomain neg = validate_corner(-1.0 * kA, -1.0 * kB, -1.0 * kC);
    auto n = find_habit_normal(neg);
    REQUIRE(n.has_value());
    CHECK(norm(*n + twin_normal(3, 2)) < 1e-15);
    CHECK(dot(neg.a, *n) > 0.0);
}

TEST_CASE("frame for b32 matches the hand-computed vectors") {
    HabitFrame f = build_frame(twin_normal(3, 2));
    CHECK(norm(f.b3 - normalized(Vec3{1, 1, 1})) < 1e-15);
    CHECK(norm(f.b2 - normalized(Vec3{-2, 1, 1})) < 1e-15);
    CHECK(norm(f.b1 - normalized(Vec3{-1, -1, 2})) < 1e-15);
    CHECK(std::abs(f.b1_dot_n - std::sqrt(3.0) / 2.0) < 1e-15);
    CHECK(std::abs(std::abs(f.det_basis) - std::sqrt(3.0) / 2.0) < 1e-15);
}

TEST_CASE("frame invariants hold for every habit normal") {
    for (int k = 1; k <= 3; ++k)
        for (int j = 1; j <= 3; ++j) {
            if (k == j) continue;
            HabitFrame f = build_frame(twin_normal(k, j));
            CHECK(std::abs(dot(f.b2, f.n)) < 1e-14);
            CHECK(std::abs(dot(f.b3, f.n)) < 1e-14);
            CHECK(frobenius(f.dual * f.basis - Mat3::identity()) < 1e-12);
            // (D - DM) b1 = 0: the frame direction is strain-free for both
            CHECK(norm((f.grads.D1 - f.grads.DM) * f.b1) < 1e-12);
            CHECK(norm((f.grads.D2 - f.grads.DM) * f.b1) < 1e-12);
            CHECK(norm((f.grads.D1 - f.grads.DM) * f.b3) < 1e-12);
        }
}

TEST_CASE("DM annihilates the habit plane directions") {
    HabitFrame f = build_frame(twin_normal(3, 2));
    std::uint64_t state = 99;
    auto rnd = [&]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return double(state >> 11) * 0x1.0p-53 * 20.0 - 10.0;
    };
    for (int i = 0; i < 1000; ++i) {
        Vec3 in_plane = f.b2 * rnd() + f.b3 * rnd();
        CHECK(norm(f.grads.DM * in_plane) < 1e-10);
    }
}

TEST_CASE("exact cone section matches the Monte-Carlo oracle on a simplex") {
    // first octant clipped by x+y+z <= 1 has volume 1/6
    CornerDomain d = validate_corner({1, 0, 0}, {0, 1, 0}, {0, 0, 1});
    Vec3 n = normalized(Vec3{1, 1, 1});
    double t = 1.0 / std::sqrt(3.0);

    double nu = cone_section_coefficient(d, n);
    CHECK(std::abs(nu * t * t * t - 1.0 / 6.0) < 1e-12);

    VolumeEstimate est = estimate_volume(d, n, t, 1000000, 42);
    CHECK(std::abs(est.volume - 1.0 / 6.0) <= 3.0 * est.std_error + 1e-6);
    CHECK(est.std_error < 0.01);
}

TEST_CASE("estimate_volume edge cases and scaling") {
    CornerDomain d = validate_corner({1, 0, 0}, {0, 1, 0}, {0, 0, 1});
    Vec3 n = normalized(Vec3{1, 1, 1});

    CHECK(estimate_volume(d, n, 0.0, 1000, 1).volume == 0.0);

    VolumeEstimate v1 = estimate_volume(d, n, 0.7, 500000, 7);
    VolumeEstimate v2 = estimate_volume(d, n, 1.4, 500000, 7);
    CHECK(std::abs(v2.volume / v1.volume - 8.0) < 0.2);

    // deterministic for a fixed seed
    VolumeEstimate v1b = estimate_volume(d, n, 0.7, 500000, 7);
    CHECK(v1.volume == v1b.volume);

    // unbounded section
    CHECK_THROWS_AS(estimate_volume(d, Vec3{1, 0, 0}, 1.0, 1000, 1), std::invalid_argument);
}

TEST_CASE("place_slab scales cubically and bounds the slab") {
    CornerDomain d = worked_corner();
    HabitFrame f = build_frame(*find_habit_normal(d));

    SlabPlacement p1 = place_slab(d, f, 1.0);
    SlabPlacement p8 = place_slab(d, f, 8.0);
    CHECK(std::abs(p8.t / p1.t - 2.0) < 1e-12);
    CHECK(std::abs(p8.R / p1.R - 2.0) < 1e-12);

    // volume re-check by Monte-Carlo
    VolumeEstimate est = estimate_volume(d, f.n, p1.t, 1000000, 11);
    CHECK(std::abs(est.volume - 1.0) <= 3.0 * est.std_error + 1e-3);

    // the slab tetrahedron sits inside the chart box
    std::array<Vec3, 4> verts = {
        d.origin,
        d.origin + d.a * (p1.t / dot(d.a, f.n)),
        d.origin + d.b * (p1.t / dot(d.b, f.n)),
        d.origin + d.c * (p1.t / dot(d.c, f.n)),
    };
    for (const Vec3& v : verts) {
        Vec3 y = f.dual * (v - p1.z_R);
        CHECK(y.x <= 1e-12);
        CHECK(y.x >= -p1.R - 1e-12);
        CHECK(y.y >= -1e-12);
        CHECK(y.y <= p1.R + 1e-12);
        CHECK(y.z >= -1e-12);
        CHECK(y.z <= p1.R + 1e-12);
    }

    // z_R lies on the habit plane
    CHECK(std::abs(dot(p1.z_R - d.origin, f.n) - p1.t) < 1e-12);
    CHECK(p1.bounding_c > 0.0);
    CHECK(p1.R <= p1.bounding_c * std::cbrt(p1.V) + 1e-12);

    CHECK_THROWS_AS(place_slab(d, f, -1.0), std::invalid_argument);
}

TEST_CASE("place_slab refuses the degenerate corner") {
    CornerDomain d = validate_corner({1, 0, 0}, {0, 1, 0}, {0, 0, 1});
    HabitFrame f = build_frame(twin_normal(3, 2));
    CHECK_THROWS(place_slab(d, f, 1.0));
}

TEST_CASE("cone scaling holds for the measured slab volume") {
    CornerDomain d = worked_corner();
    HabitFrame f = build_frame(*find_habit_normal(d));
    double nu = cone_section_coefficient(d, f.n);
    for (double t : {0.5, 1.0, 2.0}) {
        VolumeEstimate est = estimate_volume(d, f.n, t, 600000, 3);
        CHECK(std::abs(est.volume / (t * t * t) - nu) <= 3.0 * est.std_error / (t * t * t) + 1e-3);
    }
}
