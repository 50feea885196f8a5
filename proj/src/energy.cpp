#include "corner/energy.hpp"

#include <cmath>
#include <numbers>
#include <thread>

namespace corner {

double cell_energy_bound(double w, double h) {
    if (w <= 0.0 || h <= 0.0) throw std::invalid_argument("cell dimensions must be positive");
    return h * w + w * w * w * w / h;
}

namespace {

// e-norm factor of a rank-one gradient v (x) g for unit v:
// |e(v (x) g)|^2 = (|g|^2 + (v.g)^2) / 2.
double rank_one_sym_factor(const Vec3& v, const Vec3& g) {
    return 0.5 * (dot(g, g) + dot(v, g) * dot(v, g));
}

}  // namespace

double per_cell_elastic_exact(const HabitFrame& frame, double w, double h) {
    CellField f = cell_field_constants(frame);
    Vec3 dual1 = frame.dual.row(0);
    double q = rank_one_sym_factor(frame.grads.twin_b_ij, dual1);

    StripeSlice bottom = stripe_slice(0.0, w, h);
    StripeSlice mid = stripe_slice(0.5 * h, w, h);

    // The tilt derivative is constant in y1 on each of the seven regions;
    // region lengths are linear in y1.
    double acc = 0.0;
    for (int k = 0; k < 7; ++k) {
        double y2_probe = 0.5 * (mid.edge[k] + mid.edge[k + 1]);
        double kappa = du_profile_dy1(mid, y2_probe, f.c_minority, f.c_majority);
        double len0 = bottom.edge[k + 1] - bottom.edge[k];
        double dlen = bottom.edge_dy1[k + 1] - bottom.edge_dy1[k];
        acc += kappa * kappa * (len0 * h + 0.5 * dlen * h * h);
    }
    return q * std::abs(frame.det_basis) * w * acc;
}

double per_cell_wall_area(const HabitFrame& frame, double w, double h) {
    StripeSlice sl = stripe_slice(0.5 * h, w, h);
    double area = 0.0;
    for (int k = 1; k < 7; ++k) {
        Vec3 tangent1 = frame.b1 + frame.b2 * sl.edge_dy1[k];
        area += w * h * norm(cross(tangent1, frame.b3));
    }
    return area;
}

namespace {

struct LayerAccounting {
    double elastic = 0.0;
    double face_area = 0.0;  // single-count pattern-change area at y1 = -1
};

// Exact boundary-layer energy: u = (-y1) tau(y2) with tau the interior trace
// at y1 = -1, integrated piece by piece over the last-generation top slice.
LayerAccounting layer_energy_exact(const BranchingLayout& layout) {
    const BranchingSchedule& s = layout.schedule;
    const HabitFrame& frame = layout.frame;
    double wM = s.widths[s.M], hM = s.heights[s.M];
    double R = s.R;

    CellField f = cell_field_constants(frame);
    StripeSlice top = stripe_slice(hM, wM, hM);
    const Vec3 bij = frame.grads.twin_b_ij;
    const Vec3 dual1 = frame.dual.row(0), dual2 = frame.dual.row(1);
    const Mat3 e_min = variant_strain(frame.grads.minority);
    const Vec3 macro = frame.grads.DM * (frame.b1 * -1.0);  // DM part of the trace

    double cell_integral = 0.0;  // over one cell width, unit y3, y1 in [-1,0]
    double minority_len = 0.0;
    for (int k = 0; k < 7; ++k) {
        double lo = top.edge[k], hi = top.edge[k + 1];
        double L = hi - lo;
        if (L <= 0.0) continue;
        if (k % 2 == 1) minority_len += L;
        double c = (k % 2 == 1) ? f.c_minority : f.c_majority;

        Vec3 tau0 = bij * u_profile(top, lo, f.c_minority, f.c_majority) + macro;
        // E(xi, eta) = A + xi B + eta C on xi in [0,L], eta = -y1 in [0,1]
        Mat3 A = sym(outer(-1.0 * tau0, dual1)) - e_min;
        Mat3 B = sym(outer(bij * -c, dual1));
        Mat3 C = sym(outer(bij * c, dual2));

        double aa = frobenius_inner(A, A), bb = frobenius_inner(B, B),
               cc = frobenius_inner(C, C), ab = frobenius_inner(A, B),
               ac = frobenius_inner(A, C), bc = frobenius_inner(B, C);
        cell_integral += L * aa + L * L * L / 3.0 * bb + L / 3.0 * cc + L * L * ab +
                         L * ac + 0.5 * L * L * bc;
    }

    double cells_per_row = R / wM;
    LayerAccounting out;
    out.elastic = std::abs(frame.det_basis) * R * cells_per_row * cell_integral;
    // chi jumps from the fine pattern to (minority = 1) on the majority part
    out.face_area = (1.0 - minority_len / wM) * R * R;
    return out;
}

}  // namespace

EnergyBreakdown total_energy_analytic(const BranchingLayout& layout) {
    const BranchingSchedule& s = layout.schedule;
    EnergyBreakdown e;
    e.method = "analytic";
    e.R = s.R;
    e.V = layout.placement.V;
    if (s.fallback)
        e.warnings.push_back("schedule fallback: single unbranched generation (R close to 1)");

    double K = double(s.K_side) * double(s.K_side);
    double count = 1.0;
    for (int i = 0; i <= s.M; ++i, count *= 9.0) {
        e.interior_elastic +=
            K * count * per_cell_elastic_exact(layout.frame, s.widths[i], s.heights[i]);
        e.interior_interfacial +=
            K * count * 2.0 * per_cell_wall_area(layout.frame, s.widths[i], s.heights[i]);
    }

    LayerAccounting layer = layer_energy_exact(layout);
    e.layer_elastic = layer.elastic;
    e.layer_interfacial = 2.0 * layer.face_area;  // both chi fields jump there
    e.austenite_face = s.R * s.R;                 // single jump to the austenite
    e.finalize();
    return e;
}

double interfacial_energy_analytic(const BranchingLayout& layout) {
    return total_energy_analytic(layout).interfacial;
}

EnergyBreakdown small_volume_energy(double V, const CornerDomain& dom) {
    if (V <= 0.0) throw std::invalid_argument("volume must be positive");
    EnergyBreakdown e;
    e.method = "analytic";
    e.V = V;
    if (V > 1.0) e.warnings.push_back("V > 1: the branching construction is the intended path");

    double r = std::cbrt(3.0 * V / (4.0 * std::numbers::pi));
    e.R = r;

    // center on the cone axis, far enough in that the ball fits
    Vec3 axis = dom.a + dom.b + dom.c;
    Vec3 center = dom.origin + axis * (2.0 * r / corner_mu(dom));
    if (dom.face_distance(center) < r)
        throw std::runtime_error("ball of the requested volume does not fit in the corner");

    e.interior_interfacial = 4.0 * std::numbers::pi * r * r;
    e.interior_elastic = frobenius_inner(variant_strain(1), variant_strain(1)) * V;  // u = 0
    e.finalize();
    return e;
}

double elastic_energy_quadrature(const BranchingLayout& layout, const QuadratureGrid& grid,
                                 double* layer_part) {
    const double R = layout.schedule.R;
    const double dx1 = R / grid.n1, dx2 = R / grid.n2, dx3 = R / grid.n3;
    const double dvol = std::abs(layout.frame.det_basis) * dx1 * dx2 * dx3;
    const Mat3 strains[4] = {Mat3::zero(), variant_strain(1), variant_strain(2),
                             variant_strain(3)};

    const int chunks = 8;
    std::array<double, 8> sums{}, layer_sums{};
    auto work = [&](int chunk) {
        double acc = 0.0, acc_layer = 0.0;
        for (int i1 = chunk; i1 < grid.n1; i1 += chunks) {
            double y1 = -R + (i1 + grid.offset) * dx1;
            for (int i2 = 0; i2 < grid.n2; ++i2) {
                double y2 = (i2 + grid.offset) * dx2;
                for (int i3 = 0; i3 < grid.n3; ++i3) {
                    double y3 = (i3 + grid.offset) * dx3;
                    Vec3 x = layout.from_chart({y1, y2, y3});
                    PhasePoint chi = chi_at(layout, x);
                    DisplacementSample u = u_total_at(layout, x);
                    Mat3 mismatch = sym(u.grad);
                    if (chi.chi1) mismatch = mismatch - strains[1];
                    if (chi.chi2) mismatch = mismatch - strains[2];
                    if (chi.chi3) mismatch = mismatch - strains[3];
                    double val = frobenius_inner(mismatch, mismatch);
                    acc += val;
                    if (y1 >= -1.0) acc_layer += val;
                }
            }
        }
        sums[std::size_t(chunk)] = acc * dvol;
        layer_sums[std::size_t(chunk)] = acc_layer * dvol;
    };

    std::vector<std::thread> pool;
    for (int c = 0; c < chunks; ++c) pool.emplace_back(work, c);
    for (auto& t : pool) t.join();

    double total = 0.0, layer = 0.0;
    for (int c = 0; c < chunks; ++c) {
        total += sums[std::size_t(c)];
        layer += layer_sums[std::size_t(c)];
    }
    if (layer_part) *layer_part = layer;
    return total;
}

double interfacial_energy_grid(const BranchingLayout& layout, const QuadratureGrid& grid,
                               std::vector<std::string>* warnings, double* wall_part,
                               double* layer_face_part, double* austenite_face_part) {
    const BranchingSchedule& s = layout.schedule;
    const double R = s.R;
    const double dx1 = R / grid.n1, dx2 = R / grid.n2, dx3 = R / grid.n3;

    double finest_stripe = s.widths[s.M] / 9.0;
    if (dx2 > finest_stripe / 8.0 && warnings)
        warnings->push_back("grid resolution below 8 voxels across the finest stripe");

    // pad a few voxel layers of austenite above y1 = 0 so the face gradient
    // is fully inside the grid
    const int pad = 3;
    FieldGrid g = field_grid_from_sampler(
        grid.n1 + pad, grid.n2, grid.n3, dx1, dx2, dx3, layout.frame.basis, Vec3{-R, 0.0, 0.0},
        [&](const Vec3& y) { return chi_at(layout, layout.from_chart(y)).pattern; }, 4, 4, 1);

    // buckets by region: interior walls, the layer seam at y1 = -1, and the
    // austenite face at y1 = 0 (band of two voxels around each seam)
    auto bucket = [&](int i, int, int) {
        double y1 = -R + (i + 0.5) * dx1;
        if (std::abs(y1) <= 2.0 * dx1 || y1 > 0.0) return 2;
        if (std::abs(y1 + 1.0) <= 2.0 * dx1) return 1;
        return 0;
    };
    std::vector<double> parts = coarea_surface(g, bucket, 3);
    if (wall_part) *wall_part = parts[0];
    if (layer_face_part) *layer_face_part = parts[1];
    if (austenite_face_part) *austenite_face_part = parts[2];
    return parts[0] + parts[1] + parts[2];
}

EnergyBreakdown total_energy_grid(const BranchingLayout& layout, const QuadratureGrid& grid) {
    EnergyBreakdown e;
    e.method = "grid";
    e.R = layout.schedule.R;
    e.V = layout.placement.V;

    double layer_elastic = 0.0;
    double elastic = elastic_energy_quadrature(layout, grid, &layer_elastic);
    e.layer_elastic = layer_elastic;
    e.interior_elastic = elastic - layer_elastic;

    interfacial_energy_grid(layout, grid, &e.warnings, &e.interior_interfacial,
                            &e.layer_interfacial, &e.austenite_face);
    e.finalize();
    return e;
}

}  // namespace corner
