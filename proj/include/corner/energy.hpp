#pragma once

#include <string>
#include <vector>

#include "corner/displacement.hpp"
#include "corner/surface.hpp"

namespace corner {

/// Energy of a configuration split by type (interfacial/elastic) and by
/// region (interior cells, boundary layer, austenite face). Both partitions
/// sum to the same total.
struct EnergyBreakdown {
    double V = 0.0;
    double R = 0.0;
    std::string method;  // "analytic" or "grid"

    double interior_elastic = 0.0;
    double interior_interfacial = 0.0;  // stripe walls
    double layer_elastic = 0.0;
    double layer_interfacial = 0.0;     // pattern change at y1 = -1
    double austenite_face = 0.0;        // interfacial, at y1 = 0

    // derived sums, filled by finalize()
    double interfacial = 0.0;
    double elastic = 0.0;
    double total = 0.0;
    double interior = 0.0;
    double layer = 0.0;

    std::vector<std::string> warnings;

    void finalize() {
        interfacial = interior_interfacial + layer_interfacial + austenite_face;
        elastic = interior_elastic + layer_elastic;
        total = interfacial + elastic;
        interior = interior_elastic + interior_interfacial;
        layer = layer_elastic + layer_interfacial;
    }
};

/// The per-cell energy scale h w + w^4 / h ~ w^(5/2).
double cell_energy_bound(double w, double h);

/// Exact elastic energy of one unclipped base cell (w, h, w): the tilt
/// derivative is piecewise constant on the stripe wedges, so the integral is
/// a closed-form polynomial in the stripe geometry.
double per_cell_elastic_exact(const HabitFrame& frame, double w, double h);

/// World-metric area of the six tilted stripe walls of one cell (single
/// count; the total variation counts each wall twice).
double per_cell_wall_area(const HabitFrame& frame, double w, double h);

/// Closed-form accounting of the chart-box construction: per-cell exact
/// elastic and wall areas summed over all generations and cylinders, the
/// exact boundary-layer blend energy, and the two habit-plane-parallel
/// faces.
EnergyBreakdown total_energy_analytic(const BranchingLayout& layout);

/// Interfacial part of the analytic accounting.
double interfacial_energy_analytic(const BranchingLayout& layout);

/// Single-ball configuration for V <= 1: a minority-variant ball of volume V
/// deep inside the corner with u = 0.
EnergyBreakdown small_volume_energy(double V, const CornerDomain& dom);

struct QuadratureGrid {
    int n1 = 128, n2 = 128, n3 = 128;
    double offset = 0.5;  // midpoint rule

    static QuadratureGrid cubic(int n) { return {n, n, n, 0.5}; }
};

/// Midpoint-rule integral of |e(grad u) - sum chi_i e(i)|^2 over the chart
/// box (interior plus layer), with the chart metric factor. Deterministic
/// fixed-chunk parallel reduction.
double elastic_energy_quadrature(const BranchingLayout& layout, const QuadratureGrid& grid,
                                 double* layer_part = nullptr);

/// Discrete total-variation estimate of the interfacial energy on a chart
/// voxelization of the phase labels.
double interfacial_energy_grid(const BranchingLayout& layout, const QuadratureGrid& grid,
                               std::vector<std::string>* warnings = nullptr,
                               double* wall_part = nullptr, double* layer_face_part = nullptr,
                               double* austenite_face_part = nullptr);

/// Grid-route counterpart of total_energy_analytic.
EnergyBreakdown total_energy_grid(const BranchingLayout& layout, const QuadratureGrid& grid);

}  // namespace corner
