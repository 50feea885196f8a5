#pragma once

#include <string>
#include <vector>

#include "corner/energy.hpp"

namespace corner {

/// One CSV row of a volume sweep; component is "small_volume" for the ball
/// path and "interior" / "layer" / "total" for the branching path (the layer
/// component includes the austenite face).
struct SweepRow {
    double V = 0.0;
    double R = 0.0;
    std::string method;
    std::string component;
    double interfacial = 0.0;
    double elastic = 0.0;
    double total = 0.0;
};

struct SweepConfig {
    std::vector<double> volumes;  // ascending, > 0
    std::string method = "analytic";  // analytic | grid | both
    Vec3 a{1, 0, 1}, b{0, 0, 1}, c{0, -1, 0};
    int grid_resolution = 128;
    std::uint64_t seed = 0;
};

std::vector<double> log_spaced(double lo, double hi, int count);

std::vector<SweepRow> run_sweep(const SweepConfig& config);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;  // log-log intercept
    double r2 = 0.0;
    double v_min = 0.0, v_max = 0.0;
    std::string component;
};

/// Least-squares line through (log V, log total) of the rows of one
/// component inside [v_min, v_max]. Requires at least 4 points and positive
/// energies.
FitResult fit_exponent(const std::vector<SweepRow>& rows, const std::string& component,
                       double v_min, double v_max);

}  // namespace corner
