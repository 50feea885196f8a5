#include "corner/linalg.hpp"

#include <algorithm>

namespace corner {

SymEigen eigen_sym(const Mat3& input) {
    Mat3 a = input;
    Mat3 v = Mat3::identity();

    double scale = frobenius(a);
    if (scale == 0.0) {
        SymEigen e;
        e.vectors = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
        return e;
    }

    // Cyclic Jacobi sweeps over (0,1), (0,2), (1,2).
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::sqrt(a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2));
        if (off <= 1e-300 || off <= 1e-16 * scale) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                Mat3 r = Mat3::identity();
                r(p, p) = c;
                r(q, q) = c;
                r(p, q) = s;
                r(q, p) = -s;
                a = r.transpose() * a * r;
                a(p, q) = a(q, p) = 0.5 * (a(p, q) + a(q, p));  // keep symmetric
                v = v * r;
            }
        }
    }

    std::array<int, 3> order = {0, 1, 2};
    std::array<double, 3> d = {a(0, 0), a(1, 1), a(2, 2)};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });

    SymEigen e;
    for (int k = 0; k < 3; ++k) {
        e.values[k] = d[order[k]];
        Vec3 col = v.col(order[k]);
        // canonical sign: largest-magnitude component positive
        int imax = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(col[i]) > std::abs(col[imax])) imax = i;
        if (col[imax] < 0.0) col = -col;
        e.vectors[k] = normalized(col);
    }
    return e;
}

}  // namespace corner
