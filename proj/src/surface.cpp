#include "corner/surface.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace corner {

FieldGrid field_grid_from_sampler(int n1, int n2, int n3, double d1, double d2, double d3,
                                  const Mat3& basis, const Vec3& chart_corner,
                                  const std::function<int(const Vec3&)>& label_at, int s1,
                                  int s2, int s3) {
    FieldGrid g;
    g.n1 = n1;
    g.n2 = n2;
    g.n3 = n3;
    g.d1 = d1;
    g.d2 = d2;
    g.d3 = d3;
    g.basis = basis;
    g.phi1.assign(std::size_t(n1) * n2 * n3, 0.0f);
    g.phi2.assign(std::size_t(n1) * n2 * n3, 0.0f);

    const float unit = 1.0f / float(s1 * s2 * s3);
    const int chunks = 8;
    std::vector<std::thread> pool;
    for (int c = 0; c < chunks; ++c)
        pool.emplace_back([&, c]() {
            for (int k = c; k < n3; k += chunks)
                for (int j = 0; j < n2; ++j)
                    for (int i = 0; i < n1; ++i) {
                        float f1 = 0.0f, f2 = 0.0f;
                        for (int a = 0; a < s1; ++a)
                            for (int b = 0; b < s2; ++b)
                                for (int e = 0; e < s3; ++e) {
                                    Vec3 y{chart_corner.x + (i + (a + 0.5) / s1) * d1,
                                           chart_corner.y + (j + (b + 0.5) / s2) * d2,
                                           chart_corner.z + (k + (e + 0.5) / s3) * d3};
                                    int label = label_at(y);
                                    if (label == 1)
                                        f1 += unit;
                                    else if (label == 2)
                                        f2 += unit;
                                }
                        g.phi1[g.index(i, j, k)] = f1;
                        g.phi2[g.index(i, j, k)] = f2;
                    }
        });
    for (auto& t : pool) t.join();
    return g;
}

FieldGrid field_grid_from_binary(int n1, int n2, int n3, double spacing,
                                 const std::vector<std::uint8_t>& bits) {
    FieldGrid g;
    g.n1 = n1;
    g.n2 = n2;
    g.n3 = n3;
    g.d1 = g.d2 = g.d3 = spacing;
    g.phi1.assign(std::size_t(n1) * n2 * n3, 0.0f);
    g.phi2.assign(std::size_t(n1) * n2 * n3, 0.0f);

    auto bit = [&](int i, int j, int k) -> float {
        i = std::clamp(i, 0, n1 - 1);
        j = std::clamp(j, 0, n2 - 1);
        k = std::clamp(k, 0, n3 - 1);
        return bits[g.index(i, j, k)] ? 1.0f : 0.0f;
    };
    for (int k = 0; k < n3; ++k)
        for (int j = 0; j < n2; ++j)
            for (int i = 0; i < n1; ++i) {
                float acc = 0.0f;
                for (int dk = -1; dk <= 1; ++dk)
                    for (int dj = -1; dj <= 1; ++dj)
                        for (int di = -1; di <= 1; ++di)
                            acc += bit(i + di, j + dj, k + dk);
                g.phi1[g.index(i, j, k)] = acc / 27.0f;
            }
    return g;
}

std::vector<double> coarea_surface(const FieldGrid& g,
                                   const std::function<int(int, int, int)>& bucket,
                                   int n_buckets) {
    const double vol = std::abs(det(g.basis)) * g.d1 * g.d2 * g.d3;
    const Vec3 dual1 = inverse(g.basis).row(0);
    const Vec3 dual2 = inverse(g.basis).row(1);
    const Vec3 dual3 = inverse(g.basis).row(2);

    const int chunks = 8;
    std::vector<std::vector<double>> partial(chunks,
                                             std::vector<double>(std::max(1, n_buckets), 0.0));
    std::vector<std::thread> pool;
    for (int c = 0; c < chunks; ++c)
        pool.emplace_back([&, c]() {
            auto& acc = partial[std::size_t(c)];
            for (int k = c; k < g.n3; k += chunks)
                for (int j = 0; j < g.n2; ++j)
                    for (int i = 0; i < g.n1; ++i) {
                        int b = bucket ? bucket(i, j, k) : 0;
                        for (const std::vector<float>* phi : {&g.phi1, &g.phi2}) {
                            auto at = [&](int ii, int jj, int kk) -> double {
                                ii = std::clamp(ii, 0, g.n1 - 1);
                                jj = std::clamp(jj, 0, g.n2 - 1);
                                kk = std::clamp(kk, 0, g.n3 - 1);
                                return (*phi)[g.index(ii, jj, kk)];
                            };
                            // central differences, clamped at the grid edges so
                            // the open-region boundary contributes nothing
                            double g1 = (at(i + 1, j, k) - at(i - 1, j, k)) / (2.0 * g.d1);
                            double g2 = (at(i, j + 1, k) - at(i, j - 1, k)) / (2.0 * g.d2);
                            double g3 = (at(i, j, k + 1) - at(i, j, k - 1)) / (2.0 * g.d3);
                            if (g1 == 0.0 && g2 == 0.0 && g3 == 0.0) continue;
                            // co-area in world metric: |det B| |B^-t grad|
                            Vec3 world = dual1 * g1 + dual2 * g2 + dual3 * g3;
                            acc[std::size_t(b)] += vol * norm(world);
                        }
                    }
        });
    for (auto& t : pool) t.join();

    std::vector<double> area(std::size_t(std::max(1, n_buckets)), 0.0);
    for (int c = 0; c < chunks; ++c)
        for (std::size_t b = 0; b < area.size(); ++b) area[b] += partial[std::size_t(c)][b];
    return area;
}

}  // namespace corner
