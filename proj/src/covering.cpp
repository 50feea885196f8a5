#include "corner/covering.hpp"

#include <algorithm>
#include <cmath>

namespace corner {

namespace {

// 3D summed-area table for box-window occupancy counts.
struct BoxSums {
    int nx, ny, nz;
    std::vector<std::uint32_t> s;  // s(i,j,k) = count over [0..i]x[0..j]x[0..k]

    explicit BoxSums(const VoxelSet& v) : nx(v.nx), ny(v.ny), nz(v.nz) {
        s.assign(std::size_t(nx) * ny * nz, 0);
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j) {
                std::uint32_t row = 0;
                for (int i = 0; i < nx; ++i) {
                    row += v.bits[v.index(i, j, k)];
                    std::uint32_t val = row;
                    if (j > 0) val += at(i, j - 1, k);
                    if (k > 0) val += at(i, j, k - 1);
                    if (j > 0 && k > 0) val -= at(i, j - 1, k - 1);
                    s[idx(i, j, k)] = val;
                }
            }
    }
    std::size_t idx(int i, int j, int k) const {
        return std::size_t(i) + std::size_t(nx) * (std::size_t(j) + std::size_t(ny) * k);
    }
    std::uint32_t at(int i, int j, int k) const { return s[idx(i, j, k)]; }

    // count over the clipped box [i0,i1]x[j0,j1]x[k0,k1]
    std::uint32_t box(int i0, int i1, int j0, int j1, int k0, int k1) const {
        i0 = std::max(i0, 0); j0 = std::max(j0, 0); k0 = std::max(k0, 0);
        i1 = std::min(i1, nx - 1); j1 = std::min(j1, ny - 1); k1 = std::min(k1, nz - 1);
        if (i0 > i1 || j0 > j1 || k0 > k1) return 0;
        auto S = [&](int i, int j, int k) -> std::int64_t {
            if (i < 0 || j < 0 || k < 0) return 0;
            return at(i, j, k);
        };
        std::int64_t c = S(i1, j1, k1) - S(i0 - 1, j1, k1) - S(i1, j0 - 1, k1) -
                         S(i1, j1, k0 - 1) + S(i0 - 1, j0 - 1, k1) + S(i0 - 1, j1, k0 - 1) +
                         S(i1, j0 - 1, k0 - 1) - S(i0 - 1, j0 - 1, k0 - 1);
        return static_cast<std::uint32_t>(c);
    }
};

}  // namespace

std::vector<Vec3> density_points(const VoxelSet& set, int window, double threshold) {
    if (set.count() == 0) throw std::invalid_argument("density_points: empty set");
    BoxSums sums(set);
    std::vector<Vec3> pts;
    for (int k = 0; k < set.nz; ++k)
        for (int j = 0; j < set.ny; ++j)
            for (int i = 0; i < set.nx; ++i) {
                if (!set.bits[set.index(i, j, k)]) continue;
                int i0 = std::max(i - window, 0), i1 = std::min(i + window, set.nx - 1);
                int j0 = std::max(j - window, 0), j1 = std::min(j + window, set.ny - 1);
                int k0 = std::max(k - window, 0), k1 = std::min(k + window, set.nz - 1);
                std::uint32_t occupied = sums.box(i0, i1, j0, j1, k0, k1);
                std::uint32_t cells = std::uint32_t(i1 - i0 + 1) * (j1 - j0 + 1) * (k1 - k0 + 1);
                if (double(occupied) >= threshold * double(cells))
                    pts.push_back(set.center(i, j, k));
            }
    return pts;
}

VoxelPrefix::VoxelPrefix(const VoxelSet& s) : set(&s) {
    prefix.assign(s.bits.size(), 0);
    for (int k = 0; k < s.nz; ++k)
        for (int j = 0; j < s.ny; ++j) {
            std::uint32_t row = 0;
            for (int i = 0; i < s.nx; ++i) {
                row += s.bits[s.index(i, j, k)];
                prefix[s.index(i, j, k)] = row;
            }
        }
}

std::pair<std::size_t, std::size_t> VoxelPrefix::ball_counts(const Vec3& center,
                                                             double radius) const {
    const VoxelSet& v = *set;
    const double h = v.spacing;
    std::size_t occupied = 0, total = 0;

    // lattice index ranges of the infinite grid; occupancy only inside
    double cy = (center.y - v.origin.y) / h - 0.5;
    double cz = (center.z - v.origin.z) / h - 0.5;
    double cx = (center.x - v.origin.x) / h - 0.5;
    double r_h = radius / h;

    int j0 = static_cast<int>(std::ceil(cy - r_h)), j1 = static_cast<int>(std::floor(cy + r_h));
    for (int j = j0; j <= j1; ++j) {
        double dy = (double(j) - cy) * h;
        double rem_y = radius * radius - dy * dy;
        if (rem_y < 0.0) continue;
        double ry = std::sqrt(rem_y) / h;
        int k0 = static_cast<int>(std::ceil(cz - ry)), k1 = static_cast<int>(std::floor(cz + ry));
        for (int k = k0; k <= k1; ++k) {
            double dz = (double(k) - cz) * h;
            double rem = rem_y - dz * dz;
            if (rem < 0.0) continue;
            double rx = std::sqrt(rem) / h;
            int i0 = static_cast<int>(std::ceil(cx - rx));
            int i1 = static_cast<int>(std::floor(cx + rx));
            if (i1 < i0) continue;
            total += std::size_t(i1 - i0 + 1);
            if (j < 0 || j >= v.ny || k < 0 || k >= v.nz) continue;
            int ci0 = std::max(i0, 0), ci1 = std::min(i1, v.nx - 1);
            if (ci1 < ci0) continue;
            std::uint32_t hi = prefix[v.index(ci1, j, k)];
            std::uint32_t lo = ci0 > 0 ? prefix[v.index(ci0 - 1, j, k)] : 0;
            occupied += hi - lo;
        }
    }
    return {occupied, total};
}

double dilation_fraction(const VoxelSet& set, const VoxelPrefix& prefix,
                         const CornerDomain& dom, const Vec3& x0, double r0, double t,
                         double kappa) {
    if (r0 <= 0.0 || t < 0.0 || kappa <= 0.0 || kappa >= 1.0)
        throw std::invalid_argument("dilation_fraction: bad parameters");
    double mu = corner_mu(dom);
    Vec3 d = dom.a + dom.b + dom.c;
    Vec3 center = x0 + d * t;
    double enclosing = r0 + mu * t;
    if (dom.face_distance(center) < enclosing * (1.0 - 1e-9))
        throw std::runtime_error("dilation_fraction: enclosing ball escapes the corner");

    auto [occ, tot] = prefix.ball_counts(center, kappa * enclosing);
    if (tot == 0) {
        // ball smaller than the lattice: fall back to the hosting voxel
        int i = static_cast<int>(std::floor((center.x - set.origin.x) / set.spacing));
        int j = static_cast<int>(std::floor((center.y - set.origin.y) / set.spacing));
        int k = static_cast<int>(std::floor((center.z - set.origin.z) / set.spacing));
        return set.at(i, j, k) ? 1.0 : 0.0;
    }
    return double(occ) / double(tot);
}

BandTime find_band_time(const VoxelSet& set, const VoxelPrefix& prefix,
                        const CornerDomain& dom, const Vec3& x0, double r0, double kappa) {
    auto f = [&](double t) { return dilation_fraction(set, prefix, dom, x0, r0, t, kappa); };

    double f0 = f(0.0);
    if (f0 < 0.1) throw std::runtime_error("find_band_time: f(0) < 1/10, not a density point");
    if (f0 <= 0.9) return {0.0, f0};

    const double h = set.spacing;
    double diag = h * std::sqrt(double(set.nx) * set.nx + double(set.ny) * set.ny +
                                double(set.nz) * set.nz);
    double t_lo = 0.0, t_hi = h;
    double f_hi = f(t_hi);
    while (f_hi > 0.9) {
        t_lo = t_hi;
        t_hi *= 2.0;
        if (t_hi > 64.0 * (diag + r0 / kappa))
            throw std::runtime_error("find_band_time: fraction never left the band");
        f_hi = f(t_hi);
    }
    if (f_hi >= 0.1) return {t_hi, f_hi};

    // f(t_lo) > 9/10, f(t_hi) < 1/10: bisect down to sub-voxel scale
    while (t_hi - t_lo > 0.25 * h) {
        double mid = 0.5 * (t_lo + t_hi);
        double fm = f(mid);
        if (fm > 0.9) {
            t_lo = mid;
        } else if (fm < 0.1) {
            t_hi = mid;
        } else {
            return {mid, fm};
        }
    }
    double f_lo = f(t_lo);
    f_hi = f(t_hi);
    auto band_dist = [](double v) { return std::max({0.1 - v, v - 0.9, 0.0}); };
    return band_dist(f_lo) <= band_dist(f_hi) ? BandTime{t_lo, f_lo} : BandTime{t_hi, f_hi};
}

std::vector<Ball> vitali_select(const std::vector<Ball>& candidates) {
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        const Ball &a = candidates[l], &b = candidates[r];
        if (a.radius != b.radius) return a.radius > b.radius;
        if (a.center.x != b.center.x) return a.center.x < b.center.x;
        if (a.center.y != b.center.y) return a.center.y < b.center.y;
        if (a.center.z != b.center.z) return a.center.z < b.center.z;
        return l < r;
    });

    std::vector<Ball> kept;
    for (std::size_t idx : order) {
        const Ball& c = candidates[idx];
        bool disjoint = true;
        for (const Ball& k : kept) {
            Vec3 dvec = c.center - k.center;
            double rr = c.radius + k.radius;
            if (dot(dvec, dvec) < rr * rr) {
                disjoint = false;
                break;
            }
        }
        if (disjoint) kept.push_back(c);
    }
    return kept;
}

namespace {

struct Candidate {
    Ball core;
    Ball enlarged;
    double fraction;
};

// deterministic block-stratified subsample
std::vector<Vec3> subsample_seeds(std::vector<Vec3> seeds, const VoxelSet& set,
                                  std::size_t max_seeds, int window) {
    if (seeds.size() <= max_seeds) return seeds;
    double bs = set.spacing * std::max(4 * window, (std::max({set.nx, set.ny, set.nz}) + 15) / 16);
    auto block = [&](const Vec3& p) {
        return std::array<long, 3>{static_cast<long>(std::floor((p.x - set.origin.x) / bs)),
                                   static_cast<long>(std::floor((p.y - set.origin.y) / bs)),
                                   static_cast<long>(std::floor((p.z - set.origin.z) / bs))};
    };
    std::sort(seeds.begin(), seeds.end(), [&](const Vec3& a, const Vec3& b) {
        auto ba = block(a), bb = block(b);
        if (ba != bb) return ba < bb;
        return std::array<double, 3>{a.x, a.y, a.z} < std::array<double, 3>{b.x, b.y, b.z};
    });
    std::size_t stride = (seeds.size() + max_seeds - 1) / max_seeds;
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < seeds.size(); i += stride) out.push_back(seeds[i]);
    return out;
}

}  // namespace

CoveringReport certify(const VoxelSet& set, const CornerDomain& dom, double kappa,
                       const CertifyOptions& options) {
    if (set.count() == 0) throw std::invalid_argument("certify: empty martensite set");

    CoveringReport rep;
    rep.kappa = kappa;
    rep.mu = corner_mu(dom);
    rep.volume = set.volume();

    std::vector<Vec3> seeds = density_points(set, options.window, options.density_threshold);
    if (seeds.empty()) {
        rep.warnings.push_back(
            "no density points at the requested threshold; falling back to threshold 1/10");
        seeds = density_points(set, options.window, 0.1);
    }
    if (seeds.empty()) throw std::runtime_error("certify: no usable density points");
    seeds = subsample_seeds(std::move(seeds), set, options.max_seeds, options.window);

    VoxelPrefix prefix(set);
    double r0 = options.window * set.spacing;
    Vec3 d = dom.a + dom.b + dom.c;

    std::size_t skipped = 0;
    std::vector<Candidate> candidates;
    for (const Vec3& seed : seeds) {
        if (dom.face_distance(seed) < r0) {
            ++skipped;
            continue;
        }
        double f0 = dilation_fraction(set, prefix, dom, seed, r0, 0.0, kappa);
        if (f0 < 0.1) {
            ++skipped;
            continue;
        }
        BandTime bt = find_band_time(set, prefix, dom, seed, r0, kappa);
        Candidate c;
        c.core = {seed + d * bt.t, r0 + rep.mu * bt.t};
        c.enlarged = {c.core.center, 3.0 / rep.mu * c.core.radius};
        c.fraction = bt.fraction;
        candidates.push_back(c);
    }
    if (candidates.empty()) throw std::runtime_error("certify: no candidate balls survived");
    if (skipped > 0)
        rep.warnings.push_back(std::to_string(skipped) +
                               " seeds skipped (too close to the boundary or below the band)");

    std::vector<Ball> enlarged;
    enlarged.reserve(candidates.size());
    for (const Candidate& c : candidates) enlarged.push_back(c.enlarged);
    std::vector<Ball> kept = vitali_select(enlarged);

    // map kept enlarged balls back to their candidates
    for (const Ball& k : kept) {
        for (const Candidate& c : candidates) {
            if (c.enlarged.center.x == k.center.x && c.enlarged.center.y == k.center.y &&
                c.enlarged.center.z == k.center.z && c.enlarged.radius == k.radius) {
                rep.balls.push_back(c.core);
                rep.fractions.push_back(c.fraction);
                break;
            }
        }
    }

    // property 1: disjoint and inside the corner
    rep.disjoint_ok = true;
    for (std::size_t i = 0; i < rep.balls.size() && rep.disjoint_ok; ++i)
        for (std::size_t j = i + 1; j < rep.balls.size(); ++j) {
            Vec3 dv = rep.balls[i].center - rep.balls[j].center;
            double rr = rep.balls[i].radius + rep.balls[j].radius;
            if (dot(dv, dv) < rr * rr) {
                rep.disjoint_ok = false;
                break;
            }
        }
    rep.inside_ok = true;
    for (const Ball& b : rep.balls)
        if (dom.face_distance(b.center) < b.radius * (1.0 - 1e-12)) rep.inside_ok = false;

    // property 2: coverage by the 15/mu enlargements
    std::vector<std::uint8_t> covered(set.bits.size(), 0);
    std::size_t total_occupied = set.count(), covered_occupied = 0;
    std::vector<std::size_t> by_radius(rep.balls.size());
    for (std::size_t i = 0; i < by_radius.size(); ++i) by_radius[i] = i;
    std::sort(by_radius.begin(), by_radius.end(), [&](std::size_t a, std::size_t b) {
        return rep.balls[a].radius > rep.balls[b].radius;
    });
    const double h = set.spacing;
    for (std::size_t bi : by_radius) {
        if (covered_occupied == total_occupied) break;
        Ball big = {rep.balls[bi].center, 15.0 / rep.mu * rep.balls[bi].radius};
        int i0 = std::max(0, int(std::floor((big.center.x - big.radius - set.origin.x) / h)));
        int i1 = std::min(set.nx - 1, int(std::ceil((big.center.x + big.radius - set.origin.x) / h)));
        int j0 = std::max(0, int(std::floor((big.center.y - big.radius - set.origin.y) / h)));
        int j1 = std::min(set.ny - 1, int(std::ceil((big.center.y + big.radius - set.origin.y) / h)));
        int k0 = std::max(0, int(std::floor((big.center.z - big.radius - set.origin.z) / h)));
        int k1 = std::min(set.nz - 1, int(std::ceil((big.center.z + big.radius - set.origin.z) / h)));
        double r2 = big.radius * big.radius;
        for (int k = k0; k <= k1; ++k)
            for (int j = j0; j <= j1; ++j)
                for (int i = i0; i <= i1; ++i) {
                    std::size_t idx = set.index(i, j, k);
                    if (covered[idx] || !set.bits[idx]) continue;
                    Vec3 c = set.center(i, j, k) - big.center;
                    if (dot(c, c) <= r2) {
                        covered[idx] = 1;
                        ++covered_occupied;
                    }
                }
    }
    rep.covered_fraction = double(covered_occupied) / double(total_occupied);
    rep.coverage_ok = rep.covered_fraction >= options.coverage_target;

    // property 3: per-ball fraction band, widened by the voxelization error
    rep.fraction_ok = true;
    for (std::size_t i = 0; i < rep.balls.size(); ++i) {
        double delta = 3.0 * set.spacing / (kappa * rep.balls[i].radius);
        if (rep.fractions[i] < 0.1 - delta || rep.fractions[i] > 0.9 + delta)
            rep.fraction_ok = false;
    }

    for (const Ball& b : rep.balls) {
        rep.sum_r3 += b.radius * b.radius * b.radius;
        rep.proxy_sum_r73 += std::pow(b.radius, 7.0 / 3.0);
    }
    rep.c_lower = rep.sum_r3 / rep.volume;
    return rep;
}

}  // namespace corner
