#include "lusin/heis/cc_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "lusin/core/errors.hpp"
#include "lusin/core/rng.hpp"

namespace lusin::heis {
namespace {

using Path = std::vector<Planar>;

double path_gap(const Path& v) {
    double t = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) t += lift_increment(v[i - 1], v[i]);
    return t;
}

double path_length(const Path& v) {
    double len = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) len += std::hypot(v[i][0] - v[i - 1][0], v[i][1] - v[i - 1][1]);
    return len;
}

// Area of a circular segment with chord c and half-angle phi.
double segment_area(double c, double phi) {
    const double s = std::sin(phi);
    return c * c * (2.0 * phi - std::sin(2.0 * phi)) / (8.0 * s * s);
}

// Polygon inscribed in the shortest arc from 0 to Z that encloses area |T|/4
// with the chord. For Z = 0 the arc degenerates to a circle through the origin.
Path arc_ansatz(double X, double Y, double T, int n) {
    Path v(n + 1);
    const double c = std::hypot(X, Y);
    const double area = std::abs(T) / 4.0;
    if (c == 0.0) {
        // Clockwise loops have positive t-gap.
        const double r = std::sqrt(area / std::numbers::pi);
        const double side = T > 0.0 ? 1.0 : -1.0;
        for (int i = 0; i <= n; ++i) {
            const double a = 2.0 * std::numbers::pi * i / n;
            v[i] = {r - r * std::cos(a), side * r * std::sin(a)};
        }
        return v;
    }
    double lo = 0.0;
    double hi = std::numbers::pi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (segment_area(c, mid) < area) lo = mid;
        else hi = mid;
    }
    const double phi = 0.5 * (lo + hi);
    const double R = c / (2.0 * std::sin(phi));
    const double ex = X / c;
    const double ey = Y / c;
    for (int i = 0; i <= n; ++i) {
        const double psi = std::numbers::pi / 2.0 + phi - 2.0 * phi * i / n;
        const double lx = R * std::cos(psi);
        const double ly = R * std::sin(psi) - R * std::cos(phi);
        v[i] = {X / 2.0 + lx * ex - ly * ey, Y / 2.0 + lx * ey + ly * ex};
    }
    v.front() = {0.0, 0.0};
    v.back() = {X, Y};
    return v;
}

Path straight_start(double X, double Y, int n, Rng& rng) {
    Path v(n + 1);
    const double scale = 1e-3 * std::max(1.0, std::hypot(X, Y));
    for (int i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) / n;
        v[i] = {s * X, s * Y};
        if (i > 0 && i < n) {
            v[i][0] += scale * rng.uniform(-1.0, 1.0);
            v[i][1] += scale * rng.uniform(-1.0, 1.0);
        }
    }
    return v;
}

// Chord-relative lambda scaling; returns the projected path or nothing.
std::optional<Path> project(const Path& v, double target) {
    const std::size_t n = v.size() - 1;
    const Planar end = v.back();
    Path chord(v.size());
    Path dev(v.size());
    for (std::size_t i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) / n;
        chord[i] = {s * end[0], s * end[1]};
        dev[i] = {v[i][0] - chord[i][0], v[i][1] - chord[i][1]};
    }
    // t(lambda) = a lambda^2 + b lambda + c0; the chord alone has zero gap.
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        a += lift_increment(dev[i - 1], dev[i]);
        b += lift_increment(chord[i - 1], dev[i]) + lift_increment(dev[i - 1], chord[i]);
    }
    std::vector<double> roots;
    if (a == 0.0) {
        if (b == 0.0) {
            if (target != 0.0) return std::nullopt;
            roots.push_back(1.0);
        } else {
            roots.push_back(target / b);
        }
    } else {
        const double disc = b * b + 4.0 * a * target;
        if (disc < 0.0) return std::nullopt;
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (b + std::copysign(sq, b));
        if (q != 0.0) roots.push_back(q / a);
        if (q != 0.0) roots.push_back(-target / q);
        else roots.push_back(0.0);
    }
    double best_len = std::numeric_limits<double>::infinity();
    std::optional<Path> best;
    for (double lam : roots) {
        if (!std::isfinite(lam)) continue;
        Path w(v.size());
        for (std::size_t i = 0; i <= n; ++i)
            w[i] = {chord[i][0] + lam * dev[i][0], chord[i][1] + lam * dev[i][1]};
        w.front() = {0.0, 0.0};
        w.back() = end;
        const double len = path_length(w);
        if (len < best_len) {
            best_len = len;
            best = std::move(w);
        }
    }
    return best;
}

struct DescentResult {
    Path path;
    bool converged;
};

// Gradient descent on length + rho (gap - T)^2 over interior waypoints, with
// Armijo backtracking and a rising penalty.
DescentResult descend(Path v, double T, int iterations) {
    const std::size_t n = v.size() - 1;
    const double scale = std::max({1.0, std::abs(T), path_length(v)});
    double rho = 10.0 / scale;
    auto objective = [&](const Path& w) {
        const double g = path_gap(w) - T;
        return path_length(w) + rho * g * g;
    };
    std::vector<Planar> grad(v.size());
    double step = 1e-2 * scale / static_cast<double>(n);
    bool converged = false;
    int since_raise = 0;
    for (int it = 0; it < iterations; ++it) {
        const double g = path_gap(v) - T;
        double gnorm2 = 0.0;
        for (std::size_t j = 1; j < n; ++j) {
            double gx = 0.0;
            double gy = 0.0;
            const double dxa = v[j][0] - v[j - 1][0];
            const double dya = v[j][1] - v[j - 1][1];
            const double la = std::hypot(dxa, dya);
            if (la > 0.0) {
                gx += dxa / la;
                gy += dya / la;
            }
            const double dxb = v[j + 1][0] - v[j][0];
            const double dyb = v[j + 1][1] - v[j][1];
            const double lb = std::hypot(dxb, dyb);
            if (lb > 0.0) {
                gx -= dxb / lb;
                gy -= dyb / lb;
            }
            gx += 2.0 * rho * g * 2.0 * (v[j - 1][1] - v[j + 1][1]);
            gy += 2.0 * rho * g * 2.0 * (v[j + 1][0] - v[j - 1][0]);
            grad[j] = {gx, gy};
            gnorm2 += gx * gx + gy * gy;
        }
        const double f0 = objective(v);
        Path trial(v);
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            for (std::size_t j = 1; j < n; ++j) {
                trial[j][0] = v[j][0] - step * grad[j][0];
                trial[j][1] = v[j][1] - step * grad[j][1];
            }
            if (objective(trial) <= f0 - 1e-4 * step * gnorm2) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (moved) {
            const double f1 = objective(trial);
            v.swap(trial);
            step *= 1.5;
            if (f0 - f1 <= 1e-13 * std::max(1.0, f0)) {
                if (rho * scale >= 1e6) {
                    converged = true;
                    break;
                }
            }
        }
        if (++since_raise >= 100 || !moved) {
            since_raise = 0;
            if (rho * scale < 1e6) rho *= 10.0;
            else if (!moved) {
                converged = true;
                break;
            }
            step = 1e-2 * scale / static_cast<double>(n);
        }
    }
    return {std::move(v), converged};
}

}  // namespace

double cc_lower_bound(const HPoint& w) {
    const double z = std::hypot(w.x, w.y);
    return std::max(z, std::sqrt(std::numbers::pi * std::abs(w.t)) - z);
}

std::optional<HorizontalPath> project_to_gap(const HorizontalPath& path, double target_t) {
    const auto& pts = path.waypoints();
    if (pts.size() < 2) return std::nullopt;
    const HPoint s = path.start();
    const HPoint to_origin = inverse(s);
    Path local(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) local[i] = {pts[i][0] - s.x, pts[i][1] - s.y};
    const HPoint target = to_origin * HPoint{pts.back()[0], pts.back()[1], target_t};
    auto projected = project(local, target.t);
    if (!projected) return std::nullopt;
    return HorizontalPath(0.0, std::move(*projected)).translated(s);
}

CcBounds cc_dist_bounds(const HPoint& p, const HPoint& q, const CcOptions& opts) {
    if (opts.waypoints < 4) throw ValidationError("cc_dist_bounds: waypoint count must be at least 4");
    if (opts.iterations < 0) throw ValidationError("cc_dist_bounds: iteration cap must be non-negative");
    CcBounds out;
    const HPoint w = inverse(p) * q;
    if (w.x == 0.0 && w.y == 0.0 && w.t == 0.0) return out;
    out.lower = cc_lower_bound(w);

    const int n = opts.waypoints;
    double best = std::numeric_limits<double>::infinity();
    std::optional<Path> best_path;
    auto consider = [&](const Path& v) {
        if (auto proj = project(v, w.t)) {
            const double len = path_length(*proj);
            if (len < best) {
                best = len;
                best_path = std::move(*proj);
            }
        }
    };

    Path straight(n + 1);
    for (int i = 0; i <= n; ++i) straight[i] = {w.x * i / n, w.y * i / n};
    if (w.t == 0.0) consider(straight);
    const Path arc = arc_ansatz(w.x, w.y, w.t, n);
    consider(arc);

    if (w.t != 0.0 && opts.iterations > 0) {
        Rng rng(opts.seed, "cc_dist_bounds");
        auto from_arc = descend(arc, w.t, opts.iterations);
        auto from_line = descend(straight_start(w.x, w.y, n, rng), w.t, opts.iterations);
        consider(from_arc.path);
        consider(from_line.path);
        out.loose = !(from_arc.converged || from_line.converged);
    }
    if (!best_path) {
        // The circle/arc ansatz always projects; reaching here means a degenerate input.
        throw ValidationError("cc_dist_bounds: no feasible horizontal path for non-finite input");
    }
    out.upper = std::max(best, out.lower);
    out.witness = HorizontalPath(0.0, std::move(*best_path)).translated(p);
    return out;
}

}  // namespace lusin::heis
