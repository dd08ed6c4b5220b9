#pragma once

#include <cmath>

namespace lusin::heis {

/// Point (x, y, t) of the first Heisenberg group, z = x + iy.
struct HPoint {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;

    static constexpr HPoint identity() { return {}; }

    friend bool operator==(const HPoint&, const HPoint&) = default;
};

/// (z, t) * (z', t') = (z + z', t + t' + 2 Im(z conj(z'))).
constexpr HPoint operator*(const HPoint& p, const HPoint& q) {
    return {p.x + q.x, p.y + q.y, p.t + q.t + 2.0 * (p.y * q.x - p.x * q.y)};
}

constexpr HPoint inverse(const HPoint& p) { return {-p.x, -p.y, -p.t}; }

/// Anisotropic dilation (lambda z, lambda^2 t).
constexpr HPoint dilate(const HPoint& p, double lambda) { return {lambda * p.x, lambda * p.y, lambda * lambda * p.t}; }

/// Koranyi gauge (|z|^4 + t^2)^(1/4).
inline double koranyi_norm(const HPoint& p) {
    const double z2 = p.x * p.x + p.y * p.y;
    return std::sqrt(std::sqrt(z2 * z2 + p.t * p.t));
}

/// d_K(p, q) = ||q^-1 * p||_K.
inline double koranyi_dist(const HPoint& p, const HPoint& q) { return koranyi_norm(inverse(q) * p); }

/// The two terms of the comparison d_K ~ A + B with A = |z - z'| and
/// B = |t - t' + 2(x'y - xy')|^(1/2). They satisfy (A+B)/2 <= d_K <= 2^(1/4) (A+B).
struct GaugeTerms {
    double planar;
    double vertical;
};

inline GaugeTerms gauge_terms(const HPoint& p, const HPoint& q) {
    return {std::hypot(p.x - q.x, p.y - q.y), std::sqrt(std::abs(p.t - q.t + 2.0 * (q.x * p.y - p.x * q.y)))};
}

/// Euclidean distance in R^3.
inline double euclidean_dist(const HPoint& p, const HPoint& q) {
    return std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) + (p.t - q.t) * (p.t - q.t));
}

}  // namespace lusin::heis
