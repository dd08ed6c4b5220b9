#pragma once

#include <array>
#include <vector>

#include "lusin/heis/hpoint.hpp"

namespace lusin::heis {

using Planar = std::array<double, 2>;

/// Polygonal horizontal curve given by planar waypoints; the t coordinate is the
/// discrete horizontal lift dt_i = 2 ybar_i dx_i - 2 xbar_i dy_i (segment midpoints),
/// which equals -4 times the signed area swept relative to the origin.
class HorizontalPath {
public:
    HorizontalPath(double start_t, std::vector<Planar> waypoints);

    const std::vector<Planar>& waypoints() const noexcept { return pts_; }
    std::size_t segments() const noexcept { return pts_.empty() ? 0 : pts_.size() - 1; }

    /// Lifted points, one per waypoint.
    std::vector<HPoint> lift() const;
    HPoint start() const { return {pts_.front()[0], pts_.front()[1], t0_}; }
    HPoint end() const;
    /// Sub-Riemannian length: X, Y are orthonormal, so this is the planar length.
    double length() const;

    /// The same curve left-translated by r; the lift commutes with translation.
    HorizontalPath translated(const HPoint& r) const;

private:
    double t0_;
    std::vector<Planar> pts_;
};

/// t increment of the segment a -> b: 2 (b_x a_y - a_x b_y).
inline double lift_increment(const Planar& a, const Planar& b) { return 2.0 * (b[0] * a[1] - a[0] * b[1]); }

}  // namespace lusin::heis
