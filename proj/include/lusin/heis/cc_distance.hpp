#pragma once

#include <cstdint>
#include <optional>

#include "lusin/heis/horizontal_path.hpp"
#include "lusin/heis/hpoint.hpp"

namespace lusin::heis {

struct CcOptions {
    int waypoints = 128;
    int iterations = 2000;
    std::uint64_t seed = 1;
};

/// Bracket lower <= d_cc(p, q) <= upper.
///
/// The lower bound combines |z - z'| with the isoperimetric inequality: closing
/// a horizontal curve of length L by its planar chord gives a loop of length
/// L + |z - z'| enclosing signed area |t-gap| / 4, hence L >= sqrt(pi |t-gap|) - |z - z'|.
/// The upper bound is the length of an explicit horizontal path whose lift lands
/// exactly on q.
struct CcBounds {
    double lower = 0.0;
    double upper = 0.0;
    /// Set when waypoint descent hit its iteration cap; upper is still a valid
    /// (feasible) length, only possibly far from optimal.
    bool loose = false;
    std::optional<HorizontalPath> witness;
};

CcBounds cc_dist_bounds(const HPoint& p, const HPoint& q, const CcOptions& opts = {});

/// Isoperimetric lower bound for the group element w = p^-1 q.
double cc_lower_bound(const HPoint& w);

/// Scales the deviation of the path from its chord by lambda so the lifted
/// endpoint reaches target_t exactly. Returns nullopt when no real lambda exists.
std::optional<HorizontalPath> project_to_gap(const HorizontalPath& path, double target_t);

}  // namespace lusin::heis
