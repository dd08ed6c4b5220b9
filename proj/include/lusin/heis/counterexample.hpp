#pragma once

#include <functional>
#include <vector>

#include "lusin/heis/horizontal_path.hpp"

namespace lusin::heis {

using VectorField = std::function<Planar(double, double)>;

/// Line integral of a planar field along a polyline, 8-point Gauss-Legendre per segment.
double line_integral(const VectorField& field, const std::vector<Planar>& polyline);

struct Circulation {
    double path_a = 0.0;  // (0,0) -> (1,0) -> (1,1)
    double path_b = 0.0;  // (0,0) -> (0,1) -> (1,1)
    double difference() const { return path_b - path_a; }
};

/// Integrates (2y, -2x) along the two monotone lattice paths of the unit square.
/// A potential g with grad g = (2y, -2x) would make both integrals equal to
/// g(1,1) - g(0,0); they differ by 4, so no such g exists.
Circulation circulation_counterexample();

}  // namespace lusin::heis
