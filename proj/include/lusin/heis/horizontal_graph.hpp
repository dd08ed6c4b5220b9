#pragma once

#include "lusin/construct/build_config.hpp"
#include "lusin/core/box_domain.hpp"
#include "lusin/core/certificate.hpp"
#include "lusin/heis/graph_map.hpp"

namespace lusin::heis {

struct HorizontalGraph {
    GraphMap graph;
    std::shared_ptr<const BumpPolySum> function;
    BuildCertificate certificate;
};

/// Runs the constructor with m = 1 and the field pair (2y, -2x), so that
/// grad u = (2y, -2x) on the certified set and Phi is horizontal there.
HorizontalGraph build_horizontal_graph(const BoxDomain& dom, const BuildConfig& cfg);

}  // namespace lusin::heis
