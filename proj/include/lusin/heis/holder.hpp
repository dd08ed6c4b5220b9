#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lusin/core/box_domain.hpp"
#include "lusin/core/rng.hpp"
#include "lusin/heis/graph_map.hpp"

namespace lusin::heis {

/// One sampled pair: its separation in the source metric, the displacement of
/// the images in the target metric, and the first point (used to zoom in).
struct PairDraw {
    double distance = 0.0;
    double displacement = 0.0;
    Planar anchor{};
};

/// Draws a pair at source separation `scale`. When `anchor` is non-null the
/// first point should be drawn near it (within a few multiples of `radius`).
using PairSampler = std::function<PairDraw(Rng&, double scale, const Planar* anchor, double radius)>;

struct HolderOptions {
    int bins = 10;
    int pairs_per_bin = 200;
    double t_min = 1e-4;  // relative to the domain diameter when used by samplers
    double t_max = 1e-1;
    std::uint64_t seed = 1;
};

struct HolderEstimate {
    double exponent = 0.0;
    double r2 = 0.0;
    bool degenerate = false;
    std::string diagnostic;
    std::vector<double> bin_scales;
    std::vector<double> bin_maxima;
    std::vector<PairDraw> bin_witness;
};

/// Slope of the log-log least-squares fit of the per-bin maximum displacement
/// against the bin scale. Bins run coarse to fine; half of each bin's pairs are
/// drawn near the previous bin's worst pair. A sampler whose maxima are all zero
/// yields exponent = +infinity with degenerate set.
HolderEstimate holder_exponent(const PairSampler& sampler, double t_min, double t_max, const HolderOptions& opts);

/// |f(p) - f(q)| against Euclidean |p - q| on the box.
PairSampler euclidean_sampler(const BoxDomain& dom, std::function<double(double, double)> f);
/// d_K(Phi(p), Phi(q)) against Euclidean |p - q| on the box.
PairSampler graph_sampler(const GraphMap& g);

struct TransferReport {
    HolderEstimate u;    // Euclidean exponent of u
    HolderEstimate phi;  // Koranyi exponent of Phi
    double gap = 0.0;    // |alpha_phi - alpha_u / 2|
    bool degenerate = false;
    bool passed = false;
};

/// Estimates alpha_u and alpha_Phi on the graph's domain and checks
/// |alpha_Phi - alpha_u / 2| <= tolerance. A constant u is degenerate for both
/// estimators and never passes.
TransferReport holder_transfer_check(const GraphMap& g, std::uint64_t seed, const HolderOptions& base = {},
                                     double tolerance = 0.1);

}  // namespace lusin::heis
