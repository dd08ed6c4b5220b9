#include "lusin/heis/holder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lusin/core/errors.hpp"

namespace lusin::heis {
namespace {

// First point uniform in the box (or near an anchor), second at distance
// `scale` in a uniform direction; both must stay inside the box.
std::pair<Planar, Planar> draw_points(const BoxDomain& dom, Rng& rng, double scale, const Planar* anchor,
                                      double radius) {
    const double lx = dom.lower()[0], ux = dom.upper()[0];
    const double ly = dom.lower()[1], uy = dom.upper()[1];
    for (int attempt = 0; attempt < 64; ++attempt) {
        Planar p;
        if (anchor) {
            p = {std::clamp((*anchor)[0] + rng.uniform(-radius, radius), lx, ux),
                 std::clamp((*anchor)[1] + rng.uniform(-radius, radius), ly, uy)};
        } else {
            p = {rng.uniform(lx, ux), rng.uniform(ly, uy)};
        }
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const Planar q{p[0] + scale * std::cos(a), p[1] + scale * std::sin(a)};
        if (q[0] >= lx && q[0] <= ux && q[1] >= ly && q[1] <= uy) {
            const Point pp{p[0], p[1]};
            const Point qq{q[0], q[1]};
            if (dom.masked() && (dom.locate(pp) < 0 || !dom.active(static_cast<std::size_t>(dom.locate(pp))) ||
                                 dom.locate(qq) < 0 || !dom.active(static_cast<std::size_t>(dom.locate(qq)))))
                continue;
            return {p, q};
        }
    }
    throw ValidationError("holder sampler: scale too large for the domain");
}

}  // namespace

HolderEstimate holder_exponent(const PairSampler& sampler, double t_min, double t_max, const HolderOptions& opts) {
    if (opts.bins < 8) throw ValidationError("holder_exponent: at least 8 scale bins required");
    if (opts.pairs_per_bin < 100) throw ValidationError("holder_exponent: at least 100 pairs per bin required");
    if (!(t_min > 0.0) || !(t_max > t_min)) throw ValidationError("holder_exponent: need 0 < t_min < t_max");
    HolderEstimate est;
    Rng rng(opts.seed, "holder_exponent");
    const double ratio = std::log(t_max / t_min) / opts.bins;
    bool have_anchor = false;
    Planar anchor{};
    double prev_scale = 0.0;
    for (int b = 0; b < opts.bins; ++b) {
        // Coarse to fine.
        const double hi = t_max * std::exp(-ratio * b);
        const double lo = hi * std::exp(-ratio);
        double best = 0.0;
        PairDraw witness;
        for (int i = 0; i < opts.pairs_per_bin; ++i) {
            const double s = rng.log_uniform(lo, hi);
            const bool zoom = have_anchor && (i % 2 == 1);
            const PairDraw d = sampler(rng, s, zoom ? &anchor : nullptr, 2.0 * prev_scale);
            if (d.displacement > best || i == 0) {
                best = std::max(best, d.displacement);
                witness = d;
            }
        }
        est.bin_scales.push_back(std::sqrt(lo * hi));
        est.bin_maxima.push_back(best);
        est.bin_witness.push_back(witness);
        if (best > 0.0) {
            anchor = witness.anchor;
            have_anchor = true;
        }
        prev_scale = hi;
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < est.bin_maxima.size(); ++i) {
        if (est.bin_maxima[i] > 0.0) {
            xs.push_back(std::log(est.bin_scales[i]));
            ys.push_back(std::log(est.bin_maxima[i]));
        }
    }
    if (xs.size() < est.bin_maxima.size()) {
        if (xs.empty()) {
            est.degenerate = true;
            est.exponent = std::numeric_limits<double>::infinity();
            est.diagnostic = "all per-bin maxima are zero (constant function)";
            return est;
        }
        est.diagnostic = "some bins had zero displacement and were dropped from the fit";
        if (xs.size() < 2) {
            est.degenerate = true;
            est.exponent = std::numeric_limits<double>::infinity();
            return est;
        }
    }
    const double k = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    est.exponent = sxy / sxx;
    est.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return est;
}

PairSampler euclidean_sampler(const BoxDomain& dom, std::function<double(double, double)> f) {
    if (dom.dim() != 2) throw ValidationError("euclidean_sampler: domain must be planar");
    return [dom, f = std::move(f)](Rng& rng, double scale, const Planar* anchor, double radius) {
        const auto [p, q] = draw_points(dom, rng, scale, anchor, radius);
        return PairDraw{scale, std::abs(f(p[0], p[1]) - f(q[0], q[1])), p};
    };
}

PairSampler graph_sampler(const GraphMap& g) {
    return [g](Rng& rng, double scale, const Planar* anchor, double radius) {
        const auto [p, q] = draw_points(g.domain(), rng, scale, anchor, radius);
        return PairDraw{scale, koranyi_dist(g.phi(p[0], p[1]), g.phi(q[0], q[1])), p};
    };
}

TransferReport holder_transfer_check(const GraphMap& g, std::uint64_t seed, const HolderOptions& base,
                                     double tolerance) {
    const double diam = std::hypot(g.domain().side(0), g.domain().side(1));
    const double lo = base.t_min * diam;
    const double hi = base.t_max * diam;
    TransferReport rep;
    HolderOptions ou = base;
    ou.seed = derive_seed(seed, "holder_u");
    HolderOptions op = base;
    op.seed = derive_seed(seed, "holder_phi");
    rep.u = holder_exponent(euclidean_sampler(g.domain(), [&g](double x, double y) { return g.value(x, y); }), lo, hi,
                            ou);
    if (rep.u.degenerate) {
        rep.degenerate = true;
        rep.phi.degenerate = true;
        rep.phi.exponent = std::numeric_limits<double>::infinity();
        rep.phi.diagnostic = "skipped: u is constant, so the transfer is vacuous";
        rep.gap = std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.phi = holder_exponent(graph_sampler(g), lo, hi, op);
    rep.degenerate = rep.phi.degenerate;
    rep.gap = std::abs(rep.phi.exponent - rep.u.exponent / 2.0);
    rep.passed = !rep.degenerate && rep.gap <= tolerance;
    return rep;
}

}  // namespace lusin::heis
