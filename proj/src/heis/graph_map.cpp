#include "lusin/heis/graph_map.hpp"

#include <algorithm>
#include <cmath>

#include "lusin/core/errors.hpp"

namespace lusin::heis {

GraphMap GraphMap::from_sum(std::shared_ptr<const BumpPolySum> g, BoxDomain dom) {
    if (!g) throw ValidationError("graph map: null function");
    if (g->dim() != 2 || dom.dim() != 2) throw ValidationError("graph map: domain must be planar");
    GraphMap out(std::move(dom));
    out.sum_ = std::move(g);
    return out;
}

GraphMap GraphMap::from_grid(BoxDomain dom, std::vector<double> centre_values) {
    if (dom.dim() != 2) throw ValidationError("graph map: domain must be planar");
    if (centre_values.size() != dom.cell_count())
        throw ValidationError("graph map: expected one sample per grid cell");
    GraphMap out(std::move(dom));
    out.samples_ = std::move(centre_values);
    return out;
}

GraphMap GraphMap::from_closed_form(BoxDomain dom, Scalar u, Gradient grad) {
    if (dom.dim() != 2) throw ValidationError("graph map: domain must be planar");
    if (!u || !grad) throw ValidationError("graph map: closed form needs value and gradient");
    GraphMap out(std::move(dom));
    out.u_ = std::move(u);
    out.grad_ = std::move(grad);
    return out;
}

double GraphMap::value(double x, double y) const {
    if (sum_) {
        const double p[2] = {x, y};
        return sum_->value(p);
    }
    if (u_) return u_(x, y);
    // Bilinear interpolation between cell centres, clamped at the outer ring.
    const auto& res = dom_.resolution();
    auto coord = [&](double v, std::size_t axis, int& i0, double& w) {
        const double s = (v - dom_.lower()[axis]) / dom_.cell_side(axis) - 0.5;
        const double c = std::clamp(s, 0.0, static_cast<double>(res[axis] - 1));
        i0 = std::min(static_cast<int>(std::floor(c)), std::max(res[axis] - 2, 0));
        w = res[axis] > 1 ? c - i0 : 0.0;
    };
    int ix = 0;
    int iy = 0;
    double wx = 0.0;
    double wy = 0.0;
    coord(x, 0, ix, wx);
    coord(y, 1, iy, wy);
    auto at = [&](int i, int j) {
        i = std::min(i, res[0] - 1);
        j = std::min(j, res[1] - 1);
        return samples_[dom_.flatten({i, j})];
    };
    return (1 - wx) * (1 - wy) * at(ix, iy) + wx * (1 - wy) * at(ix + 1, iy) + (1 - wx) * wy * at(ix, iy + 1) +
           wx * wy * at(ix + 1, iy + 1);
}

std::optional<Planar> GraphMap::grid_gradient(std::size_t flat) const {
    const auto idx = dom_.unflatten(flat);
    const auto& res = dom_.resolution();
    if (!dom_.active(flat)) return std::nullopt;
    Planar g{};
    for (std::size_t a = 0; a < 2; ++a) {
        if (idx[a] == 0 || idx[a] == res[a] - 1) return std::nullopt;
        auto lo = idx;
        auto hi = idx;
        --lo[a];
        ++hi[a];
        const auto fl = dom_.flatten(lo);
        const auto fh = dom_.flatten(hi);
        if (!dom_.active(fl) || !dom_.active(fh)) return std::nullopt;
        g[a] = (samples_[fh] - samples_[fl]) / (2.0 * dom_.cell_side(a));
    }
    return g;
}

std::optional<Planar> GraphMap::gradient(double x, double y) const {
    if (sum_) {
        const double p[2] = {x, y};
        return Planar{sum_->derivative(p, MultiIndex::unit(2, 0)), sum_->derivative(p, MultiIndex::unit(2, 1))};
    }
    if (grad_) return grad_(x, y);
    const auto flat = dom_.locate({x, y});
    if (flat < 0) return std::nullopt;
    return grid_gradient(static_cast<std::size_t>(flat));
}

std::optional<Planar> horizontality_residual(const GraphMap& g, double x, double y) {
    const auto grad = g.gradient(x, y);
    if (!grad) return std::nullopt;
    return Planar{(*grad)[0] - 2.0 * y, (*grad)[1] + 2.0 * x};
}

CharacteristicReport characteristic_fraction(const GraphMap& g, double tau, int resolution) {
    if (!(tau > 0.0)) throw ValidationError("characteristic_fraction: tau must be positive");
    const BoxDomain& base = g.domain();
    const bool regrid = resolution > 0 && (resolution != base.resolution()[0] || resolution != base.resolution()[1]);
    if (regrid && g.is_grid()) throw ValidationError("characteristic_fraction: grid samples fix the scan grid");
    const BoxDomain scan = regrid ? BoxDomain(base.lower(), base.upper(), {resolution, resolution}) : base;
    CharacteristicReport rep;
    rep.tau = tau;
    for (std::size_t flat = 0; flat < scan.cell_count(); ++flat) {
        const Point c = scan.cell_center(flat);
        if (regrid ? !base.active(static_cast<std::size_t>(base.locate(c))) : !scan.active(flat)) continue;
        ++rep.cells;
        const auto r = horizontality_residual(g, c[0], c[1]);
        if (!r) continue;
        ++rep.evaluated;
        if (std::hypot((*r)[0], (*r)[1]) <= tau) ++rep.characteristic;
    }
    rep.fraction = rep.cells ? static_cast<double>(rep.characteristic) / static_cast<double>(rep.cells) : 0.0;
    return rep;
}

}  // namespace lusin::heis
