#include "lusin/heis/horizontal_path.hpp"

#include <cmath>

#include "lusin/core/errors.hpp"

namespace lusin::heis {

HorizontalPath::HorizontalPath(double start_t, std::vector<Planar> waypoints)
    : t0_(start_t), pts_(std::move(waypoints)) {
    if (pts_.empty()) throw ValidationError("horizontal path needs at least one waypoint");
}

std::vector<HPoint> HorizontalPath::lift() const {
    std::vector<HPoint> out;
    out.reserve(pts_.size());
    double t = t0_;
    out.push_back({pts_[0][0], pts_[0][1], t});
    for (std::size_t i = 1; i < pts_.size(); ++i) {
        t += lift_increment(pts_[i - 1], pts_[i]);
        out.push_back({pts_[i][0], pts_[i][1], t});
    }
    return out;
}

HPoint HorizontalPath::end() const {
    double t = t0_;
    for (std::size_t i = 1; i < pts_.size(); ++i) t += lift_increment(pts_[i - 1], pts_[i]);
    return {pts_.back()[0], pts_.back()[1], t};
}

double HorizontalPath::length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < pts_.size(); ++i)
        len += std::hypot(pts_[i][0] - pts_[i - 1][0], pts_[i][1] - pts_[i - 1][1]);
    return len;
}

HorizontalPath HorizontalPath::translated(const HPoint& r) const {
    std::vector<Planar> moved(pts_);
    for (auto& p : moved) {
        p[0] += r.x;
        p[1] += r.y;
    }
    const HPoint s = r * start();
    return HorizontalPath(s.t, std::move(moved));
}

}  // namespace lusin::heis
