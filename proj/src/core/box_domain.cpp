#include "lusin/core/box_domain.hpp"

#include <algorithm>
#include <cmath>

#include "lusin/core/errors.hpp"

namespace lusin {

BoxDomain::BoxDomain(Point lower, Point upper, std::vector<int> resolution,
                     std::vector<std::uint8_t> mask)
    : lower_(std::move(lower)), upper_(std::move(upper)), res_(std::move(resolution)),
      mask_(std::move(mask)) {
    if (lower_.empty()) throw ValidationError("domain dimension must be >= 1");
    if (upper_.size() != lower_.size() || res_.size() != lower_.size())
        throw ValidationError("domain corner/resolution dimensions disagree");
    cell_count_ = 1;
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(std::isfinite(lower_[i]) && std::isfinite(upper_[i]) && lower_[i] < upper_[i]))
            throw ValidationError("domain requires finite lower < upper on every axis");
        if (res_[i] < 1) throw ValidationError("grid resolution must be >= 1 per axis");
        cell_count_ *= static_cast<std::size_t>(res_[i]);
    }
    if (!mask_.empty() && mask_.size() != cell_count_)
        throw ValidationError("cell mask size does not match the grid");
    if (!mask_.empty() && active_count() == 0) throw ValidationError("cell mask selects no cells");
}

BoxDomain BoxDomain::unit(std::size_t n, int res) {
    return BoxDomain(Point(n, 0.0), Point(n, 1.0), std::vector<int>(n, res));
}

double BoxDomain::cell_volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) v *= cell_side(i);
    return v;
}

double BoxDomain::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) v *= side(i);
    return v;
}

double BoxDomain::diameter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += side(i) * side(i);
    return std::sqrt(s);
}

std::size_t BoxDomain::active_count() const {
    if (mask_.empty()) return cell_count_;
    return static_cast<std::size_t>(std::count_if(mask_.begin(), mask_.end(), [](auto v) { return v != 0; }));
}

std::vector<int> BoxDomain::unflatten(std::size_t flat) const {
    std::vector<int> idx(dim());
    for (std::size_t i = dim(); i-- > 0;) {
        idx[i] = static_cast<int>(flat % static_cast<std::size_t>(res_[i]));
        flat /= static_cast<std::size_t>(res_[i]);
    }
    return idx;
}

std::size_t BoxDomain::flatten(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dim(); ++i) flat = flat * static_cast<std::size_t>(res_[i]) + static_cast<std::size_t>(idx[i]);
    return flat;
}

Point BoxDomain::cell_center(std::size_t flat) const {
    auto idx = unflatten(flat);
    Point c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = lower_[i] + (idx[i] + 0.5) * cell_side(i);
    return c;
}

bool BoxDomain::contains(const Point& x) const {
    for (std::size_t i = 0; i < dim(); ++i) {
        if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
    }
    return true;
}

std::ptrdiff_t BoxDomain::locate(const Point& x) const {
    if (!contains(x)) return -1;
    std::vector<int> idx(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        int k = static_cast<int>(std::floor((x[i] - lower_[i]) / cell_side(i)));
        idx[i] = std::clamp(k, 0, res_[i] - 1);
    }
    return static_cast<std::ptrdiff_t>(flatten(idx));
}

}  // namespace lusin
