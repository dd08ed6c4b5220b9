#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lusin {

using Point = std::vector<double>;

/// Axis-aligned box with an attached base grid. An optional per-cell mask
/// restricts the domain to a union of base cells.
class BoxDomain {
public:
    BoxDomain(Point lower, Point upper, std::vector<int> resolution,
              std::vector<std::uint8_t> mask = {});

    /// Unit cube (0,1)^n with `res` cells per axis.
    static BoxDomain unit(std::size_t n, int res);

    std::size_t dim() const noexcept { return lower_.size(); }
    const Point& lower() const noexcept { return lower_; }
    const Point& upper() const noexcept { return upper_; }
    const std::vector<int>& resolution() const noexcept { return res_; }
    bool masked() const noexcept { return !mask_.empty(); }
    const std::vector<std::uint8_t>& mask() const noexcept { return mask_; }

    double side(std::size_t axis) const { return upper_[axis] - lower_[axis]; }
    double cell_side(std::size_t axis) const { return side(axis) / res_[axis]; }
    double cell_volume() const;
    double volume() const;
    double diameter() const;

    std::size_t cell_count() const noexcept { return cell_count_; }
    std::size_t active_count() const;
    bool active(std::size_t flat) const { return mask_.empty() || mask_[flat] != 0; }

    /// Lebesgue measure of the active region.
    double measure() const { return cell_volume() * static_cast<double>(active_count()); }

    std::vector<int> unflatten(std::size_t flat) const;
    std::size_t flatten(const std::vector<int>& idx) const;
    Point cell_center(std::size_t flat) const;
    bool contains(const Point& x) const;
    /// Base-cell index holding x, or -1 when x is outside the box.
    std::ptrdiff_t locate(const Point& x) const;

private:
    Point lower_;
    Point upper_;
    std::vector<int> res_;
    std::vector<std::uint8_t> mask_;
    std::size_t cell_count_ = 0;
};

}  // namespace lusin
