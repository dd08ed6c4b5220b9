#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "lusin/core/box_domain.hpp"
#include "lusin/core/bump_poly_sum.hpp"
#include "lusin/heis/horizontal_path.hpp"
#include "lusin/heis/hpoint.hpp"

namespace lusin::heis {

/// Scalar function u on a planar box and its graph map Phi(x, y) = (x, y, u(x, y)).
///
/// Three sources are supported. A BumpPolySum has exact derivatives everywhere.
/// Grid samples live at the cell centres of the domain grid; values in between are
/// bilinear and gradients are central differences, defined only at centres whose
/// four neighbours are active. A closed form carries its own gradient.
class GraphMap {
public:
    using Scalar = std::function<double(double, double)>;
    using Gradient = std::function<Planar(double, double)>;

    static GraphMap from_sum(std::shared_ptr<const BumpPolySum> g, BoxDomain dom);
    static GraphMap from_grid(BoxDomain dom, std::vector<double> centre_values);
    static GraphMap from_closed_form(BoxDomain dom, Scalar u, Gradient grad);

    const BoxDomain& domain() const noexcept { return dom_; }
    bool is_grid() const noexcept { return !samples_.empty(); }

    double value(double x, double y) const;
    /// Gradient of u, or nullopt where it is not available (grid boundary).
    std::optional<Planar> gradient(double x, double y) const;
    HPoint phi(double x, double y) const { return {x, y, value(x, y)}; }

private:
    explicit GraphMap(BoxDomain dom) : dom_(std::move(dom)) {}
    std::optional<Planar> grid_gradient(std::size_t flat) const;

    BoxDomain dom_;
    std::shared_ptr<const BumpPolySum> sum_;
    std::vector<double> samples_;
    Scalar u_;
    Gradient grad_;
};

/// (du/dx - 2y, du/dy + 2x); zero iff the tangent plane at Phi(x, y) is horizontal.
std::optional<Planar> horizontality_residual(const GraphMap& g, double x, double y);

struct CharacteristicReport {
    double tau = 0.0;
    std::size_t cells = 0;           // active cells scanned
    std::size_t evaluated = 0;       // cells with a defined residual
    std::size_t characteristic = 0;  // residual norm <= tau
    double fraction = 0.0;           // characteristic / cells
};

/// Fraction of grid cells whose centre residual norm is at most tau. Cells where
/// the residual is undefined count as non-characteristic. A positive resolution
/// overrides the domain grid (the box and mask are kept only when it matches).
CharacteristicReport characteristic_fraction(const GraphMap& g, double tau, int resolution = 0);

}  // namespace lusin::heis
