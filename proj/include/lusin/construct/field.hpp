#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lusin/core/box_domain.hpp"
#include "lusin/core/certificate.hpp"
#include "lusin/core/multi_index.hpp"

namespace lusin {

/// The prescribed top-order derivatives f_alpha, |alpha| = m, one scalar field per
/// multi-index in enumerate_multiindices order. Fields are closed-form catalog
/// entries or piecewise-constant samples on the base grid of a domain.
class FieldCollection {
public:
    using Evaluator = std::function<double(const Point&)>;

    /// Catalog: "zero", "heisenberg" (n=2, m=1: f_(1,0)=2y, f_(0,1)=-2x),
    /// "constant:<c>", "inverse_x" (m=1: f_(1,0,..)=1/x_0, rest 0),
    /// "xx" (n=2, m=2: f_(2,0)=2, rest 0).
    static FieldCollection catalog(const std::string& name, std::size_t n, int m);
    static FieldCollection closed_form(std::string name, std::size_t n, int m, std::vector<Evaluator> fields);
    /// samples[field][base cell] over dom's grid.
    static FieldCollection sampled(const BoxDomain& dom, int m, std::vector<std::vector<double>> samples);

    std::size_t dim() const noexcept { return n_; }
    int order() const noexcept { return m_; }
    const std::string& name() const noexcept { return name_; }
    const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool is_sampled() const noexcept { return grid_ != nullptr; }

    /// f_alpha(x) for the field at position k of indices(). Honors truncation.
    double eval(std::size_t k, const Point& x) const;

    /// max |f_k(x) - value| over the closed box (exact for fields monotone along
    /// each axis, which covers the catalog and sampled fields).
    double max_deviation(std::size_t k, const Box& box, double value) const;

    /// Copy that equals this collection on kept base cells and 0 elsewhere.
    FieldCollection truncated(const BoxDomain& dom, std::vector<std::uint8_t> keep) const;
    bool kept(const Box& box) const;

private:
    FieldCollection() = default;
    double raw(std::size_t k, const Point& x) const;

    std::string name_;
    std::size_t n_ = 0;
    int m_ = 0;
    std::vector<MultiIndex> indices_;
    std::vector<Evaluator> closed_;
    std::shared_ptr<const BoxDomain> grid_;
    std::vector<std::vector<double>> samples_;
    std::shared_ptr<const BoxDomain> keep_domain_;
    std::vector<std::uint8_t> keep_;
};

}  // namespace lusin
