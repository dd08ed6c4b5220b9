#pragma once

#include <span>
#include <vector>

#include "lusin/core/box_domain.hpp"
#include "lusin/core/multi_index.hpp"

namespace lusin {

/// Tensor-product cutoff on a cell: 1 on the inner box scaled by (1 - theta),
/// 0 outside the cell, and a degree-(2m+1) Hermite smoothstep in between, so the
/// profile is C^m with all derivatives up to order m vanishing at both joins.
class CutoffProfile {
public:
    CutoffProfile(int m, double theta);

    int order() const noexcept { return m_; }
    double theta() const noexcept { return theta_; }

    /// Smoothstep S on [0,1] and its derivatives: S(0) = 0, S(1) = 1.
    double step(double s, int deriv) const;

    /// Rigorous sup over [0,1] of |S^(j)|, j <= m. Derivatives of the 1-D profile
    /// on a cell of half-width r are bounded by step_bound(j) * (theta r)^-j.
    double step_bound(int j) const { return bounds_.at(static_cast<std::size_t>(j)); }

    /// j-th derivative of the 1-D profile centred at c with half-width r.
    double eval_1d(double x, double c, double r, int deriv) const;

    /// D^deriv of the tensor cutoff on the box [lo, hi] at x.
    double eval(std::span<const double> lo, std::span<const double> hi, std::span<const double> x,
                const MultiIndex& deriv) const;

    /// Bound on |D^beta cutoff| over the whole cell, per-axis half-widths r.
    double derivative_bound(std::span<const double> half_widths, const MultiIndex& beta) const;

private:
    int m_;
    double theta_;
    std::vector<std::vector<double>> polys_;  // S^(j) coefficients, ascending powers
    std::vector<double> bounds_;
};

}  // namespace lusin
