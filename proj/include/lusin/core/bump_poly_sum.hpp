#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "lusin/core/box_domain.hpp"
#include "lusin/core/cutoff.hpp"
#include "lusin/core/multi_index.hpp"

namespace lusin {

/// One cell term: weight * cutoff_cell(x) * sum_beta coeffs[beta] (x - c)^beta, with
/// beta running over enumerate_up_to(n, m) and c the cell centre.
struct CellTerm {
    Point lower;
    Point upper;
    std::vector<double> coeffs;
    double theta = 0.5;
    double weight = 1.0;
    int stage = 1;

    Point center() const;
    std::vector<double> half_widths() const;
};

/// Finite sum of cutoff-times-polynomial cell terms with exact derivatives up to
/// order m. Immutable after construction; evaluation is thread-safe.
class BumpPolySum {
public:
    BumpPolySum(std::size_t n, int m, std::vector<CellTerm> terms = {});

    std::size_t dim() const noexcept { return n_; }
    int order() const noexcept { return m_; }
    const std::vector<CellTerm>& terms() const noexcept { return terms_; }
    const std::vector<MultiIndex>& layout() const noexcept { return layout_; }
    int stage_count() const noexcept { return stages_; }
    bool empty() const noexcept { return terms_.empty(); }

    double value(std::span<const double> x) const { return derivative(x, MultiIndex::zero(n_)); }
    double derivative(std::span<const double> x, const MultiIndex& gamma) const;
    /// Same, restricted to terms of one stage.
    double stage_derivative(std::span<const double> x, const MultiIndex& gamma, int stage) const;
    /// Derivative of a single term.
    double term_derivative(std::size_t term, std::span<const double> x, const MultiIndex& gamma) const;

    /// D^eta of the polynomial part of a term (cutoff omitted).
    double poly_derivative(const CellTerm& t, std::span<const double> x, const MultiIndex& eta) const;

    /// Index of terms whose closed box contains x.
    std::vector<std::size_t> terms_at(std::span<const double> x) const;

    const CutoffProfile& profile(double theta) const;

private:
    struct Bucketing {
        Point origin;
        std::vector<double> size;
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells;
    };

    std::uint64_t key(const Bucketing& b, std::span<const double> x) const;
    std::uint64_t key_of(const std::vector<std::int64_t>& idx) const;
    void build_index();
    template <class Pred>
    double accumulate(std::span<const double> x, const MultiIndex& gamma, Pred keep) const;

    std::size_t n_;
    int m_;
    std::vector<CellTerm> terms_;
    std::vector<MultiIndex> layout_;
    int stages_ = 0;
    std::map<int, Bucketing> index_;
    std::map<double, std::shared_ptr<const CutoffProfile>> profiles_;
};

}  // namespace lusin
