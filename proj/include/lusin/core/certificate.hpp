#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lusin/core/box_domain.hpp"

namespace lusin {

/// Axis-aligned closed box.
struct Box {
    Point lower;
    Point upper;

    double volume() const;
    bool contains(const Point& x) const;
};

/// What one stage of the construction achieved.
struct StageRecord {
    int stage = 0;
    int level = 0;                     // grid refinement level (cell side = base side / 2^level)
    Point origin;                      // grid origin (domain lower corner)
    std::vector<double> cell_side;     // per axis
    std::vector<int> grid_shape;       // cells per axis at this level
    double theta = 0.5;
    std::vector<std::int64_t> covered; // cells carrying a term; their plateaus belong to K_k
    std::vector<std::int64_t> full;    // cells with zero target and no term; the whole cell is in K_k

    double active_measure = 0.0;       // |U_k|
    double covered_measure = 0.0;      // |K_k|
    double match_tolerance = 0.0;      // max field oscillation over covered plateaus (<= tau)
    std::vector<double> sup_bound;     // per derivative order 0..m-1, bound on ||D^gamma g_k||
    std::vector<double> lipschitz_bound; // per order 0..m-2, bound on Lip(D^gamma g_k)
    double top_lipschitz = 0.0;        // bound on Lip(D^gamma g_k), |gamma| = m-1
    double sup_budget = 0.0;           // 2^-k sigma
    double modulus_budget = 0.0;       // 2^-k
    double delta = 0.0;
    double sup_ratio = 0.0;            // M
    double derived_constant = 0.0;     // C(n,m) realised by the cutoff
    std::size_t rejected_oscillation = 0;
    std::size_t rejected_pinch = 0;
    std::size_t rejected_truncation = 0;
    bool partial = false;

    /// Closed plateau box of a covered cell.
    Box plateau(std::int64_t flat) const;
    /// Closed outer box of a cell.
    Box cell(std::int64_t flat) const;
};

/// Coverage, tolerances and budget ledger of a multi-stage build.
struct BuildCertificate {
    int n = 0;
    int m = 0;
    double domain_measure = 0.0;
    double truncation_bound = 0.0;
    double truncation_excluded = 0.0;  // |Omega \ K'|
    double residual_target = 0.0;      // eps |Omega|
    std::vector<StageRecord> stages;

    std::vector<double> sup_ledger;       // sum over stages per order 0..m-1 (< sigma)
    std::vector<double> lipschitz_ledger; // sum over stages per order 0..m-2 (<= sigma)
    double modulus_ledger = 0.0;          // sum of modulus budgets actually certified (<= 1)
    double sigma = 0.0;
    double tau = 0.0;

    double covered_measure() const;
    double residual_measure() const { return domain_measure - covered_measure(); }

    bool sup_within_budget() const;
    bool lipschitz_within_budget() const;
    bool modulus_within_budget() const;
    bool residual_within_target() const { return residual_measure() <= residual_target; }
    bool partial() const;
    bool all_ledgers_ok() const {
        return sup_within_budget() && lipschitz_within_budget() && modulus_within_budget();
    }
};

}  // namespace lusin
