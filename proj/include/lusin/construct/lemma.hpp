#pragma once

#include <cstdint>
#include <vector>

#include "lusin/construct/field.hpp"
#include "lusin/core/box_domain.hpp"
#include "lusin/core/modulus.hpp"

namespace lusin {

struct Truncation {
    FieldCollection fields;         // equal to f on K', 0 elsewhere
    std::vector<std::uint8_t> keep; // K' as a base-cell mask
    double bound = 0.0;             // T
    double excluded_measure = 0.0;  // |Omega \ K'|
};

/// Bounds the fields by their q-quantile of max_alpha |f_alpha| over base-cell
/// centres and zeroes them on the cells above it.
Truncation lusin_truncate(const FieldCollection& f, const BoxDomain& dom, double q);

struct LemmaParams {
    double truncation = 0.0;  // T
    double bound = 0.0;       // B: mu(t) <= B on [0, delta]
    double delta = 0.0;
    double sup_ratio = 0.0;   // M = sup{ mu(t)/t : t >= delta }
    double constant = 0.0;    // C(n,m) of the cutoff construction
};

/// Selects delta as the largest t <= cap with mu <= B on [0, t], where
/// B = budget * eps^m / (sqrt(n) C |Omega|^m T), and M = sup_{t >= delta} mu(t)/t.
/// Throws InfeasibleError("delta") when no positive delta exists in double precision.
LemmaParams choose_lemma_params(const Modulus& mu, double eps, double measure, double truncation, int m,
                                std::size_t n, double constant, double cap, double budget = 1.0);

/// Same selection for an explicit bound B.
LemmaParams choose_lemma_params_for_bound(const Modulus& mu, double bound, double cap);

}  // namespace lusin
