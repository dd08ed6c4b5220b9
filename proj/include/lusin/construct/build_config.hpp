#pragma once

#include <cstddef>
#include <cstdint>

#include "lusin/core/modulus.hpp"

namespace lusin {

struct BuildConfig {
    double eps = 0.05;             // measure budget: target |Omega \ K| <= eps |Omega|
    double sigma = 0.5;            // sup-norm and Lipschitz budget
    Modulus modulus = Modulus::log_preset();
    double theta = 0.0;            // cutoff transition fraction; 0 selects 1-(1-eps/2)^(1/n)
    double tau = 1e-3;             // match tolerance on K
    double quantile = 0.99;        // truncation quantile q
    int stages = 6;                // N
    std::uint64_t seed = 1;
    std::size_t max_cells = std::size_t{1} << 22;  // per refinement level

    /// Throws ValidationError on a non-positive budget or out-of-range knob.
    void validate() const;
    /// Resolved cutoff transition fraction for dimension n.
    double resolved_theta(std::size_t n) const;
};

}  // namespace lusin
