#pragma once

#include <cstdint>
#include <vector>

#include "lusin/construct/build_config.hpp"
#include "lusin/construct/field.hpp"
#include "lusin/core/bump_poly_sum.hpp"
#include "lusin/core/certificate.hpp"

namespace lusin {

struct BuildResult {
    BumpPolySum function;
    BuildCertificate certificate;
};

/// Runs stages k = 1..N with budgets 2^-k sigma (sup-norm, Lipschitz) and 2^-k
/// (modulus); stage k targets f_alpha - sum_{j<k} D^alpha g_j on the cells not used
/// by earlier stages. Infeasibility propagates with the stage index.
BuildResult multi_stage_build(const FieldCollection& f, const BoxDomain& dom, const BuildConfig& cfg);

struct PinchWitness {
    Point x;
    Point offset;
    int stage = 0;
    double tail = 0.0;   // sum_{j>k} |D^gamma g_j(x+h)|
    double bound = 0.0;  // sigma |h|^2
};

struct PinchReport {
    std::size_t samples = 0;
    double worst_ratio = 0.0;      // max tail / bound
    bool vacuous = false;          // no later stages to test
    std::vector<PinchWitness> violations;
    PinchWitness worst;

    bool passed() const { return violations.empty(); }
};

/// For sampled x in K_k and |h| log-uniform in [1e-4, 1e-1], checks
/// sum_{j>k} |D^gamma g_j(x+h)| <= sigma |h|^2 for every |gamma| = m-1.
PinchReport tail_pinch_check(const BumpPolySum& g, const BuildCertificate& cert, std::size_t samples,
                             std::uint64_t seed);

}  // namespace lusin
