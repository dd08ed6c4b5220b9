#pragma once

#include <vector>

#include "lusin/construct/build_config.hpp"
#include "lusin/construct/lemma.hpp"
#include "lusin/core/bump_poly_sum.hpp"
#include "lusin/core/certificate.hpp"

namespace lusin {

/// Everything a stage needs to know about the build so far.
struct StageContext {
    const BoxDomain& domain;
    const Truncation& truncation;
    const BuildConfig& config;
    const BumpPolySum& previous;                   // sum of g_j, j < k
    const std::vector<StageRecord>& previous_stages;
    int stage = 1;
    int start_level = 0;
    double sup_budget = 0.0;                       // 2^-k sigma
    double modulus_budget = 0.0;                   // 2^-k
    double residual_target = 0.0;                  // stop refining once |Omega \ K| reaches this
};

struct StageResult {
    std::vector<CellTerm> terms;
    StageRecord record;
};

/// Builds g_k on the active set U_k = Omega minus cells used by earlier stages.
///
/// Each accepted cell Q with centre c carries cutoff_Q(x) * sum_alpha a_alpha (x-c)^alpha / alpha!
/// with a_alpha the target field at c. A cell is accepted when the target varies by at most tau
/// over its plateau (which then joins K_k) and its lower-order derivative bounds sit below
/// sup_budget * min(dist(Q, U_k^c)^2, 1) / 2. The cell side is halved from the base grid until the
/// stage-wide bounds satisfy, with margin 2,
///   ||D^gamma g_k|| <= sup_budget / sqrt(n)   for |gamma| < m,
///   ||D^gamma g_k|| <= modulus_budget / (2M)  for |gamma| = m-1,
/// where delta and M come from choose_lemma_params with the realised top-order Lipschitz bound.
/// Throws InfeasibleError naming the violated inequality when no admissible cell side exists
/// within config.max_cells.
StageResult single_stage_build(const StageContext& ctx);

}  // namespace lusin
