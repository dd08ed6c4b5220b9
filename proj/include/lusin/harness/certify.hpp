#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lusin/construct/field.hpp"
#include "lusin/core/box_domain.hpp"
#include "lusin/core/bump_poly_sum.hpp"
#include "lusin/core/certificate.hpp"
#include "lusin/core/modulus.hpp"

namespace lusin::harness {

inline const std::set<std::string> kAllChecks = {"match", "supnorm", "lipschitz", "modulus", "pinch"};

struct CertifyOptions {
    std::set<std::string> checks = kAllChecks;
    std::size_t pairs = 100000;         // sampled points or pairs per check
    std::size_t pinch_samples = 10000;
    std::uint64_t seed = 1;
};

/// Worst observed ratio in one distance bin of a pair-sampled check.
struct BinStat {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t pairs = 0;
    double worst_ratio = 0.0;  // observed / allowed
};

struct CheckResult {
    std::string name;
    bool passed = true;
    bool vacuous = false;
    /// min over samples of allowed / observed; +inf when nothing was observed.
    double margin = 0.0;
    std::size_t samples = 0;
    nlohmann::json witness;  // worst sample, null when none
    std::string detail;
    std::vector<BinStat> bins;
};

struct CertifyReport {
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool passed() const;
    const CheckResult* find(const std::string& name) const;
    nlohmann::json to_json() const;
    /// One row per distance bin of every pair-sampled check.
    std::string bins_csv() const;
};

/// Re-checks a built function against its certificate by sampling:
///  match     |D^alpha g - f_alpha| <= tau on every certified cell (centre plus random plateau points)
///  supnorm   |D^gamma g| < sigma, |gamma| < m
///  lipschitz |D^gamma g(x) - D^gamma g(y)| <= sigma |x - y|, |gamma| <= m - 2
///  modulus   |D^gamma g(x) - D^gamma g(y)| <= |x - y| / mu(|x - y|), |gamma| = m - 1
///  pinch     tail_pinch_check
/// Pair distances are stratified over log-spaced bins down to 1e-7 of the diameter.
CertifyReport certify(const BumpPolySum& g, const BoxDomain& dom, const BuildCertificate& cert,
                      const FieldCollection& f, const Modulus& mu, const CertifyOptions& opts);

}  // namespace lusin::harness
