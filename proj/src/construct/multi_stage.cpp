#include "lusin/construct/multi_stage.hpp"

#include <algorithm>
#include <cmath>

#include "lusin/construct/lemma.hpp"
#include "lusin/construct/stage.hpp"
#include "lusin/core/errors.hpp"
#include "lusin/core/rng.hpp"

namespace lusin {

BuildResult multi_stage_build(const FieldCollection& f, const BoxDomain& dom, const BuildConfig& cfg) {
    cfg.validate();
    if (f.dim() != dom.dim()) throw ValidationError("field and domain dimensions disagree");
    const std::size_t n = dom.dim();
    const int m = f.order();
    if (m < 1) throw ValidationError("construction requires m >= 1");

    const Truncation trunc = lusin_truncate(f, dom, cfg.quantile);

    BuildCertificate cert;
    cert.n = static_cast<int>(n);
    cert.m = m;
    cert.domain_measure = dom.measure();
    cert.truncation_bound = trunc.bound;
    cert.truncation_excluded = trunc.excluded_measure;
    cert.residual_target = cfg.eps * cert.domain_measure;
    cert.sigma = cfg.sigma;
    cert.tau = cfg.tau;
    cert.sup_ledger.assign(static_cast<std::size_t>(m), 0.0);
    cert.lipschitz_ledger.assign(static_cast<std::size_t>(std::max(m - 1, 0)), 0.0);

    std::vector<CellTerm> terms;
    BumpPolySum current(n, m);
    int level = 0;
    for (int k = 1; k <= cfg.stages; ++k) {
        const double scale = std::ldexp(1.0, -k);
        StageContext ctx{dom, trunc, cfg, current, cert.stages, k, level, scale * cfg.sigma, scale,
                         cert.residual_target};
        StageResult res = single_stage_build(ctx);
        level = res.record.level;
        for (int j = 0; j < m; ++j) cert.sup_ledger[static_cast<std::size_t>(j)] += res.record.sup_bound[static_cast<std::size_t>(j)];
        for (int j = 0; j + 1 < m; ++j)
            cert.lipschitz_ledger[static_cast<std::size_t>(j)] += res.record.lipschitz_bound[static_cast<std::size_t>(j)];
        if (!res.record.covered.empty()) cert.modulus_ledger += res.record.modulus_budget;
        const bool added = !res.terms.empty();
        terms.insert(terms.end(), std::make_move_iterator(res.terms.begin()), std::make_move_iterator(res.terms.end()));
        cert.stages.push_back(std::move(res.record));
        if (added) current = BumpPolySum(n, m, terms);
        if (cert.stages.back().active_measure == 0.0) break;
    }
    return {BumpPolySum(n, m, std::move(terms)), std::move(cert)};
}

PinchReport tail_pinch_check(const BumpPolySum& g, const BuildCertificate& cert, std::size_t samples,
                             std::uint64_t seed) {
    PinchReport rep;
    const std::size_t n = g.dim();
    const int m = g.order();
    const auto gammas = enumerate_multiindices(n, std::max(m - 1, 0));

    // Stages k whose K_k is non-empty and that have at least one later stage with terms.
    std::vector<std::size_t> candidates;
    int last_stage_with_terms = 0;
    for (const auto& t : g.terms()) last_stage_with_terms = std::max(last_stage_with_terms, t.stage);
    for (std::size_t s = 0; s < cert.stages.size(); ++s) {
        const auto& rec = cert.stages[s];
        if (rec.stage < last_stage_with_terms && (!rec.covered.empty() || !rec.full.empty())) candidates.push_back(s);
    }
    if (candidates.empty()) {
        rep.vacuous = true;
        return rep;
    }

    Rng rng(seed, "tail-pinch");
    for (std::size_t i = 0; i < samples; ++i) {
        const auto& rec = cert.stages[candidates[rng.index(candidates.size())]];
        const std::size_t pool = rec.covered.size() + rec.full.size();
        const std::size_t pick = rng.index(pool);
        const Box box = pick < rec.covered.size() ? rec.plateau(rec.covered[pick])
                                                  : rec.cell(rec.full[pick - rec.covered.size()]);
        Point x(n), y(n), h(n);
        for (std::size_t d = 0; d < n; ++d) x[d] = rng.uniform(box.lower[d], box.upper[d]);
        const double len = rng.log_uniform(1e-4, 1e-1);
        double norm = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            h[d] = rng.normal();
            norm += h[d] * h[d];
        }
        norm = std::sqrt(norm);
        double h2 = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            h[d] *= len / norm;
            y[d] = x[d] + h[d];
            h2 += h[d] * h[d];
        }
        const double bound = cert.sigma * h2;
        for (const auto& gamma : gammas) {
            double tail = 0.0;
            for (auto k : g.terms_at(y)) {
                if (g.terms()[k].stage > rec.stage) tail += std::abs(g.term_derivative(k, y, gamma));
            }
            const double ratio = tail / bound;
            if (ratio > rep.worst_ratio || rep.samples == 0) {
                rep.worst_ratio = std::max(rep.worst_ratio, ratio);
                rep.worst = {x, h, rec.stage, tail, bound};
            }
            if (ratio > 1.0) rep.violations.push_back({x, h, rec.stage, tail, bound});
        }
        ++rep.samples;
    }
    return rep;
}

}  // namespace lusin
