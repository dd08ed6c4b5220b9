#include "lusin/construct/lemma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lusin/construct/build_config.hpp"
#include "lusin/core/errors.hpp"

namespace lusin {

void BuildConfig::validate() const {
    if (!(eps > 0.0)) throw ValidationError("eps must be > 0");
    if (!(sigma > 0.0)) throw ValidationError("sigma must be > 0");
    if (!(tau >= 0.0)) throw ValidationError("tau must be >= 0");
    if (!(quantile > 0.0 && quantile < 1.0)) throw ValidationError("quantile must lie in (0,1)");
    if (stages < 1) throw ValidationError("stage count must be >= 1");
    if (!(theta == 0.0 || (theta > 0.0 && theta < 1.0))) throw ValidationError("theta must be 0 (auto) or in (0,1)");
    if (max_cells < 1) throw ValidationError("max_cells must be >= 1");
}

double BuildConfig::resolved_theta(std::size_t n) const {
    if (theta > 0.0) return theta;
    const double keep = std::max(1.0 - 0.5 * std::min(eps, 1.0), 1e-3);
    return std::clamp(1.0 - std::pow(keep, 1.0 / static_cast<double>(n)), 1e-6, 0.999);
}

Truncation lusin_truncate(const FieldCollection& f, const BoxDomain& dom, double q) {
    if (!(q > 0.0 && q < 1.0)) throw ValidationError("truncation quantile must lie in (0,1)");
    if (f.dim() != dom.dim()) throw ValidationError("field and domain dimensions disagree");
    const std::size_t cells = dom.cell_count();
    std::vector<double> peak(cells, 0.0);
    std::vector<double> active;
    active.reserve(dom.active_count());
    for (std::size_t c = 0; c < cells; ++c) {
        if (!dom.active(c)) continue;
        const Point x = dom.cell_center(c);
        double v = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) {
            const double fk = std::abs(f.eval(k, x));
            v = std::max(v, std::isfinite(fk) ? fk : std::numeric_limits<double>::infinity());
        }
        peak[c] = v;
        active.push_back(v);
    }
    if (active.empty()) throw ValidationError("cannot truncate on an empty domain");
    std::vector<double> sorted(active);
    std::sort(sorted.begin(), sorted.end());
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    double bound = sorted[rank - 1];
    if (!std::isfinite(bound)) {
        auto finite_end = std::lower_bound(sorted.begin(), sorted.end(), std::numeric_limits<double>::infinity());
        if (finite_end == sorted.begin()) throw ValidationError("field is non-finite on every cell");
        bound = *(finite_end - 1);
    }

    Truncation out{f, std::vector<std::uint8_t>(cells, 0), bound, 0.0};
    std::size_t dropped = 0;
    for (std::size_t c = 0; c < cells; ++c) {
        if (!dom.active(c)) continue;
        if (peak[c] <= bound) {
            out.keep[c] = 1;
        } else {
            ++dropped;
        }
    }
    out.excluded_measure = static_cast<double>(dropped) * dom.cell_volume();
    out.fields = f.truncated(dom, out.keep);
    return out;
}

LemmaParams choose_lemma_params_for_bound(const Modulus& mu, double bound, double cap) {
    LemmaParams p;
    p.bound = bound;
    p.delta = std::isinf(bound) ? cap : mu.small_scale_cut(bound, cap);
    if (!(p.delta > 0.0)) {
        std::ostringstream os;
        os.precision(6);
        os << "delta: no t > 0 with mu(t) <= " << bound << " is representable in double precision (modulus "
           << mu.to_string() << ")";
        throw InfeasibleError("delta", os.str());
    }
    p.sup_ratio = mu.sup_ratio_beyond(p.delta);
    return p;
}

LemmaParams choose_lemma_params(const Modulus& mu, double eps, double measure, double truncation, int m,
                                std::size_t n, double constant, double cap, double budget) {
    if (!(truncation >= 0.0)) throw ValidationError("truncation bound must be >= 0");
    const double denom = std::sqrt(static_cast<double>(n)) * constant * std::pow(measure, m) * truncation;
    const double bound = denom > 0.0 ? budget * std::pow(eps, m) / denom : std::numeric_limits<double>::infinity();
    LemmaParams p = choose_lemma_params_for_bound(mu, bound, cap);
    p.truncation = truncation;
    p.constant = constant;
    return p;
}

}  // namespace lusin
