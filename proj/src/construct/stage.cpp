#include "lusin/construct/stage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "lusin/core/errors.hpp"

namespace lusin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMargin = 2.0;

// Squared Euclidean distance transform along one line (Felzenszwalb-Huttenlocher),
// sites spaced `step` apart.
void edt_line(std::vector<double>& f, double step) {
    const std::size_t len = f.size();
    const double w = step * step;
    std::vector<std::size_t> v(len);
    std::vector<double> z(len + 1);
    std::vector<double> d(len);
    std::size_t k = 0;
    bool any = false;
    for (std::size_t q = 0; q < len; ++q) {
        if (!std::isfinite(f[q])) continue;
        if (!any) {
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            any = true;
            continue;
        }
        while (true) {
            const auto p = v[k];
            const double qd = static_cast<double>(q), pd = static_cast<double>(p);
            const double s = ((f[q] + w * qd * qd) - (f[p] + w * pd * pd)) / (2.0 * w * (qd - pd));
            if (s <= z[k] && k > 0) {
                --k;
                continue;
            }
            if (s <= z[k]) {  // k == 0: replace
                v[0] = q;
                z[0] = -kInf;
                z[1] = kInf;
                break;
            }
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = kInf;
            break;
        }
    }
    if (!any) return;
    k = 0;
    for (std::size_t q = 0; q < len; ++q) {
        while (z[k + 1] < static_cast<double>(q)) ++k;
        const double diff = static_cast<double>(q) - static_cast<double>(v[k]);
        d[q] = w * diff * diff + f[v[k]];
    }
    f.swap(d);
}

// In-place n-dimensional squared EDT on a row-major grid.
void edt(std::vector<double>& grid, const std::vector<int>& shape, const std::vector<double>& step) {
    const std::size_t n = shape.size();
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t i = n - 1; i-- > 0;) stride[i] = stride[i + 1] * static_cast<std::size_t>(shape[i + 1]);
    const std::size_t total = grid.size();
    std::vector<double> line;
    for (std::size_t axis = 0; axis < n; ++axis) {
        const auto len = static_cast<std::size_t>(shape[axis]);
        line.resize(len);
        for (std::size_t start = 0; start < total; ++start) {
            // visit each line once: start must have coordinate 0 along axis
            if ((start / stride[axis]) % len != 0) continue;
            for (std::size_t j = 0; j < len; ++j) line[j] = grid[start + j * stride[axis]];
            edt_line(line, step[axis]);
            for (std::size_t j = 0; j < len; ++j) grid[start + j * stride[axis]] = line[j];
        }
    }
}

struct LevelOutcome {
    StageResult result;
    bool feasible = false;
    std::string violated;   // name of the violated inequality
    std::string detail;
    double shortfall = 1.0; // actual / allowed for the violated bound
};

class StageBuilder {
public:
    explicit StageBuilder(const StageContext& ctx)
        : ctx_(ctx), dom_(ctx.domain), n_(dom_.dim()), m_(ctx.truncation.fields.order()),
          theta_(ctx.config.resolved_theta(n_)), profile_(m_, theta_),
          top_(enumerate_multiindices(n_, m_)), lower_(enumerate_up_to(n_, m_)),
          layout_(enumerate_up_to(n_, m_)) {}

    int max_level() const {
        int level = 0;
        while (true) {
            double cells = 1.0;
            for (int r : dom_.resolution()) cells *= static_cast<double>(r) * std::ldexp(1.0, level + 1);
            if (cells > static_cast<double>(ctx_.config.max_cells) || level >= 40) return level;
            ++level;
        }
    }

    LevelOutcome run(int level);

private:
    // W[gamma][alpha]: bound on |D^gamma term| per unit |a_alpha| at this level.
    std::vector<std::vector<double>> weights(const std::vector<double>& r) const;
    double center_correction(std::size_t k, const Point& c) const {
        return ctx_.previous.empty() ? 0.0 : ctx_.previous.derivative(c, top_[k]);
    }

    const StageContext& ctx_;
    const BoxDomain& dom_;
    std::size_t n_;
    int m_;
    double theta_;
    CutoffProfile profile_;
    std::vector<MultiIndex> top_;    // |alpha| = m
    std::vector<MultiIndex> lower_;  // |gamma| <= m
    std::vector<MultiIndex> layout_;
};

std::vector<std::vector<double>> StageBuilder::weights(const std::vector<double>& r) const {
    std::vector<std::vector<double>> w(lower_.size(), std::vector<double>(top_.size(), 0.0));
    for (std::size_t g = 0; g < lower_.size(); ++g) {
        const auto& gamma = lower_[g];
        for (const auto& beta : enumerate_up_to(n_, gamma.order())) {
            if (!gamma.dominates(beta)) continue;
            const double cb = multi_binomial(gamma, beta) * profile_.derivative_bound(r, beta);
            const MultiIndex eta = gamma - beta;
            for (std::size_t a = 0; a < top_.size(); ++a) {
                const auto& alpha = top_[a];
                if (!alpha.dominates(eta)) continue;
                // |D^eta (x-c)^alpha / alpha!| <= r^(alpha-eta) / (alpha-eta)!
                const MultiIndex rest = alpha - eta;
                double p = 1.0 / rest.factorial();
                for (std::size_t i = 0; i < n_; ++i) p *= std::pow(r[i], rest[i]);
                w[g][a] += cb * p;
            }
        }
    }
    return w;
}

LevelOutcome StageBuilder::run(int level) {
    const auto& cfg = ctx_.config;
    const double sqrt_n = std::sqrt(static_cast<double>(n_));
    const std::size_t scale = std::size_t{1} << level;

    std::vector<int> shape(n_);
    std::vector<double> side(n_), half(n_);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n_; ++i) {
        shape[i] = dom_.resolution()[i] * static_cast<int>(scale);
        side[i] = dom_.side(i) / shape[i];
        half[i] = 0.5 * side[i];
        total *= static_cast<std::size_t>(shape[i]);
    }
    auto unflatten = [&](std::size_t flat) {
        std::vector<int> idx(n_);
        for (std::size_t i = n_; i-- > 0;) {
            idx[i] = static_cast<int>(flat % static_cast<std::size_t>(shape[i]));
            flat /= static_cast<std::size_t>(shape[i]);
        }
        return idx;
    };
    auto flatten = [&](const std::vector<int>& idx) {
        std::size_t flat = 0;
        for (std::size_t i = 0; i < n_; ++i) flat = flat * static_cast<std::size_t>(shape[i]) + static_cast<std::size_t>(idx[i]);
        return flat;
    };

    // U_k^c inside the box: masked base cells and cells used by earlier stages.
    std::vector<double> dist2(total, kInf);
    for (std::size_t f = 0; f < total; ++f) {
        auto idx = unflatten(f);
        for (auto& v : idx) v /= static_cast<int>(scale);
        if (!dom_.active(dom_.flatten(idx))) dist2[f] = 0.0;
    }
    for (const auto& rec : ctx_.previous_stages) {
        if (rec.level > level) throw ValidationError("stage levels must be non-decreasing");
        const int up = 1 << (level - rec.level);
        for (const auto* list : {&rec.covered, &rec.full}) {
            for (auto id : *list) {
                std::vector<int> base(n_);
                auto flat = static_cast<std::size_t>(id);
                for (std::size_t i = n_; i-- > 0;) {
                    base[i] = static_cast<int>(flat % static_cast<std::size_t>(rec.grid_shape[i])) * up;
                    flat /= static_cast<std::size_t>(rec.grid_shape[i]);
                }
                std::vector<int> cur(base);
                while (true) {
                    dist2[flatten(cur)] = 0.0;
                    std::size_t i = 0;
                    for (; i < n_; ++i) {
                        if (++cur[i] < base[i] + up) break;
                        cur[i] = base[i];
                    }
                    if (i == n_) break;
                }
            }
        }
    }
    std::vector<std::uint8_t> blocked(total);
    for (std::size_t f = 0; f < total; ++f) blocked[f] = dist2[f] == 0.0;
    edt(dist2, shape, side);
    double diag = 0.0;
    for (double s : side) diag += s * s;
    diag = std::sqrt(diag);

    const auto w = weights(half);
    const double cell_vol = [&] { double v = 1.0; for (double s : side) v *= s; return v; }();
    const double plateau_vol = cell_vol * std::pow(1.0 - theta_, static_cast<double>(n_));

    LevelOutcome out;
    auto& rec = out.result.record;
    rec.stage = ctx_.stage;
    rec.level = level;
    rec.origin = dom_.lower();
    rec.cell_side = side;
    rec.grid_shape = shape;
    rec.theta = theta_;
    rec.sup_budget = ctx_.sup_budget;
    rec.modulus_budget = ctx_.modulus_budget;
    rec.sup_bound.assign(static_cast<std::size_t>(m_), 0.0);
    rec.lipschitz_bound.assign(static_cast<std::size_t>(std::max(m_ - 1, 0)), 0.0);
    double top_bound = 0.0;
    double max_coeff = 0.0;

    std::vector<double> a(top_.size());
    std::vector<double> bound(lower_.size());
    for (std::size_t f = 0; f < total; ++f) {
        if (blocked[f]) continue;
        rec.active_measure += cell_vol;
        const auto idx = unflatten(f);
        Point c(n_);
        Box cell{Point(n_), Point(n_)}, plateau{Point(n_), Point(n_)};
        double d_edge = kInf;
        for (std::size_t i = 0; i < n_; ++i) {
            cell.lower[i] = dom_.lower()[i] + idx[i] * side[i];
            cell.upper[i] = cell.lower[i] + side[i];
            c[i] = cell.lower[i] + half[i];
            plateau.lower[i] = c[i] - (1.0 - theta_) * half[i];
            plateau.upper[i] = c[i] + (1.0 - theta_) * half[i];
            d_edge = std::min({d_edge, idx[i] * side[i], (shape[i] - 1 - idx[i]) * side[i]});
        }
        if (!ctx_.truncation.fields.kept(cell)) {
            ++rec.rejected_truncation;
            continue;
        }
        double amax = 0.0;
        for (std::size_t k = 0; k < top_.size(); ++k) {
            a[k] = ctx_.truncation.fields.eval(k, c) - center_correction(k, c);
            amax = std::max(amax, std::abs(a[k]));
        }
        if (amax == 0.0) {
            double dev = 0.0;
            for (std::size_t k = 0; k < top_.size(); ++k)
                dev = std::max(dev, ctx_.truncation.fields.max_deviation(k, cell, 0.0));
            if (dev <= cfg.tau) {
                rec.full.push_back(static_cast<std::int64_t>(f));
                rec.covered_measure += cell_vol;
                rec.match_tolerance = std::max(rec.match_tolerance, dev);
            } else {
                ++rec.rejected_oscillation;
            }
            continue;
        }
        double dev = 0.0;
        for (std::size_t k = 0; k < top_.size(); ++k)
            dev = std::max(dev, ctx_.truncation.fields.max_deviation(k, plateau, a[k] + center_correction(k, c)));
        if (!(dev <= cfg.tau)) {
            ++rec.rejected_oscillation;
            continue;
        }
        double worst_lower = 0.0;
        for (std::size_t g = 0; g < lower_.size(); ++g) {
            double b = 0.0;
            for (std::size_t k = 0; k < top_.size(); ++k) b += std::abs(a[k]) * w[g][k];
            bound[g] = b;
            if (lower_[g].order() < m_) worst_lower = std::max(worst_lower, b);
        }
        const double d_block = std::isfinite(dist2[f]) ? std::max(0.0, std::sqrt(dist2[f]) - diag) : kInf;
        const double d = std::min(d_edge, d_block);
        if (!(kMargin * worst_lower < ctx_.sup_budget * std::min(d * d, 1.0))) {
            ++rec.rejected_pinch;
            continue;
        }
        CellTerm term;
        term.lower = cell.lower;
        term.upper = cell.upper;
        term.theta = theta_;
        term.stage = ctx_.stage;
        term.coeffs.assign(layout_.size(), 0.0);
        for (std::size_t k = 0; k < top_.size(); ++k)
            term.coeffs[index_up_to(layout_, top_[k])] = a[k] / top_[k].factorial();
        out.result.terms.push_back(std::move(term));
        rec.covered.push_back(static_cast<std::int64_t>(f));
        rec.covered_measure += plateau_vol;
        rec.match_tolerance = std::max(rec.match_tolerance, dev);
        max_coeff = std::max(max_coeff, amax);
        for (std::size_t g = 0; g < lower_.size(); ++g) {
            const int ord = lower_[g].order();
            if (ord < m_) {
                rec.sup_bound[static_cast<std::size_t>(ord)] = std::max(rec.sup_bound[static_cast<std::size_t>(ord)], bound[g]);
            } else {
                top_bound = std::max(top_bound, bound[g]);
            }
        }
    }

    for (int j = 0; j + 1 < m_; ++j)
        rec.lipschitz_bound[static_cast<std::size_t>(j)] = sqrt_n * rec.sup_bound[static_cast<std::size_t>(j + 1)];
    rec.top_lipschitz = sqrt_n * top_bound;

    // delta and M from the realised top-order Lipschitz bound: B = modulus_budget / L.
    const double measure = dom_.measure();
    const double T = ctx_.truncation.bound;
    const double eps = cfg.eps;
    rec.derived_constant = (T > 0.0 && rec.top_lipschitz > 0.0)
                               ? rec.top_lipschitz * std::pow(eps, m_) / (sqrt_n * std::pow(measure, m_) * T)
                               : 0.0;
    LemmaParams params;
    try {
        params = choose_lemma_params(cfg.modulus, eps, measure, T, m_, n_, rec.derived_constant, dom_.diameter(),
                                     ctx_.modulus_budget);
    } catch (const InfeasibleError& e) {
        std::ostringstream os;
        os << "stage " << ctx_.stage << ": " << e.what() << "; top-order Lipschitz bound " << rec.top_lipschitz
           << " (cutoff theta " << theta_ << ", field bound " << max_coeff << ")";
        throw InfeasibleError(e.constraint(), os.str());
    }
    rec.delta = params.delta;
    rec.sup_ratio = params.sup_ratio;

    out.feasible = true;
    out.shortfall = 1.0;
    const double lower_cap = ctx_.sup_budget / sqrt_n;
    for (int j = 0; j < m_; ++j) {
        const double s = kMargin * rec.sup_bound[static_cast<std::size_t>(j)];
        if (s > lower_cap) {
            out.feasible = false;
            const double ratio = s / lower_cap;
            if (ratio > out.shortfall) {
                out.shortfall = ratio;
                std::ostringstream os;
                os << "sup-norm: 2*||D^gamma g_k|| = " << s << " exceeds sigma_k/sqrt(n) = " << lower_cap
                   << " for |gamma| = " << j;
                out.violated = "sup-norm";
                out.detail = os.str();
            }
        }
    }
    const double mod_cap = ctx_.modulus_budget / (2.0 * params.sup_ratio);
    const double s_top = kMargin * rec.sup_bound[static_cast<std::size_t>(m_ - 1)];
    if (s_top > mod_cap) {
        out.feasible = false;
        const double ratio = s_top / mod_cap;
        if (ratio > out.shortfall) {
            out.shortfall = ratio;
            std::ostringstream os;
            os << "modulus: 2*||D^gamma g_k|| = " << s_top << " exceeds 2^-k/(2M) = " << mod_cap
               << " for |gamma| = m-1 (delta = " << params.delta << ", M = " << params.sup_ratio
               << ", Lipschitz bound " << rec.top_lipschitz << ")";
            out.violated = "modulus";
            out.detail = os.str();
        }
    }
    return out;
}

}  // namespace

StageResult single_stage_build(const StageContext& ctx) {
    if (!(ctx.sup_budget > 0.0) || !(ctx.modulus_budget > 0.0)) throw ValidationError("stage budgets must be > 0");
    if (ctx.truncation.fields.order() < 1) throw ValidationError("construction requires m >= 1");
    StageBuilder builder(ctx);
    const int last = std::max(builder.max_level(), ctx.start_level);
    const double measure = ctx.domain.measure();
    double covered_before = 0.0;
    for (const auto& r : ctx.previous_stages) covered_before += r.covered_measure;

    std::optional<StageResult> best;
    LevelOutcome last_failure;
    for (int level = ctx.start_level; level <= last; ++level) {
        LevelOutcome out = builder.run(level);
        if (!out.feasible) {
            // bounds shrink at least linearly with the cell side
            const int needed = static_cast<int>(std::ceil(std::log2(out.shortfall)));
            if (!best && level + needed > last) {
                std::ostringstream os;
                os << "stage " << ctx.stage << ": " << out.detail << "; needs about " << needed
                   << " more halvings of the cell side " << out.result.record.cell_side[0]
                   << " but the finest admissible level is " << last << " (max_cells " << ctx.config.max_cells << ")";
                throw InfeasibleError(out.violated, os.str());
            }
            last_failure = std::move(out);
            continue;
        }
        const double residual = measure - covered_before - out.result.record.covered_measure;
        if (residual <= ctx.residual_target) return std::move(out.result);
        if (!best || out.result.record.covered_measure > best->record.covered_measure) best = std::move(out.result);
    }
    // An empty feasible level only means every cell was rejected there; if a finer
    // level had cells but broke a bound, that failure is the informative outcome.
    if (!best || (best->record.covered.empty() && best->record.full.empty() && !last_failure.violated.empty())) {
        throw InfeasibleError(last_failure.violated, "stage " + std::to_string(ctx.stage) + ": " + last_failure.detail);
    }
    best->record.partial = true;
    return std::move(*best);
}

}  // namespace lusin
