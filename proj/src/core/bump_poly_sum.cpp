#include "lusin/core/bump_poly_sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lusin/core/errors.hpp"

namespace lusin {

Point CellTerm::center() const {
    Point c(lower.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
    return c;
}

std::vector<double> CellTerm::half_widths() const {
    std::vector<double> r(lower.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = 0.5 * (upper[i] - lower[i]);
    return r;
}

BumpPolySum::BumpPolySum(std::size_t n, int m, std::vector<CellTerm> terms)
    : n_(n), m_(m), terms_(std::move(terms)), layout_(enumerate_up_to(n, m)) {
    for (const auto& t : terms_) {
        if (t.lower.size() != n_ || t.upper.size() != n_) throw ValidationError("cell term dimension mismatch");
        if (t.coeffs.size() != layout_.size()) throw ValidationError("cell term coefficient count mismatch");
        for (std::size_t i = 0; i < n_; ++i) {
            if (!(t.lower[i] < t.upper[i])) throw ValidationError("cell term box must have lower < upper");
        }
        if (t.stage < 1) throw ValidationError("cell term stage must be >= 1");
        if (!profiles_.count(t.theta)) profiles_.emplace(t.theta, std::make_shared<CutoffProfile>(m_, t.theta));
        stages_ = std::max(stages_, t.stage);
    }
    build_index();
}

const CutoffProfile& BumpPolySum::profile(double theta) const {
    auto it = profiles_.find(theta);
    if (it == profiles_.end()) throw ValidationError("no cutoff profile for theta");
    return *it->second;
}

std::uint64_t BumpPolySum::key_of(const std::vector<std::int64_t>& idx) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : idx) {
        h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

std::uint64_t BumpPolySum::key(const Bucketing& b, std::span<const double> x) const {
    std::vector<std::int64_t> idx(n_);
    for (std::size_t i = 0; i < n_; ++i)
        idx[i] = static_cast<std::int64_t>(std::floor((x[i] - b.origin[i]) / b.size[i]));
    return key_of(idx);
}

void BumpPolySum::build_index() {
    std::map<int, std::vector<std::size_t>> by_stage;
    for (std::size_t k = 0; k < terms_.size(); ++k) by_stage[terms_[k].stage].push_back(k);
    for (auto& [stage, ids] : by_stage) {
        Bucketing b;
        b.origin.assign(n_, std::numeric_limits<double>::infinity());
        b.size.assign(n_, std::numeric_limits<double>::infinity());
        for (auto k : ids) {
            for (std::size_t i = 0; i < n_; ++i) {
                b.origin[i] = std::min(b.origin[i], terms_[k].lower[i]);
                b.size[i] = std::min(b.size[i], terms_[k].upper[i] - terms_[k].lower[i]);
            }
        }
        for (auto k : ids) {
            const auto& t = terms_[k];
            std::vector<std::int64_t> lo(n_), hi(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                lo[i] = static_cast<std::int64_t>(std::floor((t.lower[i] - b.origin[i]) / b.size[i]));
                hi[i] = static_cast<std::int64_t>(std::floor((t.upper[i] - b.origin[i]) / b.size[i]));
            }
            std::vector<std::int64_t> cur(lo);
            while (true) {
                auto& slot = b.cells[key_of(cur)];
                if (slot.empty() || slot.back() != k) slot.push_back(k);
                std::size_t i = 0;
                for (; i < n_; ++i) {
                    if (++cur[i] <= hi[i]) break;
                    cur[i] = lo[i];
                }
                if (i == n_) break;
            }
        }
        index_.emplace(stage, std::move(b));
    }
}

std::vector<std::size_t> BumpPolySum::terms_at(std::span<const double> x) const {
    std::vector<std::size_t> out;
    for (const auto& [stage, b] : index_) {
        auto it = b.cells.find(key(b, x));
        if (it == b.cells.end()) continue;
        for (auto k : it->second) {
            const auto& t = terms_[k];
            bool inside = true;
            for (std::size_t i = 0; i < n_ && inside; ++i) inside = x[i] >= t.lower[i] && x[i] <= t.upper[i];
            if (inside) out.push_back(k);
        }
    }
    return out;
}

double BumpPolySum::poly_derivative(const CellTerm& t, std::span<const double> x, const MultiIndex& eta) const {
    double v = 0.0;
    for (std::size_t j = 0; j < layout_.size(); ++j) {
        const auto& beta = layout_[j];
        if (t.coeffs[j] == 0.0 || !beta.dominates(eta)) continue;
        double term = t.coeffs[j];
        for (std::size_t i = 0; i < n_; ++i) {
            const int b = beta[i];
            const int e = eta[i];
            for (int k = 0; k < e; ++k) term *= (b - k);
            const double d = x[i] - 0.5 * (t.lower[i] + t.upper[i]);
            for (int k = 0; k < b - e; ++k) term *= d;
        }
        v += term;
    }
    return v;
}

double BumpPolySum::term_derivative(std::size_t k, std::span<const double> x, const MultiIndex& gamma) const {
    if (gamma.order() > m_) throw ValidationError("derivative order exceeds the function's order");
    const auto& t = terms_.at(k);
    const auto& prof = profile(t.theta);
    double v = 0.0;
    // Leibniz rule over beta <= gamma
    for (const auto& beta : enumerate_up_to(n_, gamma.order())) {
        if (!gamma.dominates(beta)) continue;
        const double phi = prof.eval(t.lower, t.upper, x, beta);
        if (phi == 0.0) continue;
        v += multi_binomial(gamma, beta) * phi * poly_derivative(t, x, gamma - beta);
    }
    return t.weight * v;
}

template <class Pred>
double BumpPolySum::accumulate(std::span<const double> x, const MultiIndex& gamma, Pred keep) const {
    if (x.size() != n_) throw ValidationError("evaluation point dimension mismatch");
    double v = 0.0;
    for (auto k : terms_at(x)) {
        if (keep(terms_[k])) v += term_derivative(k, x, gamma);
    }
    return v;
}

double BumpPolySum::derivative(std::span<const double> x, const MultiIndex& gamma) const {
    return accumulate(x, gamma, [](const CellTerm&) { return true; });
}

double BumpPolySum::stage_derivative(std::span<const double> x, const MultiIndex& gamma, int stage) const {
    return accumulate(x, gamma, [stage](const CellTerm& t) { return t.stage == stage; });
}

}  // namespace lusin
