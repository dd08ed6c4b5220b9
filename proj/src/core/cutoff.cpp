#include "lusin/core/cutoff.hpp"

#include <algorithm>
#include <cmath>

#include "lusin/core/errors.hpp"

namespace lusin {

namespace {

double horner(const std::vector<double>& c, double s) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * s + c[i];
    return v;
}

std::vector<double> differentiate(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    return d;
}

}  // namespace

CutoffProfile::CutoffProfile(int m, double theta) : m_(m), theta_(theta) {
    if (m < 0) throw ValidationError("cutoff smoothness order must be >= 0");
    if (!(theta > 0.0 && theta < 1.0)) throw ValidationError("cutoff plateau fraction theta must lie in (0,1)");

    // S(s) = s^(m+1) * sum_k C(m+k,k) C(2m+1,m-k) (-s)^k
    std::vector<double> s(static_cast<std::size_t>(2 * m + 2), 0.0);
    for (int k = 0; k <= m; ++k) {
        double c = binomial(m + k, k) * binomial(2 * m + 1, m - k) * ((k % 2) ? -1.0 : 1.0);
        s[static_cast<std::size_t>(m + 1 + k)] = c;
    }
    polys_.push_back(s);
    for (int j = 1; j <= 2 * m + 1; ++j) polys_.push_back(differentiate(polys_.back()));

    // Top-down: S^(2m+1) is constant; below that, sample max plus half a grid
    // step times the bound already found for the next derivative.
    constexpr int kSamples = 20000;
    std::vector<double> all(polys_.size());
    all.back() = std::abs(polys_.back().empty() ? 0.0 : polys_.back()[0]);
    for (int j = 2 * m; j >= 0; --j) {
        const auto& p = polys_[static_cast<std::size_t>(j)];
        double mx = 0.0;
        for (int i = 0; i <= kSamples; ++i) mx = std::max(mx, std::abs(horner(p, static_cast<double>(i) / kSamples)));
        all[static_cast<std::size_t>(j)] = mx + 0.5 * all[static_cast<std::size_t>(j + 1)] / kSamples;
    }
    bounds_.assign(all.begin(), all.begin() + m + 1);
    bounds_[0] = 1.0;
}

double CutoffProfile::step(double s, int deriv) const {
    if (deriv < 0 || deriv > m_ + 1) throw ValidationError("smoothstep derivative order out of range");
    return horner(polys_[static_cast<std::size_t>(deriv)], s);
}

double CutoffProfile::eval_1d(double x, double c, double r, int deriv) const {
    if (deriv > m_) throw ValidationError("cutoff derivative order exceeds smoothness order");
    const double d = x - c;
    const double u = std::abs(d) / r;
    if (u >= 1.0) return 0.0;
    const double inner = 1.0 - theta_;
    if (u <= inner) return deriv == 0 ? 1.0 : 0.0;
    const double s = (u - inner) / theta_;
    if (deriv == 0) return 1.0 - step(s, 0);
    const double scale = 1.0 / (theta_ * r);
    double factor = std::pow(scale, deriv);
    if (d < 0.0 && (deriv % 2)) factor = -factor;
    return -step(s, deriv) * factor;
}

double CutoffProfile::eval(std::span<const double> lo, std::span<const double> hi, std::span<const double> x,
                           const MultiIndex& deriv) const {
    if (deriv.order() > m_) throw ValidationError("cutoff derivative order exceeds smoothness order");
    double v = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double c = 0.5 * (lo[i] + hi[i]);
        const double r = 0.5 * (hi[i] - lo[i]);
        v *= eval_1d(x[i], c, r, deriv[i]);
        if (v == 0.0) return 0.0;
    }
    return v;
}

double CutoffProfile::derivative_bound(std::span<const double> half_widths, const MultiIndex& beta) const {
    double b = 1.0;
    for (std::size_t i = 0; i < half_widths.size(); ++i) {
        if (beta[i] > 0) b *= step_bound(beta[i]) * std::pow(theta_ * half_widths[i], -beta[i]);
    }
    return b;
}

}  // namespace lusin
