#include "lusin/core/certificate.hpp"

namespace lusin {

double Box::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
    return v;
}

bool Box::contains(const Point& x) const {
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
}

Box StageRecord::cell(std::int64_t flat) const {
    const std::size_t n = origin.size();
    Box b{Point(n), Point(n)};
    for (std::size_t i = n; i-- > 0;) {
        const auto shape = static_cast<std::int64_t>(grid_shape[i]);
        const auto k = flat % shape;
        flat /= shape;
        b.lower[i] = origin[i] + static_cast<double>(k) * cell_side[i];
        b.upper[i] = origin[i] + static_cast<double>(k + 1) * cell_side[i];
    }
    return b;
}

Box StageRecord::plateau(std::int64_t flat) const {
    Box b = cell(flat);
    for (std::size_t i = 0; i < b.lower.size(); ++i) {
        const double c = 0.5 * (b.lower[i] + b.upper[i]);
        const double r = 0.5 * (b.upper[i] - b.lower[i]) * (1.0 - theta);
        b.lower[i] = c - r;
        b.upper[i] = c + r;
    }
    return b;
}

double BuildCertificate::covered_measure() const {
    double s = 0.0;
    for (const auto& st : stages) s += st.covered_measure;
    return s;
}

bool BuildCertificate::sup_within_budget() const {
    for (double v : sup_ledger) {
        if (!(v < sigma)) return false;
    }
    return true;
}

bool BuildCertificate::lipschitz_within_budget() const {
    for (double v : lipschitz_ledger) {
        if (!(v <= sigma)) return false;
    }
    return true;
}

bool BuildCertificate::modulus_within_budget() const { return modulus_ledger <= 1.0; }

bool BuildCertificate::partial() const {
    if (!residual_within_target()) return true;
    for (const auto& s : stages) {
        if (s.partial) return true;
    }
    return false;
}

}  // namespace lusin
