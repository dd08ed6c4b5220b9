#include "lusin/core/multi_index.hpp"

#include <algorithm>
#include <numeric>

#include "lusin/core/errors.hpp"

namespace lusin {

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
    if (exps_.empty()) throw ValidationError("multi-index must have dimension >= 1");
    for (int e : exps_) {
        if (e < 0) throw ValidationError("multi-index exponents must be non-negative");
    }
    order_ = std::accumulate(exps_.begin(), exps_.end(), 0);
}

MultiIndex MultiIndex::unit(std::size_t n, std::size_t axis) {
    std::vector<int> e(n, 0);
    e.at(axis) = 1;
    return MultiIndex(std::move(e));
}

double MultiIndex::factorial() const {
    double f = 1.0;
    for (int e : exps_) {
        for (int k = 2; k <= e; ++k) f *= k;
    }
    return f;
}

bool MultiIndex::dominates(const MultiIndex& beta) const {
    if (beta.dim() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (beta.exps_[i] > exps_[i]) return false;
    }
    return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_.at(i);
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= other.exps_.at(i);
    return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(exps_[i]);
    }
    return s + ")";
}

namespace {

void fill(std::size_t n, int remaining, std::vector<int>& cur, std::vector<MultiIndex>& out) {
    const std::size_t axis = cur.size();
    if (axis + 1 == n) {
        cur.push_back(remaining);
        out.emplace_back(cur);
        cur.pop_back();
        return;
    }
    for (int e = 0; e <= remaining; ++e) {
        cur.push_back(e);
        fill(n, remaining - e, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<MultiIndex> enumerate_multiindices(std::size_t n, int m) {
    if (n < 1) throw ValidationError("dimension must be >= 1");
    if (m < 0) throw ValidationError("order must be >= 0");
    std::vector<MultiIndex> out;
    std::vector<int> cur;
    cur.reserve(n);
    fill(n, m, cur, out);
    return out;
}

std::vector<MultiIndex> enumerate_up_to(std::size_t n, int m) {
    std::vector<MultiIndex> out;
    for (int k = 0; k <= m; ++k) {
        auto level = enumerate_multiindices(n, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::size_t index_up_to(const std::vector<MultiIndex>& layout, const MultiIndex& alpha) {
    auto it = std::find(layout.begin(), layout.end(), alpha);
    if (it == layout.end()) throw ValidationError("multi-index " + alpha.to_string() + " not in layout");
    return static_cast<std::size_t>(it - layout.begin());
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double multi_binomial(const MultiIndex& alpha, const MultiIndex& beta) {
    double r = 1.0;
    for (std::size_t i = 0; i < alpha.dim(); ++i) r *= binomial(alpha[i], beta[i]);
    return r;
}

}  // namespace lusin
