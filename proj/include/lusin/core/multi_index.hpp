#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace lusin {

/// Exponent vector alpha of a mixed partial derivative D^alpha.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exponents);

    static MultiIndex zero(std::size_t n) { return MultiIndex(std::vector<int>(n, 0)); }
    static MultiIndex unit(std::size_t n, std::size_t axis);

    std::size_t dim() const noexcept { return exps_.size(); }
    int order() const noexcept { return order_; }
    int operator[](std::size_t i) const { return exps_[i]; }
    const std::vector<int>& exponents() const noexcept { return exps_; }

    /// alpha! = prod alpha_i!
    double factorial() const;
    /// Componentwise beta <= alpha.
    bool dominates(const MultiIndex& beta) const;
    MultiIndex operator+(const MultiIndex& other) const;
    MultiIndex operator-(const MultiIndex& other) const;

    std::string to_string() const;

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.exps_ == b.exps_; }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.exps_ < b.exps_; }

private:
    std::vector<int> exps_;
    int order_ = 0;
};

/// All alpha with |alpha| = m in dimension n, lexicographically ascending.
std::vector<MultiIndex> enumerate_multiindices(std::size_t n, int m);

/// All alpha with |alpha| <= m, grouped by order then lexicographic. This is the
/// coefficient layout of cell polynomials.
std::vector<MultiIndex> enumerate_up_to(std::size_t n, int m);

/// Position of alpha in enumerate_up_to(n, m); throws if absent.
std::size_t index_up_to(const std::vector<MultiIndex>& layout, const MultiIndex& alpha);

/// Product of binomials C(alpha_i, beta_i).
double multi_binomial(const MultiIndex& alpha, const MultiIndex& beta);

/// C(n, k) as a double.
double binomial(int n, int k);

}  // namespace lusin
