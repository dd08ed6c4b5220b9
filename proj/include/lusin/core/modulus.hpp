#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lusin {

/// A modulus of continuity mu: continuous, mu(0) = 0, mu(t) = O(t) at infinity.
/// Increments of the top-order derivatives are bounded by |x-y| / mu(|x-y|).
class Modulus {
public:
    enum class Kind { Log, Power, PiecewiseLinear };

    struct Knot {
        double t;
        double value;
    };

    /// 0 at 0, 1/|log t| on (0, 1/e], e*t beyond.
    static Modulus log_preset();
    /// t^beta, 0 < beta <= 1.
    static Modulus power(double beta);
    /// Linear interpolation through knots starting at (0,0), extrapolated with the
    /// last slope. Knots must be strictly increasing in t with non-negative values
    /// and a non-negative final slope.
    static Modulus piecewise_linear(std::vector<Knot> knots);

    /// Parses "log", "power:<beta>" or "pwl:t0,v0;t1,v1;...".
    static Modulus parse(const std::string& spec);
    std::string to_string() const;

    Kind kind() const noexcept { return kind_; }
    double beta() const noexcept { return beta_; }
    const std::vector<Knot>& knots() const noexcept { return knots_; }

    double operator()(double t) const;

    /// Constants (C, t0) with mu(t) <= C t for all t >= t0.
    std::pair<double, double> growth_constants() const;

    /// Largest delta <= cap with mu(t) <= bound on [0, delta]. Returns 0 when the
    /// bound is violated arbitrarily close to 0 or the answer underflows.
    double small_scale_cut(double bound, double cap) const;

    /// sup{ mu(t)/t : t >= delta }, evaluated on the breakpoints, a log grid over
    /// [delta, t0] and the growth constant beyond t0.
    double sup_ratio_beyond(double delta, int grid_points = 1000) const;

private:
    Kind kind_ = Kind::Log;
    double beta_ = 1.0;
    std::vector<Knot> knots_;
};

}  // namespace lusin
