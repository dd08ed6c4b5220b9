#include "lusin/core/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lusin/core/errors.hpp"

namespace lusin {

namespace {
constexpr double kInvE = 1.0 / std::numbers::e;
}

Modulus Modulus::log_preset() { return Modulus{}; }

Modulus Modulus::power(double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw ValidationError("power modulus requires 0 < beta <= 1");
    Modulus m;
    m.kind_ = Kind::Power;
    m.beta_ = beta;
    return m;
}

Modulus Modulus::piecewise_linear(std::vector<Knot> knots) {
    if (knots.size() < 2) throw ValidationError("piecewise-linear modulus needs at least two knots");
    if (knots.front().t != 0.0 || knots.front().value != 0.0)
        throw ValidationError("piecewise-linear modulus must start at the knot (0,0)");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i].t) || !std::isfinite(knots[i].value))
            throw ValidationError("modulus knots must be finite");
        if (knots[i].value < 0.0) throw ValidationError("modulus knot values must be non-negative");
        if (i > 0 && !(knots[i].t > knots[i - 1].t))
            throw ValidationError("modulus knots must be strictly increasing in t");
    }
    const auto& a = knots[knots.size() - 2];
    const auto& b = knots.back();
    if (b.value < a.value) throw ValidationError("modulus final slope must be non-negative");
    Modulus m;
    m.kind_ = Kind::PiecewiseLinear;
    m.knots_ = std::move(knots);
    return m;
}

Modulus Modulus::parse(const std::string& spec) {
    if (spec == "log") return log_preset();
    if (spec.rfind("power:", 0) == 0) {
        try {
            return power(std::stod(spec.substr(6)));
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const ValidationError*>(&e)) throw;
            throw ValidationError("malformed power modulus '" + spec + "'");
        }
    }
    if (spec.rfind("pwl:", 0) == 0) {
        std::vector<Knot> knots;
        std::stringstream ss(spec.substr(4));
        std::string item;
        while (std::getline(ss, item, ';')) {
            auto comma = item.find(',');
            if (comma == std::string::npos) throw ValidationError("malformed modulus knot '" + item + "'");
            try {
                knots.push_back({std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1))});
            } catch (const std::logic_error&) {
                throw ValidationError("malformed modulus knot '" + item + "'");
            }
        }
        return piecewise_linear(std::move(knots));
    }
    throw ValidationError("unknown modulus spec '" + spec + "' (expected log, power:<beta>, pwl:<knots>)");
}

std::string Modulus::to_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case Kind::Log:
            return "log";
        case Kind::Power:
            os << "power:" << beta_;
            return os.str();
        case Kind::PiecewiseLinear:
            os << "pwl:";
            for (std::size_t i = 0; i < knots_.size(); ++i) {
                if (i) os << ';';
                os << knots_[i].t << ',' << knots_[i].value;
            }
            return os.str();
    }
    return {};
}

double Modulus::operator()(double t) const {
    if (!(t >= 0.0)) throw ValidationError("modulus argument must be non-negative");
    switch (kind_) {
        case Kind::Log:
            if (t == 0.0) return 0.0;
            if (t <= kInvE) return 1.0 / std::abs(std::log(t));
            return std::numbers::e * t;
        case Kind::Power:
            return std::pow(t, beta_);
        case Kind::PiecewiseLinear: {
            auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                       [](double v, const Knot& k) { return v < k.t; });
            std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
            if (hi >= knots_.size()) hi = knots_.size() - 1;
            const Knot& a = knots_[hi - 1];
            const Knot& b = knots_[hi];
            return a.value + (b.value - a.value) * (t - a.t) / (b.t - a.t);
        }
    }
    return 0.0;
}

std::pair<double, double> Modulus::growth_constants() const {
    switch (kind_) {
        case Kind::Log:
            return {std::numbers::e, kInvE};
        case Kind::Power:
            return {1.0, 1.0};
        case Kind::PiecewiseLinear: {
            const Knot& a = knots_[knots_.size() - 2];
            const Knot& b = knots_.back();
            double slope = (b.value - a.value) / (b.t - a.t);
            return {std::max(b.value / b.t, slope), b.t};
        }
    }
    return {0.0, 0.0};
}

double Modulus::small_scale_cut(double bound, double cap) const {
    if (!(bound > 0.0)) return 0.0;
    double delta = 0.0;
    switch (kind_) {
        case Kind::Log:
            delta = bound <= 1.0 ? std::exp(-1.0 / bound) : bound / std::numbers::e;
            break;
        case Kind::Power:
            delta = std::pow(bound, 1.0 / beta_);
            break;
        case Kind::PiecewiseLinear: {
            delta = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
                const Knot& a = knots_[i];
                const Knot& b = knots_[i + 1];
                if (b.value > bound) {
                    delta = a.t + (bound - a.value) * (b.t - a.t) / (b.value - a.value);
                    break;
                }
            }
            if (std::isinf(delta)) {
                const Knot& a = knots_[knots_.size() - 2];
                const Knot& b = knots_.back();
                double slope = (b.value - a.value) / (b.t - a.t);
                if (slope > 0.0) delta = b.t + (bound - b.value) / slope;
            }
            break;
        }
    }
    if (!(delta >= std::numeric_limits<double>::min())) return 0.0;
    return std::min(delta, cap);
}

double Modulus::sup_ratio_beyond(double delta, int grid_points) const {
    if (!(delta > 0.0)) return std::numeric_limits<double>::infinity();
    auto [growth, t0] = growth_constants();
    double best = (*this)(delta) / delta;
    if (delta < t0) {
        const double ld = std::log(delta);
        const double lt = std::log(t0);
        for (int i = 0; i <= grid_points; ++i) {
            double t = std::exp(ld + (lt - ld) * i / grid_points);
            best = std::max(best, (*this)(t) / t);
        }
        for (const Knot& k : knots_) {
            if (k.t >= delta && k.t <= t0 && k.t > 0.0) best = std::max(best, k.value / k.t);
        }
    }
    return std::max(best, growth);
}

}  // namespace lusin
