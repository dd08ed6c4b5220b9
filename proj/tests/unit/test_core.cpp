#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "lusin/core/box_domain.hpp"
#include "lusin/core/bump_poly_sum.hpp"
#include "lusin/core/cutoff.hpp"
#include "lusin/core/errors.hpp"
#include "lusin/core/modulus.hpp"
#include "lusin/core/multi_index.hpp"
#include "lusin/core/rng.hpp"

using namespace lusin;

namespace {

std::vector<std::vector<int>> exps(const std::vector<MultiIndex>& v) {
    std::vector<std::vector<int>> out;
    for (const auto& a : v) out.push_back(a.exponents());
    return out;
}

// Counts alpha with |alpha| = m by brute force over [0, m]^n.
std::size_t brute_count(std::size_t n, int m) {
    std::size_t count = 0;
    std::vector<int> e(n, 0);
    while (true) {
        int s = 0;
        for (int v : e) s += v;
        if (s == m) ++count;
        std::size_t i = 0;
        while (i < n && ++e[i] > m) e[i++] = 0;
        if (i == n) break;
    }
    return count;
}

}  // namespace

TEST(MultiIndex, OneDimensionalHasSingleIndex) {
    EXPECT_EQ(exps(enumerate_multiindices(1, 3)), (std::vector<std::vector<int>>{{3}}));
}

TEST(MultiIndex, FirstOrderPlanarIsLexicographic) {
    EXPECT_EQ(exps(enumerate_multiindices(2, 1)), (std::vector<std::vector<int>>{{0, 1}, {1, 0}}));
}

TEST(MultiIndex, SecondOrderPlanarListsThree) {
    EXPECT_EQ(exps(enumerate_multiindices(2, 2)), (std::vector<std::vector<int>>{{0, 2}, {1, 1}, {2, 0}}));
}

TEST(MultiIndex, CountMatchesBinomialAndBruteForce) {
    for (std::size_t n = 1; n <= 4; ++n) {
        for (int m = 0; m <= 4; ++m) {
            const auto list = enumerate_multiindices(n, m);
            EXPECT_EQ(list.size(), brute_count(n, m)) << n << "," << m;
            EXPECT_DOUBLE_EQ(static_cast<double>(list.size()), binomial(static_cast<int>(n) + m - 1, m));
            std::set<std::vector<int>> distinct;
            for (std::size_t i = 0; i < list.size(); ++i) {
                EXPECT_EQ(list[i].order(), m);
                distinct.insert(list[i].exponents());
                if (i) EXPECT_TRUE(list[i - 1] < list[i]);
            }
            EXPECT_EQ(distinct.size(), list.size());
        }
    }
}

TEST(MultiIndex, RejectsNegativeExponents) { EXPECT_THROW(MultiIndex({1, -1}), ValidationError); }

TEST(BoxDomain, MeasureCountsActiveCells) {
    BoxDomain d({0.0, 0.0}, {2.0, 1.0}, {4, 2}, {1, 1, 0, 0, 1, 0, 0, 0});
    EXPECT_DOUBLE_EQ(d.cell_volume(), 0.25);
    EXPECT_EQ(d.active_count(), 3u);
    EXPECT_DOUBLE_EQ(d.measure(), 0.75);
    EXPECT_DOUBLE_EQ(d.volume(), 2.0);
}

TEST(BoxDomain, RejectsInvertedCorners) { EXPECT_THROW(BoxDomain({1.0}, {0.0}, {4}), ValidationError); }

TEST(BoxDomain, LocateInvertsCellCenter) {
    const auto d = BoxDomain::unit(3, 5);
    for (std::size_t f = 0; f < d.cell_count(); f += 7) EXPECT_EQ(d.locate(d.cell_center(f)), static_cast<std::ptrdiff_t>(f));
    EXPECT_EQ(d.locate({1.5, 0.5, 0.5}), -1);
}

TEST(Modulus, LogPresetIsZeroAtZero) { EXPECT_EQ(Modulus::log_preset()(0.0), 0.0); }

TEST(Modulus, LogPresetBranchesMeetAtInverseE) {
    const double j = std::exp(-1.0);
    // Both branch formulas evaluated independently of the implementation.
    EXPECT_NEAR(1.0 / std::abs(std::log(j)), 1.0, 1e-15);
    EXPECT_NEAR(std::numbers::e * j, 1.0, 1e-15);
    EXPECT_NEAR(Modulus::log_preset()(j), 1.0, 1e-15);
    const auto mu = Modulus::log_preset();
    EXPECT_NEAR(mu(std::nextafter(j, 0.0)), mu(std::nextafter(j, 1.0)), 1e-12);
}

TEST(Modulus, LogPresetAtOneIsE) { EXPECT_NEAR(Modulus::log_preset()(1.0), std::numbers::e, 1e-15); }

TEST(Modulus, RejectsNegativeArgument) { EXPECT_THROW(Modulus::log_preset()(-1e-3), ValidationError); }

TEST(Modulus, PiecewiseLinearMustStartAtOrigin) {
    EXPECT_THROW(Modulus::parse("pwl:0.1,0.2;1,1"), ValidationError);
    EXPECT_THROW(Modulus::piecewise_linear({{0.0, 0.0}, {0.5, 0.3}, {0.4, 0.5}}), ValidationError);
    const auto mu = Modulus::parse("pwl:0,0;0.5,0.25;1,1");
    EXPECT_DOUBLE_EQ(mu(0.25), 0.125);
    EXPECT_DOUBLE_EQ(mu(2.0), 2.5);
}

TEST(Modulus, SpecRoundTrip) {
    for (const char* s : {"log", "power:0.5", "pwl:0,0;0.5,0.25;1,1"}) {
        const auto mu = Modulus::parse(s);
        const auto again = Modulus::parse(mu.to_string());
        for (double t : {0.0, 1e-5, 0.1, 0.7, 3.0}) EXPECT_EQ(mu(t), again(t));
    }
}

TEST(ModulusProperty, ContinuityAndLinearGrowthOnRandomPairs) {
    Rng rng(11, "modulus-property");
    for (const auto& mu : {Modulus::log_preset(), Modulus::power(0.5), Modulus::power(1.0),
                           Modulus::parse("pwl:0,0;0.2,0.1;1,2")}) {
        const auto [C, t0] = mu.growth_constants();
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.log_uniform(1e-8, 1e3);
            const double dt = t * 1e-9;
            EXPECT_LE(std::abs(mu(t + dt) - mu(t)), 1e-6 * std::max(1.0, mu(t))) << mu.to_string() << " t=" << t;
            if (t >= t0) EXPECT_LE(mu(t), C * t * (1 + 1e-12)) << mu.to_string();
        }
    }
}

TEST(Cutoff, PlateauCenterIsOne) {
    CutoffProfile p(2, 0.3);
    const double lo[2] = {0.0, 0.0}, hi[2] = {1.0, 2.0}, x[2] = {0.5, 1.0};
    EXPECT_DOUBLE_EQ(p.eval(lo, hi, x, MultiIndex::zero(2)), 1.0);
}

TEST(Cutoff, VanishesOutsideCell) {
    CutoffProfile p(2, 0.3);
    const double lo[2] = {0.0, 0.0}, hi[2] = {1.0, 1.0}, x[2] = {1.2, 0.5};
    for (const auto& a : enumerate_up_to(2, 2)) EXPECT_EQ(p.eval(lo, hi, x, a), 0.0);
}

TEST(Cutoff, CubicStepDerivativeAtTransitionMidpoint) {
    CutoffProfile p(1, 0.5);
    const double lo[1] = {0.0}, hi[1] = {1.0};
    auto value = [&](double x) {
        const double xs[1] = {x};
        return p.eval(lo, hi, xs, MultiIndex::zero(1));
    };
    const double xs[1] = {0.875};
    const double d = p.eval(lo, hi, xs, MultiIndex::unit(1, 0));
    // 1 - (3s^2 - 2s^3) with s = (x - 0.75) / 0.25: slope -4 * 6 s (1 - s) at s = 1/2.
    EXPECT_NEAR(d, -6.0, 1e-12);
    // Central-difference truncation error is h^2 |S'''| 4^3 / 6 ~ 1.3e-10 at h = 1e-6.
    const double h = 1e-6;
    EXPECT_NEAR((value(0.875 + h) - value(0.875 - h)) / (2 * h), d, 1e-8);
}

TEST(Cutoff, JoinsAreSmoothUpToOrderM) {
    for (int m = 1; m <= 3; ++m) {
        CutoffProfile p(m, 0.4);
        for (int j = 1; j <= m; ++j) {
            EXPECT_NEAR(p.step(0.0, j), 0.0, 1e-12);
            EXPECT_NEAR(p.step(1.0, j), 0.0, 1e-12);
        }
        EXPECT_NEAR(p.step(0.0, 0), 0.0, 1e-15);
        EXPECT_NEAR(p.step(1.0, 0), 1.0, 1e-12);
    }
}

TEST(Cutoff, StepBoundDominatesDenseSamples) {
    for (int m = 1; m <= 3; ++m) {
        CutoffProfile p(m, 0.25);
        for (int j = 0; j <= m; ++j) {
            double mx = 0.0;
            for (int i = 0; i <= 100000; ++i) mx = std::max(mx, std::abs(p.step(i / 100000.0, j)));
            EXPECT_GE(p.step_bound(j), mx - 1e-12);
            EXPECT_LE(p.step_bound(j), mx * 1.01 + 1e-9);
        }
    }
}

TEST(Cutoff, RejectsDerivativeAboveOrder) {
    CutoffProfile p(1, 0.5);
    const double lo[1] = {0.0}, hi[1] = {1.0}, x[1] = {0.9};
    EXPECT_THROW(p.eval(lo, hi, x, MultiIndex({2})), ValidationError);
}

namespace {

bool straddles_join(const BumpPolySum& g, const Point& x, std::size_t axis, double h) {
    for (const auto& t : g.terms()) {
        const double c = 0.5 * (t.lower[axis] + t.upper[axis]);
        const double r = 0.5 * (t.upper[axis] - t.lower[axis]);
        for (double j : {t.lower[axis], t.upper[axis], c - (1 - t.theta) * r, c + (1 - t.theta) * r})
            if (std::abs(x[axis] - j) <= h) return true;
    }
    return false;
}

BumpPolySum random_sum(std::size_t n, int m, int terms, std::uint64_t seed, double min_side = 0.1,
                       double max_side = 0.3, double min_theta = 0.2, double max_theta = 0.8) {
    Rng rng(seed, "random-sum");
    const auto layout = enumerate_up_to(n, m);
    std::vector<CellTerm> ts;
    for (int k = 0; k < terms; ++k) {
        CellTerm t;
        for (std::size_t d = 0; d < n; ++d) {
            const double a = rng.uniform(0.0, 0.8);
            t.lower.push_back(a);
            t.upper.push_back(a + rng.uniform(min_side, max_side));
        }
        for (std::size_t i = 0; i < layout.size(); ++i) t.coeffs.push_back(rng.uniform(-1.0, 1.0));
        t.theta = rng.uniform(min_theta, max_theta);
        t.weight = rng.uniform(0.5, 2.0);
        t.stage = 1 + k % 3;
        ts.push_back(std::move(t));
    }
    return BumpPolySum(n, m, std::move(ts));
}

// Checks D^gamma g against central differences of D^(gamma - e_axis) g at
// 1000 random points; returns the number of comparisons made.
int check_differences(const BumpPolySum& g, double h, double rel, std::uint64_t seed) {
    const std::size_t n = g.dim();
    const int m = g.order();
    Rng rng(seed, "fd-points");
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        Point x(n);
        for (auto& v : x) v = rng.uniform(0.0, 1.1);
        for (const auto& gamma : enumerate_up_to(n, m)) {
            if (gamma.order() == 0) continue;
            std::size_t axis = 0;
            while (gamma[axis] == 0) ++axis;
            const MultiIndex lower = gamma - MultiIndex::unit(n, axis);
            // Derivatives are only finitely smooth across cutoff joins; a stencil
            // straddling one is not a consistency test.
            if (straddles_join(g, x, axis, 2 * h)) continue;
            auto at = [&](double s) {
                Point y = x;
                y[axis] += s * h;
                return g.derivative(y, lower);
            };
            const double fd = (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
            const double exact = g.derivative(x, gamma);
            const double scale = std::max(1.0, std::abs(exact));
            EXPECT_NEAR(fd, exact, rel * scale) << "n=" << n << " m=" << m << " gamma=" << gamma.to_string();
            ++checked;
        }
    }
    return checked;
}

}  // namespace

TEST(BumpPolySumProperty, CentralDifferencesMatchExactDerivatives) {
    // Five-point stencil at step 1e-5, relative error 1e-6.
    for (auto [n, m] : {std::pair<std::size_t, int>{1, 1}, {2, 1}, {2, 2}, {3, 2}}) {
        const auto g = random_sum(n, m, 12, 100 + n * 10 + m, 0.3, 1.0, 0.3, 0.8);
        EXPECT_GT(check_differences(g, 1e-5, 1e-6, 7), 500);
    }
}

TEST(BumpPolySumProperty, NarrowCellsNeedProportionalSteps) {
    // Cells of side ~1e-3 as produced by fine refinement levels: the step scales
    // with the transition width.
    const auto g = random_sum(2, 2, 12, 77, 1e-3, 2e-3, 0.3, 0.8);
    std::vector<CellTerm> shifted = g.terms();
    for (auto& t : shifted) {
        for (std::size_t d = 0; d < 2; ++d) {
            const double w = t.upper[d] - t.lower[d];
            t.lower[d] = 0.5 + (t.lower[d] - 0.5) * 1e-3;
            t.upper[d] = t.lower[d] + w;
        }
    }
    const BumpPolySum narrow(2, 2, shifted);
    int checked = 0;
    Rng rng(5, "narrow");
    for (int i = 0; i < 1000; ++i) {
        const auto& t = narrow.terms()[rng.index(narrow.terms().size())];
        const Point x{rng.uniform(t.lower[0], t.upper[0]), rng.uniform(t.lower[1], t.upper[1])};
        const double h = 1e-5 * (t.upper[0] - t.lower[0]);
        for (const auto& gamma : enumerate_up_to(2, 1)) {
            if (gamma.order() == 0) continue;
            const std::size_t axis = gamma[0] ? 0 : 1;
            if (straddles_join(narrow, x, axis, 2 * h)) continue;
            auto at = [&](double s) {
                Point y = x;
                y[axis] += s * h;
                return narrow.value(y);
            };
            const double fd = (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
            const double exact = narrow.derivative(x, gamma);
            EXPECT_NEAR(fd, exact, 1e-6 * std::max(1.0, std::abs(exact)));
            ++checked;
        }
    }
    EXPECT_GT(checked, 1900);
}

TEST(BumpPolySumProperty, DerivativeIsLinearInTerms) {
    const auto g = random_sum(2, 2, 20, 5);
    Rng rng(3, "linearity");
    for (int i = 0; i < 1000; ++i) {
        const Point x{rng.uniform(0.0, 1.1), rng.uniform(0.0, 1.1)};
        for (const auto& gamma : enumerate_up_to(2, 2)) {
            double per_term = 0.0, per_stage = 0.0;
            for (std::size_t k = 0; k < g.terms().size(); ++k) per_term += g.term_derivative(k, x, gamma);
            for (int s = 1; s <= g.stage_count(); ++s) per_stage += g.stage_derivative(x, gamma, s);
            const double total = g.derivative(x, gamma);
            EXPECT_NEAR(total, per_term, 1e-12 * std::max(1.0, std::abs(total)));
            EXPECT_NEAR(total, per_stage, 1e-12 * std::max(1.0, std::abs(total)));
        }
    }
}

TEST(BumpPolySum, VanishesOutsideTermBoxes) {
    const auto g = random_sum(2, 1, 10, 9);
    const Point far{5.0, -3.0};
    for (const auto& a : enumerate_up_to(2, 1)) EXPECT_EQ(g.derivative(far, a), 0.0);
}
