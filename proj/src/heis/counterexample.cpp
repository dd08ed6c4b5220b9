#include "lusin/heis/counterexample.hpp"

#include <array>

namespace lusin::heis {
namespace {

constexpr std::array<double, 8> kNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                          -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                          0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                            0.2223810344533745, 0.1012285362903763};

}  // namespace

double line_integral(const VectorField& field, const std::vector<Planar>& polyline) {
    double total = 0.0;
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        const Planar& a = polyline[i - 1];
        const Planar& b = polyline[i];
        const double dx = b[0] - a[0];
        const double dy = b[1] - a[1];
        double seg = 0.0;
        for (std::size_t k = 0; k < kNodes.size(); ++k) {
            const double s = 0.5 * (kNodes[k] + 1.0);
            const Planar f = field(a[0] + s * dx, a[1] + s * dy);
            seg += kWeights[k] * (f[0] * dx + f[1] * dy);
        }
        total += 0.5 * seg;
    }
    return total;
}

Circulation circulation_counterexample() {
    const VectorField heis = [](double x, double y) { return Planar{2.0 * y, -2.0 * x}; };
    Circulation c;
    c.path_a = line_integral(heis, {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
    c.path_b = line_integral(heis, {{0.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}});
    return c;
}

}  // namespace lusin::heis
