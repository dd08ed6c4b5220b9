#include "lusin/construct/field.hpp"

#include <algorithm>
#include <cmath>

#include "lusin/core/errors.hpp"

namespace lusin {

namespace {

// Base-cell index range [lo, hi] per axis whose interiors meet the box.
std::pair<std::vector<int>, std::vector<int>> cell_range(const BoxDomain& dom, const Box& box) {
    const std::size_t n = dom.dim();
    std::vector<int> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = dom.cell_side(i);
        const double a = (box.lower[i] - dom.lower()[i]) / s;
        const double b = (box.upper[i] - dom.lower()[i]) / s;
        lo[i] = std::clamp(static_cast<int>(std::floor(a)), 0, dom.resolution()[i] - 1);
        hi[i] = std::clamp(static_cast<int>(std::ceil(b)) - 1, lo[i], dom.resolution()[i] - 1);
    }
    return {lo, hi};
}

template <class F>
void for_each_cell(const BoxDomain& dom, const Box& box, F&& f) {
    auto [lo, hi] = cell_range(dom, box);
    std::vector<int> cur(lo);
    while (true) {
        f(dom.flatten(cur));
        std::size_t i = 0;
        for (; i < cur.size(); ++i) {
            if (++cur[i] <= hi[i]) break;
            cur[i] = lo[i];
        }
        if (i == cur.size()) return;
    }
}

}  // namespace

FieldCollection FieldCollection::closed_form(std::string name, std::size_t n, int m, std::vector<Evaluator> fields) {
    FieldCollection fc;
    fc.name_ = std::move(name);
    fc.n_ = n;
    fc.m_ = m;
    fc.indices_ = enumerate_multiindices(n, m);
    if (fields.size() != fc.indices_.size())
        throw ValidationError("field collection needs exactly C(n+m-1, m) = " + std::to_string(fc.indices_.size()) +
                              " fields");
    fc.closed_ = std::move(fields);
    return fc;
}

FieldCollection FieldCollection::catalog(const std::string& name, std::size_t n, int m) {
    const auto count = enumerate_multiindices(n, m).size();
    if (name == "zero") {
        return closed_form(name, n, m, std::vector<Evaluator>(count, [](const Point&) { return 0.0; }));
    }
    if (name.rfind("constant:", 0) == 0) {
        double c = 0.0;
        try {
            c = std::stod(name.substr(9));
        } catch (const std::logic_error&) {
            throw ValidationError("malformed constant field '" + name + "'");
        }
        return closed_form(name, n, m, std::vector<Evaluator>(count, [c](const Point&) { return c; }));
    }
    if (name == "heisenberg") {
        if (n != 2 || m != 1) throw ValidationError("heisenberg field requires n = 2, m = 1");
        // indices: (0,1) then (1,0)
        return closed_form(name, n, m,
                           {[](const Point& x) { return -2.0 * x[0]; }, [](const Point& x) { return 2.0 * x[1]; }});
    }
    if (name == "inverse_x") {
        if (m != 1) throw ValidationError("inverse_x field requires m = 1");
        std::vector<Evaluator> f(count, [](const Point&) { return 0.0; });
        f.back() = [](const Point& x) { return 1.0 / x[0]; };  // e_0 sorts last
        return closed_form(name, n, m, std::move(f));
    }
    if (name == "xx") {
        if (n != 2 || m != 2) throw ValidationError("xx field requires n = 2, m = 2");
        // indices: (0,2), (1,1), (2,0)
        return closed_form(name, n, m,
                           {[](const Point&) { return 0.0; }, [](const Point&) { return 0.0; },
                            [](const Point&) { return 2.0; }});
    }
    throw ValidationError("unknown field '" + name + "' (catalog: zero, heisenberg, constant:<c>, inverse_x, xx)");
}

FieldCollection FieldCollection::sampled(const BoxDomain& dom, int m, std::vector<std::vector<double>> samples) {
    FieldCollection fc;
    fc.name_ = "sampled";
    fc.n_ = dom.dim();
    fc.m_ = m;
    fc.indices_ = enumerate_multiindices(fc.n_, m);
    if (samples.size() != fc.indices_.size())
        throw ValidationError("sampled field collection needs one sample array per multi-index");
    for (const auto& s : samples) {
        if (s.size() != dom.cell_count()) throw ValidationError("sample array shape does not match the domain grid");
    }
    fc.grid_ = std::make_shared<const BoxDomain>(dom);
    fc.samples_ = std::move(samples);
    return fc;
}

double FieldCollection::raw(std::size_t k, const Point& x) const {
    if (grid_) {
        auto c = grid_->locate(x);
        return c < 0 ? 0.0 : samples_[k][static_cast<std::size_t>(c)];
    }
    return closed_[k](x);
}

double FieldCollection::eval(std::size_t k, const Point& x) const {
    if (!keep_.empty()) {
        auto c = keep_domain_->locate(x);
        if (c < 0 || !keep_[static_cast<std::size_t>(c)]) return 0.0;
    }
    return raw(k, x);
}

double FieldCollection::max_deviation(std::size_t k, const Box& box, double value) const {
    double dev = 0.0;
    if (grid_) {
        for_each_cell(*grid_, box, [&](std::size_t c) { dev = std::max(dev, std::abs(samples_[k][c] - value)); });
        return dev;
    }
    // 3^n lattice: corners, face/edge midpoints and the centre.
    const std::size_t n = box.lower.size();
    std::vector<int> digit(n, 0);
    Point x(n);
    while (true) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = box.lower[i] + 0.5 * digit[i] * (box.upper[i] - box.lower[i]);
        const double v = raw(k, x);
        dev = std::max(dev, std::isfinite(v) ? std::abs(v - value) : INFINITY);
        std::size_t i = 0;
        for (; i < n; ++i) {
            if (++digit[i] <= 2) break;
            digit[i] = 0;
        }
        if (i == n) break;
    }
    return dev;
}

FieldCollection FieldCollection::truncated(const BoxDomain& dom, std::vector<std::uint8_t> keep) const {
    if (keep.size() != dom.cell_count()) throw ValidationError("truncation mask does not match the grid");
    FieldCollection fc(*this);
    fc.keep_domain_ = std::make_shared<const BoxDomain>(dom);
    fc.keep_ = std::move(keep);
    return fc;
}

bool FieldCollection::kept(const Box& box) const {
    if (keep_.empty()) return true;
    bool ok = true;
    for_each_cell(*keep_domain_, box, [&](std::size_t c) { ok = ok && keep_[c] != 0; });
    return ok;
}

}  // namespace lusin
