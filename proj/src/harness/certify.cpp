#include "lusin/harness/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "lusin/construct/multi_stage.hpp"
#include "lusin/core/errors.hpp"
#include "lusin/core/rng.hpp"
#include "lusin/harness/serialization.hpp"

namespace lusin::harness {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBins = 12;

struct Worst {
    double ratio = 0.0;
    json witness;
    bool any = false;

    void offer(double r, const std::function<json()>& make) {
        if (!any || r > ratio) {
            ratio = any ? std::max(ratio, r) : r;
            witness = make();
            any = true;
        }
    }
};

double margin_of(const Worst& w) { return w.ratio > 0.0 ? 1.0 / w.ratio : kInf; }

json point_json(const Point& p) {
    json a = json::array();
    for (double v : p) a.push_back(number(v));
    return a;
}

Point uniform_in(Rng& rng, const Point& lo, const Point& hi) {
    Point x(lo.size());
    for (std::size_t d = 0; d < lo.size(); ++d) x[d] = rng.uniform(lo[d], hi[d]);
    return x;
}

// Anchor for pair-sampled checks: half uniform over the box, half inside a random term's cell.
Point draw_anchor(Rng& rng, const BumpPolySum& g, const BoxDomain& dom) {
    if (!g.empty() && (rng.next() & 1u)) {
        const auto& t = g.terms()[rng.index(g.terms().size())];
        return uniform_in(rng, t.lower, t.upper);
    }
    return uniform_in(rng, dom.lower(), dom.upper());
}

Point offset(Rng& rng, const Point& x, double len) {
    Point h(x.size());
    double norm = 0.0;
    for (auto& v : h) {
        v = rng.normal();
        norm += v * v;
    }
    norm = std::sqrt(norm);
    Point y(x);
    for (std::size_t d = 0; d < x.size(); ++d) y[d] += h[d] * len / norm;
    return y;
}

double dist(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(s);
}

CheckResult check_match(const BumpPolySum& g, const BuildCertificate& cert, const FieldCollection& f,
                        const CertifyOptions& opts) {
    CheckResult res;
    res.name = "match";
    Rng rng(opts.seed, "certify/match");
    const double tau = cert.tau;
    Worst worst;
    std::size_t cells = 0;
    for (const auto& rec : cert.stages) cells += rec.covered.size() + rec.full.size();
    if (cells == 0) {
        res.vacuous = true;
        res.margin = kInf;
        res.detail = "no certified cells";
        return res;
    }
    const std::size_t extra_per_cell = std::max<std::size_t>(1, opts.pairs / cells) - 1;
    std::size_t extra_budget = opts.pairs > cells ? opts.pairs - cells : 0;
    auto test_point = [&](const Point& x, int stage) {
        for (std::size_t k = 0; k < f.size(); ++k) {
            const double want = f.eval(k, x);
            const double got = g.derivative(x, f.indices()[k]);
            const double err = std::abs(got - want);
            worst.offer(err / tau, [&] {
                return json{{"x", point_json(x)},      {"stage", stage},       {"alpha", f.indices()[k].to_string()},
                            {"derivative", number(got)}, {"field", number(want)}, {"error", number(err)}};
            });
            if (err > tau) res.passed = false;
        }
        ++res.samples;
    };
    for (const auto& rec : cert.stages) {
        auto visit = [&](const Box& box) {
            Point c(box.lower.size());
            for (std::size_t d = 0; d < c.size(); ++d) c[d] = 0.5 * (box.lower[d] + box.upper[d]);
            test_point(c, rec.stage);
            for (std::size_t e = 0; e < extra_per_cell && extra_budget > 0; ++e, --extra_budget)
                test_point(uniform_in(rng, box.lower, box.upper), rec.stage);
        };
        for (auto flat : rec.covered) visit(rec.plateau(flat));
        for (auto flat : rec.full) visit(rec.cell(flat));
    }
    res.margin = margin_of(worst);
    res.witness = worst.any ? worst.witness : json(nullptr);
    std::ostringstream os;
    os << "tau " << tau << ", " << cells << " certified cells, worst |D^alpha g - f_alpha| = " << worst.ratio * tau;
    res.detail = os.str();
    return res;
}

CheckResult check_supnorm(const BumpPolySum& g, const BoxDomain& dom, const BuildCertificate& cert,
                          const CertifyOptions& opts) {
    CheckResult res;
    res.name = "supnorm";
    Rng rng(opts.seed, "certify/supnorm");
    const auto gammas = enumerate_up_to(g.dim(), g.order() - 1);
    Worst worst;
    double observed = 0.0;
    for (std::size_t i = 0; i < opts.pairs; ++i) {
        const Point x = draw_anchor(rng, g, dom);
        for (const auto& gamma : gammas) {
            const double v = std::abs(g.derivative(x, gamma));
            observed = std::max(observed, v);
            worst.offer(v / cert.sigma, [&] {
                return json{{"x", point_json(x)}, {"gamma", gamma.to_string()}, {"value", number(v)}};
            });
            if (!(v < cert.sigma)) res.passed = false;
        }
        ++res.samples;
    }
    double ledger = 0.0;
    for (double v : cert.sup_ledger) ledger = std::max(ledger, v);
    if (observed > ledger * (1.0 + 1e-12) + 1e-300) res.passed = false;
    res.margin = margin_of(worst);
    res.witness = worst.any && worst.ratio > 0.0 ? worst.witness : json(nullptr);
    std::ostringstream os;
    os << "sigma " << cert.sigma << ", observed max " << observed << ", ledger max " << ledger;
    res.detail = os.str();
    return res;
}

// Pair-sampled increment check over log-spaced distance bins.
CheckResult check_pairs(const std::string& name, const BumpPolySum& g, const BoxDomain& dom,
                        const std::vector<MultiIndex>& gammas, const std::function<double(double)>& allowed,
                        const CertifyOptions& opts) {
    CheckResult res;
    res.name = name;
    if (gammas.empty()) {
        res.vacuous = true;
        res.margin = kInf;
        res.detail = "no derivative orders to check";
        return res;
    }
    Rng rng(opts.seed, "certify/" + name);
    const double diam = dom.diameter();
    const double lmin = std::log(1e-7 * diam);
    const double lmax = std::log(diam);
    for (int b = 0; b < kBins; ++b)
        res.bins.push_back({std::exp(lmin + (lmax - lmin) * b / kBins), std::exp(lmin + (lmax - lmin) * (b + 1) / kBins),
                            0, 0.0});
    Worst worst;
    for (std::size_t i = 0; i < opts.pairs; ++i) {
        auto& bin = res.bins[i % kBins];
        const Point x = draw_anchor(rng, g, dom);
        const Point y = offset(rng, x, rng.log_uniform(bin.lo, bin.hi));
        const double d = dist(x, y);
        const double cap = allowed(d);
        for (const auto& gamma : gammas) {
            const double inc = std::abs(g.derivative(x, gamma) - g.derivative(y, gamma));
            const double ratio = inc / cap;
            bin.worst_ratio = std::max(bin.worst_ratio, ratio);
            worst.offer(ratio, [&] {
                return json{{"x", point_json(x)},   {"y", point_json(y)},       {"distance", number(d)},
                            {"gamma", gamma.to_string()}, {"increment", number(inc)}, {"allowed", number(cap)}};
            });
            if (ratio > 1.0) res.passed = false;
        }
        ++bin.pairs;
        ++res.samples;
    }
    res.margin = margin_of(worst);
    res.witness = worst.any && worst.ratio > 0.0 ? worst.witness : json(nullptr);
    std::ostringstream os;
    os << kBins << " log-spaced distance bins over [" << std::exp(lmin) << ", " << std::exp(lmax)
       << "], worst observed/allowed " << worst.ratio;
    res.detail = os.str();
    return res;
}

CheckResult check_pinch(const BumpPolySum& g, const BuildCertificate& cert, const CertifyOptions& opts) {
    CheckResult res;
    res.name = "pinch";
    const PinchReport rep = tail_pinch_check(g, cert, opts.pinch_samples, opts.seed);
    res.samples = rep.samples;
    res.vacuous = rep.vacuous;
    res.passed = rep.passed();
    res.margin = rep.worst_ratio > 0.0 ? 1.0 / rep.worst_ratio : kInf;
    if (!rep.vacuous && rep.worst_ratio > 0.0) {
        res.witness = json{{"x", point_json(rep.worst.x)},
                           {"h", point_json(rep.worst.offset)},
                           {"stage", rep.worst.stage},
                           {"tail", number(rep.worst.tail)},
                           {"bound", number(rep.worst.bound)}};
    }
    std::ostringstream os;
    if (rep.vacuous) os << "no stage has later terms to test";
    else os << "worst tail / (sigma |h|^2) = " << rep.worst_ratio << ", " << rep.violations.size() << " violations";
    res.detail = os.str();
    return res;
}

}  // namespace

bool CertifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* CertifyReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

json CertifyReport::to_json() const {
    json list = json::array();
    for (const auto& c : checks) {
        json bins = json::array();
        for (const auto& b : c.bins)
            bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"pairs", b.pairs}, {"worst_ratio", number(b.worst_ratio)}});
        list.push_back({{"name", c.name},
                        {"passed", c.passed},
                        {"vacuous", c.vacuous},
                        {"margin", number(c.margin)},
                        {"samples", c.samples},
                        {"detail", c.detail},
                        {"witness", c.witness},
                        {"bins", std::move(bins)}});
    }
    return {{"seed", seed}, {"passed", passed()}, {"checks", std::move(list)}};
}

std::string CertifyReport::bins_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "check,bin,lo,hi,pairs,worst_ratio\n";
    for (const auto& c : checks) {
        for (std::size_t i = 0; i < c.bins.size(); ++i) {
            const auto& b = c.bins[i];
            os << c.name << ',' << i << ',' << b.lo << ',' << b.hi << ',' << b.pairs << ',' << b.worst_ratio << '\n';
        }
    }
    return os.str();
}

CertifyReport certify(const BumpPolySum& g, const BoxDomain& dom, const BuildCertificate& cert,
                      const FieldCollection& f, const Modulus& mu, const CertifyOptions& opts) {
    for (const auto& c : opts.checks)
        if (!kAllChecks.count(c)) throw ValidationError("unknown check '" + c + "'");
    if (g.dim() != dom.dim() || static_cast<int>(g.dim()) != cert.n || g.order() != cert.m)
        throw ValidationError("function, domain and certificate disagree on n or m");
    if (f.dim() != g.dim() || f.order() != g.order()) throw ValidationError("field collection does not match the function");
    CertifyReport rep;
    rep.seed = opts.seed;
    const int m = g.order();
    const double sigma = cert.sigma;
    if (opts.checks.count("match")) rep.checks.push_back(check_match(g, cert, f, opts));
    if (opts.checks.count("supnorm")) rep.checks.push_back(check_supnorm(g, dom, cert, opts));
    if (opts.checks.count("lipschitz")) {
        std::vector<MultiIndex> gammas = m >= 2 ? enumerate_up_to(g.dim(), m - 2) : std::vector<MultiIndex>{};
        rep.checks.push_back(check_pairs("lipschitz", g, dom, gammas, [sigma](double d) { return sigma * d; }, opts));
    }
    if (opts.checks.count("modulus")) {
        rep.checks.push_back(check_pairs("modulus", g, dom, enumerate_multiindices(g.dim(), m - 1),
                                         [&mu](double d) { return d / mu(d); }, opts));
    }
    if (opts.checks.count("pinch")) rep.checks.push_back(check_pinch(g, cert, opts));
    return rep;
}

}  // namespace lusin::harness
