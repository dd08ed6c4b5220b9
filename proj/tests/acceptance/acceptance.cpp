// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <cstring>
#include <string>
#include <unistd.h>

#include "lusin/construct/field.hpp"
#include "lusin/construct/multi_stage.hpp"
#include "lusin/core/errors.hpp"
#include "lusin/core/modulus.hpp"
#include "lusin/core/rng.hpp"
#include "lusin/harness/certify.hpp"
#include "lusin/harness/io.hpp"
#include "lusin/harness/pipeline.hpp"
#include "lusin/harness/serialization.hpp"
#include "lusin/heis/cc_distance.hpp"
#include "lusin/heis/counterexample.hpp"
#include "lusin/heis/graph_map.hpp"
#include "lusin/heis/holder.hpp"
#include "lusin/heis/horizontal_graph.hpp"
#include "lusin/heis/hpoint.hpp"

using namespace lusin;
using namespace lusin::heis;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Verdict()>& run) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = run();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limit_s) {
        v.pass = false;
        v.detail += " [runtime limit exceeded]";
    }
    if (!v.pass) ++failures;
    std::printf("%s %d %s (%.2fs): %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), secs, v.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

HPoint random_point(Rng& rng, double r) {
    return {rng.uniform(-r, r), rng.uniform(-r, r), rng.uniform(-r * r, r * r)};
}

// Length of the shortest horizontal lift from the origin to (0, 0, t): a circle
// whose enclosed area A satisfies |t| = 4A, so L = 2 pi r with pi r^2 = |t| / 4.
double vertical_oracle(double t) {
    const double r = std::sqrt(std::abs(t) / (4.0 * std::numbers::pi));
    return 2.0 * std::numbers::pi * r;
}

Verdict counterexample() {
    const auto c = circulation_counterexample();
    const bool ok = std::abs(c.path_a + 2.0) <= 1e-10 && std::abs(c.path_b - 2.0) <= 1e-10 &&
                    std::abs(c.difference() - 4.0) <= 1e-10;
    return {ok, "path_a=" + fmt(c.path_a) + " path_b=" + fmt(c.path_b) + " difference=" + fmt(c.difference())};
}

Verdict log_preset() {
    const auto mu = Modulus::log_preset();
    const double e = std::numbers::e;
    const double at = 1.0 / e;
    const double left = 1.0 / std::abs(std::log(at));
    const double right = e * at;
    const double below = mu(std::nextafter(at, 0.0));
    const double above = mu(std::nextafter(at, 1.0));
    const bool ok = mu(0.0) == 0.0 && std::abs(left - 1.0) <= 1e-12 && std::abs(right - 1.0) <= 1e-12 &&
                    std::abs(mu(at) - 1.0) <= 1e-12 && std::abs(mu(1.0) - e) <= 1e-12 &&
                    std::abs(below - above) <= 1e-12;
    return {ok, "mu(0)=" + fmt(mu(0.0)) + " mu(1/e)=" + fmt(mu(at)) + " mu(1)=" + fmt(mu(1.0)) +
                    " jump=" + fmt(std::abs(below - above))};
}

struct HeisRun {
    bool built = false;
    std::string failure;
    std::shared_ptr<HorizontalGraph> graph;
};

HeisRun graph_run() {
    HeisRun run;
    BuildConfig cfg;
    cfg.eps = 0.05;
    cfg.sigma = 0.5;
    cfg.modulus = Modulus::log_preset();
    cfg.tau = 1e-3;
    cfg.stages = 6;
    try {
        run.graph = std::make_shared<HorizontalGraph>(build_horizontal_graph(BoxDomain::unit(2, 16), cfg));
        run.built = true;
    } catch (const InfeasibleError& e) {
        run.failure = std::string("construction infeasible: ") + e.what();
    }
    return run;
}

Verdict end_to_end(const HeisRun& run) {
    if (!run.built) return {false, "(a)-(e) not reached; " + run.failure};
    const auto& h = *run.graph;
    const auto& cert = h.certificate;
    const auto dom = BoxDomain::unit(2, 16);
    const double residual = cert.residual_measure();
    const bool a = residual <= 0.05 * cert.domain_measure;
    const auto ch = characteristic_fraction(h.graph, 1e-3);
    const bool b = ch.fraction >= 0.95;
    const bool c = cert.sup_ledger.front() < 0.5;
    harness::CertifyOptions opts;
    opts.checks = {"modulus", "pinch"};
    opts.pairs = 100000;
    opts.pinch_samples = 10000;
    const auto rep = harness::certify(*h.function, dom, cert, FieldCollection::catalog("heisenberg", 2, 1),
                                      Modulus::log_preset(), opts);
    const bool d = rep.find("modulus")->passed;
    const bool e = rep.find("pinch")->passed;
    auto mark = [](bool ok) { return ok ? "ok" : "fail"; };
    return {a && b && c && d && e, std::string("(a) residual=") + fmt(residual) + " " + mark(a) +
                                       "; (b) fraction=" + fmt(ch.fraction) + " " + mark(b) + "; (c) sup=" +
                                       fmt(cert.sup_ledger.front()) + " " + mark(c) + "; (d) " + mark(d) +
                                       "; (e) " + mark(e)};
}

Verdict second_order() {
    BuildConfig cfg;
    cfg.eps = 0.05;
    cfg.sigma = 0.5;
    cfg.modulus = Modulus::power(0.75);
    cfg.theta = 0.5;
    cfg.tau = 1e-3;
    cfg.stages = 6;
    const auto dom = BoxDomain::unit(2, 16);
    const auto f = FieldCollection::catalog("xx", 2, 2);
    const auto built = multi_stage_build(f, dom, cfg);
    harness::CertifyOptions opts;
    opts.checks = {"match", "lipschitz", "modulus"};
    opts.pairs = 100000;
    const auto rep = harness::certify(built.function, dom, built.certificate, f, cfg.modulus, opts);
    const auto* match = rep.find("match");
    const auto* lip = rep.find("lipschitz");
    const auto* mod = rep.find("modulus");
    const double lip_ledger = built.certificate.lipschitz_ledger.front();
    const bool ok = match->passed && lip->passed && lip_ledger <= cfg.sigma && mod->passed;
    return {ok, "terms=" + std::to_string(built.function.terms().size()) + " coverage=" +
                    fmt(built.certificate.covered_measure()) + " match margin=" + fmt(match->margin) +
                    " lipschitz ledger=" + fmt(lip_ledger) + " margin=" + fmt(lip->margin) +
                    " modulus margin=" + fmt(mod->margin)};
}

Verdict koranyi_suite() {
    Rng rng(5, "koranyi");
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto p = random_point(rng, 3.0), q = random_point(rng, 3.0), r = random_point(rng, 3.0);
        const double pq = koranyi_dist(p, q);
        const double scale = std::max(1.0, pq);
        worst = std::max(worst, std::abs(pq - koranyi_dist(q, p)) / scale);
        worst = std::max(worst, std::max(0.0, pq - koranyi_dist(p, r) - koranyi_dist(r, q)) / scale);
        worst = std::max(worst, std::abs(koranyi_dist(r * p, r * q) - pq) / scale);
        const double lambda = rng.uniform(0.1, 10.0);
        worst = std::max(worst, std::abs(koranyi_dist(dilate(p, lambda), dilate(q, lambda)) - lambda * pq) /
                                    std::max(1.0, lambda * pq));
    }
    double lo_ratio = INFINITY, hi_ratio = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const auto p = random_point(rng, 2.0), q = random_point(rng, 2.0);
        const auto g = gauge_terms(p, q);
        const double sum = g.planar + g.vertical;
        if (sum == 0.0) continue;
        const double d = koranyi_dist(p, q);
        lo_ratio = std::min(lo_ratio, d / sum);
        hi_ratio = std::max(hi_ratio, d / sum);
    }
    const bool ok = worst <= 1e-10 && lo_ratio >= 0.5 && hi_ratio <= std::pow(2.0, 0.25);
    return {ok, "axiom error=" + fmt(worst) + " d/(A+B) in [" + fmt(lo_ratio) + ", " + fmt(hi_ratio) + "]"};
}

Verdict cc_bounds() {
    const double oracle = vertical_oracle(1.0);
    const auto h = cc_dist_bounds(HPoint::identity(), {1, 0, 0});
    const auto v = cc_dist_bounds(HPoint::identity(), {0, 0, 1});
    Rng rng(9, "cc-pairs");
    int inverted = 0;
    for (int i = 0; i < 1000; ++i) {
        CcOptions o;
        o.seed = 1 + i;
        const auto b = cc_dist_bounds(random_point(rng, 1.0), random_point(rng, 1.0), o);
        if (b.lower > b.upper) ++inverted;
    }
    const bool ok = std::abs(h.lower - 1.0) <= 1e-12 && h.upper <= 1.001 &&
                    std::abs(v.upper - oracle) <= 0.02 * oracle && inverted == 0;
    return {ok, "horizontal [" + fmt(h.lower) + ", " + fmt(h.upper) + "] vertical upper=" + fmt(v.upper) +
                    " oracle=" + fmt(oracle) + " inverted pairs=" + std::to_string(inverted)};
}

Verdict holder(const HeisRun& run) {
    const auto gx = GraphMap::from_closed_form(BoxDomain::unit(2, 8), [](double x, double) { return x; },
                                               [](double, double) { return Planar{1, 0}; });
    const auto a = holder_transfer_check(gx, 1);
    const bool part_a = a.u.exponent >= 0.95 && a.u.exponent <= 1.05 && a.phi.exponent >= 0.45 &&
                        a.phi.exponent <= 0.55;
    std::string detail = "(a) alpha_u=" + fmt(a.u.exponent) + " alpha_phi=" + fmt(a.phi.exponent);
    bool part_b = false;
    if (run.built) {
        const auto b = holder_transfer_check(run.graph->graph, 1);
        part_b = b.u.exponent >= 0.9 && b.passed;
        detail += "; (b) alpha_u=" + fmt(b.u.exponent) + " alpha_phi=" + fmt(b.phi.exponent);
    } else {
        detail += "; (b) no construction output: " + run.failure;
    }
    return {part_a && part_b, detail};
}

Verdict determinism() {
    const fs::path root = fs::temp_directory_path() / ("lusin-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(root);
    harness::ConstructRequest req;
    req.field = "xx";
    req.m = 2;
    req.config.modulus = Modulus::power(0.75);
    req.config.theta = 0.5;
    req.config.stages = 2;
    const auto first = harness::run_construct(req, root / "first");
    if (first.exit_code != harness::kOk && first.exit_code != harness::kCertificationFailed)
        return {false, "construct failed: " + first.message};
    const auto replay = harness::run_replay(root / "first" / "manifest.json", root / "second");
    const bool identical = harness::read_file(root / "first" / "certificate.lcert") ==
                           harness::read_file(root / "second" / "certificate.lcert");

    const auto loaded = harness::load_function(root / "first" / "function.lfn");
    const auto reloaded = harness::decode_function(harness::encode_function(loaded.function, loaded.domain));
    Rng rng(3, "roundtrip");
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const Point x{rng.uniform(), rng.uniform()};
        const double u = loaded.function.value(x), w = reloaded.function.value(x);
        if (std::memcmp(&u, &w, sizeof u) != 0) ++mismatches;
    }
    const bool bytes_again = harness::encode_function(loaded.function, loaded.domain) ==
                             harness::read_file(root / "first" / "function.lfn");
    fs::remove_all(root);
    const bool ok = identical && replay.identical.value_or(false) && mismatches == 0 && bytes_again;
    return {ok, std::string("certificate ") + (identical ? "identical" : "differs") + ", function file " +
                    (bytes_again ? "re-encodes identically" : "differs") +
                    ", round-trip mismatches=" + std::to_string(mismatches) + "/1000"};
}

}  // namespace

int main() {
    report(1, "counterexample", 1.0, counterexample);
    report(2, "log preset", 1.0, log_preset);
    HeisRun run;
    report(3, "horizontal graph end to end", 300.0, [&] {
        run = graph_run();
        return end_to_end(run);
    });
    report(4, "second-order build", 300.0, second_order);
    report(5, "koranyi metric", 30.0, koranyi_suite);
    report(6, "cc bounds", 120.0, cc_bounds);
    report(7, "holder transfer", 120.0, [&] { return holder(run); });
    report(8, "determinism", 600.0, determinism);
    return failures == 0 ? 0 : 1;
}
