// Command-line front end: construct, certify, replay, heis dist|graph analyze|counterexample.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lusin/core/errors.hpp"
#include "lusin/harness/certify.hpp"
#include "lusin/harness/io.hpp"
#include "lusin/harness/pipeline.hpp"
#include "lusin/harness/serialization.hpp"
#include "lusin/heis/cc_distance.hpp"
#include "lusin/heis/counterexample.hpp"
#include "lusin/heis/graph_map.hpp"
#include "lusin/heis/holder.hpp"

namespace fs = std::filesystem;
using namespace lusin;
using namespace lusin::harness;

namespace {

std::vector<double> parse_coords(const std::string& text, std::size_t expected, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ValidationError(std::string(what) + ": '" + item + "' is not a number");
        }
        if (used != item.size() || !std::isfinite(v))
            throw ValidationError(std::string(what) + ": '" + item + "' is not a finite number");
        out.push_back(v);
    }
    if (expected && out.size() != expected)
        throw ValidationError(std::string(what) + ": expected " + std::to_string(expected) + " comma-separated values");
    return out;
}

std::set<std::string> parse_checks(const std::string& text) {
    if (text == "all") return kAllChecks;
    std::set<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.insert(item);
    return out;
}

fs::path resolve_out(const std::string& out) { return out.empty() ? default_output_dir() : fs::path(out); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lusin-type construction with a prescribed modulus, plus Heisenberg-group tools"};
    app.require_subcommand(1);

    // construct
    auto* construct = app.add_subcommand("construct", "Build g with D^alpha g = f_alpha off a small set");
    ConstructRequest req;
    std::string lower = "0,0", upper = "1,1", modulus = "log", out_dir;
    construct->add_option("--field", req.field, "Field catalog entry: heisenberg, xx, zero, constant:<c>, inverse_x");
    construct->add_option("--n", req.n, "Dimension")->check(CLI::PositiveNumber);
    construct->add_option("--m", req.m, "Derivative order")->check(CLI::PositiveNumber);
    construct->add_option("--lower", lower, "Domain lower corner, comma-separated");
    construct->add_option("--upper", upper, "Domain upper corner, comma-separated");
    construct->add_option("--resolution", req.resolution, "Base grid cells per axis")->check(CLI::PositiveNumber);
    construct->add_option("--eps", req.config.eps, "Measure budget");
    construct->add_option("--sigma", req.config.sigma, "Sup-norm and Lipschitz budget");
    construct->add_option("--modulus", modulus, "log | power:<beta> | pwl:t,v;t,v;...");
    construct->add_option("--theta", req.config.theta, "Cutoff transition fraction (0 = automatic)");
    construct->add_option("--tau", req.config.tau, "Match tolerance on K");
    construct->add_option("--quantile", req.config.quantile, "Truncation quantile");
    construct->add_option("--stages", req.config.stages, "Stage count N");
    construct->add_option("--seed", req.config.seed, "Master seed");
    construct->add_option("--max-cells", req.config.max_cells, "Cell cap per refinement level");
    construct->add_option("--out", out_dir, "Output directory (default $LUSIN_OUTPUT_DIR or .)");

    // certify
    auto* certify_cmd = app.add_subcommand("certify", "Re-check a built function against its certificate");
    std::string run_dir, function_path, cert_path, checks = "all", report_path;
    CertifyOptions copts;
    certify_cmd->add_option("dir", run_dir, "Directory holding function.lfn and certificate.lcert");
    certify_cmd->add_option("--function", function_path, "Function file (overrides dir)");
    certify_cmd->add_option("--certificate", cert_path, "Certificate file (overrides dir)");
    certify_cmd->add_option("--checks", checks, "Comma-separated subset of match,supnorm,lipschitz,modulus,pinch or all");
    certify_cmd->add_option("--pairs", copts.pairs, "Samples per check");
    certify_cmd->add_option("--pinch-samples", copts.pinch_samples, "Samples for the pinch check");
    certify_cmd->add_option("--seed", copts.seed, "Master seed");
    certify_cmd->add_option("--report", report_path, "Report path (default <dir>/certify.json)");

    // replay
    auto* replay = app.add_subcommand("replay", "Re-run a construct manifest and compare certificates");
    std::string manifest_path, replay_out;
    replay->add_option("manifest", manifest_path, "manifest.json")->required();
    replay->add_option("--out", replay_out, "Output directory")->required();

    // heis
    auto* heis = app.add_subcommand("heis", "Heisenberg group tools");
    heis->require_subcommand(1);
    auto* dist = heis->add_subcommand("dist", "Koranyi distance and CC distance bounds");
    std::string p_text, q_text;
    heis::CcOptions cc;
    bool csv = false;
    dist->add_option("p", p_text, "x,y,t")->required();
    dist->add_option("q", q_text, "x,y,t")->required();
    dist->add_option("--waypoints", cc.waypoints, "Path waypoints");
    dist->add_option("--iterations", cc.iterations, "Descent iteration cap");
    dist->add_option("--seed", cc.seed, "Seed");
    dist->add_flag("--csv", csv, "Print CSV instead of a table");
    auto* graph = heis->add_subcommand("graph", "Graph analysis");
    graph->require_subcommand(1);
    auto* analyze = graph->add_subcommand("analyze", "Characteristic fraction and Hoelder transfer of a graph");
    std::string graph_file;
    double graph_tau = 1e-3;
    int graph_res = 0;
    std::uint64_t graph_seed = 1;
    analyze->add_option("function", graph_file, "Function file of a planar m = 1 build")->required();
    analyze->add_option("--tau", graph_tau, "Residual tolerance");
    analyze->add_option("--resolution", graph_res, "Scan grid per axis (0 = domain grid)");
    analyze->add_option("--seed", graph_seed, "Seed");
    analyze->add_flag("--csv", csv, "Print CSV instead of a table");
    auto* counter = heis->add_subcommand("counterexample", "Path integrals of (2y, -2x) on the unit square");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*construct) {
            req.config.modulus = Modulus::parse(modulus);
            req.lower = parse_coords(lower, req.n, "--lower");
            req.upper = parse_coords(upper, req.n, "--upper");
            const fs::path dir = resolve_out(out_dir);
            const auto outcome = run_construct(req, dir);
            (outcome.exit_code == kOk ? std::cout : std::cerr) << outcome.message << "\n";
            if (outcome.exit_code != kInfeasible && outcome.exit_code != kInvalid)
                std::cout << "wrote " << dir.string() << "\n";
            return outcome.exit_code;
        }
        if (*certify_cmd) {
            const fs::path dir = run_dir.empty() ? default_output_dir() : fs::path(run_dir);
            const fs::path fpath = function_path.empty() ? dir / "function.lfn" : fs::path(function_path);
            const fs::path cpath = cert_path.empty() ? dir / "certificate.lcert" : fs::path(cert_path);
            copts.checks = parse_checks(checks);
            auto loaded = load_function(fpath);
            auto cert = load_certificate(cpath);
            const auto f = FieldCollection::catalog(cert.field, loaded.function.dim(), loaded.function.order());
            const auto report =
                certify(loaded.function, loaded.domain, cert.certificate, f, Modulus::parse(cert.modulus), copts);
            const fs::path rpath = report_path.empty() ? dir / "certify.json" : fs::path(report_path);
            atomic_write(rpath, report.to_json().dump(2) + "\n");
            fs::path bins = rpath;
            bins.replace_extension(".csv");
            atomic_write(bins, report.bins_csv());
            for (const auto& c : report.checks) {
                std::printf("%-10s %-4s margin %-12.6g samples %-8zu %s\n", c.name.c_str(), c.passed ? "pass" : "FAIL",
                            c.margin, c.samples, c.detail.c_str());
            }
            return report.passed() ? kOk : kCertificationFailed;
        }
        if (*replay) {
            const auto r = run_replay(manifest_path, replay_out);
            (r.construct.exit_code == kOk ? std::cout : std::cerr) << r.construct.message << "\n";
            if (r.identical) {
                std::cout << "certificate " << (*r.identical ? "identical" : "DIFFERENT") << "\n";
                if (!*r.identical) return kCertificationFailed;
            }
            return r.construct.exit_code;
        }
        if (*dist) {
            const auto pv = parse_coords(p_text, 3, "p");
            const auto qv = parse_coords(q_text, 3, "q");
            const heis::HPoint p{pv[0], pv[1], pv[2]};
            const heis::HPoint q{qv[0], qv[1], qv[2]};
            const double dk = heis::koranyi_dist(p, q);
            const auto b = heis::cc_dist_bounds(p, q, cc);
            if (csv) {
                std::printf("d_K,cc_lower,cc_upper,loose\n%.17g,%.17g,%.17g,%d\n", dk, b.lower, b.upper, b.loose ? 1 : 0);
            } else {
                std::printf("d_K       %.12g\ncc lower  %.12g\ncc upper  %.12g%s\n", dk, b.lower, b.upper,
                            b.loose ? "  (loose: descent hit its iteration cap)" : "");
            }
            return kOk;
        }
        if (*analyze) {
            auto loaded = load_function(graph_file);
            if (loaded.function.dim() != 2 || loaded.function.order() != 1)
                throw ValidationError("graph analyze needs a planar m = 1 function");
            auto fn = std::make_shared<const BumpPolySum>(std::move(loaded.function));
            const auto g = heis::GraphMap::from_sum(fn, loaded.domain);
            const auto ch = heis::characteristic_fraction(g, graph_tau, graph_res);
            const auto tr = heis::holder_transfer_check(g, graph_seed);
            if (csv) {
                std::printf("tau,characteristic_fraction,alpha_u,alpha_phi,gap,transfer_passed\n");
                std::printf("%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", ch.tau, ch.fraction, tr.u.exponent, tr.phi.exponent,
                            tr.gap, tr.passed ? 1 : 0);
            } else {
                std::printf("characteristic fraction  %.6f  (tau %g, %zu of %zu cells)\n", ch.fraction, ch.tau,
                            ch.characteristic, ch.cells);
                std::printf("alpha_u                  %.4f  (R^2 %.4f)\n", tr.u.exponent, tr.u.r2);
                std::printf("alpha_phi                %.4f  (R^2 %.4f)\n", tr.phi.exponent, tr.phi.r2);
                std::printf("transfer |a_phi - a_u/2| %.4f  %s%s\n", tr.gap, tr.passed ? "pass" : "FAIL",
                            tr.degenerate ? " (degenerate)" : "");
            }
            return kOk;
        }
        if (*counter) {
            const auto c = heis::circulation_counterexample();
            std::printf("path A (0,0)->(1,0)->(1,1)  %.15f\n", c.path_a);
            std::printf("path B (0,0)->(0,1)->(1,1)  %.15f\n", c.path_b);
            std::printf("difference                  %.15f\n", c.difference());
            return kOk;
        }
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible [" << e.constraint() << "]: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kOk;
}
