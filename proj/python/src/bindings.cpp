// Python bindings for the main operations.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <set>

#include "lusin/core/bump_poly_sum.hpp"
#include "lusin/core/errors.hpp"
#include "lusin/core/modulus.hpp"
#include "lusin/harness/certify.hpp"
#include "lusin/harness/pipeline.hpp"
#include "lusin/harness/serialization.hpp"
#include "lusin/heis/cc_distance.hpp"
#include "lusin/heis/counterexample.hpp"
#include "lusin/heis/graph_map.hpp"
#include "lusin/heis/holder.hpp"
#include "lusin/heis/hpoint.hpp"

namespace py = pybind11;
using namespace lusin;
using namespace lusin::heis;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

struct Function {
    std::shared_ptr<const BumpPolySum> sum;
    BoxDomain domain;
};

Function load(const std::filesystem::path& path) {
    auto loaded = harness::load_function(path);
    return {std::make_shared<const BumpPolySum>(std::move(loaded.function)), std::move(loaded.domain)};
}

}  // namespace

PYBIND11_MODULE(_lusin, m) {
    m.doc() = "Constructive Lusin approximation and Heisenberg graph tools";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

    py::class_<Modulus>(m, "Modulus")
        .def_static("parse", &Modulus::parse, py::arg("spec"))
        .def_static("log_preset", &Modulus::log_preset)
        .def_static("power", &Modulus::power, py::arg("beta"))
        .def("__call__", &Modulus::operator(), py::arg("t"))
        .def("__str__", &Modulus::to_string);

    py::class_<HPoint>(m, "HPoint")
        .def(py::init<double, double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("t") = 0.0)
        .def_readwrite("x", &HPoint::x)
        .def_readwrite("y", &HPoint::y)
        .def_readwrite("t", &HPoint::t)
        .def("__mul__", [](const HPoint& a, const HPoint& b) { return a * b; })
        .def("inverse", [](const HPoint& p) { return inverse(p); })
        .def("dilate", [](const HPoint& p, double r) { return dilate(p, r); }, py::arg("r"))
        .def("__eq__", [](const HPoint& a, const HPoint& b) { return a == b; })
        .def("__repr__", [](const HPoint& p) {
            return "HPoint(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " + std::to_string(p.t) + ")";
        });

    m.def("koranyi_norm", &koranyi_norm, py::arg("p"));
    m.def("koranyi_dist", &koranyi_dist, py::arg("p"), py::arg("q"));
    m.def(
        "cc_dist_bounds",
        [](const HPoint& p, const HPoint& q, int waypoints, int iterations, std::uint64_t seed) {
            CcOptions o;
            o.waypoints = waypoints;
            o.iterations = iterations;
            o.seed = seed;
            const auto b = cc_dist_bounds(p, q, o);
            return py::make_tuple(b.lower, b.upper, b.loose);
        },
        py::arg("p"), py::arg("q"), py::arg("waypoints") = 128, py::arg("iterations") = 2000, py::arg("seed") = 1,
        "(lower, upper, loose) bounds on the Carnot-Caratheodory distance.");
    m.def("counterexample", [] {
        const auto c = circulation_counterexample();
        return py::make_tuple(c.path_a, c.path_b, c.difference());
    });

    py::class_<Function>(m, "Function")
        .def_property_readonly("dim", [](const Function& f) { return f.sum->dim(); })
        .def_property_readonly("order", [](const Function& f) { return f.sum->order(); })
        .def_property_readonly("terms", [](const Function& f) { return f.sum->terms().size(); })
        .def("value", [](const Function& f, const std::vector<double>& x) { return f.sum->value(x); }, py::arg("x"))
        .def(
            "derivative",
            [](const Function& f, const std::vector<double>& x, const std::vector<int>& alpha) {
                return f.sum->derivative(x, MultiIndex(alpha));
            },
            py::arg("x"), py::arg("alpha"));
    m.def("load_function", &load, py::arg("path"));

    m.def(
        "construct",
        [](const std::string& field, std::size_t n, int order, std::vector<double> lower, std::vector<double> upper,
           int resolution, double eps, double sigma, const std::string& modulus, double theta, double tau,
           int stages, std::uint64_t seed, const std::filesystem::path& out) {
            harness::ConstructRequest req;
            req.field = field;
            req.n = n;
            req.m = order;
            req.lower = std::move(lower);
            req.upper = std::move(upper);
            req.resolution = resolution;
            req.config.eps = eps;
            req.config.sigma = sigma;
            req.config.modulus = Modulus::parse(modulus);
            req.config.theta = theta;
            req.config.tau = tau;
            req.config.stages = stages;
            req.config.seed = seed;
            const auto outcome = harness::run_construct(req, out);
            py::dict d;
            d["exit_code"] = outcome.exit_code;
            d["message"] = outcome.message;
            d["summary"] = to_python(outcome.summary);
            return d;
        },
        py::arg("field"), py::arg("n") = 2, py::arg("m") = 1, py::arg("lower") = std::vector<double>{0.0, 0.0},
        py::arg("upper") = std::vector<double>{1.0, 1.0}, py::arg("resolution") = 16, py::arg("eps") = 0.05,
        py::arg("sigma") = 0.5, py::arg("modulus") = "log", py::arg("theta") = 0.0, py::arg("tau") = 1e-3,
        py::arg("stages") = 6, py::arg("seed") = 1, py::arg("out"),
        "Build and write function.lfn, certificate.lcert, summary.json, stages.csv and manifest.json into out.");

    m.def(
        "certify",
        [](const std::filesystem::path& dir, std::vector<std::string> checks, std::size_t pairs,
           std::size_t pinch_samples, std::uint64_t seed) {
            const auto loaded = harness::load_function(dir / "function.lfn");
            const auto cert = harness::load_certificate(dir / "certificate.lcert");
            harness::CertifyOptions o;
            o.checks = std::set<std::string>(checks.begin(), checks.end());
            o.pairs = pairs;
            o.pinch_samples = pinch_samples;
            o.seed = seed;
            const auto f = FieldCollection::catalog(cert.field, loaded.function.dim(), loaded.function.order());
            const auto rep = harness::certify(loaded.function, loaded.domain, cert.certificate, f,
                                              Modulus::parse(cert.modulus), o);
            return to_python(rep.to_json());
        },
        py::arg("dir"),
        py::arg("checks") = std::vector<std::string>(harness::kAllChecks.begin(), harness::kAllChecks.end()),
        py::arg("pairs") = 100000, py::arg("pinch_samples") = 10000, py::arg("seed") = 1);

    m.def(
        "replay",
        [](const std::filesystem::path& manifest, const std::filesystem::path& out) {
            const auto r = harness::run_replay(manifest, out);
            return py::make_tuple(r.construct.exit_code, r.identical);
        },
        py::arg("manifest"), py::arg("out"), "(exit_code, identical) where identical is None if nothing to compare.");

    m.def(
        "characteristic_fraction",
        [](const Function& f, double tau, int resolution) {
            const auto g = GraphMap::from_sum(f.sum, f.domain);
            const auto r = characteristic_fraction(g, tau, resolution);
            return py::make_tuple(r.fraction, r.characteristic, r.cells);
        },
        py::arg("function"), py::arg("tau") = 1e-3, py::arg("resolution") = 0);

    m.def(
        "holder_transfer",
        [](std::function<double(double, double)> u, std::function<std::pair<double, double>(double, double)> grad,
           std::vector<double> lower, std::vector<double> upper, std::uint64_t seed) {
            const BoxDomain dom(std::move(lower), std::move(upper), {8, 8});
            const auto g = GraphMap::from_closed_form(dom, std::move(u), [grad](double x, double y) {
                const auto [a, b] = grad(x, y);
                return Planar{a, b};
            });
            const auto r = holder_transfer_check(g, seed);
            py::dict d;
            d["alpha_u"] = r.u.exponent;
            d["alpha_phi"] = r.phi.exponent;
            d["gap"] = r.gap;
            d["degenerate"] = r.degenerate;
            d["passed"] = r.passed;
            return d;
        },
        py::arg("u"), py::arg("grad"), py::arg("lower") = std::vector<double>{0.0, 0.0},
        py::arg("upper") = std::vector<double>{1.0, 1.0}, py::arg("seed") = 1,
        "Estimate Euclidean and Koranyi Holder exponents of u and its graph map.");
}
