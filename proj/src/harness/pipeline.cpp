#include "lusin/harness/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include "lusin/construct/multi_stage.hpp"
#include "lusin/core/errors.hpp"
#include "lusin/harness/io.hpp"
#include "lusin/harness/serialization.hpp"

namespace lusin::harness {

using nlohmann::json;

BoxDomain ConstructRequest::domain() const {
    if (lower.size() != n || upper.size() != n) throw ValidationError("domain corners must have n coordinates");
    return BoxDomain(lower, upper, std::vector<int>(n, resolution));
}

json ConstructRequest::to_json() const {
    return {{"field", field}, {"n", n},           {"m", m},
            {"lower", lower}, {"upper", upper},   {"resolution", resolution},
            {"config", config_to_json(config)}};
}

ConstructRequest ConstructRequest::from_json(const json& j) {
    ConstructRequest r;
    r.field = j.at("field").get<std::string>();
    r.n = j.at("n").get<std::size_t>();
    r.m = j.at("m").get<int>();
    r.lower = j.at("lower").get<Point>();
    r.upper = j.at("upper").get<Point>();
    r.resolution = j.at("resolution").get<int>();
    r.config = config_from_json(j.at("config"));
    return r;
}

json RunManifest::to_json() const {
    return {{"command", command},   {"request", request},   {"artifact_version", artifact_version},
            {"started", started},   {"finished", finished}, {"outputs", outputs}};
}

RunManifest RunManifest::from_json(const json& j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.request = j.at("request");
    m.artifact_version = j.at("artifact_version").get<std::string>();
    m.started = j.value("started", std::string());
    m.finished = j.value("finished", std::string());
    m.outputs = j.value("outputs", json::object());
    return m;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string stages_csv(const json& summary) {
    std::ostringstream os;
    os.precision(17);
    os << "stage,level,covered_cells,full_cells,active_measure,covered_measure,sup_budget,modulus_budget,delta,"
          "top_lipschitz,rejected_pinch,partial\n";
    for (const auto& s : summary.at("stages")) {
        os << s["stage"] << ',' << s["level"] << ',' << s["covered_cells"] << ',' << s["full_cells"] << ','
           << s["active_measure"].get<double>() << ',' << s["covered_measure"].get<double>() << ','
           << s["sup_budget"].get<double>() << ',' << s["modulus_budget"].get<double>() << ','
           << number_from(s["delta"]) << ',' << number_from(s["top_lipschitz"]) << ',' << s["rejected_pinch"] << ','
           << (s["partial"].get<bool>() ? 1 : 0) << '\n';
    }
    return os.str();
}

ConstructOutcome run_construct(const ConstructRequest& req, const std::filesystem::path& out_dir) {
    ConstructOutcome out;
    RunManifest manifest;
    manifest.command = "construct";
    manifest.request = req.to_json();
    manifest.started = utc_timestamp();
    try {
        const BoxDomain dom = req.domain();
        const FieldCollection f = req.fields();
        BuildResult built = multi_stage_build(f, dom, req.config);
        out.summary = certificate_summary(built.certificate);
        const std::string cert_bytes = encode_certificate(built.certificate, req.field, req.config.modulus.to_string());
        save_function(out_dir / "function.lfn", built.function, dom);
        atomic_write(out_dir / "certificate.lcert", cert_bytes);
        atomic_write(out_dir / "summary.json", out.summary.dump(2) + "\n");
        atomic_write(out_dir / "stages.csv", stages_csv(out.summary));
        manifest.finished = utc_timestamp();
        manifest.outputs = {{"function", "function.lfn"},
                            {"certificate", "certificate.lcert"},
                            {"summary", "summary.json"},
                            {"stages", "stages.csv"}};
        atomic_write(out_dir / "manifest.json", manifest.to_json().dump(2) + "\n");
        const auto& c = built.certificate;
        std::ostringstream os;
        os << "terms " << built.function.terms().size() << ", covered " << c.covered_measure() << " of "
           << c.domain_measure << ", residual " << c.residual_measure() << " (target " << c.residual_target << ")";
        if (!c.residual_within_target()) os << " [residual above target]";
        out.exit_code = c.all_ledgers_ok() ? kOk : kCertificationFailed;
        if (out.exit_code != kOk) os << " [ledger over budget]";
        out.message = os.str();
    } catch (const InfeasibleError& e) {
        out.exit_code = kInfeasible;
        out.message = std::string("infeasible [") + e.constraint() + "]: " + e.what();
    } catch (const ValidationError& e) {
        out.exit_code = kInvalid;
        out.message = std::string("invalid input: ") + e.what();
    }
    return out;
}

ReplayOutcome run_replay(const std::filesystem::path& manifest_path, const std::filesystem::path& out_dir) {
    const RunManifest m = RunManifest::from_json(json::parse(read_file(manifest_path)));
    if (m.command != "construct") throw ValidationError("replay supports construct manifests, found '" + m.command + "'");
    ReplayOutcome r;
    r.construct = run_construct(ConstructRequest::from_json(m.request), out_dir);
    if (r.construct.exit_code == kInfeasible || r.construct.exit_code == kInvalid) return r;
    if (m.outputs.contains("certificate")) {
        const auto original = manifest_path.parent_path() / m.outputs["certificate"].get<std::string>();
        const auto fresh = out_dir / "certificate.lcert";
        if (std::filesystem::exists(original)) r.identical = read_file(original) == read_file(fresh);
    }
    return r;
}

}  // namespace lusin::harness
