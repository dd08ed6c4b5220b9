#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "lusin/construct/build_config.hpp"
#include "lusin/construct/field.hpp"
#include "lusin/core/box_domain.hpp"

namespace lusin::harness {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInfeasible = 1, kInvalid = 2, kCertificationFailed = 3 };

/// Everything needed to reproduce a construction.
struct ConstructRequest {
    std::string field = "heisenberg";
    std::size_t n = 2;
    int m = 1;
    Point lower{0.0, 0.0};
    Point upper{1.0, 1.0};
    int resolution = 16;
    BuildConfig config;

    BoxDomain domain() const;
    FieldCollection fields() const { return FieldCollection::catalog(field, n, m); }
    nlohmann::json to_json() const;
    static ConstructRequest from_json(const nlohmann::json& j);
};

/// Record of one CLI run. Certificates are deterministic; the manifest alone
/// carries wall-clock timestamps.
struct RunManifest {
    std::string command;
    nlohmann::json request;
    std::string artifact_version = kArtifactVersion;
    std::string started;
    std::string finished;
    nlohmann::json outputs = nlohmann::json::object();  // role -> file name, relative to the manifest

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

std::string utc_timestamp();

struct ConstructOutcome {
    int exit_code = kOk;
    std::string message;
    nlohmann::json summary;  // certificate summary, null when the build failed
};

/// Builds, then writes function.lfn, certificate.lcert, summary.json, stages.csv and
/// manifest.json into out_dir. Nothing is written when the build fails.
ConstructOutcome run_construct(const ConstructRequest& req, const std::filesystem::path& out_dir);

/// Re-runs the request recorded in a manifest into out_dir and compares the new
/// certificate byte-for-byte with the recorded one when it is still present.
struct ReplayOutcome {
    ConstructOutcome construct;
    std::optional<bool> identical;
};
ReplayOutcome run_replay(const std::filesystem::path& manifest, const std::filesystem::path& out_dir);

/// Per-stage table of a certificate summary.
std::string stages_csv(const nlohmann::json& summary);

}  // namespace lusin::harness
