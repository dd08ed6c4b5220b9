#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "lusin/construct/build_config.hpp"
#include "lusin/core/box_domain.hpp"
#include "lusin/core/bump_poly_sum.hpp"
#include "lusin/core/certificate.hpp"
#include "lusin/core/errors.hpp"

namespace lusin::harness {

inline constexpr int kFunctionVersion = 1;
inline constexpr int kCertificateVersion = 1;

/// Raised when a file carries a different format version than this build reads.
class VersionError : public ValidationError {
public:
    VersionError(const std::string& kind, int expected, int found)
        : ValidationError(kind + " version mismatch: expected " + std::to_string(expected) + ", found " +
                          std::to_string(found)),
          expected_(expected),
          found_(found) {}
    int expected() const noexcept { return expected_; }
    int found() const noexcept { return found_; }

private:
    int expected_;
    int found_;
};

/// Non-finite doubles become the strings "inf", "-inf", "nan".
nlohmann::json number(double v);
double number_from(const nlohmann::json& j);

nlohmann::json domain_to_json(const BoxDomain& dom);
BoxDomain domain_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const BuildConfig& cfg);
BuildConfig config_from_json(const nlohmann::json& j);

/// Certificate without the per-cell index lists.
nlohmann::json certificate_summary(const BuildCertificate& cert);

struct LoadedFunction {
    BumpPolySum function;
    BoxDomain domain;
};

/// One JSON manifest line, then one little-endian float64 row per term:
/// lower[n], upper[n], coefficients in enumerate_up_to order, theta, weight, stage.
std::string encode_function(const BumpPolySum& g, const BoxDomain& dom);
LoadedFunction decode_function(const std::string& bytes);
void save_function(const std::filesystem::path& path, const BumpPolySum& g, const BoxDomain& dom);
LoadedFunction load_function(const std::filesystem::path& path);

struct LoadedCertificate {
    BuildCertificate certificate;
    std::string field;    // catalog name of the prescribed fields
    std::string modulus;  // modulus spec the build was certified against
};

/// JSON header line (summary plus per-stage list lengths), then the covered and
/// full cell lists of every stage as little-endian int64.
std::string encode_certificate(const BuildCertificate& cert, const std::string& field, const std::string& modulus);
LoadedCertificate decode_certificate(const std::string& bytes);
void save_certificate(const std::filesystem::path& path, const BuildCertificate& cert, const std::string& field,
                      const std::string& modulus);
LoadedCertificate load_certificate(const std::filesystem::path& path);

}  // namespace lusin::harness
