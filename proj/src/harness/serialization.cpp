#include "lusin/harness/serialization.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "lusin/core/errors.hpp"
#include "lusin/harness/io.hpp"

namespace lusin::harness {

static_assert(std::endian::native == std::endian::little, "binary blocks assume a little-endian host");

using nlohmann::json;

namespace {

template <class T>
void append_raw(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

template <class T>
T read_raw(const std::string& in, std::size_t& pos) {
    if (pos + sizeof(T) > in.size()) throw ValidationError("truncated binary block");
    T v;
    std::memcpy(&v, in.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}

std::pair<json, std::size_t> split_header(const std::string& bytes, const char* kind) {
    const auto nl = bytes.find('\n');
    if (nl == std::string::npos) throw ValidationError(std::string(kind) + ": missing header line");
    json head;
    try {
        head = json::parse(bytes.substr(0, nl));
    } catch (const json::exception& e) {
        throw ValidationError(std::string(kind) + ": malformed header: " + e.what());
    }
    return {std::move(head), nl + 1};
}

void check_format(const json& head, const std::string& format, int version) {
    if (head.value("format", std::string()) != format)
        throw ValidationError("expected a " + format + " file, found format '" + head.value("format", std::string()) +
                              "'");
    const int found = head.value("version", -1);
    if (found != version) throw VersionError(format, version, found);
}

std::vector<double> numbers_from(const json& j) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(number_from(v));
    return out;
}

json numbers(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

}  // namespace

json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double number_from(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw ValidationError("not a number: " + s);
    }
    return j.get<double>();
}

json domain_to_json(const BoxDomain& dom) {
    json j{{"lower", numbers(dom.lower())}, {"upper", numbers(dom.upper())}, {"resolution", dom.resolution()}};
    j["mask"] = dom.masked() ? json(dom.mask()) : json(nullptr);
    return j;
}

BoxDomain domain_from_json(const json& j) {
    std::vector<std::uint8_t> mask;
    if (j.contains("mask") && !j["mask"].is_null()) mask = j["mask"].get<std::vector<std::uint8_t>>();
    return BoxDomain(numbers_from(j.at("lower")), numbers_from(j.at("upper")), j.at("resolution").get<std::vector<int>>(),
                     std::move(mask));
}

json config_to_json(const BuildConfig& cfg) {
    return {{"eps", cfg.eps},          {"sigma", cfg.sigma},      {"modulus", cfg.modulus.to_string()},
            {"theta", cfg.theta},      {"tau", cfg.tau},          {"quantile", cfg.quantile},
            {"stages", cfg.stages},    {"seed", cfg.seed},        {"max_cells", cfg.max_cells}};
}

BuildConfig config_from_json(const json& j) {
    BuildConfig cfg;
    cfg.eps = j.at("eps").get<double>();
    cfg.sigma = j.at("sigma").get<double>();
    cfg.modulus = Modulus::parse(j.at("modulus").get<std::string>());
    cfg.theta = j.at("theta").get<double>();
    cfg.tau = j.at("tau").get<double>();
    cfg.quantile = j.at("quantile").get<double>();
    cfg.stages = j.at("stages").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.max_cells = j.at("max_cells").get<std::size_t>();
    cfg.validate();
    return cfg;
}

json certificate_summary(const BuildCertificate& c) {
    json stages = json::array();
    for (const auto& s : c.stages) {
        stages.push_back({{"stage", s.stage},
                          {"level", s.level},
                          {"origin", numbers(s.origin)},
                          {"cell_side", numbers(s.cell_side)},
                          {"grid_shape", s.grid_shape},
                          {"theta", s.theta},
                          {"covered_cells", s.covered.size()},
                          {"full_cells", s.full.size()},
                          {"active_measure", s.active_measure},
                          {"covered_measure", s.covered_measure},
                          {"match_tolerance", number(s.match_tolerance)},
                          {"sup_bound", numbers(s.sup_bound)},
                          {"lipschitz_bound", numbers(s.lipschitz_bound)},
                          {"top_lipschitz", number(s.top_lipschitz)},
                          {"sup_budget", s.sup_budget},
                          {"modulus_budget", s.modulus_budget},
                          {"delta", number(s.delta)},
                          {"sup_ratio", number(s.sup_ratio)},
                          {"derived_constant", number(s.derived_constant)},
                          {"rejected_oscillation", s.rejected_oscillation},
                          {"rejected_pinch", s.rejected_pinch},
                          {"rejected_truncation", s.rejected_truncation},
                          {"partial", s.partial}});
    }
    return {{"n", c.n},
            {"m", c.m},
            {"domain_measure", c.domain_measure},
            {"truncation_bound", number(c.truncation_bound)},
            {"truncation_excluded", c.truncation_excluded},
            {"residual_target", c.residual_target},
            {"covered_measure", c.covered_measure()},
            {"residual_measure", c.residual_measure()},
            {"sup_ledger", numbers(c.sup_ledger)},
            {"lipschitz_ledger", numbers(c.lipschitz_ledger)},
            {"modulus_ledger", c.modulus_ledger},
            {"sigma", c.sigma},
            {"tau", c.tau},
            {"sup_within_budget", c.sup_within_budget()},
            {"lipschitz_within_budget", c.lipschitz_within_budget()},
            {"modulus_within_budget", c.modulus_within_budget()},
            {"residual_within_target", c.residual_within_target()},
            {"partial", c.partial()},
            {"stages", std::move(stages)}};
}

std::string encode_function(const BumpPolySum& g, const BoxDomain& dom) {
    const std::size_t n = g.dim();
    if (dom.dim() != n) throw ValidationError("function and domain dimensions disagree");
    const std::size_t width = 2 * n + g.layout().size() + 3;
    json layout = json::array();
    for (const auto& a : g.layout()) layout.push_back(a.to_string());
    const json head{{"format", "lusin-function"},
                    {"version", kFunctionVersion},
                    {"n", n},
                    {"m", g.order()},
                    {"domain", domain_to_json(dom)},
                    {"stages", g.stage_count()},
                    {"terms", g.terms().size()},
                    {"row_width", width},
                    {"layout", std::move(layout)},
                    {"encoding", "float64-le"}};
    std::string out = head.dump();
    out.push_back('\n');
    out.reserve(out.size() + g.terms().size() * width * sizeof(double));
    for (const auto& t : g.terms()) {
        for (double v : t.lower) append_raw(out, v);
        for (double v : t.upper) append_raw(out, v);
        for (double v : t.coeffs) append_raw(out, v);
        append_raw(out, t.theta);
        append_raw(out, t.weight);
        append_raw(out, static_cast<double>(t.stage));
    }
    return out;
}

LoadedFunction decode_function(const std::string& bytes) {
    auto [head, pos] = split_header(bytes, "function file");
    check_format(head, "lusin-function", kFunctionVersion);
    const auto n = head.at("n").get<std::size_t>();
    const int m = head.at("m").get<int>();
    const auto count = head.at("terms").get<std::size_t>();
    const auto width = head.at("row_width").get<std::size_t>();
    const std::size_t ncoef = enumerate_up_to(n, m).size();
    if (width != 2 * n + ncoef + 3) throw ValidationError("function file: row width does not match n and m");
    if (bytes.size() - pos != count * width * sizeof(double))
        throw ValidationError("function file: numeric block has " + std::to_string(bytes.size() - pos) +
                              " bytes, expected " + std::to_string(count * width * sizeof(double)));
    std::vector<CellTerm> terms(count);
    for (auto& t : terms) {
        t.lower.resize(n);
        t.upper.resize(n);
        t.coeffs.resize(ncoef);
        for (auto& v : t.lower) v = read_raw<double>(bytes, pos);
        for (auto& v : t.upper) v = read_raw<double>(bytes, pos);
        for (auto& v : t.coeffs) v = read_raw<double>(bytes, pos);
        t.theta = read_raw<double>(bytes, pos);
        t.weight = read_raw<double>(bytes, pos);
        t.stage = static_cast<int>(read_raw<double>(bytes, pos));
    }
    return {BumpPolySum(n, m, std::move(terms)), domain_from_json(head.at("domain"))};
}

void save_function(const std::filesystem::path& path, const BumpPolySum& g, const BoxDomain& dom) {
    atomic_write(path, encode_function(g, dom));
}

LoadedFunction load_function(const std::filesystem::path& path) { return decode_function(read_file(path)); }

std::string encode_certificate(const BuildCertificate& cert, const std::string& field, const std::string& modulus) {
    json head = certificate_summary(cert);
    head["format"] = "lusin-certificate";
    head["version"] = kCertificateVersion;
    head["field"] = field;
    head["modulus"] = modulus;
    head["encoding"] = "int64-le";
    std::string out = head.dump();
    out.push_back('\n');
    for (const auto& s : cert.stages) {
        for (auto v : s.covered) append_raw(out, v);
        for (auto v : s.full) append_raw(out, v);
    }
    return out;
}

LoadedCertificate decode_certificate(const std::string& bytes) {
    auto [head, pos] = split_header(bytes, "certificate file");
    check_format(head, "lusin-certificate", kCertificateVersion);
    LoadedCertificate out;
    auto& c = out.certificate;
    out.field = head.at("field").get<std::string>();
    out.modulus = head.at("modulus").get<std::string>();
    c.n = head.at("n").get<int>();
    c.m = head.at("m").get<int>();
    c.domain_measure = head.at("domain_measure").get<double>();
    c.truncation_bound = number_from(head.at("truncation_bound"));
    c.truncation_excluded = head.at("truncation_excluded").get<double>();
    c.residual_target = head.at("residual_target").get<double>();
    c.sup_ledger = numbers_from(head.at("sup_ledger"));
    c.lipschitz_ledger = numbers_from(head.at("lipschitz_ledger"));
    c.modulus_ledger = head.at("modulus_ledger").get<double>();
    c.sigma = head.at("sigma").get<double>();
    c.tau = head.at("tau").get<double>();
    for (const auto& s : head.at("stages")) {
        StageRecord r;
        r.stage = s.at("stage").get<int>();
        r.level = s.at("level").get<int>();
        r.origin = numbers_from(s.at("origin"));
        r.cell_side = numbers_from(s.at("cell_side"));
        r.grid_shape = s.at("grid_shape").get<std::vector<int>>();
        r.theta = s.at("theta").get<double>();
        r.active_measure = s.at("active_measure").get<double>();
        r.covered_measure = s.at("covered_measure").get<double>();
        r.match_tolerance = number_from(s.at("match_tolerance"));
        r.sup_bound = numbers_from(s.at("sup_bound"));
        r.lipschitz_bound = numbers_from(s.at("lipschitz_bound"));
        r.top_lipschitz = number_from(s.at("top_lipschitz"));
        r.sup_budget = s.at("sup_budget").get<double>();
        r.modulus_budget = s.at("modulus_budget").get<double>();
        r.delta = number_from(s.at("delta"));
        r.sup_ratio = number_from(s.at("sup_ratio"));
        r.derived_constant = number_from(s.at("derived_constant"));
        r.rejected_oscillation = s.at("rejected_oscillation").get<std::size_t>();
        r.rejected_pinch = s.at("rejected_pinch").get<std::size_t>();
        r.rejected_truncation = s.at("rejected_truncation").get<std::size_t>();
        r.partial = s.at("partial").get<bool>();
        r.covered.resize(s.at("covered_cells").get<std::size_t>());
        r.full.resize(s.at("full_cells").get<std::size_t>());
        c.stages.push_back(std::move(r));
    }
    for (auto& r : c.stages) {
        for (auto& v : r.covered) v = read_raw<std::int64_t>(bytes, pos);
        for (auto& v : r.full) v = read_raw<std::int64_t>(bytes, pos);
    }
    if (pos != bytes.size()) throw ValidationError("certificate file: trailing bytes after the cell lists");
    return out;
}

void save_certificate(const std::filesystem::path& path, const BuildCertificate& cert, const std::string& field,
                      const std::string& modulus) {
    atomic_write(path, encode_certificate(cert, field, modulus));
}

LoadedCertificate load_certificate(const std::filesystem::path& path) { return decode_certificate(read_file(path)); }

}  // namespace lusin::harness
