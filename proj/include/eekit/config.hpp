// System configuration: one flat struct of physical parameters shared by all
// modules, plus validation and the key=value config-file format.
#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "eekit/units.hpp"

namespace eekit {

struct SystemConfig {
    double B0 = 1e7;                  // per-channel bandwidth [Hz]
    double N0 = 3.9810717055349694e-21; // one-sided noise spectral density [W/Hz], -174 dBm/Hz
    double T = 1e-3;                  // frame duration [s]
    double PT = 20e-3;                // total transmit power [W]
    int Ms = 64;                      // transmit antennas
    int Mr = 64;                      // receive antennas
    int N = 100;                      // frequency channels
    int M = 64;                       // spatial subchannels
    double rho_th = 0.1;              // high-EE SNR threshold, linear (-10 dB)
    double theta = 0.01;              // QoS exponent [1/bit]
    std::uint64_t seed = 12345;
    std::int64_t samples = 100000;
    bool shared_eigs_across_freq = false; // one eigenvalue draw shared by all frequency channels
};

struct ConfigViolation {
    std::string field;
    std::string reason;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::string msg, std::vector<ConfigViolation> v = {})
        : std::runtime_error(std::move(msg)), violations(std::move(v)) {}
    std::vector<ConfigViolation> violations;
};

// Every violated invariant is reported individually; nothing is clamped.
inline std::vector<ConfigViolation> validate_config(const SystemConfig& c) {
    std::vector<ConfigViolation> v;
    auto bad = [&](const char* field, const char* reason) { v.push_back({field, reason}); };
    if (!(c.B0 > 0.0) || !std::isfinite(c.B0)) bad("B0", "must be > 0");
    if (!(c.N0 > 0.0) || !std::isfinite(c.N0)) bad("N0", "must be > 0");
    if (!(c.T > 0.0) || !std::isfinite(c.T)) bad("T", "must be > 0");
    if (!(c.PT >= 0.0) || !std::isfinite(c.PT)) bad("PT", "must be >= 0");
    if (c.Ms < 1) bad("Ms", "must be a positive integer");
    if (c.Mr < 1) bad("Mr", "must be a positive integer");
    if (c.N < 1) bad("N", "must be a positive integer");
    if (c.M < 1) bad("M", "must be a positive integer");
    if (c.M > std::min(c.Ms, c.Mr)) bad("M", "M exceeds min(Ms,Mr)");
    if (!(c.rho_th > 0.0) || !std::isfinite(c.rho_th)) bad("rho_th", "must be > 0");
    if (!(c.theta >= 0.0) || !std::isfinite(c.theta)) bad("theta", "theta must be >= 0");
    if (c.samples < 1) bad("samples", "must be >= 1");
    return v;
}

inline SystemConfig validated(const SystemConfig& c) {
    auto v = validate_config(c);
    if (!v.empty()) {
        std::string msg = "invalid config:";
        for (const auto& viol : v) msg += " [" + viol.field + ": " + viol.reason + "]";
        throw ConfigError(msg, std::move(v));
    }
    return c;
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        double d = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + s + "' as number");
    }
}

inline std::int64_t parse_int(const std::string& key, const std::string& s) {
    std::int64_t out = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError("config key '" + key + "': cannot parse '" + s + "' as integer");
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("config key '" + key + "': cannot parse '" + s + "' as bool");
}

} // namespace detail

// Keys are the SystemConfig field names. dB-suffixed conveniences rho_th_db
// and n0_dbm_hz are converted to linear on assignment.
inline void apply_override(SystemConfig& c, const std::string& key, const std::string& value) {
    using namespace detail;
    const std::string v = trim(value);
    if (key == "B0") c.B0 = parse_double(key, v);
    else if (key == "N0") c.N0 = parse_double(key, v);
    else if (key == "T") c.T = parse_double(key, v);
    else if (key == "PT") c.PT = parse_double(key, v);
    else if (key == "Ms") c.Ms = static_cast<int>(parse_int(key, v));
    else if (key == "Mr") c.Mr = static_cast<int>(parse_int(key, v));
    else if (key == "N") c.N = static_cast<int>(parse_int(key, v));
    else if (key == "M") c.M = static_cast<int>(parse_int(key, v));
    else if (key == "rho_th") c.rho_th = parse_double(key, v);
    else if (key == "rho_th_db") c.rho_th = db_to_linear(parse_double(key, v));
    else if (key == "theta") c.theta = parse_double(key, v);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, v));
    else if (key == "samples") c.samples = parse_int(key, v);
    else if (key == "n0_dbm_hz") c.N0 = dbm_per_hz_to_w_per_hz(parse_double(key, v));
    else if (key == "shared_eigs_across_freq") c.shared_eigs_across_freq = parse_bool(key, v);
    else throw ConfigError("unknown config key '" + key + "'");
}

inline SystemConfig load_config_stream(std::istream& in, SystemConfig base = {}) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_override(base, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
    return base;
}

inline SystemConfig load_config_file(const std::filesystem::path& path, SystemConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    return load_config_stream(in, base);
}

// Round-trippable dump; load_config_stream(write_config(c)) == c.
inline void write_config(std::ostream& out, const SystemConfig& c) {
    auto num = [](double d) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        return std::string(buf);
    };
    out << "B0 = " << num(c.B0) << "\n"
        << "N0 = " << num(c.N0) << "\n"
        << "T = " << num(c.T) << "\n"
        << "PT = " << num(c.PT) << "\n"
        << "Ms = " << c.Ms << "\n"
        << "Mr = " << c.Mr << "\n"
        << "N = " << c.N << "\n"
        << "M = " << c.M << "\n"
        << "rho_th = " << num(c.rho_th) << "\n"
        << "theta = " << num(c.theta) << "\n"
        << "seed = " << c.seed << "\n"
        << "samples = " << c.samples << "\n"
        << "shared_eigs_across_freq = " << (c.shared_eigs_across_freq ? "true" : "false") << "\n";
}

} // namespace eekit
