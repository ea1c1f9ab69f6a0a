#include "veecav/params.hpp"
#include "veecav/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace veecav {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw RangeError(name, "must be finite");
}

void require_nonneg(double v, const char* name) {
    require_finite(v, name);
    if (v < 0.0) throw RangeError(name, "must be >= 0");
}

} // namespace

void validate_ranges(const SystemParams& p) {
    require_finite(p.delta_1, "delta_1");
    require_finite(p.delta_2, "delta_2");
    require_nonneg(p.gamma_a, "gamma_a");
    require_nonneg(p.gamma_1, "gamma_1");
    require_nonneg(p.gamma_2, "gamma_2");
    require_nonneg(p.P_a, "P_a");
    require_nonneg(p.P_1, "P_1");
    require_nonneg(p.P_2, "P_2");
    require_nonneg(p.g_2, "g_2");
    require_finite(p.beta, "beta");
    if (std::abs(p.beta) > 1.0) throw RangeError("beta", "must lie in [-1, 1]");
    // g_1 is the unit of the whole parameterization; 0 is admitted only so
    // the fully decoupled analytic limit can be exercised.
    if (p.g_1 != 1.0 && p.g_1 != 0.0)
        throw RangeError("g_1", "is the frequency unit and must be 1 (or 0 for the decoupled limit)");
}

const SystemParams& validate_params(const SystemParams& p) {
    validate_ranges(p);
    if (p.P_a >= p.gamma_a) {
        std::ostringstream os;
        os << "StabilityError: P_a = " << p.P_a << " >= gamma_a = " << p.gamma_a
           << " (net cavity gain; correlation modes would not decay)";
        throw StabilityError(os.str());
    }
    return p;
}

DerivedRates derived_rates(const SystemParams& p) {
    DerivedRates r;
    r.gamma_12 = p.beta * std::sqrt(p.gamma_1 * p.gamma_2);
    r.Gamma_a = p.gamma_a - p.P_a;
    r.Gamma_s1 = p.gamma_1 + p.P_1;
    r.Gamma_s2 = p.gamma_2 + p.P_2;
    return r;
}

namespace {

bool parse_decimal(const std::string& s, double& out) {
    // Plain decimal floats only: no hex, no inf/nan.
    if (s.empty()) return false;
    for (char c : s) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
              c == '.' || c == 'e' || c == 'E'))
            return false;
    }
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

std::string trim(std::string_view sv) {
    size_t b = 0, e = sv.size();
    while (b < e && std::isspace(static_cast<unsigned char>(sv[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(sv[e - 1]))) --e;
    return std::string(sv.substr(b, e - b));
}

} // namespace

SystemParams parse_params_text(std::string_view text) {
    static const std::vector<std::string> keys = {
        "gamma_a", "gamma_1", "gamma_2", "g_2", "beta",
        "P_a",     "P_1",     "P_2",     "delta_1", "delta_2"};

    std::map<std::string, double> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string stripped = trim(line);
        if (stripped.empty()) continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(stripped.substr(0, eq));
        std::string val = trim(stripped.substr(eq + 1));
        if (key == "g_1")
            throw ParseError("line " + std::to_string(lineno) +
                             ": g_1 is the implicit unit (always 1) and may not be set");
        bool known = false;
        for (const auto& k : keys) known = known || (k == key);
        if (!known)
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (seen.count(key))
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        double v = 0.0;
        if (!parse_decimal(val, v))
            throw ParseError("line " + std::to_string(lineno) + ": '" + val +
                             "' is not a decimal float");
        seen[key] = v;
    }
    for (const auto& k : keys)
        if (!seen.count(k)) throw ParseError("missing key '" + k + "'");

    SystemParams p;
    p.gamma_a = seen["gamma_a"];
    p.gamma_1 = seen["gamma_1"];
    p.gamma_2 = seen["gamma_2"];
    p.g_2 = seen["g_2"];
    p.beta = seen["beta"];
    p.P_a = seen["P_a"];
    p.P_1 = seen["P_1"];
    p.P_2 = seen["P_2"];
    p.delta_1 = seen["delta_1"];
    p.delta_2 = seen["delta_2"];
    return p;
}

SystemParams parse_params_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open parameter file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_params_text(buf.str());
}

} // namespace veecav
