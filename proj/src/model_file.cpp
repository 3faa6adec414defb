#include "ordstat/model_file.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace ordstat {

namespace {

// The schema is a single flat table of four fixed keys, so a small
// strict reader is enough; no nested tables, no dates, no multiline
// strings.
struct TomlValue {
    bool is_string = false;
    std::string str;
    std::vector<double> numbers; // scalars are stored as a 1-element array
    bool is_array = false;
};

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok) {
    const std::string t = strip(tok);
    if (t.empty()) raise(ErrorCode::ParseError, "empty number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) {
        raise(ErrorCode::ParseError, "bad number '" + t + "'");
    }
    return v;
}

TomlValue parse_value(const std::string& raw) {
    const std::string v = strip(raw);
    if (v.empty()) raise(ErrorCode::ParseError, "missing value");
    TomlValue out;
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') raise(ErrorCode::ParseError, "unterminated string");
        out.is_string = true;
        out.str = v.substr(1, v.size() - 2);
        return out;
    }
    if (v.front() == '[') {
        if (v.back() != ']') raise(ErrorCode::ParseError, "unterminated array");
        out.is_array = true;
        std::string body = v.substr(1, v.size() - 2);
        std::string tok;
        std::istringstream is(body);
        while (std::getline(is, tok, ',')) {
            if (strip(tok).empty() && is.eof()) break; // trailing comma
            out.numbers.push_back(parse_number(tok));
        }
        return out;
    }
    out.numbers.push_back(parse_number(v));
    return out;
}

} // namespace

Model parse_model_toml(const std::string& text) {
    std::map<std::string, TomlValue> table;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            raise(ErrorCode::ParseError,
                  "line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = strip(line.substr(0, eq));
        if (key.empty()) raise(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": empty key");
        if (table.count(key)) {
            raise(ErrorCode::ParseError, "duplicate key '" + key + "'");
        }
        table[key] = parse_value(line.substr(eq + 1));
    }

    for (const auto& [key, _] : table) {
        if (key != "kind" && key != "family" && key != "params" && key != "theta") {
            raise(ErrorCode::ParseError, "unknown key '" + key + "'");
        }
    }
    for (const char* key : {"kind", "family", "params", "theta"}) {
        if (!table.count(key)) {
            raise(ErrorCode::ParseError, std::string("missing key '") + key + "'");
        }
    }

    const TomlValue& kind_v = table["kind"];
    const TomlValue& family_v = table["family"];
    if (!kind_v.is_string || !family_v.is_string) {
        raise(ErrorCode::ParseError, "kind and family must be strings");
    }
    Kind kind;
    if (kind_v.str == "location") {
        kind = Kind::Location;
    } else if (kind_v.str == "scale") {
        kind = Kind::Scale;
    } else {
        raise(ErrorCode::ParseError, "kind must be \"location\" or \"scale\"");
    }
    Family family;
    if (family_v.str == "bivariate_normal") {
        family = Family::BivariateNormal;
    } else if (family_v.str == "indep_exponential_location") {
        family = Family::IndepExponentialLocation;
    } else if (family_v.str == "indep_gamma_scale") {
        family = Family::IndepGammaScale;
    } else if (family_v.str == "indep_power_scale") {
        family = Family::IndepPowerScale;
    } else {
        raise(ErrorCode::ParseError, "unknown family '" + family_v.str + "'");
    }

    const TomlValue& params = table["params"];
    const TomlValue& theta = table["theta"];
    if (!params.is_array || params.is_string) {
        raise(ErrorCode::ParseError, "params must be an array of numbers");
    }
    if (!theta.is_array || theta.numbers.size() != 2) {
        raise(ErrorCode::ParseError, "theta must be an array of 2 numbers");
    }
    return Model::make(kind, family, params.numbers, theta.numbers[0], theta.numbers[1]);
}

Model load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot open model file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_toml(buf.str());
}

} // namespace ordstat
