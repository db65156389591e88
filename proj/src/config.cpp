#include "pairlat/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace pairlat {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// strip a trailing comment that is not inside a quoted string
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

}  // namespace

ConfigMap parse_toml_subset(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[')
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": tables are not part of the supported subset");
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        ConfigValue cv;
        if (val.front() == '"') {
            if (val.size() < 2 || val.back() != '"')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated string");
            cv.raw = val.substr(1, val.size() - 2);
            cv.is_string = true;
        } else {
            cv.raw = val;
        }
        map[key] = cv;
    }
    return map;
}

namespace {

double as_double(const ConfigMap& map, const std::string& key, double fallback,
                 bool* present = nullptr) {
    const auto it = map.find(key);
    if (present) *present = it != map.end();
    if (it == map.end()) return fallback;
    try {
        size_t pos = 0;
        const double v = std::stod(it->second.raw, &pos);
        if (pos != it->second.raw.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: " + it->second.raw);
    }
}

long as_int(const ConfigMap& map, const std::string& key, long fallback) {
    const double v = as_double(map, key, static_cast<double>(fallback));
    const long i = static_cast<long>(std::llround(v));
    if (static_cast<double>(i) != v)
        throw ConfigError("config key '" + key + "': expected an integer");
    return i;
}

std::vector<int> as_int_array(const ConfigMap& map, const std::string& key) {
    const auto it = map.find(key);
    if (it == map.end()) return {};
    std::string raw = trim(it->second.raw);
    if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
        throw ConfigError("config key '" + key + "': expected [a, b, ...]");
    raw = raw.substr(1, raw.size() - 2);
    std::vector<int> out;
    std::istringstream in(raw);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(static_cast<int>(std::stol(tok)));
    }
    return out;
}

}  // namespace

ModelSpec model_spec_from_map(const ConfigMap& map, const std::string& base_dir) {
    ModelSpec spec;
    spec.n = static_cast<int>(as_int(map, "n", 1));
    spec.d = static_cast<int>(as_int(map, "d", 0));
    spec.dims = as_int_array(map, "dims");
    if (spec.d >= 1 && spec.dims.empty() && spec.d == 1) spec.dims = {spec.n};
    const auto bit = map.find("boundary");
    if (bit != map.end()) {
        if (bit->second.raw == "periodic")
            spec.boundary = Boundary::periodic;
        else if (bit->second.raw == "open")
            spec.boundary = Boundary::open;
        else
            throw ConfigError("config key 'boundary': expected \"periodic\" or \"open\"");
    }
    spec.big_u = as_double(map, "big_u", 1.0);
    spec.delta = as_double(map, "delta", 0.0);
    spec.kappa = as_double(map, "kappa", 0.0);
    spec.g = Complex(as_double(map, "g_re", 0.0), as_double(map, "g_im", 0.0));
    spec.lambda_nn = Complex(as_double(map, "lambda_re", 0.0), as_double(map, "lambda_im", 0.0));
    const auto mit = map.find("matrix");
    if (mit != map.end()) {
        std::filesystem::path p(mit->second.raw);
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        spec.m_override = load_matrix_csv(p.string(), spec.n);
    }
    spec.validate();
    return spec;
}

ModelSpec load_model_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return model_spec_from_map(parse_toml_subset(buf.str()), dir);
}

MatrixXc load_matrix_csv(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open matrix file: " + path);
    MatrixXc m(n, n);
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        if (row >= n) throw ConfigError("matrix file has more than n rows: " + path);
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ls, tok, ',')) vals.push_back(std::stod(trim(tok)));
        if (static_cast<int>(vals.size()) != 2 * n)
            throw ConfigError("matrix file row " + std::to_string(row + 1) +
                              ": expected 2n interleaved columns");
        for (int c = 0; c < n; ++c) m(row, c) = Complex(vals[2 * c], vals[2 * c + 1]);
        ++row;
    }
    if (row != n) throw ConfigError("matrix file has fewer than n rows: " + path);
    return m;
}

}  // namespace pairlat
