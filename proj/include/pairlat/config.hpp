// Flat TOML-subset configuration files and the CSV pairing-matrix loader.
//
// Supported TOML subset: `key = value` lines with integer, float, boolean,
// quoted-string and [v1, v2, ...] array values, full-line or trailing `#`
// comments. That covers every key the model file format defines; nested
// tables are rejected loudly.

#pragma once

#include <map>
#include <string>

#include "pairlat/model.hpp"

namespace pairlat {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigValue {
    std::string raw;
    bool is_string = false;
};

using ConfigMap = std::map<std::string, ConfigValue>;

ConfigMap parse_toml_subset(const std::string& text);

// Keys: n, d, dims, boundary ("periodic"|"open"), big_u, delta, kappa,
// g_re, g_im, lambda_re, lambda_im, matrix (CSV path, resolved relative to
// the config file's directory).
ModelSpec load_model_spec(const std::string& path);
ModelSpec model_spec_from_map(const ConfigMap& map, const std::string& base_dir);

// CSV with N rows and 2N columns of interleaved real,imag entries.
MatrixXc load_matrix_csv(const std::string& path, int n);

}  // namespace pairlat
