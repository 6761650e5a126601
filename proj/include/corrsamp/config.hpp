#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "corrsamp/harness.hpp"

namespace corrsamp {

/// Flat `key = value` file. `#` starts a comment; blank lines are ignored.
/// Duplicate keys are an error.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(std::istream& in);
ConfigMap load_config(const std::string& path);

double parse_number(const std::string& key, const std::string& value);
Index parse_index(const std::string& key, const std::string& value);
std::uint64_t parse_seed(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);
std::vector<double> parse_list(const std::string& key, const std::string& value);

/// Overrides spec fields from the map. Unknown keys are an error.
void apply_config(ExperimentSpec& spec, const ConfigMap& cfg);

/// Overrides trial fields (sample/recover) from the map. Unknown keys are an error.
void apply_config(TrialSpec& trial, const ConfigMap& cfg);

} // namespace corrsamp
