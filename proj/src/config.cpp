#include "corrsamp/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace corrsamp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

using Setter = std::function<void(const std::string&, const std::string&)>;

void apply_setters(const ConfigMap& cfg, const std::map<std::string, Setter>& setters) {
    for (const auto& [key, value] : cfg) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ParameterError("config: unknown key '" + key + "'");
        it->second(key, value);
    }
}

void add_solver_setters(std::map<std::string, Setter>& s, SolverConfig& solver) {
    s["max_iters"] = [&](auto& k, auto& v) { solver.max_iters = parse_index(k, v); };
    s["tol_primal"] = [&](auto& k, auto& v) { solver.tol_primal = parse_number(k, v); };
    s["tol_dual"] = [&](auto& k, auto& v) { solver.tol_dual = parse_number(k, v); };
    s["admm_rho"] = [&](auto& k, auto& v) { solver.admm_rho = parse_number(k, v); };
    s["lambda"] = [&](auto& k, auto& v) { solver.lambda = parse_number(k, v); };
}

} // namespace

ConfigMap parse_config(std::istream& in) {
    ConfigMap out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParameterError("config line " + std::to_string(lineno) + ": empty key");
        if (!out.emplace(key, value).second)
            throw ParameterError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return out;
}

ConfigMap load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file '" + path + "'");
    return parse_config(in);
}

double parse_number(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (v.empty() || used != v.size() || std::isnan(x))
        throw ParameterError("config: '" + key + "' expects a number, got '" + value + "'");
    return x;
}

Index parse_index(const std::string& key, const std::string& value) {
    const double x = parse_number(key, value);
    if (!std::isfinite(x) || x != std::floor(x))
        throw ParameterError("config: '" + key + "' expects an integer, got '" + value + "'");
    return static_cast<Index>(x);
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    std::size_t used = 0;
    std::uint64_t x = 0;
    try {
        if (!v.empty() && v[0] != '-') x = std::stoull(v, &used, 0);
    } catch (const std::exception&) {
        used = 0;
    }
    if (v.empty() || used != v.size())
        throw ParameterError("config: '" + key + "' expects an unsigned integer, got '" + value + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParameterError("config: '" + key + "' expects a boolean, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
    if (out.empty()) throw ParameterError("config: '" + key + "' expects a nonempty list");
    return out;
}

void apply_config(ExperimentSpec& spec, const ConfigMap& cfg) {
    std::map<std::string, Setter> s;
    s["experiment"] = [&](auto&, auto& v) { spec.kind = experiment_from_string(v); };
    s["M"] = [&](auto& k, auto& v) { spec.M = parse_index(k, v); };
    s["W"] = [&](auto& k, auto& v) { spec.W = parse_index(k, v); };
    s["grid"] = [&](auto& k, auto& v) { spec.grid = parse_list(k, v); };
    s["trials"] = [&](auto& k, auto& v) { spec.trials = parse_index(k, v); };
    s["threshold"] = [&](auto& k, auto& v) { spec.threshold = parse_number(k, v); };
    s["target"] = [&](auto& k, auto& v) { spec.target = parse_number(k, v); };
    s["seed"] = [&](auto& k, auto& v) { spec.seed = parse_seed(k, v); };
    s["arch"] = [&](auto&, auto& v) { spec.arch = architecture_from_string(v); };
    s["threads"] = [&](auto& k, auto& v) { spec.threads = parse_index(k, v); };
    s["rank"] = [&](auto& k, auto& v) { spec.rank = parse_index(k, v); };
    s["R"] = s["rank"];
    s["eta"] = [&](auto& k, auto& v) { spec.eta = parse_number(k, v); };
    s["snr"] = [&](auto& k, auto& v) { spec.snr = parse_number(k, v); };
    s["sweep_eta"] = [&](auto& k, auto& v) { spec.sweep_eta = parse_bool(k, v); };
    s["omega"] = [&](auto& k, auto& v) { spec.omega = parse_index(k, v); };
    s["omega_step"] = [&](auto& k, auto& v) { spec.omega_step = parse_index(k, v); };
    s["omega_inflation"] = [&](auto& k, auto& v) { spec.omega_inflation = parse_number(k, v); };
    s["burst_len"] = [&](auto& k, auto& v) { spec.burst_len = parse_index(k, v); };
    s["carrier"] = [&](auto& k, auto& v) { spec.carrier = parse_number(k, v); };
    s["bandwidth"] = [&](auto& k, auto& v) { spec.bandwidth = parse_number(k, v); };
    s["theta"] = [&](auto& k, auto& v) { spec.theta = parse_number(k, v); };
    s["array_M"] = [&](auto& k, auto& v) { spec.array_M = parse_index(k, v); };
    s["quad_points"] = [&](auto& k, auto& v) { spec.quad_points = parse_index(k, v); };
    s["eig_ratio"] = [&](auto& k, auto& v) { spec.eig_ratio = parse_number(k, v); };
    add_solver_setters(s, spec.solver);
    apply_setters(cfg, s);
}

void apply_config(TrialSpec& trial, const ConfigMap& cfg) {
    std::map<std::string, Setter> s;
    s["arch"] = [&](auto&, auto& v) { trial.arch = architecture_from_string(v); };
    s["ensemble"] = [&](auto&, auto& v) { trial.ensemble = ensemble_from_string(v); };
    s["M"] = [&](auto& k, auto& v) { trial.M = parse_index(k, v); };
    s["W"] = [&](auto& k, auto& v) { trial.W = parse_index(k, v); };
    s["R"] = [&](auto& k, auto& v) { trial.R = parse_index(k, v); };
    s["rank"] = s["R"];
    s["omega"] = [&](auto& k, auto& v) { trial.Omega = parse_index(k, v); };
    s["burst_len"] = [&](auto& k, auto& v) { trial.burst_len = parse_index(k, v); };
    s["snr"] = [&](auto& k, auto& v) {
        const double x = parse_number(k, v);
        if (std::isfinite(x)) trial.snr = x;
        else trial.snr.reset();
    };
    s["seed"] = [&](auto& k, auto& v) { trial.seed = parse_seed(k, v); };
    add_solver_setters(s, trial.solver);
    apply_setters(cfg, s);
}

} // namespace corrsamp
