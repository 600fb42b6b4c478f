#include "pec/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pec/errors.hpp"

namespace pec {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        throw ConfigError("bad integer for " + key + ": '" + value + "'");
    return v;
}

double parse_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        throw ConfigError("bad number for " + key + ": '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    throw ConfigError("bad boolean for " + key + ": '" + value + "' (use 0/1/true/false)");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty element in list for " + key);
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty element in list for " + key);
        out.push_back(int(parse_int(key, item)));
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_double_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += fmt_double(v[i]);
    }
    return s;
}

std::string fmt_int_list(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

} // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto as_int = [&] { return int(parse_int(key, value)); };
    auto as_size = [&] {
        long long v = parse_int(key, value);
        if (v < 0) throw ConfigError(key + " must be >= 0");
        return std::size_t(v);
    };
    auto as_double = [&] { return parse_double(key, value); };

    if (key == "e_max") cfg.sys.e_max = as_int();
    else if (key == "mu") cfg.sys.mu = as_double();
    else if (key == "tau") cfg.sys.tau = as_double();
    else if (key == "eta") cfg.sys.eta = as_double();
    else if (key == "delta") cfg.sys.delta = as_double();
    else if (key == "gamma") cfg.sys.gamma = as_double();
    else if (key == "m") cfg.sys.m = as_int();
    else if (key == "r") cfg.sys.r = as_int();
    else if (key == "u") cfg.sys.u = as_int();
    else if (key == "q") cfg.sys.q = std::uint32_t(parse_int(key, value));
    else if (key == "seed") cfg.sys.seed = std::uint64_t(parse_int(key, value));
    else if (key == "trials") cfg.trials = as_size();
    else if (key == "stage1_trials") cfg.stage1_trials = as_size();
    else if (key == "threads") cfg.threads = as_int();
    else if (key == "scheme") cfg.schemes = parse_int_list(key, value);
    else if (key == "z") cfg.zs = parse_int_list(key, value);
    else if (key == "gamma_grid") cfg.gamma_grid = parse_double_list(key, value);
    else if (key == "deadline_grid") cfg.deadline_grid = parse_double_list(key, value);
    else if (key == "e") cfg.e = as_int();
    else if (key == "p") cfg.p = as_int();
    else if (key == "n") cfg.n = as_int();
    else if (key == "k") cfg.k = as_int();
    else if (key == "t") cfg.t = as_int();
    else if (key == "n_prime") cfg.n_prime = as_int();
    else if (key == "k_prime") cfg.k_prime = as_int();
    else if (key == "v3_n_prime_max") cfg.v3_n_prime_max = as_int();
    else if (key == "v3_n_max") cfg.v3_n_max = as_int();
    else if (key == "baseline_n_c") cfg.baseline_n_c = as_int();
    else if (key == "baseline_k_c") cfg.baseline_k_c = as_int();
    else if (key == "baseline_replication") cfg.baseline_replication = as_int();
    else if (key == "baseline_upload_log2") cfg.baseline_upload_log2 = parse_bool(key, value);
    else if (key == "out") cfg.out = value;
    else throw ConfigError("unknown config key: '" + key + "'");
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        try {
            apply_config_entry(cfg, key, value);
        } catch (const ConfigError& ex) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + ex.what());
        }
    }
}

std::string echo_config(const RunConfig& cfg) {
    std::string s;
    auto kv = [&](const char* key, const std::string& value) {
        s += key;
        s += '=';
        s += value;
        s += '\n';
    };
    kv("e_max", std::to_string(cfg.sys.e_max));
    kv("mu", fmt_double(cfg.sys.mu));
    kv("tau", fmt_double(cfg.sys.tau));
    kv("eta", fmt_double(cfg.sys.eta));
    kv("delta", fmt_double(cfg.sys.delta));
    kv("gamma", fmt_double(cfg.sys.gamma));
    kv("m", std::to_string(cfg.sys.m));
    kv("r", std::to_string(cfg.sys.r));
    kv("u", std::to_string(cfg.sys.u));
    kv("q", std::to_string(cfg.sys.q));
    kv("seed", std::to_string(cfg.sys.seed));
    kv("trials", std::to_string(cfg.trials));
    kv("stage1_trials", std::to_string(cfg.stage1_trials));
    kv("threads", std::to_string(cfg.threads));
    kv("scheme", fmt_int_list(cfg.schemes));
    kv("z", fmt_int_list(cfg.zs));
    kv("gamma_grid", fmt_double_list(cfg.gamma_grid));
    kv("deadline_grid", fmt_double_list(cfg.deadline_grid));
    kv("e", std::to_string(cfg.e));
    kv("p", std::to_string(cfg.p));
    kv("n", std::to_string(cfg.n));
    kv("k", std::to_string(cfg.k));
    kv("t", std::to_string(cfg.t));
    kv("n_prime", std::to_string(cfg.n_prime));
    kv("k_prime", std::to_string(cfg.k_prime));
    kv("v3_n_prime_max", std::to_string(cfg.v3_n_prime_max));
    kv("v3_n_max", std::to_string(cfg.v3_n_max));
    kv("baseline_n_c", std::to_string(cfg.baseline_n_c));
    kv("baseline_k_c", std::to_string(cfg.baseline_k_c));
    kv("baseline_replication", std::to_string(cfg.baseline_replication));
    kv("baseline_upload_log2", cfg.baseline_upload_log2 ? "1" : "0");
    if (!cfg.out.empty()) kv("out", cfg.out);
    return s;
}

} // namespace pec
