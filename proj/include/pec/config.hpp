#pragma once

#include <string>
#include <vector>

#include "pec/latency.hpp"

namespace pec {

// Full run configuration: system parameters plus experiment controls.
struct RunConfig {
    SystemConfig sys;

    std::size_t trials = 10000;
    std::size_t stage1_trials = 10000;
    int threads = 1;

    std::vector<int> schemes{1};
    std::vector<int> zs{1};
    std::vector<double> gamma_grid{0, 0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4, 4.5, 5};
    std::vector<double> deadline_grid{1000, 2000, 5000, 10000, 20000, 50000, 100000};

    // Fixed tuple for `simulate` and `trace`; 0 means "derive or unset".
    int e = 0, p = 0, n = 0, k = 0, t = 0;
    int n_prime = 0, k_prime = 0;

    int v3_n_prime_max = 13;
    int v3_n_max = 0;

    int baseline_n_c = 0;
    int baseline_k_c = 0;
    int baseline_replication = 1;
    bool baseline_upload_log2 = false;

    std::string out;
};

// Applies `key=value` to cfg. Throws ConfigError on unknown keys or bad values.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses a config file: one key=value per line, '#' comments, blank lines ok.
void load_config_file(RunConfig& cfg, const std::string& path);

// Renders cfg as config-file text that parses back to an identical RunConfig.
std::string echo_config(const RunConfig& cfg);

} // namespace pec
