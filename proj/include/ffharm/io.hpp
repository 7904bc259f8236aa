#pragma once

// Config ingestion and report emission. Parsing leans on a JSON library;
// every writer here formats numbers itself with 17 significant digits so
// reports are byte-stable inputs for downstream tooling.

#include <optional>
#include <string>
#include <vector>

#include "ffharm/experiments.hpp"
#include "ffharm/ffcore.hpp"
#include "ffharm/fourier.hpp"
#include "ffharm/grid.hpp"
#include "ffharm/weights.hpp"

namespace ffharm {

struct CliConfig {
    std::optional<ConfigurationSystem> system;
    std::optional<WeightSpec> weight;
    std::vector<Int> set;  // indicator set as encoded grid indices
    bool has_set = false;
};

CliConfig parse_config_text(const std::string& text);
CliConfig load_config(const std::string& path);
std::string dump_config(const CliConfig& config);  // normalized, re-parseable

std::string format_double(double x);

std::string to_json(const DecayReport& report);
std::string to_csv(const DecayReport& report);
std::string to_json(const ExactSuiteReport& report);
std::string to_csv(const ExactSuiteReport& report);
std::string to_json(const UniformityProfile& profile);
std::string to_csv(const UniformityProfile& profile);

// rows of coset_index,xi,re,im
std::string spectrum_csv(const DirectionalSpectrum& spectrum);

// dense complex tables as index,re,im rows with a header
std::string grid_csv(const GridFunction& f);
std::string weight_csv(const WeightFunction& w);
GridFunction load_grid_csv(const std::string& path, Int p, int dims);
WeightFunction load_weight_csv(const std::string& path, Int p);

// whitespace/comma separated integers
std::vector<Int> load_index_list(const std::string& path);

GridFunction indicator_from_indices(const std::vector<Int>& indices, Int p, int dims);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ffharm
