#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace trapres::cli {

enum class Experiment { rates, resonances, weyl, gaps, model_checks, transport, perturbation };

std::string to_string(Experiment e);

struct ModelConfig {
  std::string kind = "warped";  // warped | potential1d
  std::string cross_section = "circle";  // circle | sphere | neck_torus (dynamics only)
  double length = 6.283185307179586;
  int sphere_dimension = 2;
  double neck_a = 0.25;
  double scale_C = 1.0;
  double V0 = 1.0;  // potential1d barrier height
};

struct SolverConfig {
  double theta = 0.5;
  double theta2 = 0.65;
  double R = 0.75;
  double grid_max = 3.0;
  int N = 2000;
  std::string mode = "oracle";  // oracle | solver
};

struct BandConfig {
  std::pair<double, double> re_window{0.75, 1.25};
  double epsilon = 0.1;
  double nu_min = 1.0;
  double nu_max = 1.0;
};

struct DynamicsConfig {
  double horizon = 40.0;
  int samples = 4;
  double energy = 1.0;
  std::vector<double> s_values{0.0, 0.05, 0.1};
  std::vector<double> transport_r{0.5, 1.0, 1.5, 2.0};
};

struct GapConfig {
  std::vector<double> lines{-0.25, -0.8};
  double step_fraction = 0.125;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats{"csv"};
};

struct ExperimentConfig {
  int schema_version = 1;
  Experiment experiment = Experiment::rates;
  ModelConfig model;
  SolverConfig solver;
  std::vector<double> h_values{0.1};
  BandConfig band;
  DynamicsConfig dynamics;
  GapConfig gaps;
  OutputConfig output;
  std::uint64_t seed = 1;

  bool wants(const std::string& format) const;
};

inline constexpr int kSchemaVersion = 1;

/// Strict parse: unknown keys, wrong types and out-of-range values throw ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& c);

/// Full echo with defaults filled in.
nlohmann::json to_json(const ExperimentConfig& c);

}  // namespace trapres::cli
