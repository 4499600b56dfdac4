#pragma once

#include "rpnm/counting.hpp"
#include "rpnm/manifold.hpp"
#include "rpnm/weight.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rpnm {

// A manifold file together with the weight and sharp domain it implies:
// by default w is a standard bump on B_eps0(x0) and the domain is the closed
// ball of the same radius.
struct ManifoldConfig {
  ManifoldSpec spec;
  WeightFunction weight;
  Ball domain;
};

ManifoldConfig parse_manifold_config(const std::string& toml_text);
ManifoldConfig load_manifold_config(const std::filesystem::path& path);

enum class CountKind { sharp, smoothed, on_manifold, dual, base };
std::string to_string(CountKind k);
CountKind parse_count_kind(const std::string& name);

struct SweepPlan {
  std::filesystem::path manifold;
  std::optional<ManifoldConfig> config;
  std::vector<long long> Q;
  // delta_r = delta_c[r] * Q^{-delta_gamma[r]}
  std::vector<double> delta_c;
  std::vector<double> delta_gamma;
  CountKind kind = CountKind::sharp;
  int dual_s = 1;
  unsigned shards = 1;
  std::filesystem::path out;
  // When set, every gamma_r must stay below -delta_range_exponent(n, R) - margin.
  bool check_range = false;
  double margin = 0.0;
  bool big = false;
};

// Relative paths inside the plan are resolved against `base_dir`.
SweepPlan parse_sweep_plan(const std::string& toml_text, const std::filesystem::path& base_dir);
SweepPlan load_sweep_plan(const std::filesystem::path& path);

}  // namespace rpnm
