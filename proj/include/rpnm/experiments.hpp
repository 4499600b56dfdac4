#pragma once

#include "rpnm/config.hpp"
#include "rpnm/counting.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rpnm {

// Default cap on sum_{q <= Q} q^n per sweep row.
inline constexpr double kDefaultRowBudget = 2e8;

struct SweepRow {
  long long Q = 0;
  std::vector<double> delta;
  CountKind kind = CountKind::sharp;
  double value = 0.0;
  double main_term = 0.0;
  double ratio = 0.0;  // value / main_term, NaN when main_term is zero
  std::uint64_t enumerated = 0;
  double elapsed_ms = 0.0;
};

struct SweepOptions {
  bool timing = true;                  // false writes elapsed_ms = 0
  std::optional<unsigned> shards;      // overrides the plan
  bool big = false;                    // lifts the row budget
  std::optional<std::filesystem::path> out;  // overrides the plan
};

struct SweepReport {
  std::vector<SweepRow> rows;          // all rows in the output, in Q order
  std::vector<long long> computed;     // Q values computed in this run
  std::vector<long long> resumed;      // Q values already present
  std::vector<long long> capacity_failures;
};

// delta_r = c_r Q^{-gamma_r}.
std::vector<double> delta_law(const std::vector<double>& c, const std::vector<double>& gamma, long long Q);

// Checks widths, the row budget and (optionally) the admissible delta range.
void validate_plan(const SweepPlan& plan, bool big);

SweepRow run_row(const ManifoldConfig& config, CountKind kind, long long Q, const std::vector<double>& delta,
                 unsigned shards, int dual_s = 1);

// Runs the plan, appending to the output CSV when one is set. Rows already
// present in the file (keyed by Q) are reused.
SweepReport run_sweep(const SweepPlan& plan, const SweepOptions& opts = {});

std::string csv_header(int widths);
std::string format_row(const SweepRow& row, bool timing = true);
std::vector<SweepRow> read_csv(const std::filesystem::path& path);
std::vector<SweepRow> parse_csv(const std::string& text);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double predicted_slope = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int points = 0;
};

// Slope of log value against log Q, compared with n + 1 - sum gamma_r.
FitResult fit_exponent(const std::vector<SweepRow>& rows, int n, const std::vector<double>& gamma,
                       double tolerance = 0.15);

// Fits log N(Q, 0) against log Q; passes iff the slope is at most Theta + tolerance.
FitResult dimension_growth_probe(const ManifoldSpec& spec, const Ball& domain, const std::vector<long long>& Qs,
                                 CountOptions opts = {}, double tolerance = 0.2);

// Standard deviation of the last three ratios below half that of the first
// three; empty with fewer than six rows.
std::optional<bool> ratio_stabilized(const std::vector<SweepRow>& rows);

}  // namespace rpnm
