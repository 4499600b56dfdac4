#include "rpnm/experiments.hpp"

#include "rpnm/errors.hpp"
#include "rpnm/exponents.hpp"
#include "rpnm/oscint.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rpnm {

std::vector<double> delta_law(const std::vector<double>& c, const std::vector<double>& gamma, long long Q) {
  if (c.size() != gamma.size()) throw ParameterError("delta law needs matching c and gamma");
  std::vector<double> out;
  for (std::size_t r = 0; r < c.size(); ++r) {
    out.push_back(c[r] * std::pow(static_cast<double>(Q), -gamma[r]));
  }
  return out;
}

namespace {

bool needs_delta(CountKind k) { return k != CountKind::on_manifold && k != CountKind::base; }

double row_points(long long Q, int n) {
  double total = 0;
  for (long long q = 1; q <= Q; ++q) total += std::pow(static_cast<double>(q), n);
  return total;
}

}  // namespace

void validate_plan(const SweepPlan& plan, bool big) {
  if (!plan.config) throw ConfigError("plan has no manifold");
  const ManifoldSpec& spec = plan.config->spec;
  for (long long Q : plan.Q) {
    if (Q < 1) throw ConfigError("Q must be positive");
    if (!big && row_points(Q, spec.n) > kDefaultRowBudget) {
      throw ConfigError("Q = " + std::to_string(Q) + " exceeds the per-row budget; pass --big to allow it");
    }
    if (needs_delta(plan.kind)) {
      for (double d : delta_law(plan.delta_c, plan.delta_gamma, Q)) {
        const bool ok = plan.kind == CountKind::dual ? (d > 0.0 && d < 0.5) : (d > 0.0 && d <= 0.5);
        if (!ok) throw ConfigError("delta out of range at Q = " + std::to_string(Q));
      }
    }
  }
  if (plan.check_range && needs_delta(plan.kind)) {
    const double limit = -to_double(delta_range_exponent(spec.n, spec.R)) - plan.margin;
    for (double g : plan.delta_gamma) {
      if (!(g < limit)) throw ConfigError("delta exponent outside the admissible range");
    }
  }
}

SweepRow run_row(const ManifoldConfig& config, CountKind kind, long long Q, const std::vector<double>& delta,
                 unsigned shards, int dual_s) {
  const CountOptions opts{shards};
  CountResult res;
  switch (kind) {
    case CountKind::sharp: res = count_sharp(config.spec, config.domain, Q, DeltaVector(delta), opts); break;
    case CountKind::smoothed: res = count_smoothed(config.spec, config.weight, Q, DeltaVector(delta), opts); break;
    case CountKind::on_manifold: res = count_on_manifold(config.spec, config.domain, Q, opts); break;
    case CountKind::dual:
      if (delta.size() != 1) throw ParameterError("dual count takes a single width");
      res = count_dual(config.spec, config.weight, dual_s, Q, delta[0], opts);
      break;
    case CountKind::base: res = base_count(config.spec, config.weight, Q, opts).result; break;
  }
  SweepRow row;
  row.Q = Q;
  row.delta = needs_delta(kind) ? delta : std::vector<double>{};
  row.kind = kind;
  row.value = res.value;
  row.main_term = res.main_term;
  row.ratio = res.main_term != 0.0 ? res.value / res.main_term : std::nan("");
  row.enumerated = res.enumerated;
  row.elapsed_ms = std::chrono::duration<double, std::milli>(res.elapsed).count();
  return row;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

int widths_of(const SweepPlan& plan) {
  if (!needs_delta(plan.kind)) return 0;
  return plan.kind == CountKind::dual ? 1 : plan.config->spec.R;
}

}  // namespace

std::string csv_header(int widths) {
  std::string h = "Q";
  for (int r = 1; r <= widths; ++r) h += ",delta_" + std::to_string(r);
  h += ",kind,value,main_term,ratio,enumerated,elapsed_ms";
  return h;
}

std::string format_row(const SweepRow& row, bool timing) {
  std::string s = std::to_string(row.Q);
  for (double d : row.delta) s += "," + fmt(d);
  s += "," + to_string(row.kind);
  s += "," + fmt(row.value);
  s += "," + fmt(row.main_term);
  s += "," + fmt(row.ratio);
  s += "," + std::to_string(row.enumerated);
  s += "," + (timing ? fmt(std::round(row.elapsed_ms * 1000.0) / 1000.0) : std::string("0"));
  return s;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw DataError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw DataError("bad number '" + s + "'");
  }
}

}  // namespace

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) return {};
  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : {"Q", "kind", "value", "main_term", "ratio", "enumerated", "elapsed_ms"}) {
    if (!col.count(name)) throw DataError(std::string("CSV lacks column ") + name);
  }
  int widths = 0;
  while (col.count("delta_" + std::to_string(widths + 1))) ++widths;
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw DataError("CSV row has the wrong number of cells");
    SweepRow row;
    row.Q = std::stoll(cells[col["Q"]]);
    for (int r = 1; r <= widths; ++r) row.delta.push_back(parse_double(cells[col["delta_" + std::to_string(r)]]));
    row.kind = parse_count_kind(cells[col["kind"]]);
    row.value = parse_double(cells[col["value"]]);
    row.main_term = parse_double(cells[col["main_term"]]);
    row.ratio = parse_double(cells[col["ratio"]]);
    row.enumerated = std::stoull(cells[col["enumerated"]]);
    row.elapsed_ms = parse_double(cells[col["elapsed_ms"]]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

SweepReport run_sweep(const SweepPlan& plan, const SweepOptions& opts) {
  validate_plan(plan, plan.big || opts.big);
  const unsigned shards = opts.shards.value_or(plan.shards);
  const std::filesystem::path out = opts.out.value_or(plan.out);
  const int widths = widths_of(plan);

  std::map<long long, SweepRow> existing;
  if (!out.empty() && std::filesystem::exists(out)) {
    for (auto& row : read_csv(out)) existing.emplace(row.Q, std::move(row));
  }
  std::ofstream file;
  if (!out.empty()) {
    const bool fresh = !std::filesystem::exists(out) || std::filesystem::file_size(out) == 0;
    file.open(out, std::ios::app);
    if (!file) throw DataError("cannot write " + out.string());
    if (fresh) file << csv_header(widths) << '\n' << std::flush;
  }

  SweepReport report;
  std::vector<long long> Qs = plan.Q;
  std::sort(Qs.begin(), Qs.end());
  Qs.erase(std::unique(Qs.begin(), Qs.end()), Qs.end());
  for (long long Q : Qs) {
    if (auto it = existing.find(Q); it != existing.end()) {
      report.resumed.push_back(Q);
      report.rows.push_back(it->second);
      continue;
    }
    const auto delta = needs_delta(plan.kind) ? delta_law(plan.delta_c, plan.delta_gamma, Q) : std::vector<double>{};
    SweepRow row;
    try {
      row = run_row(*plan.config, plan.kind, Q, delta, shards, plan.dual_s);
    } catch (const CapacityError&) {
      report.capacity_failures.push_back(Q);
      continue;
    }
    if (!opts.timing) row.elapsed_ms = 0.0;
    if (file.is_open()) file << format_row(row, opts.timing) << '\n' << std::flush;
    report.computed.push_back(Q);
    report.rows.push_back(std::move(row));
  }
  return report;
}

FitResult fit_exponent(const std::vector<SweepRow>& rows, int n, const std::vector<double>& gamma,
                       double tolerance) {
  std::vector<double> x, y;
  for (const auto& row : rows) {
    if (row.value > 0.0 && row.Q >= 1) {
      x.push_back(std::log(static_cast<double>(row.Q)));
      y.push_back(std::log(row.value));
    }
  }
  if (x.size() < 4) throw DataError("fit needs at least four rows with positive counts");
  const LineFit line = least_squares(x, y);
  FitResult fit;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.predicted_slope = n + 1.0;
  for (double g : gamma) fit.predicted_slope -= g;
  fit.tolerance = tolerance;
  fit.pass = std::fabs(fit.slope - fit.predicted_slope) <= tolerance;
  fit.points = static_cast<int>(x.size());
  return fit;
}

FitResult dimension_growth_probe(const ManifoldSpec& spec, const Ball& domain, const std::vector<long long>& Qs,
                                 CountOptions opts, double tolerance) {
  if (!spec.exact_polys) throw UnsupportedError("dimension growth probe needs exact polynomials");
  std::vector<double> x, y;
  for (long long Q : Qs) {
    const CountResult res = count_on_manifold(spec, domain, Q, opts);
    if (res.value > 0.0) {
      x.push_back(std::log(static_cast<double>(Q)));
      y.push_back(std::log(res.value));
    }
  }
  if (x.size() < 2) throw DataError("on-manifold counts vanish; the fit is degenerate");
  const LineFit line = least_squares(x, y);
  FitResult fit;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.predicted_slope = to_double(theta(spec.n, spec.R));
  fit.tolerance = tolerance;
  fit.pass = fit.slope <= fit.predicted_slope + tolerance;
  fit.points = static_cast<int>(x.size());
  return fit;
}

std::optional<bool> ratio_stabilized(const std::vector<SweepRow>& rows) {
  if (rows.size() < 6) return std::nullopt;
  auto stdev = [](double a, double b, double c) {
    const double m = (a + b + c) / 3;
    return std::sqrt(((a - m) * (a - m) + (b - m) * (b - m) + (c - m) * (c - m)) / 3);
  };
  const std::size_t k = rows.size();
  const double first = stdev(rows[0].ratio, rows[1].ratio, rows[2].ratio);
  const double last = stdev(rows[k - 3].ratio, rows[k - 2].ratio, rows[k - 1].ratio);
  return last < 0.5 * first;
}

}  // namespace rpnm
