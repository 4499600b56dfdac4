#include "rpnm/config.hpp"

#include "rpnm/errors.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <fstream>
#include <sstream>

namespace rpnm {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

toml::table parse(const std::string& text) {
  try {
    return toml::parse(text);
  } catch (const toml::parse_error& err) {
    std::ostringstream ss;
    ss << "TOML parse error: " << err.description() << " at line " << err.source().begin.line;
    throw ConfigError(ss.str());
  }
}

template <class T>
T required(const toml::table& t, const char* key) {
  const auto v = t[key].value<T>();
  if (!v) throw ConfigError(std::string("missing or mistyped key '") + key + "'");
  return *v;
}

Rational to_rational(const toml::node& node, const char* what) {
  if (auto s = node.value<std::string>()) {
    try {
      return parse_rational(*s);
    } catch (const Error&) {
      throw ConfigError(std::string("bad rational in ") + what + ": " + *s);
    }
  }
  if (node.is_integer()) return Rational(BigInt(*node.value<std::int64_t>()));
  if (auto d = node.value<double>()) return exact_rational(*d);
  throw ConfigError(std::string("expected a number or rational string in ") + what);
}

std::vector<double> double_array(const toml::table& t, const char* key) {
  const toml::array* arr = t[key].as_array();
  if (!arr) throw ConfigError(std::string("missing array '") + key + "'");
  std::vector<double> out;
  for (const auto& el : *arr) {
    const auto v = el.value<double>();
    if (!v) throw ConfigError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(*v);
  }
  return out;
}

Polynomial parse_polynomial(const toml::array& terms, int n) {
  std::vector<Monomial> monomials;
  for (const auto& term_node : terms) {
    const toml::array* term = term_node.as_array();
    if (!term || term->size() != 3) {
      throw ConfigError("each coefficient entry must be [exponents, numerator, denominator]");
    }
    const toml::array* exps = (*term)[0].as_array();
    if (!exps || static_cast<int>(exps->size()) != n) throw ConfigError("exponent tuple must have n entries");
    Monomial m;
    for (const auto& e : *exps) {
      const auto v = e.value<std::int64_t>();
      if (!v || *v < 0) throw ConfigError("exponents must be nonnegative integers");
      m.exponents.push_back(static_cast<int>(*v));
    }
    const auto num = (*term)[1].value<std::int64_t>();
    const auto den = (*term)[2].value<std::int64_t>();
    if (!num || !den || *den == 0) throw ConfigError("coefficient needs integer numerator and nonzero denominator");
    m.coefficient = rational(*num, *den);
    monomials.push_back(std::move(m));
  }
  return Polynomial(n, std::move(monomials));
}

ManifoldSpec build_spec(const toml::table& t) {
  const int n = static_cast<int>(required<std::int64_t>(t, "n"));
  const int R = static_cast<int>(required<std::int64_t>(t, "R"));
  const auto x0v = double_array(t, "x0");
  if (static_cast<int>(x0v.size()) != n) throw ConfigError("x0 must have n entries");
  const Vec x0 = Eigen::Map<const Vec>(x0v.data(), n);
  const double eps0 = required<double>(t, "eps0");
  const std::string family = required<std::string>(t, "family");

  ManifoldSpec spec;
  if (family == "paraboloid") {
    if (R != 1) throw ConfigError("paraboloid has R = 1");
    spec = make_paraboloid(n, x0, eps0);
  } else if (family == "diag-quadric") {
    if (R != 1) throw ConfigError("diag-quadric has R = 1");
    const toml::array* c = t["c"].as_array();
    if (!c || static_cast<int>(c->size()) != n) throw ConfigError("diag-quadric needs c with n entries");
    std::vector<Rational> coeff;
    for (const auto& el : *c) coeff.push_back(to_rational(el, "c"));
    spec = make_diag_quadric(std::move(coeff), x0, eps0);
  } else if (family == "complex-squaring") {
    if (n != 2 || R != 2) throw ConfigError("complex-squaring has n = 2, R = 2");
    spec = make_complex_squaring(x0, eps0);
  } else if (family == "polynomial") {
    const toml::array* polys = t["coefficients"].as_array();
    if (!polys || static_cast<int>(polys->size()) != R) {
      throw ConfigError("polynomial family needs 'coefficients' with R entries");
    }
    std::vector<Polynomial> f;
    for (const auto& p : *polys) {
      const toml::array* terms = p.as_array();
      if (!terms) throw ConfigError("each polynomial must be an array of terms");
      f.push_back(parse_polynomial(*terms, n));
    }
    spec = make_polynomial_manifold(n, std::move(f), x0, eps0);
  } else {
    throw ConfigError("unknown family '" + family + "'");
  }
  return spec;
}

}  // namespace

ManifoldConfig parse_manifold_config(const std::string& toml_text) {
  const toml::table t = parse(toml_text);
  ManifoldSpec spec = build_spec(t);
  double radius = spec.eps0;
  WeightProfile profile = WeightProfile::standard_bump;
  if (const toml::table* w = t["weight"].as_table()) {
    radius = (*w)["radius"].value_or(radius);
    if (auto p = (*w)["profile"].value<std::string>()) profile = parse_weight_profile(*p);
  }
  if (!(radius > 0.0) || radius > spec.eps0) throw ConfigError("weight radius must lie in (0, eps0]");
  double domain_radius = spec.eps0;
  if (const toml::table* d = t["domain"].as_table()) domain_radius = (*d)["radius"].value_or(domain_radius);
  WeightFunction weight(spec.x0, radius, profile);
  Ball domain{spec.x0, domain_radius};
  return ManifoldConfig{std::move(spec), std::move(weight), std::move(domain)};
}

ManifoldConfig load_manifold_config(const std::filesystem::path& path) {
  return parse_manifold_config(read_file(path));
}

std::string to_string(CountKind k) {
  switch (k) {
    case CountKind::sharp: return "sharp";
    case CountKind::smoothed: return "smoothed";
    case CountKind::on_manifold: return "on-manifold";
    case CountKind::dual: return "dual";
    case CountKind::base: return "base";
  }
  return "unknown";
}

CountKind parse_count_kind(const std::string& name) {
  for (CountKind k : {CountKind::sharp, CountKind::smoothed, CountKind::on_manifold, CountKind::dual,
                      CountKind::base}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown count kind '" + name + "'");
}

SweepPlan parse_sweep_plan(const std::string& toml_text, const std::filesystem::path& base_dir) {
  const toml::table t = parse(toml_text);
  SweepPlan plan;
  plan.manifold = base_dir / required<std::string>(t, "manifold");
  plan.config = load_manifold_config(plan.manifold);
  const int R = plan.config->spec.R;
  if (const toml::array* qs = t["Q"].as_array()) {
    for (const auto& el : *qs) {
      const auto v = el.value<std::int64_t>();
      if (!v || *v < 1) throw ConfigError("Q entries must be positive integers");
      plan.Q.push_back(*v);
    }
  } else {
    throw ConfigError("missing array 'Q'");
  }
  plan.delta_c = t["delta_c"] ? double_array(t, "delta_c") : std::vector<double>(R, 0.1);
  plan.delta_gamma = t["delta_gamma"] ? double_array(t, "delta_gamma") : std::vector<double>(R, 0.0);
  plan.kind = parse_count_kind(t["kind"].value_or(std::string("sharp")));
  const int expected = plan.kind == CountKind::dual ? 1 : R;
  if (plan.kind != CountKind::on_manifold && plan.kind != CountKind::base) {
    if (static_cast<int>(plan.delta_c.size()) != expected ||
        static_cast<int>(plan.delta_gamma.size()) != expected) {
      throw ConfigError("delta_c and delta_gamma must have one entry per width");
    }
  }
  plan.dual_s = static_cast<int>(t["dual_s"].value_or(std::int64_t{1}));
  const auto shards = t["shards"].value_or(std::int64_t{1});
  if (shards < 1) throw ConfigError("shards must be positive");
  plan.shards = static_cast<unsigned>(shards);
  if (auto out = t["out"].value<std::string>()) plan.out = base_dir / *out;
  plan.check_range = t["check_range"].value_or(false);
  plan.margin = t["margin"].value_or(0.0);
  plan.big = t["big"].value_or(false);
  return plan;
}

SweepPlan load_sweep_plan(const std::filesystem::path& path) {
  return parse_sweep_plan(read_file(path), path.parent_path());
}

}  // namespace rpnm
