#include "rpnm/config.hpp"
#include "rpnm/counting.hpp"
#include "rpnm/errors.hpp"
#include "rpnm/experiments.hpp"
#include "rpnm/exponents.hpp"
#include "rpnm/legendre.hpp"
#include "rpnm/manifold.hpp"
#include "rpnm/oscint.hpp"
#include "rpnm/trig.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace rpnm;

namespace {

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) throw ParameterError("cannot parse list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

json rational_json(const Rational& r) { return {{"exact", to_string(r)}, {"value", to_double(r)}}; }

json curvature_json(const CurvatureReport& c) {
  return {{"min_abs_det", c.min_abs_det}, {"max_abs_det", c.max_abs_det}, {"frak_C0", c.frak_C0},
          {"samples_t", c.samples_t},     {"samples_x", c.samples_x},     {"admissible", c.admissible}};
}

json count_json(const CountResult& r) {
  json j = {{"Q", r.Q}, {"delta", r.delta}, {"value", r.value}};
  if (r.exact) j["exact"] = *r.exact;
  j["main_term"] = r.main_term;
  j["enumerated"] = r.enumerated;
  j["elapsed"] = r.elapsed.count();
  return j;
}

json fit_json(const FitResult& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"predicted_slope", f.predicted_slope},
          {"tolerance", f.tolerance},
          {"points", f.points},
          {"pass", f.pass}};
}

json trig_json(const TrigPolynomial& p) {
  json coeffs = json::array();
  for (int j = -p.degree(); j <= p.degree(); ++j) {
    const auto c = p.coefficient(j);
    coeffs.push_back({j, c.real(), c.imag()});
  }
  return coeffs;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

void require_admissible(const ManifoldSpec& spec, bool force) {
  const CurvatureReport c = check_curvature(spec, 64, 400);
  if (!c.admissible && !force) {
    throw ParameterError("manifold fails the sampled curvature condition (min |det| = " +
                         std::to_string(c.min_abs_det) + "); pass --force to count anyway");
  }
  for (const auto& w : spec.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational points near manifolds: counting, duality and exponent tools"};
  app.require_subcommand(1);

  // curvature
  std::string manifold;
  int t_samples = 64, x_samples = 400;
  auto* curv = app.add_subcommand("curvature", "Sample the curvature condition");
  curv->add_option("--manifold", manifold, "Manifold TOML file")->required();
  curv->add_option("--t-samples", t_samples, "Points on the unit sphere of R^R");
  curv->add_option("--x-samples", x_samples, "Points in B_{2 eps0}(x0)");

  // selberg
  double alpha = -0.1, beta = 0.1;
  int J = 4, grid = 4096;
  auto* selb = app.add_subcommand("selberg", "Selberg minorant and majorant of an arc");
  selb->add_option("--alpha", alpha);
  selb->add_option("--beta", beta);
  selb->add_option("--J", J);
  selb->add_option("--grid", grid);

  // dual
  int s = 1, samples = 100;
  std::string jlist = "1";
  bool check_involution = false;
  auto* dual = app.add_subcommand("dual", "Legendre dual of a pencil function");
  dual->add_option("--manifold", manifold)->required();
  dual->add_option("--s", s);
  dual->add_option("--j", jlist, "Pencil index, comma separated");
  dual->add_flag("--check-involution", check_involution);
  dual->add_option("--samples", samples);

  // count
  std::string Qlist, dlist;
  bool sharp = false, smoothed = false, on_manifold = false, base = false, force = false, csv = false;
  int dual_s = 0;
  unsigned shards = 1;
  auto* count = app.add_subcommand("count", "Count rational points near the manifold");
  count->add_option("--manifold", manifold)->required();
  count->add_option("--Q", Qlist, "Denominator bound, or a comma separated list")->required();
  count->add_option("--delta", dlist, "Widths delta_1..delta_R (or delta* for --dual)");
  auto* kinds = count->add_option_group("kind");
  kinds->add_flag("--sharp", sharp);
  kinds->add_flag("--smoothed", smoothed);
  kinds->add_option("--dual", dual_s, "Dual count for codimension s");
  kinds->add_flag("--on-manifold", on_manifold);
  kinds->add_flag("--base", base);
  kinds->require_option(0, 1);
  count->add_option("--shards", shards);
  count->add_flag("--force", force, "Count even if the curvature check fails");
  count->add_flag("--csv", csv, "Emit CSV rows instead of JSON");

  // oscint
  std::string phase = "paraboloid", lambda_grid = "25,50,100,200,400", kind = "stationary";
  int d = 1;
  double radius = 1.0, tol = 1e-9;
  auto* osc = app.add_subcommand("oscint", "Oscillatory integrals against stationary phase");
  osc->add_option("--phase", phase, "paraboloid | saddle | linear | constant");
  osc->add_option("--d", d);
  osc->add_option("--lambda-grid", lambda_grid);
  osc->add_option("--kind", kind, "stationary | nonstationary");
  osc->add_option("--radius", radius, "Support radius of the bump amplitude");
  osc->add_option("--tol", tol, "Quadrature convergence tolerance");

  // exponents
  int n = 2, R = 1, steps = 20, table = 0;
  std::string tau, sval;
  auto* expo = app.add_subcommand("exponents", "Exact exponent calculus");
  expo->add_option("--n", n);
  expo->add_option("--R", R);
  expo->add_option("--steps", steps);
  expo->add_option("--tau", tau, "tau_0,...,tau_R as rationals");
  expo->add_option("--s", sval, "Hausdorff exponent for the series test");
  expo->add_option("--table", table, "Markdown table for n = 2..nmax");

  // sweep
  std::string plan_path, out_path;
  bool big = false, no_timing = false;
  unsigned sweep_shards = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a Q sweep from a plan file");
  sweep->add_option("--plan", plan_path)->required();
  sweep->add_option("--out", out_path);
  sweep->add_option("--shards", sweep_shards);
  sweep->add_flag("--big", big, "Lift the per-row budget");
  sweep->add_flag("--no-timing", no_timing, "Write elapsed_ms as 0 for reproducible files");

  // fit
  std::string in_path, model = "count_vs_Q", gamma = "0", fit_manifold;
  int fit_n = 2;
  double fit_tol = 0.15;
  auto* fit = app.add_subcommand("fit", "Fit the growth exponent of a sweep");
  fit->add_option("--in", in_path)->required();
  fit->add_option("--model", model);
  fit->add_option("--gamma", gamma, "gamma_1,...,gamma_R of the delta law");
  fit->add_option("--n", fit_n);
  fit->add_option("--manifold", fit_manifold, "Take n from this manifold file");
  fit->add_option("--tolerance", fit_tol);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*curv) {
      const auto cfg = load_manifold_config(manifold);
      json j = curvature_json(check_curvature(cfg.spec, t_samples, x_samples));
      j["warnings"] = cfg.spec.warnings;
      print(j);
    } else if (*selb) {
      const SelbergPair pair = selberg_pair(alpha, beta, J);
      const SelbergCheck chk = check_selberg(pair, grid);
      print({{"alpha", alpha},
             {"beta", beta},
             {"J", J},
             {"minorant", trig_json(pair.minorant)},
             {"majorant", trig_json(pair.majorant)},
             {"properties",
              {{"sandwich", chk.sandwich},
               {"worst_violation", chk.worst_violation},
               {"mean_values", chk.mean_values},
               {"coefficient_bound", chk.coefficient_bound}}}});
    } else if (*dual) {
      const auto cfg = load_manifold_config(manifold);
      const DualFamily fam(pencil_function(cfg.spec, s, parse_list<long long>(jlist), {}), cfg.weight);
      const Box range = fam.range_box(), support = fam.support_box();
      json j = {{"s", s},
                {"j", parse_list<long long>(jlist)},
                {"coefficients", [&] {
                   json c = json::array();
                   for (const auto& r : fam.function().coefficients()) c.push_back(to_string(r));
                   return c;
                 }()},
                {"range_box", {{"lo", std::vector<double>(range.lo.begin(), range.lo.end())},
                               {"hi", std::vector<double>(range.hi.begin(), range.hi.end())}}},
                {"support_box", {{"lo", std::vector<double>(support.lo.begin(), support.lo.end())},
                                 {"hi", std::vector<double>(support.hi.begin(), support.hi.end())}}}};
      if (check_involution) {
        const LegendreResiduals res = legendre_residuals(fam, samples);
        j["residuals"] = {{"samples", res.samples},
                          {"involution", res.involution},
                          {"inverse_hessian", res.inverse_hessian},
                          {"gradient_inversion", res.gradient_inversion}};
      }
      print(j);
    } else if (*count) {
      const auto cfg = load_manifold_config(manifold);
      require_admissible(cfg.spec, force);
      const auto Qs = parse_list<long long>(Qlist);
      const auto deltas = parse_list<double>(dlist);
      CountKind k = CountKind::sharp;
      if (smoothed) k = CountKind::smoothed;
      if (dual_s > 0) k = CountKind::dual;
      if (on_manifold) k = CountKind::on_manifold;
      if (base) k = CountKind::base;
      if (csv) {
        const int widths = (k == CountKind::on_manifold || k == CountKind::base) ? 0
                           : k == CountKind::dual                               ? 1
                                                                                : cfg.spec.R;
        std::cout << csv_header(widths) << '\n';
        for (long long Q : Qs) {
          std::cout << format_row(run_row(cfg, k, Q, deltas, shards, std::max(dual_s, 1))) << '\n';
        }
      } else {
        json rows = json::array();
        for (long long Q : Qs) {
          const CountOptions opts{shards};
          CountResult r;
          switch (k) {
            case CountKind::sharp: r = count_sharp(cfg.spec, cfg.domain, Q, DeltaVector(deltas), opts); break;
            case CountKind::smoothed: r = count_smoothed(cfg.spec, cfg.weight, Q, DeltaVector(deltas), opts); break;
            case CountKind::on_manifold: r = count_on_manifold(cfg.spec, cfg.domain, Q, opts); break;
            case CountKind::dual:
              if (deltas.size() != 1) throw ParameterError("--dual takes a single --delta");
              r = count_dual(cfg.spec, cfg.weight, dual_s, Q, deltas[0], opts);
              break;
            case CountKind::base: {
              const BaseCount b = base_count(cfg.spec, cfg.weight, Q, opts);
              r = b.result;
              json row = count_json(r);
              row["riemann_predictor"] = b.riemann_predictor;
              rows.push_back(row);
              continue;
            }
          }
          rows.push_back(count_json(r));
        }
        print(rows.size() == 1 ? rows[0] : rows);
      }
    } else if (*osc) {
      const auto lambdas = parse_list<double>(lambda_grid);
      const WeightFunction amp(Vec::Zero(d), radius);
      std::shared_ptr<const SmoothFunction> ph;
      std::optional<Vec> v0;
      if (phase == "paraboloid") {
        ph = quadratic_phase(Mat::Identity(d, d));
        v0 = Vec::Zero(d);
      } else if (phase == "saddle") {
        Mat H = Mat::Identity(d, d);
        for (int i = d / 2 + (d % 2); i < d; ++i) H(i, i) = -1.0;
        ph = quadratic_phase(H);
        v0 = Vec::Zero(d);
      } else if (phase == "linear") {
        Vec dir = Vec::Zero(d);
        dir[0] = 1.0;
        ph = linear_phase(dir);
      } else if (phase == "constant") {
        ph = zero_phase(d);
      } else {
        throw ParameterError("unknown phase '" + phase + "'");
      }
      const Box support{Vec::Constant(d, -radius), Vec::Constant(d, radius)};
      const OscIntegral family(ph, bump_amplitude(amp), support, 1.0, kind == "stationary" ? v0 : std::nullopt);
      QuadratureOptions qopts;
      qopts.tol = tol;
      std::cout << "lambda,abs_I,abs_prediction,residual\n" << std::setprecision(17);
      for (double lambda : lambdas) {
        const OscIntegral I = family.with_lambda(lambda);
        const Complex value = evaluate(I, 8, qopts).value;
        if (kind == "stationary") {
          const Complex pred = stationary_phase_prediction(I);
          std::cout << lambda << ',' << std::abs(value) << ',' << std::abs(pred) << ',' << std::abs(value - pred)
                    << '\n';
        } else {
          std::cout << lambda << ',' << std::abs(value) << ",0," << std::abs(value) << '\n';
        }
      }
    } else if (*expo) {
      if (table > 0) {
        std::cout << "| n | R | RH(n) | Theta | beta_st | alpha_st |\n|---|---|---|---|---|---|\n";
        for (int nn = 2; nn <= table; ++nn) {
          for (int rr = 1; rr <= radon_hurwitz(nn); ++rr) {
            std::cout << "| " << nn << " | " << rr << " | " << radon_hurwitz(nn) << " | " << to_string(theta(nn, rr))
                      << " | " << to_string(beta_stop(nn, rr)) << " | " << to_string(alpha_stop(nn, rr)) << " |\n";
          }
        }
        return 0;
      }
      const ExponentReport rep = exponent_report(n, R, steps);
      json seq = json::array();
      for (const auto& b : rep.sequence.iterates) seq.push_back(to_string(b));
      json j = {{"n", n},
                {"R", R},
                {"theta", rational_json(rep.theta)},
                {"beta_st", rational_json(rep.beta_st)},
                {"alpha_st", rational_json(rep.alpha_st)},
                {"beta_sequence", seq},
                {"steps_to_converge", rep.sequence.steps_to_converge ? json(*rep.sequence.steps_to_converge)
                                                                     : json(nullptr)},
                {"contraction_holds", rep.sequence.contraction_holds},
                {"delta_threshold_exponent", rational_json(rep.delta_threshold_exponent)},
                {"error_factor_kind", rep.error_factor ? json(to_string(*rep.error_factor)) : json("unspecified")},
                {"radon_hurwitz", rep.radon_hurwitz}};
      if (rep.sequence.final_value) j["final_value"] = rational_json(*rep.sequence.final_value);
      if (!tau.empty()) {
        ApproximationProfile profile;
        std::stringstream ss(tau);
        std::string item;
        while (std::getline(ss, item, ',')) profile.tau.push_back(parse_rational(item));
        j["hausdorff_dimension"] = rational_json(hausdorff_dimension(n, R, profile));
        if (!sval.empty()) {
          const Rational sv = parse_rational(sval);
          j["series_exponent"] = rational_json(khintchine_exponent(n, profile, sv));
          j["series"] = to_string(khintchine_series_converges(n, R, profile, sv));
        }
      }
      print(j);
    } else if (*sweep) {
      const SweepPlan plan = load_sweep_plan(plan_path);
      SweepOptions opts;
      opts.timing = !no_timing;
      opts.big = big;
      if (sweep_shards > 0) opts.shards = sweep_shards;
      if (!out_path.empty()) opts.out = out_path;
      require_admissible(plan.config->spec, false);
      const SweepReport rep = run_sweep(plan, opts);
      json j = {{"computed", rep.computed}, {"resumed", rep.resumed}, {"capacity_failures", rep.capacity_failures}};
      json ratios = json::array();
      for (const auto& row : rep.rows) ratios.push_back(row.ratio);
      j["ratios"] = ratios;
      if (auto st = ratio_stabilized(rep.rows)) j["ratio_stabilized"] = *st;
      print(j);
    } else if (*fit) {
      if (model != "count_vs_Q") throw ParameterError("unknown model '" + model + "'");
      if (!fit_manifold.empty()) fit_n = load_manifold_config(fit_manifold).spec.n;
      print(fit_json(fit_exponent(read_csv(in_path), fit_n, parse_list<double>(gamma), fit_tol)));
    }
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 0;
}
