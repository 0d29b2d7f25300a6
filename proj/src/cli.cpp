#include "glspace/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "glspace/constants.hpp"
#include "glspace/error.hpp"
#include "glspace/extremal.hpp"
#include "glspace/io.hpp"
#include "glspace/norms.hpp"
#include "glspace/numeric.hpp"

namespace glspace {

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::optional<double> tol;
  std::string p_grid;
  std::string p_list;
  std::string kind;
  std::string input;
  // constants table parameters
  int n = 1;
  double q = 0.0, s = 0.0, alpha = 0.0, beta = 0.0, mu = 0.0, theta = 0.5, M0 = 1.0, M1 = 1.0;
  double p0 = 1.0, q0 = 1.0, a_norm = 1.0, b_norm = 1.0, lorentz_q = 1.0;
  std::string h_profile = "gaussian";
  std::string psi;
  // counterexample
  double c1 = 0.5, c2 = 2.0;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(number_from_json(Json(item)));
  if (v.empty()) throw ConfigError("empty exponent list");
  return v;
}

std::vector<double> numbers(const Json& cfg, const char* key) {
  if (!cfg.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  const Json& j = cfg.at(key);
  std::vector<double> v;
  if (j.is_array())
    for (const auto& x : j) v.push_back(number_from_json(x));
  else
    v.push_back(number_from_json(j));
  return v;
}

const Json& need_operator(const Json& cfg) {
  if (!cfg.contains("operator")) throw ConfigError("missing field 'operator'");
  return cfg.at("operator");
}

std::vector<double> exponents(const Options& o) {
  if (!o.p_list.empty()) return parse_list(o.p_list);
  if (!o.p_grid.empty()) return parse_exponent_grid(o.p_grid).points();
  throw ConfigError("give exponents with --p or --p-grid");
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty())
    out << text;
  else
    write_file_atomic(o.out, text);
}

void check_format(const Options& o) {
  if (o.format != "csv" && o.format != "json") throw ConfigError("--format must be csv or json");
}

int emit_report(const Options& o, std::ostream& out, std::ostream& err, const VerificationReport& r) {
  emit(o, out, o.format == "json" ? report_json(r) : report_csv(r));
  if (!r.passed) {
    err << r.check << ": FAIL";
    for (const auto& [k, v] : r.measurements) err << ' ' << k << '=' << format_number(v);
    for (const auto& [k, v] : r.metadata)
      if (k.rfind("failure", 0) == 0 || k == "aborted") err << "; " << k << ": " << v;
    err << '\n';
  }
  return r.passed ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- config pieces

TestFamily family_from_json(const Json& j) {
  const auto kind = family_kind_from_string(j.value("kind", std::string("gaussians")));
  const GridShape shape = j.contains("grid") ? grid_shape_from_json(j.at("grid")) : GridShape::line(16.0, 1024);
  std::vector<double> params;
  if (j.contains("params")) {
    const Json& p = j.at("params");
    if (p.is_object())
      params = logspace(number_from_json(p.at("start")), number_from_json(p.at("stop")), p.value("count", std::size_t{16}));
    else
      for (const auto& x : p) params.push_back(number_from_json(x));
  } else if (kind == TestFamily::Kind::power_tail) {
    params = logspace(0.005, 0.5, 16);
  } else {
    params = logspace(0.25, 2.0, 16);
  }
  switch (kind) {
    case TestFamily::Kind::gaussians: return TestFamily::gaussians(shape, params);
    case TestFamily::Kind::indicator_dilates: return TestFamily::indicator_dilates(shape, params);
    case TestFamily::Kind::power_tail: return TestFamily::power_tail(shape, params);
    case TestFamily::Kind::pbo_f0: return TestFamily::pbo_f0(shape, j.value("beta", 0.0));
    case TestFamily::Kind::custom: {
      std::vector<GridFunction> fs;
      for (const auto& path : j.at("paths")) fs.push_back(read_grid_file(path.get<std::string>()));
      return TestFamily::from_functions(std::move(fs));
    }
  }
  throw InvariantError("unhandled family kind");
}

ExponentMap map_from_json(const Json& j) {
  const std::string kind = j.value("kind", std::string("identity"));
  if (kind == "identity") {
    const auto d = j.contains("domain") ? j.at("domain") : Json::array({1.0, "inf"});
    return ExponentMap::identity({number_from_json(d.at(0)), number_from_json(d.at(1))});
  }
  if (kind == "conjugate") return ExponentMap::conjugate();
  if (kind == "pbo")
    return ExponentMap::pbo(number_from_json(j.at("alpha")), number_from_json(j.at("beta")), j.value("n", 1));
  if (kind == "riesz_thorin")
    return ExponentMap::riesz_thorin(number_from_json(j.at("p0")), number_from_json(j.at("p1")),
                                     number_from_json(j.at("q0")), number_from_json(j.at("q1")));
  throw ConfigError("unknown exponent map '" + kind + "'");
}

// K(p) from the catalog: "unit", "fourier" (with convention), or any constant kind.
std::function<double(double)> constant_from_json(const Json& j, int n) {
  const std::string kind = j.value("kind", std::string("unit"));
  const double scale = j.contains("scale") ? number_from_json(j.at("scale")) : 1.0;
  if (!(scale > 0.0)) throw ConfigError("constant scale must be positive");
  if (kind == "unit") return [scale](double) { return scale; };
  if (kind == "fourier") {
    const auto conv = j.value("convention", std::string("unitary")) == "beckner" ? FourierConvention::beckner
                                                                                : FourierConvention::unitary;
    return [scale, conv, n](double p) { return scale * fourier_norm(p, n, conv); };
  }
  ConstantQuery base;
  base.kind = constant_kind_from_string(kind);
  base.n = n;
  return [scale, base](double p) {
    ConstantQuery q = base;
    q.p = p;
    return scale * sharp_constant(q).value;
  };
}

double tolerance(const Options& o, const Json& cfg, double dflt) {
  if (o.tol) return *o.tol;
  return cfg.contains("tolerance") ? number_from_json(cfg.at("tolerance")) : dflt;
}

Kernel kernel_config(const Json& j) {
  const std::string type = j.value("type", std::string("hardy"));
  if (type != "random_table") return operator_from_json(Json{{"kind", "integral_kernel"}, {"params", {{"kernel", j}}}}).kernel.value();
  // iid uniform values on the unit square inside [-1, 1]^2
  const std::size_t N = j.value("count", std::size_t{16});
  std::mt19937_64 rng(j.value("seed", std::uint64_t{0}));
  std::uniform_real_distribution<double> U(0.0, 1.0);
  GridShape s = GridShape::cube(2, 1.0, N);
  s.blocks = {1, 1};
  std::vector<double> v(s.size(), 0.0);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      if (std::abs(s.axes[0].center(a)) <= 0.5 && std::abs(s.axes[1].center(b)) <= 0.5) v[a * N + b] = U(rng);
  return Kernel::table(GridFunction(s, std::move(v)).with_label("random_table"));
}

// ---------------------------------------------------------------- commands

int cmd_constants(const Options& o, std::ostream& out) {
  check_format(o);
  const ConstantKind kind = constant_kind_from_string(o.kind);
  const auto ps = exponents(o);
  std::vector<std::pair<double, ConstantValue>> rows;
  for (double p : ps) {
    ConstantQuery q;
    q.kind = kind;
    q.p = p;
    q.q = o.q;
    q.n = o.n;
    q.s = o.s;
    q.alpha = o.alpha;
    q.beta = o.beta;
    q.mu = o.mu;
    q.theta = o.theta;
    q.M0 = o.M0;
    q.M1 = o.M1;
    q.p0 = o.p0;
    q.q0 = o.q0;
    q.a_norm = o.a_norm;
    q.b_norm = o.b_norm;
    q.h_profile = o.h_profile;
    rows.emplace_back(p, sharp_constant(q));
  }
  std::string text;
  if (o.format == "csv") {
    text = "kind,p,q,value,regime\n";
    for (const auto& [p, v] : rows)
      text += o.kind + "," + format_number(p) + "," + format_number(v.q) + "," + format_number(v.value) + "," +
              to_string(v.regime) + "\n";
  } else {
    Json a = Json::array();
    for (const auto& [p, v] : rows)
      a.push_back({{"kind", o.kind}, {"p", number_to_json(p)}, {"q", number_to_json(v.q)},
                   {"value", number_to_json(v.value)}, {"regime", to_string(v.regime)}, {"note", v.note}});
    text = a.dump(2) + "\n";
  }
  emit(o, out, text);
  return kExitPass;
}

GridFunction load_input(const std::string& path) {
  if (path.empty()) throw ConfigError("--input is required");
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") return read_grid_csv_file(path);
  return read_grid_file(path);
}

int cmd_norm(const Options& o, std::ostream& out) {
  check_format(o);
  const GridFunction f = load_input(o.input);
  const std::string kind = o.kind.empty() ? "lp" : o.kind;
  std::string text = "kind,p,q,value\n";
  if (kind == "gls") {
    if (o.psi.empty()) throw ConfigError("gls norm needs --psi <file.json>");
    const PsiFunction psi = psi_from_json(read_json_file(o.psi));
    const std::vector<double> grid =
        o.p_list.empty() && o.p_grid.empty() ? support_grid(psi.support()).points() : exponents(o);
    const GlsNormResult r = gls_norm_detail(f, psi, grid);
    text += "gls," + format_number(r.argmax) + ",," + format_number(r.value) + "\n";
  } else if (kind == "anisotropic") {
    const auto ps = exponents(o);
    const double v = anisotropic_norm(f, ps, f.shape().blocks);
    std::string pj;
    for (double p : ps) pj += (pj.empty() ? "" : ";") + format_number(p);
    text += "anisotropic," + pj + ",," + format_number(v) + "\n";
  } else if (kind == "lp" || kind == "lorentz") {
    for (double p : exponents(o)) {
      if (kind == "lp")
        text += "lp," + format_number(p) + ",," + format_number(lp_norm(f, p)) + "\n";
      else
        text += "lorentz," + format_number(p) + "," + format_number(o.lorentz_q) + "," +
                format_number(lorentz_norm(f, p, o.lorentz_q)) + "\n";
    }
  } else {
    throw ConfigError("unknown norm kind '" + kind + "' (lp, lorentz, anisotropic, gls)");
  }
  emit(o, out, text);
  return kExitPass;
}

int cmd_op_apply(const Options& o, std::ostream& out) {
  if (o.config.empty()) throw ConfigError("op apply needs --config");
  const Json cfg = read_json_file(o.config);
  const OperatorSpec op = operator_from_json(cfg.contains("operator") ? cfg.at("operator") : cfg);
  const GridFunction f = load_input(!o.input.empty() ? o.input : cfg.value("input", std::string{}));
  const GridFunction g = apply(op, f);
  if (o.format == "csv") {
    std::ostringstream os;
    write_grid_csv(os, g);
    emit(o, out, os.str());
  } else if (o.format == "bin") {
    if (o.out.empty()) throw ConfigError("binary output needs --out");
    write_grid_file(o.out, g);
  } else {
    throw ConfigError("op apply writes csv or bin");
  }
  return kExitPass;
}

int verify_dilation(const Options& o, const Json& cfg, std::ostream& out, std::ostream& err) {
  const OperatorSpec op = operator_from_json(need_operator(cfg));
  const WeightSpec w = cfg.contains("weight") ? weight_from_json(cfg.at("weight")) : op.weight;
  const GridShape shape = cfg.contains("grid") ? grid_shape_from_json(cfg.at("grid"))
                                               : GridShape::cube(w.alpha.size() ? w.alpha.size() : 1, 8.0, 256);
  const std::size_t l = shape.blocks.size();
  std::vector<double> p = numbers(cfg, "p");
  if (p.size() == 1 && l > 1) p.assign(l, p[0]);
  std::vector<double> q;
  if (cfg.contains("q")) {
    q = numbers(cfg, "q");
  } else {
    // exponent relation per block: 1/q = 1 - 1/p - (beta - alpha)/m
    std::vector<double> shift(l, 0.0);
    if (cfg.contains("inv_q_shift")) {
      shift = numbers(cfg, "inv_q_shift");
      if (shift.size() == 1 && l > 1) shift.assign(l, shift[0]);
    }
    if (shift.size() != l || p.size() != l || w.alpha.size() != l) throw ConfigError("need one p, alpha, beta per block");
    for (std::size_t j = 0; j < l; ++j) {
      const double iq = 1.0 - 1.0 / p[j] - (w.beta[j] - w.alpha[j]) / static_cast<double>(shape.blocks[j]) + shift[j];
      if (!(iq >= 0.0 && iq <= 1.0)) throw DomainError("block " + std::to_string(j) + " has no admissible q");
      q.push_back(iq == 0.0 ? kInf : 1.0 / iq);
    }
  }
  const std::vector<double> lambdas = cfg.contains("lambda") ? numbers(cfg, "lambda") : std::vector<double>{0.125, 1.0, 8.0};
  const GridFunction f =
      GridFunction::sample(shape, [](std::span<const double> x) {
        double r = 0.0;
        for (double v : x) r += v * v;
        return std::exp(-std::numbers::pi * r);
      }).with_label("gaussian");
  return emit_report(o, out, err, dilation_necessity_check(op, w, p, q, lambdas, f, tolerance(o, cfg, 1e-6)));
}

int run_verify(const std::string& what, const Options& o, std::ostream& out, std::ostream& err) {
  check_format(o);
  if (o.config.empty()) throw ConfigError("verify needs --config");
  const Json cfg = read_json_file(o.config);
  if (what == "dilation") return verify_dilation(o, cfg, out, err);
  if (what == "pbo-blowup") {
    PboBlowupOptions opts;
    if (cfg.contains("monotone_eps")) opts.monotone_eps = numbers(cfg, "monotone_eps");
    if (cfg.contains("fit_eps")) opts.fit_eps = numbers(cfg, "fit_eps");
    if (cfg.contains("log_y")) opts.log_y = numbers(cfg, "log_y");
    if (cfg.contains("min_r_squared")) opts.min_r_squared = number_from_json(cfg.at("min_r_squared"));
    const PboBlowup b = pbo_blowup(number_from_json(cfg.value("alpha", Json(0.25))), number_from_json(cfg.value("beta", Json(0.25))), opts);
    return emit_report(o, out, err, b.report);
  }
  if (what == "transfer") {
    const OperatorSpec op = operator_from_json(need_operator(cfg));
    if (!cfg.contains("psi")) throw ConfigError("transfer needs a psi");
    const PsiFunction psi = psi_from_json(cfg.at("psi"));
    const TestFamily fam = family_from_json(cfg.value("family", Json::object()));
    const auto K = constant_from_json(cfg.value("constant", Json::object()), static_cast<int>(fam.shape.dimension()));
    const ExponentMap qmap = map_from_json(cfg.value("map", Json::object()));
    TransferOptions t;
    if (cfg.contains("p_grid")) t.p_grid = exponent_grid_from_json(cfg.at("p_grid")).points();
    if (cfg.contains("probe")) t.probe = number_from_json(cfg.at("probe"));
    t.tol = tolerance(o, cfg, 1e-9);
    return emit_report(o, out, err, verify_gls_transfer(op, psi, K, qmap, fam, t));
  }
  if (what == "interpolation") {
    const OperatorSpec op = operator_from_json(need_operator(cfg));
    const Json& ends = cfg.at("endpoints");
    if (!ends.is_array() || ends.size() != 2) throw ConfigError("interpolation needs two endpoints");
    Endpoint e[2];
    for (int k = 0; k < 2; ++k)
      e[k] = {number_from_json(ends[k].at("p")), number_from_json(ends[k].at("q")), number_from_json(ends[k].at("M"))};
    const std::string kind = cfg.value("kind", std::string("riesz-thorin"));
    InterpolationKind ik;
    if (kind == "riesz-thorin")
      ik = InterpolationKind::riesz_thorin;
    else if (kind == "marcinkiewicz")
      ik = InterpolationKind::marcinkiewicz;
    else
      throw ConfigError("unknown interpolation kind '" + kind + "'");
    const TestFamily fam = family_from_json(cfg.value("family", Json::object()));
    return emit_report(o, out, err,
                       verify_interpolation(op, e[0], e[1], ik, fam, tolerance(o, cfg, 1e-9), cfg.value("theta_steps", std::size_t{10})));
  }
  if (what == "kernel-bound") {
    const Kernel k = kernel_config(cfg.value("kernel", Json::object()));
    Json fj = cfg.value("family", Json{{"kind", "indicator_dilates"}, {"params", {0.25, 0.5, 1.0}}});
    if (!fj.contains("grid")) fj["grid"] = {{"n", k.dimension()}, {"half_width", 1.0}, {"count", 16}};
    const TestFamily fam = family_from_json(fj);
    return emit_report(o, out, err,
                       verify_kernel_bound(k, number_from_json(cfg.at("p")), number_from_json(cfg.at("q")), fam, tolerance(o, cfg, 1e-6)));
  }
  throw ConfigError("unknown verification '" + what + "'");
}

int cmd_boyd(const Options& o, std::ostream& out) {
  if (o.config.empty()) throw ConfigError("boyd needs --config");
  const Json cfg = read_json_file(o.config);
  const ProductPsi psi{psi_from_json(cfg.at("first")), psi_from_json(cfg.at("second"))};
  const std::vector<double> grid = cfg.contains("scales") ? numbers(cfg, "scales") : logspace(1e-3, 1e3, 25);
  const BoydIndices b = boyd_indices(psi, grid, grid);
  std::string text;
  if (o.format == "json") {
    Json j{{"alpha_upper", b.alpha_upper}, {"alpha_lower", b.alpha_lower}, {"beta_upper", b.beta_upper}, {"beta_lower", b.beta_lower}};
    text = j.dump(2) + "\n";
  } else {
    text = "alpha_upper,alpha_lower,beta_upper,beta_lower\n" + format_number(b.alpha_upper) + "," + format_number(b.alpha_lower) +
           "," + format_number(b.beta_upper) + "," + format_number(b.beta_lower) + "\n";
  }
  emit(o, out, text);
  return kExitPass;
}

int cmd_counterexample(const Options& o, std::ostream& out) {
  const GridFunction f = pbo_counterexample(o.n, o.beta, PboParams{o.c1, o.c2});
  if (o.format == "bin") {
    if (o.out.empty()) throw ConfigError("binary output needs --out");
    write_grid_file(o.out, f);
  } else if (o.format == "csv") {
    std::ostringstream os;
    write_grid_csv(os, f);
    emit(o, out, os.str());
  } else {
    throw ConfigError("counterexample writes csv or bin");
  }
  return kExitPass;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"glspace: grand Lebesgue space operator norms and verification runs", "glspace"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--config", o.config, "JSON configuration");
    c->add_option("--out", o.out, "output path (default stdout)");
    c->add_option("--format", o.format, "csv or json");
    c->add_option("--tol", o.tol, "tolerance override");
    c->add_option("--p-grid", o.p_grid, "start:stop:count[:spacing]");
    c->add_option("--p", o.p_list, "comma-separated exponents");
    c->add_option("--kind", o.kind, "kind selector");
  };

  auto* constants = app.add_subcommand("constants", "sharp constant catalog");
  auto* table = constants->add_subcommand("table", "tabulate one constant over exponents");
  constants->require_subcommand(1);
  common(table);
  table->add_option("--n", o.n);
  table->add_option("--q", o.q);
  table->add_option("--s", o.s);
  table->add_option("--alpha", o.alpha);
  table->add_option("--beta", o.beta);
  table->add_option("--mu", o.mu);
  table->add_option("--theta", o.theta);
  table->add_option("--M0", o.M0);
  table->add_option("--M1", o.M1);
  table->add_option("--p0", o.p0);
  table->add_option("--q0", o.q0);
  table->add_option("--a-norm", o.a_norm);
  table->add_option("--b-norm", o.b_norm);
  table->add_option("--h-profile", o.h_profile, "okikiolu profile");

  auto* norm = app.add_subcommand("norm", "Lp, Lorentz, anisotropic or GLS norm of a grid function");
  common(norm);
  norm->add_option("--input", o.input, "grid file (.bin container or .csv)");
  norm->add_option("--lorentz-q", o.lorentz_q);
  norm->add_option("--psi", o.psi, "psi JSON for the gls norm");

  auto* op = app.add_subcommand("op", "operators");
  op->require_subcommand(1);
  auto* op_apply = op->add_subcommand("apply", "apply an operator spec to a grid function");
  common(op_apply);
  op_apply->add_option("--input", o.input);

  auto* verify = app.add_subcommand("verify", "verification runs");
  verify->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> checks;
  const std::pair<const char*, const char*> runs[] = {
      {"transfer", "GLS bound from a catalog Lp constant"},
      {"dilation", "scaling slopes of a weighted operator"},
      {"interpolation", "Riesz-Thorin or Marcinkiewicz bounds along theta"},
      {"pbo-blowup", "weighted Fourier ratios near the critical exponent"},
      {"kernel-bound", "mixed-norm kernel bound against sampled ratios"}};
  for (auto [name, about] : runs) {
    auto* c = verify->add_subcommand(name, about);
    common(c);
    checks.emplace_back(name, c);
  }

  auto* boyd = app.add_subcommand("boyd", "Boyd indices of a product psi");
  common(boyd);
  auto* counter = app.add_subcommand("counterexample", "sampled counterexample function");
  common(counter);
  counter->add_option("--n", o.n);
  counter->add_option("--beta", o.beta);
  counter->add_option("--c1", o.c1);
  counter->add_option("--c2", o.c2);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfig;
  }

  try {
    if (table->parsed()) return cmd_constants(o, out);
    if (norm->parsed()) return cmd_norm(o, out);
    if (op_apply->parsed()) return cmd_op_apply(o, out);
    for (const auto& [name, c] : checks)
      if (c->parsed()) return run_verify(name, o, out, err);
    if (boyd->parsed()) return cmd_boyd(o, out);
    if (counter->parsed()) return cmd_counterexample(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  err << app.help();
  return kExitConfig;
}

}  // namespace glspace
