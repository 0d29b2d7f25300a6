#include "glspace/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "glspace/constants.hpp"
#include "glspace/error.hpp"
#include "glspace/numeric.hpp"

namespace glspace {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

double radius2(std::span<const double> x) {
  double r = 0.0;
  for (double v : x) r += v * v;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- families

TestFamily TestFamily::gaussians(GridShape shape, std::vector<double> scales) {
  TestFamily f;
  f.kind = Kind::gaussians;
  f.shape = std::move(shape);
  f.params = std::move(scales);
  return f;
}

TestFamily TestFamily::indicator_dilates(GridShape shape, std::vector<double> scales) {
  TestFamily f = gaussians(std::move(shape), std::move(scales));
  f.kind = Kind::indicator_dilates;
  return f;
}

TestFamily TestFamily::power_tail(GridShape shape, std::vector<double> eps) {
  if (shape.dimension() != 1) throw ConfigError("power-tail family is one-dimensional");
  for (double e : eps)
    if (!(e > 0.0)) throw DomainError("power-tail offsets must be positive");
  TestFamily f = gaussians(std::move(shape), std::move(eps));
  f.kind = Kind::power_tail;
  return f;
}

TestFamily TestFamily::pbo_f0(GridShape shape, double beta) {
  TestFamily f;
  f.kind = Kind::pbo_f0;
  f.shape = std::move(shape);
  f.beta = beta;
  return f;
}

TestFamily TestFamily::from_functions(std::vector<GridFunction> fs) {
  TestFamily f;
  f.kind = Kind::custom;
  if (!fs.empty()) f.shape = fs.front().shape();
  f.custom = std::move(fs);
  return f;
}

std::size_t TestFamily::size() const {
  switch (kind) {
    case Kind::pbo_f0: return 1;
    case Kind::custom: return custom.size();
    default: return params.size();
  }
}

GridFunction TestFamily::member(std::size_t i, double p) const {
  if (i >= size()) throw ConfigError("family member index out of range");
  switch (kind) {
    case Kind::gaussians: {
      const double s = params[i];
      return GridFunction::sample(shape, [s](std::span<const double> x) { return std::exp(-kPi * radius2(x) / (s * s)); })
          .with_label(member_name(i));
    }
    case Kind::indicator_dilates: {
      const double s2 = params[i] * params[i];
      return GridFunction::sample(shape, [s2](std::span<const double> x) { return radius2(x) <= s2 ? 1.0 : 0.0; })
          .with_label(member_name(i));
    }
    case Kind::power_tail: {
      if (!(p >= 1.0) || std::isinf(p)) throw DomainError("power-tail members need a finite p >= 1");
      const double a = 1.0 / p + params[i];
      GridFunction g = GridFunction::sample(shape, [a](std::span<const double> x) { return x[0] > 1.0 ? std::pow(x[0], -a) : 0.0; });
      return g.with_tail(std::make_shared<PowerSumTail>(shape.axes[0].half_width, TailSides::right, std::vector<PowerTerm>{{1.0, a}}))
          .with_label(member_name(i));
    }
    case Kind::pbo_f0:
      return pbo_counterexample(static_cast<int>(shape.dimension()), beta, PboParams{}, shape);
    case Kind::custom: return custom[i];
  }
  throw InvariantError("unhandled family kind");
}

std::string TestFamily::member_name(std::size_t i) const {
  switch (kind) {
    case Kind::gaussians: return "gaussian s=" + fmt(params[i]);
    case Kind::indicator_dilates: return "indicator s=" + fmt(params[i]);
    case Kind::power_tail: return "power_tail eps=" + fmt(params[i]);
    case Kind::pbo_f0: return "pbo_f0";
    case Kind::custom: return custom[i].label().empty() ? "custom " + std::to_string(i) : custom[i].label();
  }
  return "?";
}

std::string to_string(TestFamily::Kind kind) {
  switch (kind) {
    case TestFamily::Kind::gaussians: return "gaussians";
    case TestFamily::Kind::indicator_dilates: return "indicator_dilates";
    case TestFamily::Kind::power_tail: return "power_tail";
    case TestFamily::Kind::pbo_f0: return "pbo_f0";
    case TestFamily::Kind::custom: return "custom";
  }
  return "?";
}

TestFamily::Kind family_kind_from_string(const std::string& s) {
  for (auto k : {TestFamily::Kind::gaussians, TestFamily::Kind::indicator_dilates, TestFamily::Kind::power_tail,
                 TestFamily::Kind::pbo_f0, TestFamily::Kind::custom})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown family kind '" + s + "'");
}

// ---------------------------------------------------------------- reports

void VerificationReport::add(VerificationRow row) {
  passed = passed && row.pass;
  rows.push_back(std::move(row));
}

std::optional<double> VerificationReport::measurement(const std::string& key) const {
  for (const auto& [k, v] : measurements)
    if (k == key) return v;
  return std::nullopt;
}

std::optional<std::string> VerificationReport::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return std::nullopt;
}

// ---------------------------------------------------------------- norm estimation

NormEstimate estimate_operator_norm(const OperatorSpec& op, double p, double q, const TestFamily& family) {
  if (family.size() == 0) throw ConfigError("test family is empty");
  NormEstimate est;
  est.ratios.resize(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    const GridFunction f = family.member(i, p);
    const double rhs = lp_norm(f, p);
    if (!(rhs > 0.0)) throw ConfigError("family member " + family.member_name(i) + " has zero norm");
    est.ratios[i] = lp_norm(apply(op, f), q) / rhs;
    if (i == 0 || est.ratios[i] > est.value) {
      est.value = est.ratios[i];
      est.argmax = i;
    }
  }
  est.member = family.member_name(est.argmax);
  if (est.argmax < family.params.size()) est.param = family.params[est.argmax];
  return est;
}

double fourier_norm(double p, int n, FourierConvention convention) {
  const double a = beckner_A(p, n);
  if (convention == FourierConvention::beckner) return a;
  const double ipc = 1.0 - 1.0 / p;
  return a * std::pow(2.0 * kPi, n * (ipc - 0.5));
}

// ---------------------------------------------------------------- counterexample

GridFunction pbo_counterexample(int n, double beta, const PboParams& c, const GridShape& shape) {
  if (!(c.c1 > 0.0 && c.c1 < 1.0 && c.c2 > 1.0)) throw ConfigError("pbo parameters need 0 < c1 < 1 < c2");
  if (n < 1 || static_cast<std::size_t>(n) != shape.dimension()) throw ConfigError("dimension does not match the grid");
  if (!(beta >= 0.0 && beta < n)) throw DomainError("pbo needs 0 <= beta < n");
  if (n == 1) {
    const double R = shape.axes[0].half_width;
    if (!(R > 1.0)) throw ConfigError("pbo counterexample needs a box wider than 1");
    GridFunction g = GridFunction::sample(shape, [](std::span<const double> x) {
      const double a = std::abs(x[0]);
      return a > 1.0 ? 1.0 / a : 0.0;
    });
    return g.with_tail(std::make_shared<PowerSumTail>(R, TailSides::both, std::vector<PowerTerm>{{1.0, 1.0}}))
        .with_label("pbo_f0");
  }
  const double c1 = c.c1, c2 = c.c2;
  return GridFunction::sample(shape, [c1, c2](std::span<const double> x) {
           const double r = std::sqrt(radius2(x));
           double prod = 1.0;
           for (double v : x) {
             const double a = std::abs(v);
             if (a < 1.0 || a / r < c1 || a / r > c2) return 0.0;
             prod *= a;
           }
           return 1.0 / prod;
         })
      .with_label("pbo_f0");
}

GridFunction pbo_counterexample(int n, double beta, const PboParams& c) {
  if (n == 1) return pbo_counterexample(n, beta, c, GridShape::line(64.0, 16384));
  return pbo_counterexample(n, beta, c, GridShape::cube(static_cast<std::size_t>(n), 16.0, 256));
}

// ---------------------------------------------------------------- PBO blow-up

PboBlowup pbo_blowup(double alpha, double beta, const PboBlowupOptions& options) {
  constexpr int n = 1;
  if (!(alpha > 0.0 && alpha < 1.0 && beta >= 0.0 && beta < 1.0 && alpha + beta <= 1.0))
    throw DomainError("pbo blow-up needs alpha in (0,1), beta in [0,1), alpha + beta <= 1");
  if (options.monotone_eps.empty() || options.fit_eps.size() < 2) throw ConfigError("pbo blow-up needs eps grids");
  PboBlowup out;
  out.alpha = alpha;
  out.beta = beta;
  out.p0 = n / (n - beta);
  out.band_lower = (alpha + beta) / n - options.band_widen;
  out.band_upper = std::max(1.0, (alpha + beta) / n) + options.band_widen;

  const GridFunction f0 = pbo_counterexample(n, beta);
  const ExponentMap qmap = ExponentMap::pbo(alpha, beta, n);
  WeightSpec w = WeightSpec::uniform(1, alpha, beta);

  // The transform is real and even. Low frequencies y = e^s on [s_min, 0], the rest on [1, y_max].
  const double s_min = -4000.0, y_max = 60.0;
  const std::size_t ns = 80000, ny = 4000;
  std::vector<double> s_nodes = linspace(s_min, 0.0, ns + 1);
  std::vector<double> y_nodes = linspace(1.0, y_max, ny + 1);
  std::vector<double> F_low(ns + 1), F_high(ny + 1);
  {
    const auto v = fourier_at_log(f0, s_nodes);
    for (std::size_t k = 0; k <= ns; ++k) F_low[k] = std::abs(v[k]);
  }
  parallel_for(ny + 1, [&](std::size_t k) { F_high[k] = std::abs(fourier_at(f0, y_nodes[k])); });

  auto simpson_nodes = [](const std::vector<double>& g, double step) {
    CompensatedSum acc;
    const std::size_t m = g.size() - 1;
    for (std::size_t k = 0; k <= m; ++k) acc.add(g[k] * (k == 0 || k == m ? 1.0 : (k % 2 ? 4.0 : 2.0)));
    return acc.value() * step / 3.0;
  };

  auto evaluate = [&](double eps) {
    PboBlowupPoint pt;
    pt.eps = eps;
    pt.p = out.p0 * (1.0 + eps);
    pt.q = qmap.forward(pt.p);
    const double q = pt.q, aq = alpha * q;
    // Work with |F| / Fmax to keep the q-th powers in range.
    double fmax = 0.0;
    for (double v : F_low) fmax = std::max(fmax, v);
    for (double v : F_high) fmax = std::max(fmax, v);
    std::vector<double> g(ns + 1), gh(ny + 1);
    // log of the integrand, shifted for stability
    double lmax = -kInf;
    for (std::size_t k = 0; k <= ns; ++k) {
      const double l = (1.0 - aq) * s_nodes[k] + q * std::log(F_low[k] / fmax);
      g[k] = l;
      lmax = std::max(lmax, l);
    }
    for (std::size_t k = 0; k <= ny; ++k) {
      const double l = -aq * std::log(y_nodes[k]) + q * std::log(F_high[k] / fmax);
      gh[k] = l;
      lmax = std::max(lmax, l);
    }
    for (double& v : g) v = std::exp(v - lmax);
    for (double& v : gh) v = std::exp(v - lmax);
    const double integral = simpson_nodes(g, (0.0 - s_min) / ns) + simpson_nodes(gh, (y_max - 1.0) / ny);
    pt.lhs = fmax * std::exp((std::log(2.0 * integral) + lmax) / q);
    pt.rhs = weighted_lp_norm(f0, pt.p, w, WeightSide::beta_positive);
    pt.ratio = pt.lhs / pt.rhs;
    return pt;
  };

  VerificationReport& rep = out.report;
  rep.check = "pbo-blowup";
  rep.note("operator", "weighted_fourier");
  rep.note("family", "pbo_f0");
  rep.note("alpha", fmt(alpha));
  rep.note("beta", fmt(beta));
  rep.note("p0", fmt(out.p0));
  rep.note("truncation_radius", fmt(f0.shape().axes[0].half_width));

  out.monotone = true;
  for (double e : options.monotone_eps) {
    out.monotone_points.push_back(evaluate(e));
    const auto& pt = out.monotone_points.back();
    const bool inc = out.monotone_points.size() < 2 || pt.ratio > out.monotone_points[out.monotone_points.size() - 2].ratio;
    out.monotone = out.monotone && inc;
    rep.add({"monotone eps=" + fmt(e), pt.p, pt.q, pt.lhs, pt.rhs, pt.ratio, pbo_lower(pt.p, alpha, beta, n), inc});
  }
  std::vector<double> lx, ly;
  for (double e : options.fit_eps) {
    out.fit_points.push_back(evaluate(e));
    const auto& pt = out.fit_points.back();
    lx.push_back(std::log(pt.p / (pt.p - out.p0)));
    ly.push_back(std::log(pt.ratio));
  }
  out.slope_fit = fit_line(lx, ly);
  const bool in_band = out.slope_fit.slope >= out.band_lower && out.slope_fit.slope <= out.band_upper;
  for (const auto& pt : out.fit_points)
    rep.add({"fit eps=" + fmt(pt.eps), pt.p, pt.q, pt.lhs, pt.rhs, pt.ratio, pbo_lower(pt.p, alpha, beta, n), in_band});

  std::vector<double> ax;
  for (double y : options.log_y) {
    out.log_y.push_back(std::log(y));
    out.transform.push_back(fourier_at(f0, y).real());
    ax.push_back(std::abs(std::log(y)));
  }
  out.log_fit = fit_line(ax, out.transform);
  const bool log_ok = out.log_fit.r_squared > options.min_r_squared && out.log_fit.slope > 0.0;
  for (std::size_t k = 0; k < ax.size(); ++k)
    rep.add({"log_growth y=" + fmt(options.log_y[k]), 0.0, 0.0, out.transform[k], ax[k], out.transform[k] / ax[k],
             out.log_fit.slope, log_ok});

  rep.measure("slope", out.slope_fit.slope);
  rep.measure("band_lower", out.band_lower);
  rep.measure("band_upper", out.band_upper);
  rep.measure("log_fit_slope", out.log_fit.slope);
  rep.measure("log_fit_r_squared", out.log_fit.r_squared);
  rep.note("regime", "modulo absolute constant");
  return out;
}

// ---------------------------------------------------------------- dilation

double dilation_defect(const WeightSpec& w, const std::vector<std::size_t>& blocks, const std::vector<double>& p_vec,
                       const std::vector<double>& q_vec, std::size_t j) {
  const double m = static_cast<double>(blocks.at(j));
  return m * inv(q_vec.at(j)) - m - w.alpha.at(j) + m * inv(p_vec.at(j)) + w.beta.at(j);
}

VerificationReport dilation_necessity_check(const OperatorSpec& op, const WeightSpec& w, const std::vector<double>& p_vec,
                                            const std::vector<double>& q_vec, const std::vector<double>& lambda_grid,
                                            const GridFunction& f, double tol) {
  if (op.kind != OperatorSpec::Kind::fourier && op.kind != OperatorSpec::Kind::weighted_fourier)
    throw ConfigError("dilation check needs a Fourier-type operator");
  const auto& blocks = f.shape().blocks;
  const std::size_t l = blocks.size();
  w.validate(l);
  if (p_vec.size() != l || q_vec.size() != l) throw ConfigError("need one p and one q per block");
  if (lambda_grid.size() < 2) throw ConfigError("need at least two dilation factors");
  for (double lam : lambda_grid)
    if (!(lam > 0.0)) throw DomainError("dilation factors must be positive");

  VerificationReport rep;
  rep.check = "dilation";
  rep.note("operator", to_string(op.kind));
  rep.note("family", f.label().empty() ? "gaussian" : f.label());
  rep.note("tolerance", fmt(tol));

  auto ratio_at = [&](const std::vector<double>& lambdas, double& lhs, double& rhs) {
    const GridFunction g = dilate(f, lambdas, DilationMode::rescale);
    const GridFunction Fg = apply_weight(fourier(g, op.convention), w, WeightSide::alpha_negative);
    lhs = anisotropic_norm(Fg, q_vec, blocks);
    rhs = anisotropic_norm(apply_weight(g, w, WeightSide::beta_positive), p_vec, blocks);
    return lhs / rhs;
  };

  for (std::size_t j = 0; j < l; ++j) {
    std::vector<double> lx, ly;
    std::vector<VerificationRow> rows;
    for (double lam : lambda_grid) {
      std::vector<double> lambdas(l, 1.0);
      lambdas[j] = lam;
      VerificationRow row;
      row.member = "block " + std::to_string(j) + " lambda=" + fmt(lam);
      row.p = p_vec[j];
      row.q = q_vec[j];
      row.ratio = ratio_at(lambdas, row.lhs, row.rhs);
      lx.push_back(std::log(lam));
      ly.push_back(std::log(row.ratio));
      rows.push_back(row);
    }
    const LinearFit fit = fit_line(lx, ly);
    const double defect = dilation_defect(w, blocks, p_vec, q_vec, j);
    const bool ok = std::abs(fit.slope) <= tol;
    for (auto& row : rows) {
      row.constant = fit.slope;
      row.pass = ok;
      rep.add(row);
    }
    rep.measure("slope_block" + std::to_string(j), fit.slope);
    rep.measure("defect_block" + std::to_string(j), defect);
    if (!ok) rep.note("failure_block" + std::to_string(j), "measured slope " + fmt(fit.slope) + " (defect " + fmt(defect) + ")");
  }
  return rep;
}

VerificationReport dilation_necessity_check(const OperatorSpec& op, const WeightSpec& w, const std::vector<double>& p_vec,
                                            const std::vector<double>& q_vec, const std::vector<double>& lambda_grid,
                                            double tol) {
  std::size_t n = 0;
  n = w.alpha.size();
  if (n == 0) n = 1;
  // One axis per weight block.
  GridShape shape = GridShape::cube(n, 8.0, n == 1 ? 256 : 64);
  shape.blocks.assign(n, 1);
  const GridFunction f =
      GridFunction::sample(shape, [](std::span<const double> x) { return std::exp(-kPi * radius2(x)); }).with_label("gaussian");
  return dilation_necessity_check(op, w, p_vec, q_vec, lambda_grid, f, tol);
}

// ---------------------------------------------------------------- GLS transfer

VerificationReport verify_gls_transfer(const OperatorSpec& op, const PsiFunction& psi, const std::function<double(double)>& K,
                                       const ExponentMap& qmap, const TestFamily& family, const TransferOptions& options) {
  if (family.size() == 0) throw ConfigError("test family is empty");
  if (family.kind == TestFamily::Kind::power_tail) throw ConfigError("transfer check needs p-independent members");
  std::vector<double> p_grid = options.p_grid;
  if (p_grid.empty() && !psi.is_degenerate()) {
    for (double p : support_grid(psi.support()).points())
      if (qmap.domain().contains(p)) p_grid.push_back(p);
  }
  if (psi.is_degenerate()) p_grid = {psi.degenerate_point()};
  if (p_grid.empty()) throw ConfigError("psi support and exponent map domain do not overlap");
  std::vector<double> q_grid;
  for (double p : p_grid) q_grid.push_back(qmap.forward(p));
  const PsiFunction psi1 = transform_moment(psi, K, qmap);

  VerificationReport rep;
  rep.check = "transfer";
  rep.note("operator", to_string(op.kind));
  rep.note("family", to_string(family.kind));
  rep.note("psi", psi.label());
  rep.note("tolerance", fmt(options.tol));

  bool consistent = true;
  double best = -1.0, best_p = p_grid.front();
  std::size_t best_i = 0;
  std::vector<GridFunction> fs, us;
  for (std::size_t i = 0; i < family.size(); ++i) {
    fs.push_back(family.member(i, 2.0));
    us.push_back(apply(op, fs.back()));
    for (std::size_t k = 0; k < p_grid.size(); ++k) {
      const double r = lp_norm(us.back(), q_grid[k]) / (lp_norm(fs.back(), p_grid[k]) * K(p_grid[k]));
      if (r > 1.0 + options.tol) consistent = false;
      if (r > best) {
        best = r;
        best_p = p_grid[k];
        best_i = i;
      }
    }
    const GlsNormResult lhs = gls_norm_detail(us.back(), psi1, q_grid);
    const GlsNormResult rhs = gls_norm_detail(fs.back(), psi, p_grid);
    const double ratio = lhs.value / rhs.value;
    rep.add({family.member_name(i), rhs.argmax, lhs.argmax, lhs.value, rhs.value, ratio, 1.0, ratio <= 1.0 + options.tol});
  }
  rep.note("catalog", consistent ? "consistent" : "inconsistent");
  rep.measure("max_plain_ratio_over_K", best);

  const double r = options.probe.value_or(best_p);
  const PsiFunction dpsi = PsiFunction::degenerate(r);
  const PsiFunction dpsi1 = transform_moment(dpsi, K, qmap);
  const double qr = qmap.forward(r);
  const GridFunction& f = fs[best_i];
  const double lhs = gls_norm(us[best_i], dpsi1, {qr});
  const double rhs = gls_norm(f, dpsi, {r});
  rep.measure("probe_p", r);
  rep.measure("probe_ratio", lhs / rhs);
  rep.note("probe_member", family.member_name(best_i));
  return rep;
}

// ---------------------------------------------------------------- interpolation

VerificationReport verify_interpolation(const OperatorSpec& op, const Endpoint& e0, const Endpoint& e1, InterpolationKind kind,
                                        const TestFamily& family, double tol, std::size_t theta_steps) {
  if (family.size() == 0) throw ConfigError("test family is empty");
  if (family.kind == TestFamily::Kind::power_tail) throw ConfigError("interpolation check needs p-independent members");
  if (theta_steps < 2) throw ConfigError("need at least two theta steps");
  for (const auto* e : {&e0, &e1})
    if (!(e->p >= 1.0 && e->q >= 1.0 && e->M > 0.0)) throw DomainError("endpoints need p, q >= 1 and M > 0");

  VerificationReport rep;
  rep.check = "interpolation";
  rep.note("operator", to_string(op.kind));
  rep.note("family", to_string(family.kind));
  rep.note("kind", kind == InterpolationKind::riesz_thorin ? "riesz-thorin" : "marcinkiewicz");
  rep.note("tolerance", fmt(tol));
  if (kind == InterpolationKind::marcinkiewicz) rep.note("regime", "modulo absolute constant");

  std::vector<GridFunction> fs, us;
  for (std::size_t i = 0; i < family.size(); ++i) {
    fs.push_back(family.member(i, 2.0));
    us.push_back(apply(op, fs.back()));
  }
  bool endpoints_ok = true;
  for (const auto* e : {&e0, &e1}) {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const double lhs = lp_norm(us[i], e->q), rhs = lp_norm(fs[i], e->p);
      const bool ok = lhs <= e->M * rhs * (1.0 + tol);
      endpoints_ok = endpoints_ok && ok;
      rep.add({"endpoint " + family.member_name(i), e->p, e->q, lhs, rhs, lhs / rhs, e->M, ok});
    }
  }
  if (!endpoints_ok) {
    rep.note("aborted", "endpoint bound fails on the family");
    return rep;
  }
  for (std::size_t k = 1; k < theta_steps; ++k) {
    const double th = static_cast<double>(k) / static_cast<double>(theta_steps);
    const double ip = (1.0 - th) * inv(e0.p) + th * inv(e1.p);
    const double iq = (1.0 - th) * inv(e0.q) + th * inv(e1.q);
    const double p = 1.0 / ip, q = iq == 0.0 ? kInf : 1.0 / iq;
    const double bound = kind == InterpolationKind::riesz_thorin ? 2.0 * std::pow(e0.M, 1.0 - th) * std::pow(e1.M, th)
                                                                 : marcinkiewicz_factor(th) * std::max(e0.M, e1.M);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const double lhs = lp_norm(us[i], q), rhs = lp_norm(fs[i], p);
      rep.add({"theta=" + fmt(th) + " " + family.member_name(i), p, q, lhs, rhs, lhs / rhs, bound,
               lhs / rhs <= bound * (1.0 + tol)});
    }
  }
  return rep;
}

// ---------------------------------------------------------------- kernel bound

VerificationReport verify_kernel_bound(const Kernel& kernel, double p, double q, const TestFamily& family, double tol) {
  if (family.size() == 0) throw ConfigError("test family is empty");
  const double bound = kernel_norm_bound(kernel, p, q, family.shape);
  VerificationReport rep;
  rep.check = "kernel-bound";
  rep.note("operator", "integral_kernel");
  rep.note("kernel", kernel.label());
  rep.note("family", to_string(family.kind));
  rep.note("tolerance", fmt(tol));
  rep.measure("bound", bound);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const GridFunction f = family.member(i, p);
    const double lhs = lp_norm(kernel_apply(kernel, f), q), rhs = lp_norm(f, p);
    const double ratio = lhs / rhs;
    rep.add({family.member_name(i), p, q, lhs, rhs, ratio, bound, ratio <= bound * (1.0 + tol)});
  }
  return rep;
}

}  // namespace glspace
