#include "glspace/psi.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "glspace/error.hpp"
#include "glspace/norms.hpp"
#include "glspace/numeric.hpp"

namespace glspace {

namespace {

struct Tabulated {
  std::vector<double> knots;
  std::vector<double> values;
};

struct Point {
  double r;
  double value;
};

struct Composed {
  std::function<double(double)> rule;
};

void check_support(Support s) {
  if (std::isnan(s.lower) || std::isnan(s.upper) || s.lower < 1.0 || s.upper < s.lower || std::isinf(s.lower))
    throw ConfigError("support must satisfy 1 <= A < B <= inf");
  if (s.lower == s.upper && std::isinf(s.upper)) throw ConfigError("support point must be finite");
}

double positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and positive");
  return v;
}

}  // namespace

struct PsiFunction::Rep {
  Support support;
  std::string label;
  std::variant<ClosedForm, Tabulated, Point, Composed> rule;
};

PsiFunction PsiFunction::closed_form(Support support, ClosedForm params, std::string label) {
  check_support(support);
  if (support.is_point()) throw ConfigError("closed-form psi needs a nondegenerate support");
  positive(params.scale, "psi scale");
  if (params.left_pole < 0.0 || params.right_pole < 0.0) throw ConfigError("pole orders must be >= 0");
  if (params.right_pole > 0.0 && std::isinf(support.upper)) throw ConfigError("right pole needs a finite upper end");
  auto rep = std::make_shared<Rep>();
  rep->support = support;
  rep->label = label.empty() ? "closed-form" : std::move(label);
  rep->rule = params;
  return PsiFunction(std::move(rep));
}

PsiFunction PsiFunction::constant(Support support, double value, std::string label) {
  ClosedForm c;
  c.scale = value;
  return closed_form(support, c, label.empty() ? "constant" : std::move(label));
}

PsiFunction PsiFunction::tabulated(Support support, std::vector<double> knots, std::vector<double> values,
                                   std::string label) {
  check_support(support);
  if (support.is_point()) throw ConfigError("tabulated psi needs a nondegenerate support");
  if (knots.empty() || knots.size() != values.size()) throw ConfigError("tabulated psi: knots and values differ in size");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (i > 0 && !(knots[i] > knots[i - 1])) throw ConfigError("tabulated psi: knots must increase strictly");
    if (!(knots[i] >= support.lower && knots[i] <= support.upper)) throw ConfigError("tabulated psi: knot outside support");
    positive(values[i], "tabulated psi value");
  }
  auto rep = std::make_shared<Rep>();
  rep->support = support;
  rep->label = label.empty() ? "tabulated" : std::move(label);
  rep->rule = Tabulated{std::move(knots), std::move(values)};
  return PsiFunction(std::move(rep));
}

PsiFunction PsiFunction::degenerate(double r, double value, std::string label) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw DomainError("degenerate point must be finite and >= 1");
  positive(value, "degenerate psi value");
  auto rep = std::make_shared<Rep>();
  rep->support = {r, r};
  rep->label = label.empty() ? "degenerate" : std::move(label);
  rep->rule = Point{r, value};
  return PsiFunction(std::move(rep));
}

PsiFunction PsiFunction::composed(Support support, std::function<double(double)> rule, std::string label) {
  check_support(support);
  if (!rule) throw ConfigError("composed psi needs a rule");
  auto rep = std::make_shared<Rep>();
  rep->support = support;
  rep->label = std::move(label);
  rep->rule = Composed{std::move(rule)};
  return PsiFunction(std::move(rep));
}

Extended PsiFunction::operator()(double p) const {
  if (std::isnan(p) || p < 1.0) throw DomainError("psi evaluated at p < 1");
  const Support s = rep_->support;
  if (!s.contains(p)) return Extended::infinity();
  return std::visit(
      [&](const auto& r) -> Extended {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ClosedForm>) {
          double v = r.scale * std::pow(p, r.power);
          if (r.log_power != 0.0) v *= std::pow(1.0 + std::log(p), r.log_power);
          if (r.left_pole != 0.0) v *= std::pow(p - s.lower, -r.left_pole);
          if (r.right_pole != 0.0) v *= std::pow(s.upper - p, -r.right_pole);
          return Extended(v);
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          const auto& k = r.knots;
          if (p <= k.front()) return r.values.front();
          if (p >= k.back()) return r.values.back();
          const std::size_t i = static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), p) - k.begin());
          const double w = (p - k[i - 1]) / (k[i] - k[i - 1]);
          return Extended((1.0 - w) * r.values[i - 1] + w * r.values[i]);
        } else if constexpr (std::is_same_v<T, Point>) {
          return r.value;
        } else {
          const double v = r.rule(p);
          if (std::isinf(v) && v > 0.0) return Extended::infinity();
          return Extended(positive(v, "composed psi value"));
        }
      },
      rep_->rule);
}

PsiFunction::Kind PsiFunction::kind() const {
  switch (rep_->rule.index()) {
    case 0: return Kind::closed_form;
    case 1: return Kind::tabulated;
    case 2: return Kind::degenerate;
    default: return Kind::composed;
  }
}

Support PsiFunction::support() const { return rep_->support; }
const std::string& PsiFunction::label() const { return rep_->label; }

double PsiFunction::degenerate_point() const {
  if (!is_degenerate()) throw ConfigError("psi is not degenerate");
  return std::get<Point>(rep_->rule).r;
}

const ClosedForm& PsiFunction::closed_form_params() const {
  if (kind() != Kind::closed_form) throw ConfigError("psi is not closed-form");
  return std::get<ClosedForm>(rep_->rule);
}

const std::vector<double>& PsiFunction::knots() const {
  if (kind() != Kind::tabulated) throw ConfigError("psi is not tabulated");
  return std::get<Tabulated>(rep_->rule).knots;
}

const std::vector<double>& PsiFunction::knot_values() const {
  if (kind() != Kind::tabulated) throw ConfigError("psi is not tabulated");
  return std::get<Tabulated>(rep_->rule).values;
}

Extended psi_eval(const PsiFunction& psi, double p) { return psi(p); }

// ---------------------------------------------------------------- ExponentMap

ExponentMap ExponentMap::identity(Support domain) {
  check_support(domain);
  ExponentMap m;
  m.kind_ = Kind::identity;
  m.domain_ = m.codomain_ = domain;
  return m;
}

ExponentMap ExponentMap::conjugate(Support domain) {
  check_support(domain);
  if (!(domain.lower >= 1.0)) throw ConfigError("conjugate map needs p >= 1");
  ExponentMap m;
  m.kind_ = Kind::conjugate;
  m.domain_ = domain;
  m.increasing_ = false;
  auto conj = [](double p) { return std::isinf(p) ? 1.0 : (p == 1.0 ? kInf : p / (p - 1.0)); };
  m.codomain_ = {conj(domain.upper), conj(domain.lower)};
  return m;
}

ExponentMap ExponentMap::pbo(double alpha, double beta, int n) {
  if (n < 1) throw ConfigError("dimension must be positive");
  const double dn = n;
  if (!(alpha >= 0.0 && alpha < dn) || !(beta >= 0.0 && beta < dn)) throw DomainError("need 0 <= alpha, beta < n");
  ExponentMap m;
  m.kind_ = Kind::pbo;
  m.increasing_ = false;
  m.a_ = alpha;
  m.b_ = beta;
  m.c_ = dn;
  const double p0 = dn / (dn - beta);
  double upper = kInf;
  if (alpha > beta) upper = dn / (alpha - beta);
  if (!(upper > std::max(p0, 1.0))) throw DomainError("pbo exponent window is empty");
  m.domain_ = {std::max(p0, 1.0), upper};
  m.codomain_ = {m.forward(upper), m.forward(m.domain_.lower)};
  if (std::isnan(m.codomain_.lower)) m.codomain_.lower = dn / (dn - beta + alpha);
  return m;
}

ExponentMap ExponentMap::riesz_thorin(double p0, double p1, double q0, double q1) {
  if (!(p0 >= 1.0 && p0 < p1 && std::isfinite(p1))) throw ConfigError("need 1 <= p0 < p1 < inf");
  if (!(q0 >= 1.0 && q0 < q1)) throw ConfigError("need 1 <= q0 < q1 <= inf");
  ExponentMap m;
  m.kind_ = Kind::riesz_thorin;
  m.a_ = p0;
  m.b_ = p1;
  m.c_ = q0;
  m.d_ = q1;
  m.domain_ = {p0, p1};
  m.codomain_ = {q0, q1};
  return m;
}

ExponentMap ExponentMap::table(std::vector<double> p, std::vector<double> q) {
  if (p.size() < 2 || p.size() != q.size()) throw ConfigError("exponent table needs matching columns of length >= 2");
  const bool inc = q[1] > q[0];
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (!(p[i] > p[i - 1])) throw ConfigError("exponent table: p must increase strictly");
    if (inc ? !(q[i] > q[i - 1]) : !(q[i] < q[i - 1])) throw ConfigError("exponent table: q must be strictly monotone");
  }
  ExponentMap m;
  m.kind_ = Kind::table;
  m.increasing_ = inc;
  m.domain_ = {p.front(), p.back()};
  m.codomain_ = inc ? Support{q.front(), q.back()} : Support{q.back(), q.front()};
  check_support(m.domain_);
  check_support(m.codomain_);
  m.tp_ = std::move(p);
  m.tq_ = std::move(q);
  return m;
}

namespace {

double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

double piecewise(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const bool inc = xs.back() > xs.front();
  if (inc ? x <= xs.front() : x >= xs.front()) return ys.front();
  if (inc ? x >= xs.back() : x <= xs.back()) return ys.back();
  std::size_t i = 1;
  while (inc ? xs[i] < x : xs[i] > x) ++i;
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return (1.0 - w) * ys[i - 1] + w * ys[i];
}

}  // namespace

double ExponentMap::forward(double p) const {
  switch (kind_) {
    case Kind::identity: return p;
    case Kind::conjugate: return std::isinf(p) ? 1.0 : (p == 1.0 ? kInf : p / (p - 1.0));
    case Kind::pbo: {
      const double iq = 1.0 - inv(p) - (b_ - a_) / c_;
      return iq <= 0.0 ? kInf : 1.0 / iq;
    }
    case Kind::riesz_thorin: {
      const double theta = (1.0 / a_ - inv(p)) / (1.0 / a_ - 1.0 / b_);
      const double iq = (1.0 - theta) / c_ + theta * inv(d_);
      return iq <= 0.0 ? kInf : 1.0 / iq;
    }
    case Kind::table: return piecewise(tp_, tq_, p);
  }
  return p;
}

double ExponentMap::inverse(double q) const {
  switch (kind_) {
    case Kind::identity: return q;
    case Kind::conjugate: return std::isinf(q) ? 1.0 : (q == 1.0 ? kInf : q / (q - 1.0));
    case Kind::pbo: {
      const double ip = 1.0 - inv(q) - (b_ - a_) / c_;
      return ip <= 0.0 ? kInf : 1.0 / ip;
    }
    case Kind::riesz_thorin: return interpolation_exponent(q, a_, b_, c_, d_);
    case Kind::table: return piecewise(tq_, tp_, q);
  }
  return q;
}

// ---------------------------------------------------------------- transforms

namespace {

bool same_support(Support a, Support b) {
  auto close = [](double x, double y) {
    if (std::isinf(x) || std::isinf(y)) return x == y;
    return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y));
  };
  return close(a.lower, b.lower) && close(a.upper, b.upper);
}

}  // namespace

PsiFunction transform_moment(const PsiFunction& psi, std::function<double(double)> K, const ExponentMap& qmap) {
  if (!K) throw ConfigError("moment transform needs K");
  if (psi.is_degenerate()) {
    const double r = psi.degenerate_point();
    const Support d = qmap.domain();
    if (!(r >= d.lower && r <= d.upper)) throw ConfigError("degenerate point outside the exponent map domain");
    const double k = positive(K(r), "K");
    return PsiFunction::degenerate(qmap.forward(r), k * psi(r).value(), psi.label() + "|moment");
  }
  if (!same_support(psi.support(), qmap.domain()))
    throw ConfigError("psi support does not match the exponent map domain");
  auto rule = [psi, K = std::move(K), qmap](double q) {
    const double r = qmap.inverse(q);
    const Extended v = psi(r);
    if (v.is_infinite()) return kInf;
    return positive(K(r), "K") * v.value();
  };
  return PsiFunction::composed(qmap.codomain(), rule, psi.label() + "|moment");
}

double interpolation_theta(double q, double q0, double q1) { return (1.0 / q0 - inv(q)) / (1.0 / q0 - inv(q1)); }

double interpolation_exponent(double q, double p0, double p1, double q0, double q1) {
  const double theta = interpolation_theta(q, q0, q1);
  return 1.0 / ((1.0 - theta) / p0 + theta / p1);
}

PsiFunction interpolation_psi(InterpolationKind kind, const PsiFunction& psi, double p0, double p1, double q0,
                              double q1, double M0, double M1) {
  if (!(p0 >= 1.0 && p0 < p1 && std::isfinite(p1))) throw ConfigError("need 1 <= p0 < p1 < inf");
  if (!(q0 >= 1.0 && q0 < q1)) throw ConfigError("need 1 <= q0 < q1 <= inf");
  positive(M0, "M0");
  positive(M1, "M1");
  if (!same_support(psi.support(), Support{p0, p1})) throw ConfigError("psi support must equal (p0, p1)");
  if (kind == InterpolationKind::riesz_thorin) {
    auto rule = [=](double q) {
      const double theta = interpolation_theta(q, q0, q1);
      const Extended v = psi(interpolation_exponent(q, p0, p1, q0, q1));
      if (v.is_infinite()) return kInf;
      return 2.0 * std::pow(M0, 1.0 - theta) * std::pow(M1, theta) * v.value();
    };
    return PsiFunction::composed({q0, q1}, rule, psi.label() + "|riesz-thorin");
  }
  if (std::isinf(q1)) throw ConfigError("Marcinkiewicz psi needs a finite q1");
  auto rule = [=](double q) {
    const Extended v = psi(interpolation_exponent(q, p0, p1, q0, q1));
    if (v.is_infinite()) return kInf;
    return v.value() / ((q - q0) * (q1 - q));
  };
  return PsiFunction::composed({q0, q1}, rule, psi.label() + "|marcinkiewicz");
}

// ---------------------------------------------------------------- sups

ExponentGrid support_grid(Support s, std::size_t count, double infinity_cap) {
  ExponentGrid g;
  g.start = s.lower;
  g.stop = s.upper;
  g.count = count;
  g.spacing = Spacing::geometric;
  g.infinity_cap = infinity_cap;
  return g;
}

namespace {

std::vector<double> support_points(Support s, std::size_t count, double cap) {
  if (s.is_point()) return {s.lower};
  return support_grid(s, count, cap).points();
}

}  // namespace

double fundamental_function(const PsiFunction& psi, double delta, std::size_t count, double infinity_cap) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive");
  double best = 0.0;
  for (double p : support_points(psi.support(), count, infinity_cap))
    best = std::max(best, divide(std::pow(delta, 1.0 / p), psi(p)));
  return best;
}

Extended combined_constant(const std::function<double(double, double)>& K, const PsiFunction& psi,
                           const PsiFunction& nu, const std::function<ExponentInterval(double)>& Q,
                           std::size_t count, double infinity_cap) {
  double best = kInf;
  bool any = false;
  for (double p : support_points(psi.support(), count, infinity_cap)) {
    const ExponentInterval qi = Q(p);
    if (std::isnan(qi.lower) || std::isnan(qi.upper) || qi.upper < qi.lower) continue;
    std::vector<double> qs;
    if (qi.lower == qi.upper)
      qs = {qi.lower};
    else
      qs = support_points({std::max(qi.lower, 1.0), qi.upper}, count, infinity_cap);
    double sup = 0.0;
    bool used = false;
    for (double q : qs) {
      if (q < 1.0) continue;
      const double k = K(p, q);
      if (std::isnan(k) || k < 0.0) throw DomainError("K must be nonnegative");
      const Extended n = nu(q);
      if (n.is_infinite()) {
        used = true;
        continue;
      }
      sup = std::max(sup, k * psi(p).value() / n.value());
      used = true;
    }
    if (!used) continue;
    any = true;
    best = std::min(best, sup);
  }
  if (!any) throw ConfigError("Q(p) is empty for every p");
  if (std::isinf(best)) return Extended::infinity();
  return Extended(best);
}

GlsNormResult gls_norm_detail(const GridFunction& f, const PsiFunction& psi, const std::vector<double>& p_grid) {
  if (psi.is_degenerate()) {
    const double r = psi.degenerate_point();
    return {lp_norm(f, r) / psi(r).value(), r};
  }
  if (p_grid.empty()) throw ConfigError("GLS norm needs a nonempty exponent grid");
  std::vector<double> ps = p_grid;
  std::sort(ps.begin(), ps.end());
  GlsNormResult res{0.0, ps.front()};
  bool first = true;
  for (double p : ps) {
    const Extended v = psi(p);
    if (v.is_infinite()) continue;
    const double ratio = lp_norm(f, p) / v.value();
    if (first || ratio > res.value) {
      res = {ratio, p};
      first = false;
    }
  }
  return res;
}

double gls_norm(const GridFunction& f, const PsiFunction& psi, const std::vector<double>& p_grid) {
  return gls_norm_detail(f, psi, p_grid).value;
}

PsiFunction natural_psi(const GridFunction& f, Support support, const std::vector<double>& p_grid) {
  std::vector<double> ps = p_grid;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::vector<double> vals;
  for (double p : ps) {
    if (!support.contains(p)) throw ConfigError("natural psi grid must lie inside the support");
    vals.push_back(lp_norm(f, p));
  }
  return PsiFunction::tabulated(support, ps, vals, "natural");
}

BoydIndices boyd_indices(const ProductPsi& psi, const std::vector<double>& s_grid, const std::vector<double>& t_grid,
                         std::size_t count, double infinity_cap) {
  const auto p1 = support_points(psi.first.support(), count, infinity_cap);
  const auto p2 = support_points(psi.second.support(), count, infinity_cap);
  // log sup_{p1,p2} s^{1/p1} t^{1/p2}
  auto log_norm = [&](double s, double t) {
    double best = -kInf;
    for (double a : p1)
      for (double b : p2) best = std::max(best, std::log(s) / a + std::log(t) / b);
    return best;
  };
  auto slope = [&](const std::vector<double>& grid, bool above, bool first_axis) {
    std::vector<double> x, y;
    for (double s : grid) {
      if (!(s > 0.0)) throw DomainError("scale grids must be positive");
      if (above ? s <= 1.0 : s >= 1.0) continue;
      x.push_back(std::log(s));
      y.push_back(first_axis ? log_norm(s, 1.0) : log_norm(1.0, s));
    }
    if (x.size() < 2) throw ConfigError("scale grid needs two or more points on each side of 1");
    return std::clamp(fit_line(x, y).slope, 0.0, 1.0);
  };
  BoydIndices b;
  b.alpha_upper = slope(s_grid, true, true);
  b.alpha_lower = slope(s_grid, false, true);
  b.beta_upper = slope(t_grid, true, false);
  b.beta_lower = slope(t_grid, false, false);
  return b;
}

}  // namespace glspace
