#include "glspace/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "glspace/error.hpp"
#include "glspace/numeric.hpp"

namespace glspace {

GridShape GridShape::cube(std::size_t n, double half_width, std::size_t count) {
  GridShape s;
  s.axes.assign(n, Axis{half_width, count});
  s.blocks = {n};
  return s;
}

std::size_t GridShape::size() const {
  std::size_t s = 1;
  for (const auto& a : axes) s *= a.count;
  return s;
}

double GridShape::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes) v *= a.spacing();
  return v;
}

void GridShape::validate() const {
  if (axes.empty()) throw ConfigError("grid needs at least one axis");
  for (const auto& a : axes) {
    if (a.count < 2 || a.count % 2 != 0)
      throw ConfigError("grid axis needs an even sample count >= 2 so no cell center sits at the origin");
    if (!(a.half_width > 0.0) || !std::isfinite(a.half_width))
      throw ConfigError("grid axis half-width must be positive and finite");
  }
  std::size_t total = 0;
  for (std::size_t m : blocks) {
    if (m == 0) throw ConfigError("block dimensions must be positive");
    total += m;
  }
  if (total != axes.size()) throw ConfigError("block dimensions must sum to the grid dimension");
}

// ---------------------------------------------------------------- PowerSumTail

PowerSumTail::PowerSumTail(double radius, TailSides sides, std::vector<PowerTerm> terms)
    : radius_(radius), sides_(sides) {
  if (!(radius > 0.0)) throw ConfigError("tail radius must be positive");
  for (const auto& t : terms) {
    if (!std::isfinite(t.coefficient) || !std::isfinite(t.exponent))
      throw ConfigError("tail terms must be finite");
    if (t.coefficient == 0.0) continue;
    auto it = std::find_if(terms_.begin(), terms_.end(), [&](const PowerTerm& u) { return u.exponent == t.exponent; });
    if (it != terms_.end())
      it->coefficient += t.coefficient;
    else
      terms_.push_back(t);
  }
  std::sort(terms_.begin(), terms_.end(), [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
}

double PowerSumTail::value(double x) const {
  const double ax = std::abs(x);
  double v = 0.0;
  for (const auto& t : terms_) v += t.coefficient * std::pow(ax, -t.exponent);
  return v;
}

double PowerSumTail::power_integral(double p, double gamma, double scale) const {
  if (terms_.empty()) return 0.0;
  const PowerTerm& d = terms_.front();
  const double kappa = p * d.exponent - gamma - 1.0;
  if (!(kappa > 0.0)) return std::numeric_limits<double>::infinity();
  const double a = std::abs(d.coefficient) / scale;
  const double lead = std::exp(p * std::log(a) + (1.0 + gamma - p * d.exponent) * std::log(radius_));
  double rest = 0.0;
  if (terms_.size() > 1) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < terms_.size(); ++k) gap = std::min(gap, terms_[k].exponent - d.exponent);
    auto excess = [&](double u) {
      double r = 0.0;
      for (std::size_t k = 1; k < terms_.size(); ++k)
        r += terms_[k].coefficient / d.coefficient * std::exp((d.exponent - terms_[k].exponent) * (std::log(radius_) + u));
      return std::exp(-kappa * u) * (std::pow(std::abs(1.0 + r), p) - 1.0);
    };
    const double upper = 60.0 / (kappa + gap);
    rest = simpson(excess, 0.0, upper, 8000);
  }
  const double one = lead * (1.0 / kappa + rest);
  return sides_ == TailSides::both ? 2.0 * one : one;
}

double PowerSumTail::sup() const {
  double m = 0.0;
  for (double u : linspace(0.0, 40.0, 4001)) m = std::max(m, std::abs(value(radius_ * std::exp(u))));
  return m;
}

std::shared_ptr<const TailModel> PowerSumTail::transformed(double lambda, double c) const {
  if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
  std::vector<PowerTerm> t = terms_;
  for (auto& term : t) term.coefficient *= c * std::pow(lambda, -term.exponent);
  return std::make_shared<PowerSumTail>(radius_ / lambda, sides_, std::move(t));
}

std::string PowerSumTail::describe() const {
  std::ostringstream os;
  os << "power-sum tail R=" << radius_ << (sides_ == TailSides::both ? " both" : " right");
  for (const auto& t : terms_) os << " " << t.coefficient << "|x|^-" << t.exponent;
  return os.str();
}

// ---------------------------------------------------------------- PowerLogTail

PowerLogTail::PowerLogTail(double radius, TailSides sides, std::vector<PowerTerm> power, std::vector<PowerTerm> log_terms)
    : radius_(radius), sides_(sides), power_(std::move(power)), log_(std::move(log_terms)) {
  if (!(radius > 0.0)) throw ConfigError("tail radius must be positive");
  for (const auto* v : {&power_, &log_})
    for (const auto& t : *v)
      if (!std::isfinite(t.coefficient) || !std::isfinite(t.exponent)) throw ConfigError("tail terms must be finite");
}

double PowerLogTail::value(double x) const {
  const double ax = std::abs(x);
  double v = 0.0, w = 0.0;
  for (const auto& t : power_) v += t.coefficient * std::pow(ax, -t.exponent);
  for (const auto& t : log_) w += t.coefficient * std::pow(ax, -t.exponent);
  return v + std::log(ax) * w;
}

double PowerLogTail::power_integral(double p, double gamma, double scale) const {
  double e = std::numeric_limits<double>::infinity();
  for (const auto* v : {&power_, &log_})
    for (const auto& t : *v)
      if (t.coefficient != 0.0) e = std::min(e, t.exponent);
  if (std::isinf(e)) return 0.0;
  const double kappa = p * e - gamma - 1.0;
  if (!(kappa > 0.0)) return std::numeric_limits<double>::infinity();
  // u = log(x / R); the integrand decays like u^p e^{-kappa u}.
  auto F = [&](double u) {
    const double x = radius_ * std::exp(u);
    return std::exp(p * std::log(std::abs(value(x)) / scale) + (gamma + 1.0) * std::log(x));
  };
  const double U = std::min(600.0, 80.0 / kappa);
  double one = simpson(F, 0.0, U, 20000);
  const double end = F(U), inner = F(U - 1.0);
  if (end > 0.0) {
    const double k = inner > end ? std::log(inner / end) : 0.0;
    if (k < 1e-3) return std::numeric_limits<double>::infinity();
    one += end / k;
  }
  return sides_ == TailSides::both ? 2.0 * one : one;
}

double PowerLogTail::sup() const {
  double m = 0.0;
  for (double u : linspace(0.0, 40.0, 4001)) m = std::max(m, std::abs(value(radius_ * std::exp(u))));
  return m;
}

std::shared_ptr<const TailModel> PowerLogTail::transformed(double lambda, double c) const {
  if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
  // c d (lambda x)^{-e} log(lambda x) = c d lambda^{-e} x^{-e} (log x + log lambda)
  std::vector<PowerTerm> power = power_, logs = log_;
  for (auto& t : power) t.coefficient *= c * std::pow(lambda, -t.exponent);
  for (auto& t : logs) {
    t.coefficient *= c * std::pow(lambda, -t.exponent);
    power.push_back({t.coefficient * std::log(lambda), t.exponent});
  }
  return std::make_shared<PowerLogTail>(radius_ / lambda, sides_, std::move(power), std::move(logs));
}

std::string PowerLogTail::describe() const {
  std::ostringstream os;
  os << "power-log tail R=" << radius_ << (sides_ == TailSides::both ? " both" : " right");
  for (const auto& t : power_) os << " " << t.coefficient << "|x|^-" << t.exponent;
  for (const auto& t : log_) os << " " << t.coefficient << "log|x||x|^-" << t.exponent;
  return os.str();
}

// ---------------------------------------------------------------- MaximalTail

MaximalTail::MaximalTail(std::vector<double> edges, std::vector<double> masses, double scale)
    : edges_(std::move(edges)), scale_(scale) {
  if (edges_.size() != masses.size() + 1 || masses.empty()) throw ConfigError("maximal tail: edges/masses mismatch");
  const std::size_t n = masses.size();
  right_mass_.assign(n + 1, 0.0);
  left_mass_.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) right_mass_[i] = right_mass_[i + 1] + masses[i];
  for (std::size_t i = 0; i < n; ++i) left_mass_[i + 1] = left_mass_[i] + masses[i];
  std::vector<double> ra(edges_), la(n + 1), lm(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    la[j] = -edges_[n - j];
    lm[j] = left_mass_[n - j];
  }
  right_hull_ = upper_hull(std::move(ra), right_mass_);
  left_hull_ = upper_hull(std::move(la), std::move(lm));
}

MaximalTail::Hull MaximalTail::upper_hull(std::vector<double> a, std::vector<double> m) {
  Hull h;
  for (std::size_t j = 0; j < a.size(); ++j) {
    while (h.a.size() >= 2) {
      const std::size_t k = h.a.size();
      const double cross = (h.a[k - 1] - h.a[k - 2]) * (m[j] - h.m[k - 2]) - (h.m[k - 1] - h.m[k - 2]) * (a[j] - h.a[k - 2]);
      if (cross < 0.0) break;
      h.a.pop_back();
      h.m.pop_back();
    }
    h.a.push_back(a[j]);
    h.m.push_back(m[j]);
  }
  return h;
}

// max_j m_j / (2 (x - a_j)) is attained on the upper hull, where it is unimodal.
double MaximalTail::one_side(double x, bool right) const {
  const Hull& h = right ? right_hull_ : left_hull_;
  const double X = right ? x : -x;
  auto f = [&](std::size_t k) {
    const double dist = X - h.a[k];
    return h.m[k] <= 0.0 || dist <= 0.0 ? 0.0 : h.m[k] / (2.0 * dist);
  };
  std::size_t lo = 0, hi = h.a.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (f(mid + 1) > f(mid))
      lo = mid + 1;
    else
      hi = mid;
  }
  return scale_ * f(lo);
}

double MaximalTail::value(double x) const {
  if (x >= edges_.back()) return one_side(x, true);
  if (x <= edges_.front()) return one_side(x, false);
  return 0.0;
}

double MaximalTail::side_integral(double p, double scale, bool right) const {
  const double r0 = right ? edges_.back() : -edges_.front();
  const double umax = std::log(1e4);
  auto g = [&](double u) {
    const double x = r0 * std::exp(u);
    return std::pow(one_side(right ? x : -x, right) / scale, p) * x;
  };
  const double body = simpson(g, 0.0, umax, 4000);
  // Beyond X the full-mass ball wins: (M/2)^p (X - t*)^{1-p} / (p - 1).
  const double X = r0 * std::exp(umax);
  const double total = right ? right_mass_.front() : left_mass_.back();
  if (total <= 0.0) return body;
  std::size_t star = 0;
  double best = -1.0;
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const double mass = right ? right_mass_[j] : left_mass_[j];
    const double dist = right ? X - edges_[j] : edges_[j] + X;
    if (mass > 0.0 && mass / dist > best) {
      best = mass / dist;
      star = j;
    }
  }
  const double mass = right ? right_mass_[star] : left_mass_[star];
  const double dist = right ? X - edges_[star] : edges_[star] + X;
  const double remainder = std::pow(scale_ * mass / (2.0 * scale), p) * std::pow(dist, 1.0 - p) / (p - 1.0);
  return body + remainder;
}

double MaximalTail::power_integral(double p, double gamma, double scale) const {
  if (gamma != 0.0) throw ConfigError("maximal tail supports unweighted integrals only");
  if (!(p > 1.0)) return std::numeric_limits<double>::infinity();
  return side_integral(p, scale, true) + side_integral(p, scale, false);
}

double MaximalTail::sup() const {
  return std::max(value(edges_.back()), value(edges_.front()));
}

std::shared_ptr<const TailModel> MaximalTail::transformed(double lambda, double c) const {
  if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
  std::vector<double> edges = edges_;
  for (double& e : edges) e /= lambda;
  std::vector<double> masses(edges_.size() - 1);
  for (std::size_t i = 0; i < masses.size(); ++i) masses[i] = (left_mass_[i + 1] - left_mass_[i]) / lambda;
  return std::make_shared<MaximalTail>(std::move(edges), std::move(masses), scale_ * std::abs(c));
}

std::string MaximalTail::describe() const {
  std::ostringstream os;
  os << "maximal tail R=" << edges_.back() << " mass=" << right_mass_.front();
  return os.str();
}

// ---------------------------------------------------------------- GridFunction

namespace {

void check_samples(const std::vector<double>& v, std::size_t expected) {
  if (v.size() != expected) throw ConfigError("sample count does not match grid shape");
  for (double x : v)
    if (!std::isfinite(x)) throw ConfigError("grid samples must be finite");
}

GridShape normalized(GridShape shape) {
  if (shape.blocks.empty()) shape.blocks = {shape.axes.size()};
  shape.validate();
  return shape;
}

}  // namespace

GridFunction::GridFunction(GridShape shape, std::vector<double> real) : shape_(normalized(std::move(shape))) {
  check_samples(real, shape_.size());
  re_ = std::make_shared<const std::vector<double>>(std::move(real));
}

GridFunction::GridFunction(GridShape shape, std::vector<double> real, std::vector<double> imag)
    : shape_(normalized(std::move(shape))) {
  check_samples(real, shape_.size());
  check_samples(imag, shape_.size());
  re_ = std::make_shared<const std::vector<double>>(std::move(real));
  im_ = std::make_shared<const std::vector<double>>(std::move(imag));
}

GridFunction GridFunction::sample(const GridShape& shape, const std::function<double(std::span<const double>)>& fn) {
  GridShape s = normalized(shape);
  std::vector<double> v(s.size());
  GridFunction probe(s, std::vector<double>(s.size(), 0.0));
  std::vector<double> x(s.dimension());
  for (std::size_t i = 0; i < v.size(); ++i) {
    probe.coordinates(i, x);
    v[i] = fn(x);
  }
  return GridFunction(std::move(s), std::move(v));
}

GridFunction GridFunction::sample_complex(const GridShape& shape,
                                          const std::function<std::complex<double>(std::span<const double>)>& fn) {
  GridShape s = normalized(shape);
  std::vector<double> re(s.size()), im(s.size());
  GridFunction probe(s, std::vector<double>(s.size(), 0.0));
  std::vector<double> x(s.dimension());
  for (std::size_t i = 0; i < re.size(); ++i) {
    probe.coordinates(i, x);
    const auto z = fn(x);
    re[i] = z.real();
    im[i] = z.imag();
  }
  return GridFunction(std::move(s), std::move(re), std::move(im));
}

std::span<const double> GridFunction::imag() const {
  if (!im_) return {};
  return *im_;
}

std::vector<double> GridFunction::magnitudes() const {
  std::vector<double> m(size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = magnitude(i);
  return m;
}

std::vector<std::size_t> GridFunction::strides() const {
  const std::size_t n = dimension();
  std::vector<std::size_t> s(n, 1);
  for (std::size_t a = n - 1; a-- > 0;) s[a] = s[a + 1] * shape_.axes[a + 1].count;
  return s;
}

void GridFunction::coordinates(std::size_t i, std::span<double> x) const {
  for (std::size_t a = dimension(); a-- > 0;) {
    const std::size_t c = shape_.axes[a].count;
    x[a] = shape_.axes[a].center(i % c);
    i /= c;
  }
}

GridFunction GridFunction::with_label(std::string label) const {
  GridFunction g = *this;
  g.label_ = std::move(label);
  return g;
}

GridFunction GridFunction::with_profile(std::string profile) const {
  GridFunction g = *this;
  g.profile_ = std::move(profile);
  return g;
}

GridFunction GridFunction::with_tail(std::shared_ptr<const TailModel> tail) const {
  if (tail) {
    if (dimension() != 1) throw ConfigError("tail models are one-dimensional");
    if (std::abs(tail->radius() - shape_.axes[0].half_width) > 1e-12 * shape_.axes[0].half_width)
      throw ConfigError("tail radius must equal the grid half-width");
  }
  GridFunction g = *this;
  g.tail_ = std::move(tail);
  return g;
}

GridFunction GridFunction::scaled(std::complex<double> c) const {
  if (tail_ && c.imag() != 0.0) throw ConfigError("complex scaling of a function with a real tail");
  GridFunction g = *this;
  const std::size_t n = size();
  if (c.imag() == 0.0 && !im_) {
    std::vector<double> re(n);
    for (std::size_t i = 0; i < n; ++i) re[i] = c.real() * (*re_)[i];
    g.re_ = std::make_shared<const std::vector<double>>(std::move(re));
  } else {
    std::vector<double> re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto z = c * value(i);
      re[i] = z.real();
      im[i] = z.imag();
    }
    g.re_ = std::make_shared<const std::vector<double>>(std::move(re));
    g.im_ = std::make_shared<const std::vector<double>>(std::move(im));
  }
  if (tail_) g.tail_ = tail_->transformed(1.0, c.real());
  return g;
}

GridFunction GridFunction::conj() const {
  if (!im_) return *this;
  GridFunction g = *this;
  std::vector<double> im(size());
  for (std::size_t i = 0; i < im.size(); ++i) im[i] = -(*im_)[i];
  g.im_ = std::make_shared<const std::vector<double>>(std::move(im));
  return g;
}

GridFunction GridFunction::abs() const {
  GridFunction g(shape_, magnitudes());
  g.label_ = label_;
  g.tail_ = tail_;
  return g;
}

namespace {

GridFunction combine(const GridFunction& a, const GridFunction& b, double sign) {
  if (!(a.shape() == b.shape())) throw ConfigError("grid shapes differ");
  const std::size_t n = a.size();
  std::vector<double> re(n);
  for (std::size_t i = 0; i < n; ++i) re[i] = a.real()[i] + sign * b.real()[i];
  if (!a.is_complex() && !b.is_complex()) return GridFunction(a.shape(), std::move(re));
  std::vector<double> im(n);
  for (std::size_t i = 0; i < n; ++i) im[i] = a.value(i).imag() + sign * b.value(i).imag();
  return GridFunction(a.shape(), std::move(re), std::move(im));
}

}  // namespace

GridFunction add(const GridFunction& a, const GridFunction& b) { return combine(a, b, 1.0); }
GridFunction subtract(const GridFunction& a, const GridFunction& b) { return combine(a, b, -1.0); }

}  // namespace glspace
