#include "glspace/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glspace/error.hpp"
#include "glspace/numeric.hpp"

namespace glspace {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

void check_exponent(double p) {
  if (std::isnan(p) || p < 1.0) throw DomainError("exponent p must be >= 1");
}

double log_factor(double z, double theta) {
  if (theta == 0.0) return 1.0;
  return std::max(std::pow(std::abs(std::log(z)), theta), 1.0);
}

double entry(const std::vector<double>& v, std::size_t j) { return j < v.size() ? v[j] : 0.0; }

// max_i |v_i| combined with the tail sup, used to keep |f|^p in range.
double magnitude_scale(const std::vector<double>& mags, const TailModel* tail) {
  double m = 0.0;
  for (double x : mags) m = std::max(m, x);
  if (tail) m = std::max(m, tail->sup());
  return m;
}

double power_sum_norm(const std::vector<double>& mags, double volume, double p, const TailModel* tail,
                      double gamma) {
  const double m = magnitude_scale(mags, tail);
  if (m == 0.0) return 0.0;
  if (std::isinf(p)) return m;
  CompensatedSum s;
  for (double x : mags) s.add(std::pow(x / m, p));
  double total = s.value() * volume;
  if (tail) total += tail->power_integral(p, gamma, m);
  if (std::isinf(total)) return kInfinity;
  return m * std::pow(total, 1.0 / p);
}

}  // namespace

WeightSpec WeightSpec::uniform(std::size_t blocks, double alpha, double beta) {
  WeightSpec w;
  w.alpha.assign(blocks, alpha);
  w.beta.assign(blocks, beta);
  return w;
}

void WeightSpec::validate(std::size_t blocks) const {
  if (alpha.size() != blocks || beta.size() != blocks)
    throw ConfigError("weight exponents must be given per block");
  if ((!theta_alpha.empty() && theta_alpha.size() != blocks) || (!theta_beta.empty() && theta_beta.size() != blocks))
    throw ConfigError("log powers must be given per block");
  for (std::size_t j = 0; j < blocks; ++j) {
    if (!(alpha[j] >= 0.0 && alpha[j] < 1.0)) throw DomainError("alpha_j must lie in [0,1)");
    if (!(beta[j] >= 0.0 && beta[j] < 1.0)) throw DomainError("beta_j must lie in [0,1)");
    if (alpha[j] + beta[j] > 1.0) throw DomainError("alpha_j + beta_j must not exceed 1");
    if (entry(theta_alpha, j) < 0.0 || entry(theta_beta, j) < 0.0) throw DomainError("log powers must be >= 0");
  }
  if (!std::isfinite(mu)) throw DomainError("radial power must be finite");
}

bool WeightSpec::has_log_factor() const {
  auto nonzero = [](const std::vector<double>& v) {
    return std::any_of(v.begin(), v.end(), [](double t) { return t != 0.0; });
  };
  return nonzero(theta_alpha) || nonzero(theta_beta);
}

double weight_value(const WeightSpec& w, WeightSide side, const std::vector<std::size_t>& blocks,
                    std::span<const double> x) {
  if (side == WeightSide::radial_mu) {
    if (w.mu == 0.0) return 1.0;
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    if (r2 == 0.0 && w.mu < 0.0) throw InvariantError("weight evaluated at the origin");
    return std::pow(std::sqrt(r2), w.mu);
  }
  double value = 1.0;
  std::size_t axis = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    double r2 = 0.0;
    for (std::size_t k = 0; k < blocks[j]; ++k, ++axis) r2 += x[axis] * x[axis];
    const double r = std::sqrt(r2);
    const bool alpha_side = side == WeightSide::alpha_negative;
    const double e = alpha_side ? -entry(w.alpha, j) : entry(w.beta, j);
    const double theta = alpha_side ? entry(w.theta_alpha, j) : entry(w.theta_beta, j);
    if (r == 0.0 && (e < 0.0 || theta > 0.0)) throw InvariantError("weight evaluated at the origin");
    if (e != 0.0) value *= std::pow(r, e);
    value *= log_factor(r, theta);
  }
  return value;
}

double lp_norm(const GridFunction& f, double p) {
  check_exponent(p);
  return power_sum_norm(f.magnitudes(), f.shape().cell_volume(), p, f.tail().get(), 0.0);
}

double weighted_lp_norm(const GridFunction& f, double p, const WeightSpec& w, WeightSide side) {
  check_exponent(p);
  const auto& blocks = f.shape().blocks;
  if (side != WeightSide::radial_mu) w.validate(blocks.size());
  std::vector<double> mags = f.magnitudes();
  std::vector<double> x(f.dimension());
  for (std::size_t i = 0; i < mags.size(); ++i) {
    f.coordinates(i, x);
    mags[i] *= weight_value(w, side, blocks, x);
  }
  double gamma = 0.0;
  if (f.tail()) {
    if (side != WeightSide::radial_mu && w.has_log_factor())
      throw ConfigError("log-weighted tail integrals are not supported");
    const double e = side == WeightSide::alpha_negative ? -w.alpha[0]
                     : side == WeightSide::beta_positive ? w.beta[0]
                                                          : w.mu;
    gamma = std::isinf(p) ? 0.0 : e * p;
    if (std::isinf(p)) {
      // sup of |x|^e |g| over the tail: sampled on a log grid.
      double m = 0.0;
      for (double u : linspace(0.0, 40.0, 4001)) {
        const double xr = f.tail()->radius() * std::exp(u);
        m = std::max(m, std::pow(xr, e) * std::abs(f.tail()->value(xr)));
        if (f.tail()->sides() == TailSides::both) m = std::max(m, std::pow(xr, e) * std::abs(f.tail()->value(-xr)));
      }
      for (double v : mags) m = std::max(m, v);
      return m;
    }
    // Tail integral with |x|^gamma folded in; scale from the weighted grid samples.
    double m = 0.0;
    for (double v : mags) m = std::max(m, v);
    if (m == 0.0) m = std::max(f.tail()->sup(), std::numeric_limits<double>::min());
    CompensatedSum s;
    for (double v : mags) s.add(std::pow(v / m, p));
    const double total = s.value() * f.shape().cell_volume() + f.tail()->power_integral(p, gamma, m);
    if (std::isinf(total)) return kInfinity;
    return m * std::pow(total, 1.0 / p);
  }
  return power_sum_norm(mags, f.shape().cell_volume(), p, nullptr, 0.0);
}

GridFunction apply_weight(const GridFunction& f, const WeightSpec& w, WeightSide side) {
  const auto& blocks = f.shape().blocks;
  if (side != WeightSide::radial_mu) w.validate(blocks.size());
  const std::size_t n = f.size();
  std::vector<double> re(n), im;
  if (f.is_complex()) im.resize(n);
  std::vector<double> x(f.dimension());
  for (std::size_t i = 0; i < n; ++i) {
    f.coordinates(i, x);
    const double wt = weight_value(w, side, blocks, x);
    re[i] = wt * f.real()[i];
    if (f.is_complex()) im[i] = wt * f.imag()[i];
  }
  GridFunction out = f.is_complex() ? GridFunction(f.shape(), std::move(re), std::move(im))
                                    : GridFunction(f.shape(), std::move(re));
  return out.with_label(f.label());
}

double DecreasingRearrangement::operator()(double t) const {
  if (t < 0.0) throw DomainError("rearrangement argument must be nonnegative");
  const double k = std::floor(t / cell_mass);
  if (k >= static_cast<double>(values.size())) return 0.0;
  return values[static_cast<std::size_t>(k)];
}

double DecreasingRearrangement::lp_norm(double p) const {
  check_exponent(p);
  return power_sum_norm(values, cell_mass, p, nullptr, 0.0);
}

DecreasingRearrangement decreasing_rearrangement(const GridFunction& f) {
  if (f.tail()) throw ConfigError("rearrangement of a function with an analytic tail is not supported");
  DecreasingRearrangement r;
  r.values = f.magnitudes();
  std::stable_sort(r.values.begin(), r.values.end(), std::greater<>());
  r.cell_mass = f.shape().cell_volume();
  return r;
}

double lorentz_norm(const DecreasingRearrangement& fs, double p, double q) {
  if (std::isnan(p) || p < 1.0) throw DomainError("Lorentz p must lie in [1, inf]");
  if (std::isnan(q) || !(q > 0.0)) throw DomainError("Lorentz q must lie in (0, inf]");
  const auto& v = fs.values;
  const double m = v.empty() ? 0.0 : v.front();
  if (m == 0.0) return 0.0;
  const double mass = fs.cell_mass;
  if (std::isinf(q)) {
    if (std::isinf(p)) return m;
    double best = 0.0;
    for (std::size_t k = 0; k < v.size() && v[k] > 0.0; ++k)
      best = std::max(best, v[k] * std::pow(static_cast<double>(k + 1) * mass, 1.0 / p));
    return best;
  }
  if (std::isinf(p)) return kInfinity;
  // Exact for the step profile: (p/q) sum v_k^q (t_{k+1}^{q/p} - t_k^{q/p}).
  const double a = q / p;
  CompensatedSum s;
  for (std::size_t k = 0; k < v.size() && v[k] > 0.0; ++k) {
    double dt;
    if (k == 0) {
      dt = std::pow(mass, a);
    } else {
      const double kk = static_cast<double>(k);
      dt = std::pow(kk * mass, a) * std::expm1(a * std::log1p(1.0 / kk));
    }
    s.add(std::pow(v[k] / m, q) * dt);
  }
  return m * std::pow(s.value() / a, 1.0 / q);
}

double lorentz_norm(const GridFunction& f, double p, double q) {
  return lorentz_norm(decreasing_rearrangement(f), p, q);
}

double anisotropic_norm(const GridFunction& f, const std::vector<double>& p_vec,
                        const std::vector<std::size_t>& block_dims) {
  const auto& shape = f.shape();
  if (block_dims != shape.blocks) throw ConfigError("block dimensions do not match the function's blocks");
  if (p_vec.size() != block_dims.size()) throw ConfigError("need one exponent per block");
  for (double p : p_vec) check_exponent(p);
  if (block_dims.size() == 1) return lp_norm(f, p_vec[0]);
  if (f.tail()) throw ConfigError("tails are one-dimensional");

  std::vector<double> g = f.magnitudes();
  double m = 0.0;
  for (double x : g) m = std::max(m, x);
  if (m == 0.0) return 0.0;
  for (double& x : g) x /= m;

  std::size_t axis = 0;
  for (std::size_t j = 0; j < block_dims.size(); ++j) {
    std::size_t count = 1;
    double volume = 1.0;
    for (std::size_t k = 0; k < block_dims[j]; ++k, ++axis) {
      count *= shape.axes[axis].count;
      volume *= shape.axes[axis].spacing();
    }
    const std::size_t rest = g.size() / count;
    const double p = p_vec[j];
    std::vector<double> next(rest, 0.0);
    if (std::isinf(p)) {
      for (std::size_t i = 0; i < count; ++i)
        for (std::size_t r = 0; r < rest; ++r) next[r] = std::max(next[r], g[i * rest + r]);
    } else {
      std::vector<CompensatedSum> acc(rest);
      for (std::size_t i = 0; i < count; ++i)
        for (std::size_t r = 0; r < rest; ++r) acc[r].add(std::pow(g[i * rest + r], p));
      for (std::size_t r = 0; r < rest; ++r) next[r] = std::pow(acc[r].value() * volume, 1.0 / p);
    }
    g = std::move(next);
  }
  return m * g.front();
}

}  // namespace glspace
