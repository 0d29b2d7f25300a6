#include "glspace/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "glspace/error.hpp"
#include "glspace/exponent_grid.hpp"
#include "glspace/numeric.hpp"

namespace glspace {

namespace {

constexpr double kPi = std::numbers::pi;

double conj_exp(double p) { return std::isinf(p) ? 1.0 : (p == 1.0 ? kInf : p / (p - 1.0)); }

// p^{1/p}, with the p -> inf limit 1.
double root_power(double p) { return std::isinf(p) ? 1.0 : std::pow(p, 1.0 / p); }

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(ConstantKind k) {
  switch (k) {
    case ConstantKind::okikiolu: return "okikiolu";
    case ConstantKind::riesz_potential: return "riesz_potential";
    case ConstantKind::beckner_A: return "beckner_A";
    case ConstantKind::young_convolution: return "young_convolution";
    case ConstantKind::pichorides: return "pichorides";
    case ConstantKind::fractional_sobolev: return "fractional_sobolev";
    case ConstantKind::stein_weiss: return "stein_weiss";
    case ConstantKind::maximal_envelope: return "maximal_envelope";
    case ConstantKind::calderon_zygmund_envelope: return "calderon_zygmund_envelope";
    case ConstantKind::maximal_fourier_envelope: return "maximal_fourier_envelope";
    case ConstantKind::pbo_lower: return "pbo_lower";
    case ConstantKind::pbo_upper: return "pbo_upper";
    case ConstantKind::aniso_pbo_lower: return "aniso_pbo_lower";
    case ConstantKind::aniso_pbo_upper: return "aniso_pbo_upper";
    case ConstantKind::marcinkiewicz_factor: return "marcinkiewicz_factor";
  }
  return "?";
}

std::vector<ConstantKind> all_constant_kinds() {
  return {ConstantKind::okikiolu,         ConstantKind::riesz_potential,
          ConstantKind::beckner_A,        ConstantKind::young_convolution,
          ConstantKind::pichorides,       ConstantKind::fractional_sobolev,
          ConstantKind::stein_weiss,      ConstantKind::maximal_envelope,
          ConstantKind::calderon_zygmund_envelope, ConstantKind::maximal_fourier_envelope,
          ConstantKind::pbo_lower,        ConstantKind::pbo_upper,
          ConstantKind::aniso_pbo_lower,  ConstantKind::aniso_pbo_upper,
          ConstantKind::marcinkiewicz_factor};
}

ConstantKind constant_kind_from_string(const std::string& s) {
  for (auto k : all_constant_kinds())
    if (to_string(k) == s) return k;
  throw ConfigError("unknown constant kind '" + s + "'");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::exact: return "exact";
    case Regime::envelope: return "envelope";
    case Regime::ambiguous: return "ambiguous";
  }
  return "?";
}

double beckner_A(double p, int n) {
  require(p >= 1.0 && p <= 2.0, "beckner_A needs p in [1, 2]");
  require(n >= 1, "dimension must be positive");
  return std::pow(root_power(p) / root_power(conj_exp(p)), 0.5 * n);
}

double pichorides(double p) {
  require(p > 1.0 && std::isfinite(p), "pichorides needs p in (1, inf)");
  const double a = kPi / (2.0 * p);
  return p <= 2.0 ? std::tan(a) : 1.0 / std::tan(a);
}

double fractional_sobolev(int n, double s, double p) {
  require(n >= 1, "dimension must be positive");
  require(s > 0.0 && s < n, "fractional_sobolev needs 0 < s < n");
  require(p > 1.0 && p < n / s, "fractional_sobolev needs 1 < p < n/s");
  const double dn = n;
  return std::pow(kPi, s / 2.0) * std::tgamma((dn - s) / 2.0) / std::tgamma((dn + s) / 2.0) *
         std::pow(std::tgamma(s) / std::tgamma(dn / 2.0), s / dn);
}

double pbo_lower(double p, double alpha, double beta, int n) {
  require(n >= 1, "dimension must be positive");
  require(alpha >= 0.0 && beta >= 0.0 && beta < n, "pbo needs alpha >= 0, 0 <= beta < n");
  const double p0 = n / (n - beta);
  require(p > p0, "pbo needs p > p0 = n/(n - beta)");
  return std::pow(p / (p - p0), (alpha + beta) / n);
}

double pbo_upper(double p, double alpha, double beta, int n) {
  require(n >= 1, "dimension must be positive");
  require(alpha >= 0.0 && beta >= 0.0 && beta < n, "pbo needs alpha >= 0, 0 <= beta < n");
  const double p0 = n / (n - beta);
  require(p > p0, "pbo needs p > p0 = n/(n - beta)");
  return std::pow(p / (p - p0), std::max(1.0, (alpha + beta) / n));
}

double marcinkiewicz_factor(double theta) {
  require(theta > 0.0 && theta < 1.0, "marcinkiewicz factor needs theta in (0, 1)");
  return 1.0 / (theta * (1.0 - theta));
}

std::function<double(double)> okikiolu_profile(const std::string& name) {
  if (name == "gaussian") return [](double t) { return std::exp(-t * t); };
  if (name == "exponential") return [](double t) { return std::exp(-std::abs(t)); };
  if (name == "indicator") return [](double t) { return std::abs(t) <= 1.0 ? 1.0 : 0.0; };
  if (name == "cauchy") return [](double t) { return 1.0 / (1.0 + t * t); };
  throw ConfigError("unknown h profile '" + name + "'");
}

namespace {

double okikiolu_constant(const std::string& profile, double p, double mu, double& q_out) {
  require(p >= 1.0 && std::isfinite(p), "okikiolu needs p >= 1");
  const double iq = mu - 1.0 / p;
  require(iq > 0.0 && iq <= 1.0 / p, "okikiolu needs 1 <= p <= q with 1/q = mu - 1/p");
  const double isig = 1.0 + mu - 2.0 / p;
  require(isig > 0.0, "okikiolu needs 1/sigma = 1 + mu - 2/p > 0");
  const double sigma = 1.0 / isig;
  const double a = sigma * (p - 1.0) / p;
  require(a < 1.0, "okikiolu integral diverges at t = 0");
  q_out = 1.0 / iq;
  const auto h = okikiolu_profile(profile);
  // Even profiles: 2 int_0^inf t^{-a} |h(t)|^sigma dt with t = e^u.
  auto g = [&](double u) { return std::exp(u * (1.0 - a)) * std::pow(std::abs(h(std::exp(u))), sigma); };
  const double lower = -60.0 / (1.0 - a);
  const double left = adaptive_simpson(g, lower, 0.0, 1e-13);
  const double right = adaptive_simpson(g, 0.0, 60.0, 1e-13);
  if (g(60.0) > 1e-12 * (left + right)) throw DomainError("okikiolu integral does not converge for this profile");
  return std::pow(2.0 * (left + right), 1.0 / sigma);
}

}  // namespace

namespace {

// Integral over u in (-inf, inf) of g, integrated on [-U, U] with exponential tails
// extrapolated from the last unit step. Returns inf when a tail does not decay.
double log_line_integral(const std::function<double(double)>& g, double tol) {
  const double U = 60.0;
  double total = adaptive_simpson(g, -U, 0.0, tol) + adaptive_simpson(g, 0.0, U, tol);
  for (double sgn : {1.0, -1.0}) {
    const double end = g(sgn * U), inner = g(sgn * (U - 1.0));
    if (end <= 1e-300) continue;
    if (!(inner > end)) return kInf;
    const double k = std::log(inner / end);
    if (k < 1e-3) return kInf;
    total += end / k;
  }
  return total;
}

}  // namespace

double stein_weiss(const Kernel& kernel, double p) {
  require(p > 1.0 && std::isfinite(p), "stein_weiss needs p in (1, inf)");
  const int n = kernel.dimension();
  if (n != 1 && n != 2) throw ConfigError("stein_weiss integral is implemented for n = 1, 2");
  const double pc = p / (p - 1.0);
  const double e = n - n / pc;  // measure r^{n-1} dr times |x|^{-n/p'}, in u = log r
  if (n == 1) {
    double total = 0.0;
    for (double sgn : {1.0, -1.0}) {
      auto g = [&](double u) {
        const double x[1] = {sgn * std::exp(u)}, y[1] = {1.0};
        return kernel(x, y) * std::exp(u * e);
      };
      total += log_line_integral(g, 1e-13);
    }
    return total;
  }
  const std::size_t M = 256;
  CompensatedSum acc;
  for (std::size_t k = 0; k < M; ++k) {
    const double phi = 2.0 * kPi * static_cast<double>(k) / M;
    auto g = [&](double u) {
      const double r = std::exp(u);
      const double x[2] = {r * std::cos(phi), r * std::sin(phi)}, y[2] = {1.0, 0.0};
      return kernel(x, y) * std::exp(u * e);
    };
    const double v = log_line_integral(g, 1e-12);
    if (std::isinf(v)) return kInf;
    acc.add(v);
  }
  return acc.value() * 2.0 * kPi / M;
}

ConstantValue sharp_constant(const ConstantQuery& qr) {
  ConstantValue out;
  const double p = qr.p;
  switch (qr.kind) {
    case ConstantKind::okikiolu: {
      double q = 0.0;
      out.value = okikiolu_constant(qr.h_profile, p, qr.mu, q);
      out.q = q;
      out.note = "h=" + qr.h_profile;
      break;
    }
    case ConstantKind::riesz_potential: {
      require(p >= 1.0 && qr.q >= 1.0 && qr.p0 >= 1.0 && qr.q0 >= 1.0, "riesz_potential exponents must be >= 1");
      require((p - 1.0) / p + 1.0 / qr.p0 < 1.0, "riesz_potential needs (p-1)/p + 1/p0 < 1");
      require(1.0 / qr.q + 1.0 / qr.q0 < 1.0, "riesz_potential needs 1/q + 1/q0 < 1");
      require(qr.beta > 0.0 && qr.beta < qr.n, "riesz_potential needs beta in (0, n)");
      require(qr.a_norm >= 0.0 && qr.b_norm >= 0.0, "weight norms must be nonnegative");
      out.value = qr.a_norm * qr.b_norm;
      out.q = qr.q;
      out.regime = Regime::ambiguous;
      const double product = 1.0 / p - (1.0 / qr.q + (1.0 / qr.p0) * (1.0 / qr.q0) - qr.beta / qr.n);
      const double sum = 1.0 / p - (1.0 / qr.q + 1.0 / qr.p0 + 1.0 / qr.q0 - qr.beta / qr.n);
      out.note = "exponent relation ambiguous; residual(product)=" + fmt(product) + " residual(sum)=" + fmt(sum) +
                 "; modulo absolute constant";
      break;
    }
    case ConstantKind::beckner_A:
      out.value = beckner_A(p, qr.n);
      out.q = conj_exp(p);
      break;
    case ConstantKind::young_convolution: {
      const double q = qr.q;
      require(p >= 1.0 && q >= 1.0, "young needs p, q >= 1");
      const double ir = 1.0 / p + 1.0 / q - 1.0;
      require(ir >= 0.0 && ir <= 1.0, "young needs 0 <= 1/p + 1/q - 1 <= 1");
      require(p <= 2.0 && q <= 2.0, "young constant uses A on [1, 2]");
      const double r = ir == 0.0 ? kInf : 1.0 / ir;
      const double rc = conj_exp(r);
      require(rc >= 1.0 && rc <= 2.0, "young constant needs r' in [1, 2]");
      out.value = std::pow(beckner_A(p, 1) * beckner_A(q, 1) * beckner_A(rc, 1), qr.n);
      out.q = r;
      break;
    }
    case ConstantKind::pichorides:
      out.value = pichorides(p);
      out.q = p;
      break;
    case ConstantKind::fractional_sobolev:
      out.value = fractional_sobolev(qr.n, qr.s, p);
      out.q = p * qr.n / (qr.n - qr.s * p);
      break;
    case ConstantKind::stein_weiss:
      out.value = stein_weiss(qr.kernel ? *qr.kernel : Kernel::hardy(), p);
      out.q = p;
      out.note = qr.kernel ? qr.kernel->label() : "hardy";
      break;
    case ConstantKind::maximal_envelope:
      require(p > 1.0, "envelope needs p > 1");
      out.value = p / (p - 1.0);
      out.regime = Regime::envelope;
      out.q = p;
      out.note = "modulo absolute constant";
      break;
    case ConstantKind::calderon_zygmund_envelope:
      require(p > 1.0 && std::isfinite(p), "envelope needs p in (1, inf)");
      out.value = p * p / (p - 1.0);
      out.regime = Regime::envelope;
      out.q = p;
      out.note = "modulo absolute constant";
      break;
    case ConstantKind::maximal_fourier_envelope:
      require(p > 1.0 && std::isfinite(p), "envelope needs p in (1, inf)");
      out.value = std::pow(p, 4) / ((p - 1.0) * (p - 1.0));
      out.regime = Regime::envelope;
      out.q = p;
      out.note = "modulo absolute constant";
      break;
    case ConstantKind::pbo_lower:
    case ConstantKind::pbo_upper: {
      out.value = qr.kind == ConstantKind::pbo_lower ? pbo_lower(p, qr.alpha, qr.beta, qr.n)
                                                      : pbo_upper(p, qr.alpha, qr.beta, qr.n);
      const double iq = 1.0 - 1.0 / p - (qr.beta - qr.alpha) / qr.n;
      out.q = iq > 0.0 ? 1.0 / iq : kInf;
      out.regime = Regime::envelope;
      out.note = "modulo absolute constant";
      break;
    }
    case ConstantKind::aniso_pbo_lower:
    case ConstantKind::aniso_pbo_upper: {
      const std::size_t l = qr.blocks.size();
      require(l > 0 && qr.p_vec.size() == l && qr.alpha_vec.size() == l && qr.beta_vec.size() == l,
              "anisotropic pbo needs p, alpha, beta per block");
      double v = 1.0;
      for (std::size_t j = 0; j < l; ++j) {
        v *= qr.kind == ConstantKind::aniso_pbo_lower ? pbo_lower(qr.p_vec[j], qr.alpha_vec[j], qr.beta_vec[j], qr.blocks[j])
                                                       : pbo_upper(qr.p_vec[j], qr.alpha_vec[j], qr.beta_vec[j], qr.blocks[j]);
      }
      out.value = v;
      out.regime = Regime::envelope;
      out.note = "modulo absolute constant";
      break;
    }
    case ConstantKind::marcinkiewicz_factor:
      require(qr.M0 > 0.0 && qr.M1 > 0.0, "endpoint constants must be positive");
      out.value = marcinkiewicz_factor(qr.theta) * std::max(qr.M0, qr.M1);
      out.regime = Regime::envelope;
      out.note = "modulo absolute constant";
      break;
  }
  return out;
}

// ---------------------------------------------------------------- Muckenhoupt

namespace {

double surface_of(const RadialProfile& r) {
  if (r.surface > 0.0) return r.surface;
  switch (r.n) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: throw ConfigError("radial profile surface must be given for n > 3");
  }
}

// Crossing radius of a monotone profile with level c inside [lo, hi].
double crossing(const RadialProfile& prof, double c, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = std::isinf(hi) ? (lo == 0.0 ? 1.0 : 2.0 * lo) : 0.5 * (lo + hi);
    const bool above = prof.fn(mid) > c;
    const bool inc = prof.monotone == RadialProfile::Monotone::increasing;
    if (above != inc)
      lo = mid;
    else
      hi = mid;
    if (!std::isinf(hi) && hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  return std::isinf(hi) ? hi : 0.5 * (lo + hi);
}

// int over the domain where (fn > c) == superlevel of weight(fn) r^{n-1} dr * surface.
// Adaptive Simpson with a tolerance relative to a coarse composite estimate.
double integrate_rel(const std::function<double(double)>& f, double a, double b) {
  const int panels = 64;
  const double h = (b - a) / panels;
  double coarse = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h;
    coarse += h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h));
  }
  return adaptive_simpson(f, a, b, 1e-12 * std::max(std::abs(coarse), 1e-300), 50);
}

double level_integral(const RadialProfile& prof, double c, bool superlevel, const std::function<double(double)>& weight) {
  const double surf = surface_of(prof);
  const double dn1 = prof.n - 1.0;
  auto integrand = [&](double r) {
    const double v = prof.fn(r);
    const bool in = superlevel ? v > c : v < c;
    if (!in) return 0.0;
    return weight(v) * (dn1 == 0.0 ? 1.0 : std::pow(r, dn1));
  };
  double lo = prof.r_min, hi = prof.r_max;
  if (prof.monotone != RadialProfile::Monotone::none) {
    // Restrict to the interval where the condition holds.
    const bool inc = prof.monotone == RadialProfile::Monotone::increasing;
    const bool at_lo = superlevel ? prof.fn(lo) > c : prof.fn(lo) < c;
    const double rc = crossing(prof, c, lo, hi);
    // The condition holds on [lo, rc) or (rc, hi] depending on direction.
    const bool holds_low = superlevel ? !inc : inc;
    if (holds_low) {
      if (!at_lo && !(rc > lo)) return 0.0;
      hi = std::min(hi, rc);
    } else {
      lo = std::max(lo, rc);
    }
    if (!(hi > lo)) return 0.0;
  }
  if (std::isinf(hi)) {
    // Map [lo, inf) with r = lo + t/(1-t); require decay.
    auto mapped = [&](double t) {
      if (t >= 1.0) return 0.0;
      const double r = lo + t / (1.0 - t);
      return integrand(r) / ((1.0 - t) * (1.0 - t));
    };
    const double tail = mapped(1.0 - 1e-9);
    if (tail > 1e6) return kInf;
    return surf * integrate_rel(mapped, 0.0, 1.0);
  }
  if (lo > 0.0 && hi / lo > 1e3) {
    // Wide level sets: integrate in log r.
    auto logged = [&](double u) {
      const double r = std::exp(u);
      return integrand(r) * r;
    };
    return surf * integrate_rel(logged, std::log(lo), std::log(hi));
  }
  return surf * integrate_rel(integrand, lo, hi);
}

double super_u(const WeightProfile& u, double c) {
  if (const auto* r = std::get_if<RadialProfile>(&u)) return level_integral(*r, c, true, [](double v) { return v; });
  const auto& f = std::get<SampledProfile>(u).samples;
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.real()[i] > c) s.add(f.real()[i]);
  return s.value() * f.shape().cell_volume();
}

double sub_v(const WeightProfile& v, double c, double p) {
  const double e = -1.0 / (p - 1.0);
  auto w = [e](double x) { return x <= 0.0 ? kInf : std::pow(x, e); };
  if (const auto* r = std::get_if<RadialProfile>(&v)) return level_integral(*r, c, false, w);
  const auto& f = std::get<SampledProfile>(v).samples;
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.real()[i];
    if (x < c) {
      if (x <= 0.0) return kInf;
      s.add(w(x));
    }
  }
  return s.value() * f.shape().cell_volume();
}

}  // namespace

Extended muckenhoupt_I(const WeightProfile& u, const WeightProfile& v, double p, double A, double B,
                       const std::vector<double>& r_grid) {
  require(p > 1.0 && p <= 2.0, "muckenhoupt_I needs p in (1, 2]");
  require(A > 0.0 && B > 0.0, "A and B must be positive");
  if (r_grid.empty()) throw ConfigError("muckenhoupt_I needs a nonempty r grid");
  for (const auto* prof : {&u, &v})
    if (const auto* r = std::get_if<RadialProfile>(prof); r && !r->fn) throw ConfigError("radial profile needs a function");
  double best = 0.0;
  for (double r : r_grid) {
    require(r > 0.0, "r grid must be positive");
    const double U = super_u(u, B * r);
    if (U == 0.0) continue;
    const double V = sub_v(v, A * std::pow(r, p - 1.0), p);
    if (V == 0.0) continue;
    const double prod = U * V;
    if (std::isinf(prod)) return Extended::infinity();
    best = std::max(best, prod);
  }
  return Extended(best);
}

}  // namespace glspace
