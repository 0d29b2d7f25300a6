#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "glspace/extended_real.hpp"
#include "glspace/grid_function.hpp"
#include "glspace/operators.hpp"

namespace glspace {

enum class ConstantKind {
  okikiolu,
  riesz_potential,
  beckner_A,
  young_convolution,
  pichorides,
  fractional_sobolev,
  stein_weiss,
  maximal_envelope,
  calderon_zygmund_envelope,
  maximal_fourier_envelope,
  pbo_lower,
  pbo_upper,
  aniso_pbo_lower,
  aniso_pbo_upper,
  marcinkiewicz_factor,
};

std::string to_string(ConstantKind k);
ConstantKind constant_kind_from_string(const std::string& s);
std::vector<ConstantKind> all_constant_kinds();

enum class Regime { exact, envelope, ambiguous };
std::string to_string(Regime r);

struct ConstantQuery {
  ConstantKind kind = ConstantKind::pichorides;
  double p = 2.0;
  double q = std::numeric_limits<double>::quiet_NaN();
  int n = 1;
  double s = 0.5;       // fractional order
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 1.0;      // okikiolu
  double theta = 0.5;   // marcinkiewicz
  double M0 = 1.0;
  double M1 = 1.0;
  double p0 = 2.0;      // riesz potential
  double q0 = 2.0;
  double a_norm = 1.0;  // |a|_{p0}
  double b_norm = 1.0;  // |b|_{q0}
  std::vector<double> p_vec, alpha_vec, beta_vec;
  std::vector<int> blocks;
  std::string h_profile = "gaussian";  // okikiolu: gaussian, exponential, indicator, cauchy
  std::optional<Kernel> kernel;         // stein_weiss
};

struct ConstantValue {
  double value = 0.0;
  double q = std::numeric_limits<double>::quiet_NaN();  // paired exponent where the formula fixes one
  Regime regime = Regime::exact;
  std::string note;
};

ConstantValue sharp_constant(const ConstantQuery& query);

double beckner_A(double p, int n);
double pichorides(double p);
double fractional_sobolev(int n, double s, double p);
double stein_weiss(const Kernel& kernel, double p);
double pbo_lower(double p, double alpha, double beta, int n);
double pbo_upper(double p, double alpha, double beta, int n);
double marcinkiewicz_factor(double theta);

std::function<double(double)> okikiolu_profile(const std::string& name);

// Weight profile on a radial domain r_min <= |y| <= r_max. surface is the measure of the unit
// sphere (0 selects 2, 2pi, 4pi for n = 1, 2, 3); use 1 for a half-line.
struct RadialProfile {
  enum class Monotone { none, increasing, decreasing };
  int n = 1;
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();
  std::function<double(double)> fn;
  Monotone monotone = Monotone::none;
  double surface = 0.0;
};

struct SampledProfile {
  GridFunction samples;
};

using WeightProfile = std::variant<RadialProfile, SampledProfile>;

// sup over r_grid of [int_{u > B r} u] [int_{v < A r^{p-1}} v^{-1/(p-1)}].
Extended muckenhoupt_I(const WeightProfile& u, const WeightProfile& v, double p, double A, double B,
                       const std::vector<double>& r_grid);

}  // namespace glspace
