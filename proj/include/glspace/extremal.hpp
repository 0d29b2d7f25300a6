#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glspace/grid_function.hpp"
#include "glspace/norms.hpp"
#include "glspace/numeric.hpp"
#include "glspace/operators.hpp"
#include "glspace/psi.hpp"

namespace glspace {

struct TestFamily {
  enum class Kind { gaussians, indicator_dilates, power_tail, pbo_f0, custom };

  Kind kind = Kind::gaussians;
  GridShape shape;
  // Scales for gaussians (exp(-pi |x|^2 / s^2)) and indicator dilates (|x| <= s);
  // exponent offsets eps for power_tail (x^{-1/p - eps} on x > 1).
  std::vector<double> params;
  std::vector<GridFunction> custom;
  double beta = 0.0;  // pbo_f0

  static TestFamily gaussians(GridShape shape, std::vector<double> scales);
  static TestFamily indicator_dilates(GridShape shape, std::vector<double> scales);
  static TestFamily power_tail(GridShape shape, std::vector<double> eps);
  static TestFamily pbo_f0(GridShape shape, double beta);
  static TestFamily from_functions(std::vector<GridFunction> fs);

  std::size_t size() const;
  // Members of the power-tail family depend on the exponent p.
  GridFunction member(std::size_t i, double p) const;
  std::string member_name(std::size_t i) const;
};

std::string to_string(TestFamily::Kind kind);
TestFamily::Kind family_kind_from_string(const std::string& s);

struct VerificationRow {
  std::string member;
  double p = 0.0;
  double q = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double constant = 0.0;
  bool pass = true;
};

struct VerificationReport {
  std::string check;
  std::vector<VerificationRow> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::pair<std::string, double>> measurements;
  bool passed = true;

  void add(VerificationRow row);
  void note(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
  void measure(std::string key, double value) { measurements.emplace_back(std::move(key), value); }
  std::optional<double> measurement(const std::string& key) const;
  std::optional<std::string> meta(const std::string& key) const;
};

struct NormEstimate {
  double value = 0.0;
  std::size_t argmax = 0;
  double param = 0.0;
  std::string member;
  std::vector<double> ratios;  // one per member, family order
};

// max over the family of |U f|_q / |f|_p.
NormEstimate estimate_operator_norm(const OperatorSpec& op, double p, double q, const TestFamily& family);

// Norm of the unitary or Beckner transform L^p -> L^{p'} on R^n, 1 <= p <= 2.
double fourier_norm(double p, int n, FourierConvention convention);

struct PboParams {
  double c1 = 0.5;  // lower bound of |x_j| / |x|, in (0, 1)
  double c2 = 2.0;  // upper bound, > 1
};

// f0 = 1_D / prod |x_j| with D = {|x_j| >= 1, |x_j|/|x| in [c1, c2]}. In one dimension the
// part beyond the box is carried as an exact tail.
GridFunction pbo_counterexample(int n, double beta, const PboParams& c, const GridShape& shape);
GridFunction pbo_counterexample(int n, double beta, const PboParams& c = {});

struct PboBlowupPoint {
  double eps = 0.0;
  double p = 0.0;
  double q = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct PboBlowup {
  double alpha = 0.0;
  double beta = 0.0;
  double p0 = 0.0;
  std::vector<PboBlowupPoint> monotone_points;
  bool monotone = false;
  std::vector<PboBlowupPoint> fit_points;
  LinearFit slope_fit;  // log ratio against log(p / (p - p0))
  double band_lower = 0.0;
  double band_upper = 0.0;
  std::vector<double> log_y;
  std::vector<double> transform;  // F[f0] at the log-growth abscissae
  LinearFit log_fit;              // F[f0](y) against |log y|
  VerificationReport report;
};

struct PboBlowupOptions {
  std::vector<double> monotone_eps{0.2, 0.1, 0.05};
  std::vector<double> fit_eps{0.05, 0.025, 0.0125, 0.00625};
  std::vector<double> log_y{1e-2, 1e-3, 1e-4};
  double band_widen = 0.2;
  double min_r_squared = 0.99;
};

// One-dimensional |y|^{-alpha} F[f0] against |x|^beta f0 along p = p0 (1 + eps).
PboBlowup pbo_blowup(double alpha, double beta, const PboBlowupOptions& options = {});

// Ratio |  |y|^{-alpha} F[T_lambda f] |_q / | |x|^beta T_lambda f |_p over lambda, per block.
// Slope zero certifies the exponent relation; otherwise it equals the defect
// m_j/q_j - m_j - alpha_j + m_j/p_j + beta_j.
VerificationReport dilation_necessity_check(const OperatorSpec& op, const WeightSpec& w, const std::vector<double>& p_vec,
                                            const std::vector<double>& q_vec, const std::vector<double>& lambda_grid,
                                            const GridFunction& f, double tol = 1e-6);
VerificationReport dilation_necessity_check(const OperatorSpec& op, const WeightSpec& w, const std::vector<double>& p_vec,
                                            const std::vector<double>& q_vec, const std::vector<double>& lambda_grid,
                                            double tol = 1e-6);
double dilation_defect(const WeightSpec& w, const std::vector<std::size_t>& blocks, const std::vector<double>& p_vec,
                       const std::vector<double>& q_vec, std::size_t block);

struct TransferOptions {
  std::vector<double> p_grid;         // default: support grid of psi intersected with the map domain
  std::optional<double> probe;        // sharpness probe exponent, default the argmax of the plain ratio
  double tol = 1e-9;
};

// Checks ||U f||_{G psi1} <= ||f||_{G psi} with psi1 = transform_moment(psi, K, qmap).
VerificationReport verify_gls_transfer(const OperatorSpec& op, const PsiFunction& psi, const std::function<double(double)>& K,
                                       const ExponentMap& qmap, const TestFamily& family, const TransferOptions& options = {});

struct Endpoint {
  double p = 1.0;
  double q = 1.0;
  double M = 1.0;
};

VerificationReport verify_interpolation(const OperatorSpec& op, const Endpoint& e0, const Endpoint& e1, InterpolationKind kind,
                                        const TestFamily& family, double tol = 1e-9, std::size_t theta_steps = 10);

// |W f|_q <= |K|_{q', p} |f|_p for every member.
VerificationReport verify_kernel_bound(const Kernel& kernel, double p, double q, const TestFamily& family,
                                       double tol = 1e-6);

}  // namespace glspace
