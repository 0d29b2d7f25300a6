#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "glspace/exponent_grid.hpp"
#include "glspace/extended_real.hpp"

namespace glspace {

class GridFunction;

// Open exponent interval (lower, upper); lower == upper marks a single point.
struct Support {
  double lower = 1.0;
  double upper = kInf;

  bool is_point() const { return lower == upper; }
  bool contains(double p) const { return is_point() ? p == lower : (p > lower && p < upper); }
  friend bool operator==(const Support&, const Support&) = default;
};

// scale * p^power * (1 + log p)^log_power * (p - A)^-left_pole * (B - p)^-right_pole
struct ClosedForm {
  double scale = 1.0;
  double power = 0.0;
  double log_power = 0.0;
  double left_pole = 0.0;
  double right_pole = 0.0;
};

class PsiFunction {
 public:
  enum class Kind { closed_form, tabulated, degenerate, composed };

  static PsiFunction closed_form(Support support, ClosedForm params, std::string label = {});
  static PsiFunction constant(Support support, double value, std::string label = {});
  // Piecewise linear in p through strictly increasing knots; constant beyond the end knots.
  static PsiFunction tabulated(Support support, std::vector<double> knots, std::vector<double> values,
                               std::string label = {});
  // value at r, +inf elsewhere.
  static PsiFunction degenerate(double r, double value = 1.0, std::string label = {});
  static PsiFunction composed(Support support, std::function<double(double)> rule, std::string label);

  // Throws DomainError for p < 1.
  Extended operator()(double p) const;

  Kind kind() const;
  Support support() const;
  const std::string& label() const;
  bool is_degenerate() const { return kind() == Kind::degenerate; }
  double degenerate_point() const;

  const ClosedForm& closed_form_params() const;
  const std::vector<double>& knots() const;
  const std::vector<double>& knot_values() const;

  struct Rep;

 private:
  explicit PsiFunction(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

Extended psi_eval(const PsiFunction& psi, double p);

// Strictly monotone continuous p -> q(p) with inverse r(q).
class ExponentMap {
 public:
  enum class Kind { identity, conjugate, pbo, riesz_thorin, table };

  static ExponentMap identity(Support domain);
  static ExponentMap conjugate(Support domain = {1.0, kInf});
  // 1/q = 1 - 1/p - (beta - alpha)/n on p in (n/(n - beta), ...).
  static ExponentMap pbo(double alpha, double beta, int n);
  // theta from 1/p = (1-theta)/p0 + theta/p1, then 1/q = (1-theta)/q0 + theta/q1.
  static ExponentMap riesz_thorin(double p0, double p1, double q0, double q1);
  static ExponentMap table(std::vector<double> p, std::vector<double> q);

  double forward(double p) const;
  double inverse(double q) const;
  Support domain() const { return domain_; }
  Support codomain() const { return codomain_; }
  Kind kind() const { return kind_; }
  bool increasing() const { return increasing_; }

 private:
  Kind kind_ = Kind::identity;
  Support domain_, codomain_;
  bool increasing_ = true;
  double a_ = 0, b_ = 0, c_ = 0, d_ = 0;
  std::vector<double> tp_, tq_;
};

// psi1(q) = K(r(q)) psi(r(q)) on the codomain of qmap.
PsiFunction transform_moment(const PsiFunction& psi, std::function<double(double)> K, const ExponentMap& qmap);

enum class InterpolationKind { riesz_thorin, marcinkiewicz };

double interpolation_theta(double q, double q0, double q1);
// r_RT(q): 1/r = (1 - theta)/p0 + theta/p1 with theta = interpolation_theta(q, q0, q1).
double interpolation_exponent(double q, double p0, double p1, double q0, double q1);

PsiFunction interpolation_psi(InterpolationKind kind, const PsiFunction& psi, double p0, double p1, double q0,
                              double q1, double M0, double M1);

// Default sampling of a support for numerical sups.
ExponentGrid support_grid(Support s, std::size_t count = 64, double infinity_cap = 1e3);

// sup_p delta^{1/p} / psi(p).
double fundamental_function(const PsiFunction& psi, double delta, std::size_t count = 64,
                            double infinity_cap = 1e3);

struct ExponentInterval {
  double lower = 1.0;
  double upper = kInf;  // lower == upper selects the single point
};

// inf_p sup_{q in Q(p)} K(p, q) psi(p) / nu(q).
Extended combined_constant(const std::function<double(double, double)>& K, const PsiFunction& psi,
                           const PsiFunction& nu, const std::function<ExponentInterval(double)>& Q,
                           std::size_t count = 64, double infinity_cap = 1e3);

struct GlsNormResult {
  double value = 0.0;
  double argmax = 0.0;  // exponent attaining the max, smallest on ties
};

// max over p_grid of |f|_p / psi(p). Degenerate psi uses its point directly.
double gls_norm(const GridFunction& f, const PsiFunction& psi, const std::vector<double>& p_grid);
GlsNormResult gls_norm_detail(const GridFunction& f, const PsiFunction& psi, const std::vector<double>& p_grid);

// psi_f(p) = |f|_p tabulated on p_grid, which must lie inside support.
PsiFunction natural_psi(const GridFunction& f, Support support, const std::vector<double>& p_grid);

struct ProductPsi {
  PsiFunction first;
  PsiFunction second;
};

struct BoydIndices {
  double alpha_upper = 0.0;
  double alpha_lower = 0.0;
  double beta_upper = 0.0;
  double beta_lower = 0.0;
};

// Regression slopes of log ||Delta_{s,t}|| = log sup s^{1/p1} t^{1/p2} against log s (t = 1) and log t (s = 1).
BoydIndices boyd_indices(const ProductPsi& psi, const std::vector<double>& s_grid,
                         const std::vector<double>& t_grid, std::size_t count = 64, double infinity_cap = 1e3);

}  // namespace glspace
