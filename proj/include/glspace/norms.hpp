#pragma once

#include <cstddef>
#include <vector>

#include "glspace/grid_function.hpp"

namespace glspace {

// Per-block weight exponents. Log powers realize L(z) = max(|log z|^theta, 1).
struct WeightSpec {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> theta_alpha;  // slowly varying factor on the alpha side, may be empty
  std::vector<double> theta_beta;   // same on the beta side
  double mu = 0.0;                  // radial power for the radial_mu side

  static WeightSpec uniform(std::size_t blocks, double alpha, double beta);
  // Requires alpha_j, beta_j in [0,1), alpha_j + beta_j <= 1, theta >= 0.
  void validate(std::size_t blocks) const;
  bool has_log_factor() const;
};

enum class WeightSide { alpha_negative, beta_positive, radial_mu };

// prod_j |x_j|^{-alpha_j} M_j(|x_j|), prod_j |x_j|^{beta_j} L_j(|x_j|), or |x|^mu.
double weight_value(const WeightSpec& w, WeightSide side, const std::vector<std::size_t>& blocks,
                    std::span<const double> x);

// Midpoint rule plus the tail integral. p may be +inf.
double lp_norm(const GridFunction& f, double p);
double weighted_lp_norm(const GridFunction& f, double p, const WeightSpec& w, WeightSide side);

// Pointwise product with the weight; the tail is dropped.
GridFunction apply_weight(const GridFunction& f, const WeightSpec& w, WeightSide side);

// Descending sort of |samples|, each occupying mass h^n.
struct DecreasingRearrangement {
  std::vector<double> values;
  double cell_mass = 0.0;

  double measure() const { return cell_mass * static_cast<double>(values.size()); }
  // f*(t), right-continuous step.
  double operator()(double t) const;
  double lp_norm(double p) const;
};

DecreasingRearrangement decreasing_rearrangement(const GridFunction& f);

// Exact for the step function f*. q may be +inf; q < 1 gives the quasi-norm.
double lorentz_norm(const DecreasingRearrangement& fs, double p, double q);
double lorentz_norm(const GridFunction& f, double p, double q);

// Iterated mixed norm: innermost over the first block with p_vec[0], outward from there.
double anisotropic_norm(const GridFunction& f, const std::vector<double>& p_vec,
                        const std::vector<std::size_t>& block_dims);

}  // namespace glspace
