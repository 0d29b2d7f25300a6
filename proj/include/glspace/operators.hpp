#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glspace/grid_function.hpp"
#include "glspace/norms.hpp"

namespace glspace {

// unitary: F[f](y) = (2 pi)^{-n/2} int e^{ixy} f(x) dx, output on y.
// beckner: f^(xi) = int e^{-2 pi i x xi} f(x) dx, output on xi.
enum class FourierConvention { unitary, beckner };

// Cell-centered DFT with phase correction; output box half-width pi/h (unitary) or 1/(2h) (beckner).
// A one-dimensional power-sum tail contributes its transform at every output frequency.
GridFunction fourier(const GridFunction& f, FourierConvention convention = FourierConvention::unitary);
// Conjugate transform mapping fourier(f) back to f.
GridFunction inverse_fourier(const GridFunction& g, FourierConvention convention = FourierConvention::unitary);

// Unitary transform of a 1D function at one frequency (grid sum plus tail).
std::complex<double> fourier_at(const GridFunction& f, double y);
// Same at y = e^s, valid for s far below the representable range of y.
std::complex<double> fourier_at_log(const GridFunction& f, double s);
std::vector<std::complex<double>> fourier_at_log(const GridFunction& f, std::span<const double> s);

// Forms of the weighted transform: output weight |x|^{+alpha} or |x|^{-alpha}.
enum class WeightedForm { positive_output, negative_output };

// |x|^{+-alpha} F[|y|^beta f].
GridFunction weighted_fourier(const GridFunction& f, const WeightSpec& w,
                              WeightedForm form = WeightedForm::negative_output);

enum class HilbertMethod {
  spectral,       // multiplier -i sgn(xi) on the discrete transform; exact L2 isometry
  pv_quadrature,  // principal value integral of the cell-constant interpolant at cell centers
};

GridFunction hilbert_transform(const GridFunction& f, HilbertMethod method = HilbertMethod::spectral);

// Centered maximal function over radii k*h, k = 0..N. For n = 1 the output carries the
// exact maximal tail beyond the box.
GridFunction maximal_hl(const GridFunction& f);

enum class DilationMode {
  rescale,   // keep samples, shrink the box by lambda; exact scaling
  resample,  // same grid, cubic interpolation clamped to neighbouring samples
};

// x -> f(lambda_1 x_1, ..., lambda_l x_l), one factor per block.
GridFunction dilate(const GridFunction& f, const std::vector<double>& lambdas, DilationMode mode = DilationMode::rescale);

// (k * f)(x_i) = sum_j k(x_i - x_j) f_j h^n, k multilinearly interpolated, zero outside its box.
GridFunction convolve(const GridFunction& kernel, const GridFunction& f);

class Kernel {
 public:
  enum class Tag { hardy_steinweiss, okikiolu, riesz_potential, table, separable };
  using Eval = std::function<double(std::span<const double>, std::span<const double>)>;

  // (1/x) 1_{0<y<x}, degree -1.
  static Kernel hardy();
  // General nonnegative kernel homogeneous of degree -n.
  static Kernel homogeneous(Eval k, int n, bool rotation_invariant, std::string label);
  // |t|^{mu-1} h(x t) on the line.
  static Kernel okikiolu(std::function<double(double)> h, double mu, std::string h_label);
  // a(x) b(y) |x - y|^{beta - n}.
  static Kernel riesz_potential(std::function<double(std::span<const double>)> a,
                                std::function<double(std::span<const double>)> b, double beta, int n);
  // a(x) b(y).
  static Kernel separable(std::function<double(std::span<const double>)> a,
                          std::function<double(std::span<const double>)> b, int n);
  // Two-variable table: blocks {m, m}, x block first. Evaluated by nearest cell, zero outside.
  static Kernel table(GridFunction k);

  double operator()(std::span<const double> x, std::span<const double> y) const { return eval_(x, y); }
  Tag tag() const { return tag_; }
  int dimension() const { return n_; }
  const std::string& label() const { return label_; }
  std::optional<double> homogeneity() const { return degree_; }
  bool rotation_invariant() const { return rotation_invariant_; }
  bool singular_diagonal() const { return singular_; }
  bool is_hardy_average() const { return hardy_; }
  const std::optional<GridFunction>& table_data() const { return table_; }

 private:
  Tag tag_ = Tag::table;
  int n_ = 1;
  std::string label_;
  Eval eval_;
  std::optional<double> degree_;
  bool rotation_invariant_ = false;
  bool singular_ = false;
  bool hardy_ = false;
  std::optional<GridFunction> table_;
};

// W f(x_i) = sum_j K(x_i, y_j) f_j h^n. The diagonal cell of singular kernels uses a
// 4-point-per-axis sub-cell average. Output lives on f's grid (table kernels: the x grid).
// The Hardy kernel output carries its exact tail when f has compact support or a power tail.
GridFunction kernel_apply(const Kernel& kernel, const GridFunction& f);

// Samples K on the product grid (x on out_shape, y on in_shape), blocks {n, n}.
GridFunction kernel_sample(const Kernel& kernel, const GridShape& shape);

// |K|_{q', p}: inner L^{q'} over x, outer L^p over y. +inf when not finite.
double kernel_norm_bound(const Kernel& kernel, double p, double q, const GridShape& shape);

struct OperatorSpec {
  enum class Kind { identity, fourier, weighted_fourier, hilbert, maximal_hl, dilation, convolution, integral_kernel };

  Kind kind = Kind::identity;
  FourierConvention convention = FourierConvention::unitary;
  WeightSpec weight;
  WeightedForm weighted_form = WeightedForm::negative_output;
  HilbertMethod hilbert_method = HilbertMethod::spectral;
  std::vector<double> lambdas;
  DilationMode dilation_mode = DilationMode::rescale;
  std::optional<GridFunction> convolution_kernel;
  std::optional<Kernel> kernel;

  static OperatorSpec make(Kind kind) {
    OperatorSpec s;
    s.kind = kind;
    return s;
  }
  void validate(const GridShape& shape) const;
};

std::string to_string(OperatorSpec::Kind kind);
OperatorSpec::Kind operator_kind_from_string(const std::string& s);

GridFunction apply(const OperatorSpec& op, const GridFunction& f);

}  // namespace glspace
