#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace glspace {

// Cell-centered uniform axis on [-half_width, half_width].
struct Axis {
  double half_width = 1.0;
  std::size_t count = 2;

  double spacing() const { return 2.0 * half_width / static_cast<double>(count); }
  double center(std::size_t i) const { return -half_width + (static_cast<double>(i) + 0.5) * spacing(); }
  friend bool operator==(const Axis&, const Axis&) = default;
};

struct GridShape {
  std::vector<Axis> axes;
  std::vector<std::size_t> blocks;  // block dimensions m_j, summing to axes.size()

  static GridShape cube(std::size_t n, double half_width, std::size_t count);
  static GridShape line(double half_width, std::size_t count) { return cube(1, half_width, count); }

  std::size_t dimension() const { return axes.size(); }
  std::size_t size() const;
  double cell_volume() const;
  // Throws ConfigError when counts are odd or < 2, widths nonpositive, or blocks do not sum to n.
  void validate() const;
  friend bool operator==(const GridShape&, const GridShape&) = default;
};

enum class TailSides { right, both };

// One-dimensional analytic continuation of a sampled function beyond |x| > radius.
// With sides == both the tail is even.
class TailModel {
 public:
  virtual ~TailModel() = default;
  virtual double radius() const = 0;
  virtual TailSides sides() const = 0;
  virtual double value(double x) const = 0;
  // integral over the tail region of (|g| / scale)^p |x|^gamma; +inf when divergent.
  virtual double power_integral(double p, double gamma, double scale) const = 0;
  // sup of |g| over the tail region.
  virtual double sup() const = 0;
  // x -> c g(lambda x).
  virtual std::shared_ptr<const TailModel> transformed(double lambda, double c) const = 0;
  virtual std::string describe() const = 0;
};

struct PowerTerm {
  double coefficient = 1.0;
  double exponent = 1.0;
};

// g(x) = sum c_k |x|^{-e_k}.
class PowerSumTail final : public TailModel {
 public:
  PowerSumTail(double radius, TailSides sides, std::vector<PowerTerm> terms);
  double radius() const override { return radius_; }
  TailSides sides() const override { return sides_; }
  double value(double x) const override;
  double power_integral(double p, double gamma, double scale) const override;
  double sup() const override;
  std::shared_ptr<const TailModel> transformed(double lambda, double c) const override;
  std::string describe() const override;
  const std::vector<PowerTerm>& terms() const { return terms_; }

 private:
  double radius_;
  TailSides sides_;
  std::vector<PowerTerm> terms_;
};

// g(x) = sum c_k |x|^{-e_k} + log|x| sum d_k |x|^{-e_k}; integrals by quadrature in log |x|.
class PowerLogTail final : public TailModel {
 public:
  PowerLogTail(double radius, TailSides sides, std::vector<PowerTerm> power, std::vector<PowerTerm> log_terms);
  double radius() const override { return radius_; }
  TailSides sides() const override { return sides_; }
  double value(double x) const override;
  double power_integral(double p, double gamma, double scale) const override;
  double sup() const override;
  std::shared_ptr<const TailModel> transformed(double lambda, double c) const override;
  std::string describe() const override;

 private:
  double radius_;
  TailSides sides_;
  std::vector<PowerTerm> power_, log_;
};

// Centered maximal function of a compactly supported 1D density outside its box:
// Mf(x) = max_t G(t) / (2|x - t|), G the mass between t and the far side.
class MaximalTail final : public TailModel {
 public:
  // edges: cell edges t_0 < ... < t_N; masses: |f| mass per cell.
  MaximalTail(std::vector<double> edges, std::vector<double> masses, double scale = 1.0);
  double radius() const override { return edges_.back(); }
  TailSides sides() const override { return TailSides::both; }
  double value(double x) const override;
  double power_integral(double p, double gamma, double scale) const override;
  double sup() const override;
  std::shared_ptr<const TailModel> transformed(double lambda, double c) const override;
  std::string describe() const override;

 private:
  struct Hull {
    std::vector<double> a, m;  // upper hull of (distance coordinate, mass)
  };
  static Hull upper_hull(std::vector<double> a, std::vector<double> m);
  double one_side(double x, bool right) const;
  double side_integral(double p, double scale, bool right) const;
  Hull right_hull_, left_hull_;
  std::vector<double> edges_;
  std::vector<double> right_mass_;  // mass in [t_j, R]
  std::vector<double> left_mass_;   // mass in [-R, t_j]
  double scale_;
};

class GridFunction {
 public:
  GridFunction(GridShape shape, std::vector<double> real);
  GridFunction(GridShape shape, std::vector<double> real, std::vector<double> imag);

  static GridFunction sample(const GridShape& shape, const std::function<double(std::span<const double>)>& fn);
  static GridFunction sample_complex(const GridShape& shape,
                                     const std::function<std::complex<double>(std::span<const double>)>& fn);

  const GridShape& shape() const { return shape_; }
  std::size_t size() const { return re_->size(); }
  std::size_t dimension() const { return shape_.dimension(); }
  bool is_complex() const { return static_cast<bool>(im_); }

  std::span<const double> real() const { return *re_; }
  std::span<const double> imag() const;  // empty for real functions
  std::complex<double> value(std::size_t i) const {
    return {(*re_)[i], im_ ? (*im_)[i] : 0.0};
  }
  double magnitude(std::size_t i) const { return im_ ? std::hypot((*re_)[i], (*im_)[i]) : std::abs((*re_)[i]); }
  std::vector<double> magnitudes() const;

  // Cell-center coordinates of flat index i (row-major, last axis fastest).
  void coordinates(std::size_t i, std::span<double> x) const;
  std::vector<std::size_t> strides() const;

  const std::string& label() const { return label_; }
  const std::string& profile() const { return profile_; }
  const std::shared_ptr<const TailModel>& tail() const { return tail_; }

  GridFunction with_label(std::string label) const;
  GridFunction with_profile(std::string profile) const;
  GridFunction with_tail(std::shared_ptr<const TailModel> tail) const;
  GridFunction without_tail() const { return with_tail(nullptr); }
  // c f; a tail is carried along for real c.
  GridFunction scaled(std::complex<double> c) const;
  GridFunction conj() const;
  GridFunction abs() const;

 private:
  GridShape shape_;
  std::shared_ptr<const std::vector<double>> re_;
  std::shared_ptr<const std::vector<double>> im_;
  std::string label_;
  std::string profile_;
  std::shared_ptr<const TailModel> tail_;
};

// Pointwise combinations on identical shapes; tails are dropped.
GridFunction add(const GridFunction& a, const GridFunction& b);
GridFunction subtract(const GridFunction& a, const GridFunction& b);

}  // namespace glspace
