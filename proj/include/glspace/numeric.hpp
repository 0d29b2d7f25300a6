#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace glspace {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y = a + b x. Needs at least two distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double a, double b, std::size_t n);

// Composite Simpson with n (rounded up to even) panels.
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n);

// Adaptive Simpson to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 40);

// Worker count from GLSPACE_THREADS, defaulting to hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n) over a fixed partition. Results must be written by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace glspace
