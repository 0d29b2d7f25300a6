#include "dft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>

#include "glspace/error.hpp"
#include "glspace/numeric.hpp"

namespace glspace::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// exp(i pi m / d) with m reduced exactly beforehand.
std::complex<double> unit(std::uint64_t m, std::uint64_t d) {
  const double a = std::numbers::pi * static_cast<double>(m) / static_cast<double>(d);
  return {std::cos(a), std::sin(a)};
}

void fft_inplace(const std::vector<std::size_t>& counts, cvec& data, int sign) {
  std::vector<int> dims(counts.begin(), counts.end());
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                         sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw InvariantError("FFTW planning failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

cvec centered_dft(const std::vector<std::size_t>& counts, cvec data, int sign) {
  const std::size_t n = counts.size();
  std::size_t total = 1;
  for (auto c : counts) total *= c;
  if (data.size() != total) throw InvariantError("DFT size mismatch");

  // Per axis: twiddle_a[j] = exp(-sign i 2pi c j / N) = exp(-sign i pi (N-1) j / N).
  std::vector<cvec> tw(n);
  std::complex<double> constant = 1.0;
  for (std::size_t a = 0; a < n; ++a) {
    const std::uint64_t N = counts[a];
    tw[a].resize(N);
    for (std::uint64_t j = 0; j < N; ++j) {
      std::complex<double> z = unit(((N - 1) * j) % (2 * N), N);
      tw[a][j] = sign > 0 ? std::conj(z) : z;
    }
    // exp(sign i 2pi c^2 / N) = exp(sign i pi (N-1)^2 / (2N)).
    std::complex<double> z = unit(((N - 1) * (N - 1)) % (4 * N), 2 * N);
    constant *= sign > 0 ? z : std::conj(z);
  }
  auto twiddle = [&](cvec& v) {
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t i = 0; i < total; ++i) {
      std::complex<double> w = 1.0;
      for (std::size_t a = 0; a < n; ++a) w *= tw[a][idx[a]];
      v[i] *= w;
      for (std::size_t a = n; a-- > 0;) {
        if (++idx[a] < counts[a]) break;
        idx[a] = 0;
      }
    }
  };
  twiddle(data);
  fft_inplace(counts, data, sign);
  twiddle(data);
  for (auto& z : data) z *= constant;
  return data;
}

cvec linear_convolution(const cvec& a, const cvec& b) {
  const std::size_t out = a.size() + b.size() - 1;
  std::size_t L = 1;
  while (L < out) L <<= 1;
  cvec fa(L, 0.0), fb(L, 0.0);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  fft_inplace({L}, fa, -1);
  fft_inplace({L}, fb, -1);
  for (std::size_t i = 0; i < L; ++i) fa[i] *= fb[i];
  fft_inplace({L}, fa, +1);
  cvec r(out);
  for (std::size_t i = 0; i < out; ++i) r[i] = fa[i] / static_cast<double>(L);
  return r;
}

namespace {

// int_R^inf x^{-e} e^{ixy} dx for y > 0, by rotating the path to x = R(1 + i tau).
std::complex<double> right_term(double R, double e, double y) {
  const double z = R * y;
  const std::complex<double> I(0.0, 1.0);
  const double U = std::log1p(60.0 / z);
  const std::size_t panels = 4000;
  const double h = U / panels;
  auto g = [&](double u) {
    const double tau = std::expm1(u);
    return std::pow(std::complex<double>(1.0, tau), -e) * std::exp(-z * tau + u);
  };
  std::complex<double> s = g(0.0) + g(U);
  for (std::size_t k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * g(h * static_cast<double>(k));
  const std::complex<double> J = s * h / 3.0;
  return I * std::exp(I * z) * std::pow(R, 1.0 - e) * J;
}

std::complex<double> term(double R, double e, double y, TailSides sides) {
  if (y == 0.0) {
    if (e <= 1.0) return {std::numeric_limits<double>::infinity(), 0.0};
    const double v = std::pow(R, 1.0 - e) / (e - 1.0);
    return sides == TailSides::both ? 2.0 * v : v;
  }
  const std::complex<double> t = right_term(R, e, std::abs(y));
  if (sides == TailSides::both) return 2.0 * t.real();
  return y > 0 ? t : std::conj(t);
}

}  // namespace

std::complex<double> tail_transform(const PowerSumTail& tail, double y) {
  std::complex<double> acc = 0.0;
  for (const auto& t : tail.terms()) acc += t.coefficient * term(tail.radius(), t.exponent, y, tail.sides());
  return acc;
}

std::complex<double> tail_transform_small(const PowerSumTail& tail, double s) {
  const double R = tail.radius();
  const double logz = s + std::log(R);
  if (logz > std::log(1e-6)) throw InvariantError("small-frequency tail series used outside its range");
  const double z = std::exp(logz);  // may underflow to 0, which is harmless below
  std::complex<double> acc = 0.0;
  for (const auto& t : tail.terms()) {
    const double e = t.exponent;
    std::complex<double> right;
    if (e == 1.0) {
      // -Ci(z) + i (pi/2 - Si(z))
      right = {-(std::numbers::egamma + logz), std::numbers::pi / 2.0 - z};
    } else if (e == std::floor(e)) {
      if (e < 1.0) throw ConfigError("tail exponent below 1 has no transform near 0");
      right = std::pow(R, 1.0 - e) / (e - 1.0);
    } else {
      // E_e(-iz) = Gamma(1-e) (-iz)^{e-1} + 1/(e-1) + O(z)
      const std::complex<double> phase = std::polar(1.0, -std::numbers::pi * (e - 1.0) / 2.0);
      right = std::pow(R, 1.0 - e) *
              (std::tgamma(1.0 - e) * std::exp((e - 1.0) * logz) * phase + 1.0 / (e - 1.0));
    }
    acc += t.coefficient * (tail.sides() == TailSides::both ? std::complex<double>(2.0 * right.real(), 0.0) : right);
  }
  return acc;
}

}  // namespace glspace::detail
