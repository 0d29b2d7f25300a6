#include "glspace/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dft.hpp"
#include "glspace/error.hpp"
#include "glspace/numeric.hpp"

namespace glspace {

using detail::cvec;

namespace {

constexpr double kPi = std::numbers::pi;

cvec to_complex(const GridFunction& f) {
  cvec v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.value(i);
  return v;
}

GridFunction from_complex(GridShape shape, const cvec& v, bool keep_real) {
  std::vector<double> re(v.size()), im(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    re[i] = v[i].real();
    im[i] = v[i].imag();
  }
  if (keep_real) return GridFunction(std::move(shape), std::move(re));
  return GridFunction(std::move(shape), std::move(re), std::move(im));
}

std::vector<std::size_t> counts_of(const GridShape& s) {
  std::vector<std::size_t> c;
  for (const auto& a : s.axes) c.push_back(a.count);
  return c;
}

const PowerSumTail* power_tail(const GridFunction& f) {
  if (!f.tail()) return nullptr;
  const auto* t = dynamic_cast<const PowerSumTail*>(f.tail().get());
  if (!t) throw ConfigError("this operation needs a power-sum tail model");
  return t;
}

}  // namespace

// ---------------------------------------------------------------- Fourier

GridFunction fourier(const GridFunction& f, FourierConvention convention) {
  const GridShape& in = f.shape();
  GridShape out = in;
  double scale = 1.0;
  for (auto& a : out.axes) {
    const double h = a.spacing();
    scale *= h;
    a.half_width = convention == FourierConvention::unitary ? kPi / h : 0.5 / h;
  }
  if (convention == FourierConvention::unitary) scale *= std::pow(2.0 * kPi, -0.5 * static_cast<double>(in.dimension()));
  const int sign = convention == FourierConvention::unitary ? +1 : -1;
  cvec v = detail::centered_dft(counts_of(in), to_complex(f), sign);
  for (auto& z : v) z *= scale;
  if (const PowerSumTail* t = power_tail(f)) {
    const Axis& ax = out.axes[0];
    const double norm = convention == FourierConvention::unitary ? 1.0 / std::sqrt(2.0 * kPi) : 1.0;
    parallel_for(v.size(), [&](std::size_t k) {
      const double w = ax.center(k);
      const double y = convention == FourierConvention::unitary ? w : -2.0 * kPi * w;
      v[k] += norm * detail::tail_transform(*t, y);
    });
  }
  return from_complex(std::move(out), v, false).with_label(f.label().empty() ? "" : "F[" + f.label() + "]");
}

GridFunction inverse_fourier(const GridFunction& g, FourierConvention convention) {
  if (g.tail()) throw ConfigError("inverse transform of a tailed function is not supported");
  const GridShape& in = g.shape();
  GridShape out = in;
  double scale = 1.0;
  for (auto& a : out.axes) {
    const double d = a.spacing();
    scale *= d;
    a.half_width = convention == FourierConvention::unitary ? kPi / d : 0.5 / d;
  }
  if (convention == FourierConvention::unitary) scale *= std::pow(2.0 * kPi, -0.5 * static_cast<double>(in.dimension()));
  const int sign = convention == FourierConvention::unitary ? -1 : +1;
  cvec v = detail::centered_dft(counts_of(in), to_complex(g), sign);
  for (auto& z : v) z *= scale;
  return from_complex(std::move(out), v, false);
}

std::complex<double> fourier_at(const GridFunction& f, double y) {
  if (f.dimension() != 1) throw ConfigError("pointwise transform is one-dimensional");
  const Axis& ax = f.shape().axes[0];
  const double h = ax.spacing();
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double x = ax.center(j);
    const std::complex<double> term = f.value(j) * std::polar(1.0, x * y);
    // Kahan on both parts
    double t = term.real() - cre, s = re + t;
    cre = (s - re) - t;
    re = s;
    t = term.imag() - cim;
    s = im + t;
    cim = (s - im) - t;
    im = s;
  }
  std::complex<double> acc(re * h, im * h);
  if (const PowerSumTail* t = power_tail(f)) acc += detail::tail_transform(*t, y);
  return acc / std::sqrt(2.0 * kPi);
}

std::vector<std::complex<double>> fourier_at_log(const GridFunction& f, std::span<const double> s) {
  if (f.dimension() != 1) throw ConfigError("pointwise transform is one-dimensional");
  const Axis& ax = f.shape().axes[0];
  // Moments of the grid part: m0 + i y m1 - y^2 m2 / 2.
  const double h = ax.spacing();
  std::complex<double> m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double x = ax.center(j);
    m0 += f.value(j);
    m1 += x * f.value(j);
    m2 += x * x * f.value(j);
  }
  const PowerSumTail* t = power_tail(f);
  const double cut = std::log(1e-6) - std::log(ax.half_width);
  std::vector<std::complex<double>> out(s.size());
  parallel_for(s.size(), [&](std::size_t k) {
    if (s[k] > cut) {
      out[k] = fourier_at(f, std::exp(s[k]));
      return;
    }
    const double y = std::exp(s[k]);
    std::complex<double> acc = h * (m0 + std::complex<double>(0.0, y) * m1 - 0.5 * y * y * m2);
    if (t) acc += detail::tail_transform_small(*t, s[k]);
    out[k] = acc / std::sqrt(2.0 * kPi);
  });
  return out;
}

std::complex<double> fourier_at_log(const GridFunction& f, double s) {
  return fourier_at_log(f, std::span<const double>(&s, 1)).front();
}

GridFunction weighted_fourier(const GridFunction& f, const WeightSpec& w, WeightedForm form) {
  const auto& blocks = f.shape().blocks;
  w.validate(blocks.size());
  GridFunction input = apply_weight(f, w, WeightSide::beta_positive);
  if (const PowerSumTail* t = power_tail(f)) {
    if (w.has_log_factor()) throw ConfigError("log-weighted tails are not supported");
    std::vector<PowerTerm> terms = t->terms();
    for (auto& term : terms) term.exponent -= w.beta[0];
    input = input.with_tail(std::make_shared<PowerSumTail>(t->radius(), t->sides(), std::move(terms)));
  }
  GridFunction g = fourier(input);
  if (form == WeightedForm::negative_output) return apply_weight(g, w, WeightSide::alpha_negative);
  // |x|^{+alpha}: flip the exponent sign on the output side.
  WeightSpec flipped = w;
  for (auto& a : flipped.alpha) a = -a;
  const std::size_t n = g.size();
  std::vector<double> re(n), im(n), x(g.dimension());
  for (std::size_t i = 0; i < n; ++i) {
    g.coordinates(i, x);
    const double wt = weight_value(flipped, WeightSide::alpha_negative, blocks, x);
    re[i] = wt * g.real()[i];
    im[i] = wt * g.imag()[i];
  }
  return GridFunction(g.shape(), std::move(re), std::move(im));
}

// ---------------------------------------------------------------- Hilbert

GridFunction hilbert_transform(const GridFunction& f, HilbertMethod method) {
  if (f.dimension() != 1) throw ConfigError("Hilbert transform needs n = 1");
  if (f.tail()) throw ConfigError("Hilbert transform of a tailed function is not supported");
  const std::size_t N = f.size();
  cvec out;
  if (method == HilbertMethod::spectral) {
    // Standard sign e^{-ix xi}; negative frequencies are k < N/2 on the centered grid.
    cvec v = detail::centered_dft({N}, to_complex(f), -1);
    const std::complex<double> I(0.0, 1.0);
    for (std::size_t k = 0; k < N; ++k) v[k] *= (k < N / 2) ? I : -I;
    out = detail::centered_dft({N}, std::move(v), +1);
    for (auto& z : out) z /= static_cast<double>(N);
  } else {
    // kappa_m = (1/pi) log|(m + 1/2)/(m - 1/2)|, m = -(N-1) .. N-1.
    cvec kernel(2 * N - 1);
    for (std::size_t i = 0; i < kernel.size(); ++i) {
      const double m = static_cast<double>(i) - static_cast<double>(N - 1);
      kernel[i] = std::log(std::abs((m + 0.5) / (m - 0.5))) / kPi;
    }
    const cvec full = detail::linear_convolution(to_complex(f), kernel);
    out.assign(full.begin() + static_cast<std::ptrdiff_t>(N - 1), full.begin() + static_cast<std::ptrdiff_t>(2 * N - 1));
  }
  return from_complex(f.shape(), out, !f.is_complex()).with_label(f.label().empty() ? "" : "H[" + f.label() + "]");
}

// ---------------------------------------------------------------- maximal

GridFunction maximal_hl(const GridFunction& f) {
  if (f.tail()) throw ConfigError("maximal function of a tailed function is not supported");
  const GridShape& shape = f.shape();
  const std::size_t n = shape.dimension();
  const std::size_t P = f.size();
  double href = std::numeric_limits<double>::infinity(), diam2 = 0.0;
  for (const auto& a : shape.axes) {
    href = std::min(href, a.spacing());
    diam2 += 4.0 * a.half_width * a.half_width;
  }
  const std::size_t K = static_cast<std::size_t>(std::ceil(std::sqrt(diam2) / href)) + 1;
  auto bucket = [&](double d2) {
    const double k = std::ceil(std::sqrt(d2) / href - 1e-9);
    return static_cast<std::size_t>(std::max(0.0, k));
  };

  // Lattice points of the infinite grid within radius k*href, by enumeration.
  std::vector<double> lattice(K + 1, 0.0);
  {
    std::vector<long> reach(n);
    for (std::size_t a = 0; a < n; ++a)
      reach[a] = static_cast<long>(std::floor(static_cast<double>(K) * href / shape.axes[a].spacing() + 1e-9));
    std::vector<long> m(n);
    for (std::size_t a = 0; a < n; ++a) m[a] = -reach[a];
    bool done = false;
    while (!done) {
      double d2 = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        const double d = static_cast<double>(m[a]) * shape.axes[a].spacing();
        d2 += d * d;
      }
      const std::size_t b = bucket(d2);
      if (b <= K) lattice[b] += 1.0;
      std::size_t a = n;
      while (true) {
        if (a == 0) {
          done = true;
          break;
        }
        --a;
        if (++m[a] <= reach[a]) break;
        m[a] = -reach[a];
      }
    }
    for (std::size_t k = 1; k <= K; ++k) lattice[k] += lattice[k - 1];
  }

  const std::vector<double> mag = f.magnitudes();
  std::vector<std::vector<double>> coords(P, std::vector<double>(n));
  for (std::size_t i = 0; i < P; ++i) f.coordinates(i, coords[i]);
  std::vector<double> out(P, 0.0);
  parallel_for(P, [&](std::size_t i) {
    std::vector<double> mass(K + 1, 0.0);
    for (std::size_t j = 0; j < P; ++j) {
      if (mag[j] == 0.0) continue;
      double d2 = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        const double d = coords[i][a] - coords[j][a];
        d2 += d * d;
      }
      mass[std::min(bucket(d2), K)] += mag[j];
    }
    double acc = 0.0, best = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
      acc += mass[k];
      best = std::max(best, acc / lattice[k]);
    }
    out[i] = best;
  });
  GridFunction g(shape, std::move(out));
  g = g.with_label(f.label().empty() ? "" : "M[" + f.label() + "]");
  if (n == 1) {
    const Axis& ax = shape.axes[0];
    std::vector<double> edges(ax.count + 1), masses(ax.count);
    for (std::size_t i = 0; i <= ax.count; ++i) edges[i] = -ax.half_width + static_cast<double>(i) * ax.spacing();
    edges.back() = ax.half_width;
    for (std::size_t i = 0; i < ax.count; ++i) masses[i] = mag[i] * ax.spacing();
    g = g.with_tail(std::make_shared<MaximalTail>(std::move(edges), std::move(masses)));
  }
  return g;
}

// ---------------------------------------------------------------- dilation

namespace {

double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

// Tensor cubic interpolation of one real channel at fractional index u, clamped to the neighbours.
double interpolate(const GridShape& shape, const std::vector<std::size_t>& strides, std::span<const double> data,
                   const std::vector<double>& u, const std::function<double(const std::vector<long>&)>& outside) {
  const std::size_t n = shape.dimension();
  std::vector<long> base(n);
  std::vector<double> frac(n);
  for (std::size_t a = 0; a < n; ++a) {
    base[a] = static_cast<long>(std::floor(u[a]));
    frac[a] = u[a] - static_cast<double>(base[a]);
  }
  const std::size_t corners = std::size_t{1} << (2 * n);
  std::vector<double> vals(corners);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<long> idx(n);
  for (std::size_t c = 0; c < corners; ++c) {
    bool inside = true;
    std::size_t flat = 0;
    for (std::size_t a = 0; a < n; ++a) {
      idx[a] = base[a] - 1 + static_cast<long>((c >> (2 * (n - 1 - a))) & 3u);
      if (idx[a] < 0 || idx[a] >= static_cast<long>(shape.axes[a].count))
        inside = false;
      else
        flat += static_cast<std::size_t>(idx[a]) * strides[a];
    }
    vals[c] = inside ? data[flat] : outside(idx);
  }
  // Clamp range from the inner 2^n corners.
  for (std::size_t c = 0; c < corners; ++c) {
    bool inner = true;
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t d = (c >> (2 * (n - 1 - a))) & 3u;
      if (d != 1 && d != 2) inner = false;
    }
    if (inner) {
      lo = std::min(lo, vals[c]);
      hi = std::max(hi, vals[c]);
    }
  }
  // Reduce the last axis first.
  std::size_t width = corners;
  for (std::size_t a = n; a-- > 0;) {
    width /= 4;
    for (std::size_t c = 0; c < width; ++c)
      vals[c] = catmull_rom(vals[4 * c], vals[4 * c + 1], vals[4 * c + 2], vals[4 * c + 3], frac[a]);
  }
  return std::clamp(vals[0], lo, hi);
}

}  // namespace

GridFunction dilate(const GridFunction& f, const std::vector<double>& lambdas, DilationMode mode) {
  const GridShape& shape = f.shape();
  if (lambdas.size() != shape.blocks.size()) throw ConfigError("need one dilation factor per block");
  for (double l : lambdas)
    if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("dilation factors must be positive");
  std::vector<double> axis_lambda;
  for (std::size_t j = 0; j < shape.blocks.size(); ++j)
    for (std::size_t k = 0; k < shape.blocks[j]; ++k) axis_lambda.push_back(lambdas[j]);

  if (mode == DilationMode::rescale) {
    GridShape out = shape;
    for (std::size_t a = 0; a < out.axes.size(); ++a) out.axes[a].half_width /= axis_lambda[a];
    std::vector<double> re(f.real().begin(), f.real().end());
    GridFunction g = f.is_complex()
                         ? GridFunction(out, std::move(re), std::vector<double>(f.imag().begin(), f.imag().end()))
                         : GridFunction(out, std::move(re));
    g = g.with_label(f.label());
    if (f.tail()) g = g.with_tail(f.tail()->transformed(axis_lambda[0], 1.0));
    return g;
  }

  const std::size_t n = shape.dimension();
  const auto strides = f.strides();
  const auto* tail = f.tail().get();
  auto outside_re = [&](const std::vector<long>& idx) {
    if (!tail) return 0.0;
    const double x = shape.axes[0].center(0) + static_cast<double>(idx[0]) * shape.axes[0].spacing();
    return std::abs(x) > tail->radius() ? tail->value(x) : 0.0;
  };
  auto zero = [](const std::vector<long>&) { return 0.0; };
  std::vector<double> re(f.size()), im(f.is_complex() ? f.size() : 0);
  std::vector<double> x(n), u(n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.coordinates(i, x);
    for (std::size_t a = 0; a < n; ++a) {
      const Axis& ax = shape.axes[a];
      u[a] = (axis_lambda[a] * x[a] + ax.half_width) / ax.spacing() - 0.5;
    }
    re[i] = interpolate(shape, strides, f.real(), u, outside_re);
    if (f.is_complex()) im[i] = interpolate(shape, strides, f.imag(), u, zero);
  }
  GridFunction g = f.is_complex() ? GridFunction(shape, std::move(re), std::move(im)) : GridFunction(shape, std::move(re));
  return g.with_label(f.label());
}

// ---------------------------------------------------------------- convolution

GridFunction convolve(const GridFunction& kernel, const GridFunction& f) {
  if (kernel.dimension() != f.dimension()) throw ConfigError("kernel and function dimensions differ");
  const GridShape& ks = kernel.shape();
  const std::size_t n = f.dimension();
  const auto kstrides = kernel.strides();
  auto kval = [&](const std::vector<double>& z) -> std::complex<double> {
    std::vector<std::size_t> i0(n);
    std::vector<double> w(n);
    for (std::size_t a = 0; a < n; ++a) {
      const Axis& ax = ks.axes[a];
      if (std::abs(z[a]) > ax.half_width) return 0.0;
      double u = (z[a] + ax.half_width) / ax.spacing() - 0.5;
      u = std::clamp(u, 0.0, static_cast<double>(ax.count - 1));
      const double fl = std::min(std::floor(u), static_cast<double>(ax.count - 2));
      i0[a] = static_cast<std::size_t>(fl);
      w[a] = u - fl;
    }
    std::complex<double> acc = 0.0;
    for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) {
      double weight = 1.0;
      std::size_t flat = 0;
      for (std::size_t a = 0; a < n; ++a) {
        const std::size_t bit = (c >> a) & 1u;
        weight *= bit ? w[a] : 1.0 - w[a];
        flat += (i0[a] + bit) * kstrides[a];
      }
      if (weight != 0.0) acc += weight * kernel.value(flat);
    }
    return acc;
  };
  const std::size_t P = f.size();
  const double vol = f.shape().cell_volume();
  std::vector<std::vector<double>> coords(P, std::vector<double>(n));
  for (std::size_t i = 0; i < P; ++i) f.coordinates(i, coords[i]);
  cvec out(P);
  parallel_for(P, [&](std::size_t i) {
    std::vector<double> z(n);
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < P; ++j) {
      for (std::size_t a = 0; a < n; ++a) z[a] = coords[i][a] - coords[j][a];
      acc += kval(z) * f.value(j);
    }
    out[i] = acc * vol;
  });
  return from_complex(f.shape(), out, !f.is_complex() && !kernel.is_complex());
}

// ---------------------------------------------------------------- kernels

Kernel Kernel::hardy() {
  Kernel k;
  k.tag_ = Tag::hardy_steinweiss;
  k.n_ = 1;
  k.label_ = "hardy";
  k.degree_ = -1.0;
  k.hardy_ = true;
  k.singular_ = true;
  k.eval_ = [](std::span<const double> x, std::span<const double> y) {
    return (y[0] > 0.0 && y[0] < x[0]) ? 1.0 / x[0] : 0.0;
  };
  return k;
}

Kernel Kernel::homogeneous(Eval eval, int n, bool rotation_invariant, std::string label) {
  if (n < 1) throw ConfigError("kernel dimension must be positive");
  Kernel k;
  k.tag_ = Tag::hardy_steinweiss;
  k.n_ = n;
  k.label_ = std::move(label);
  k.degree_ = -static_cast<double>(n);
  k.rotation_invariant_ = rotation_invariant;
  k.singular_ = true;
  k.eval_ = std::move(eval);
  return k;
}

Kernel Kernel::okikiolu(std::function<double(double)> h, double mu, std::string h_label) {
  Kernel k;
  k.tag_ = Tag::okikiolu;
  k.n_ = 1;
  k.label_ = "okikiolu:" + h_label;
  k.eval_ = [h = std::move(h), mu](std::span<const double> x, std::span<const double> t) {
    return std::pow(std::abs(t[0]), mu - 1.0) * h(x[0] * t[0]);
  };
  return k;
}

Kernel Kernel::riesz_potential(std::function<double(std::span<const double>)> a,
                               std::function<double(std::span<const double>)> b, double beta, int n) {
  if (n < 1) throw ConfigError("kernel dimension must be positive");
  if (!(beta > 0.0 && beta < n)) throw DomainError("Riesz potential needs beta in (0, n)");
  Kernel k;
  k.tag_ = Tag::riesz_potential;
  k.n_ = n;
  k.label_ = "riesz-potential";
  k.singular_ = true;
  k.eval_ = [a = std::move(a), b = std::move(b), beta, n](std::span<const double> x, std::span<const double> y) {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
    return a(x) * b(y) * std::pow(std::sqrt(d2), beta - n);
  };
  return k;
}

Kernel Kernel::separable(std::function<double(std::span<const double>)> a,
                         std::function<double(std::span<const double>)> b, int n) {
  Kernel k;
  k.tag_ = Tag::separable;
  k.n_ = n;
  k.label_ = "separable";
  k.eval_ = [a = std::move(a), b = std::move(b)](std::span<const double> x, std::span<const double> y) {
    return a(x) * b(y);
  };
  return k;
}

Kernel Kernel::table(GridFunction kt) {
  const GridShape& s = kt.shape();
  if (s.blocks.size() != 2 || s.blocks[0] != s.blocks[1]) throw ConfigError("kernel table needs blocks {m, m}");
  if (kt.is_complex()) throw ConfigError("kernel tables must be real");
  Kernel k;
  k.tag_ = Tag::table;
  k.n_ = static_cast<int>(s.blocks[0]);
  k.label_ = kt.label().empty() ? "table" : kt.label();
  auto data = std::make_shared<GridFunction>(kt);
  k.eval_ = [data](std::span<const double> x, std::span<const double> y) {
    const GridShape& sh = data->shape();
    const std::size_t m = sh.blocks[0];
    std::size_t flat = 0;
    for (std::size_t a = 0; a < 2 * m; ++a) {
      const Axis& ax = sh.axes[a];
      const double z = a < m ? x[a] : y[a - m];
      if (std::abs(z) >= ax.half_width) return 0.0;
      const auto i = std::min(static_cast<std::size_t>((z + ax.half_width) / ax.spacing()), ax.count - 1);
      flat = flat * ax.count + i;
    }
    return data->real()[flat];
  };
  k.table_ = std::move(kt);
  return k;
}

namespace {

void check_kernel_value(double v) {
  if (!std::isfinite(v)) throw ConfigError("kernel is not integrable on the grid (non-finite value)");
}

// Sub-cell average of K(x, .) over the cell centered at y: offsets +-h/8, +-3h/8 per axis.
double cell_average(const Kernel& K, std::span<const double> x, std::span<const double> y, const GridShape& shape) {
  const std::size_t n = y.size();
  static constexpr double offs[4] = {-0.375, -0.125, 0.125, 0.375};
  std::vector<double> z(n);
  double acc = 0.0;
  std::size_t total = std::size_t{1} << (2 * n);
  for (std::size_t c = 0; c < total; ++c) {
    for (std::size_t a = 0; a < n; ++a) z[a] = y[a] + offs[(c >> (2 * a)) & 3u] * shape.axes[a].spacing();
    const double v = K(x, z);
    check_kernel_value(v);
    acc += v;
  }
  return acc / static_cast<double>(total);
}

double kernel_entry(const Kernel& K, std::span<const double> x, std::span<const double> y, bool diagonal,
                    const GridShape& shape) {
  if (diagonal && K.tag() != Kernel::Tag::table) return cell_average(K, x, y, shape);
  const double v = K(x, y);
  check_kernel_value(v);
  return v;
}

GridShape x_shape_of_table(const GridFunction& t) {
  const GridShape& s = t.shape();
  GridShape out;
  out.axes.assign(s.axes.begin(), s.axes.begin() + static_cast<std::ptrdiff_t>(s.blocks[0]));
  out.blocks = {s.blocks[0]};
  return out;
}

GridShape y_shape_of_table(const GridFunction& t) {
  const GridShape& s = t.shape();
  GridShape out;
  out.axes.assign(s.axes.begin() + static_cast<std::ptrdiff_t>(s.blocks[0]), s.axes.end());
  out.blocks = {s.blocks[1]};
  return out;
}

GridFunction hardy_apply(const GridFunction& f) {
  if (f.dimension() != 1) throw ConfigError("Hardy kernel acts on the line");
  const Axis& ax = f.shape().axes[0];
  const double h = ax.spacing();
  const std::size_t N = f.size();
  std::vector<double> re(N, 0.0), im(N, 0.0);
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double x = ax.center(i);
    if (x <= 0.0) continue;
    const auto v = f.value(i);
    re[i] = (sr + 0.5 * h * v.real()) / x;
    im[i] = (si + 0.5 * h * v.imag()) / x;
    sr += h * v.real();
    si += h * v.imag();
  }
  GridFunction g = f.is_complex() ? GridFunction(f.shape(), std::move(re), std::move(im)) : GridFunction(f.shape(), std::move(re));
  g = g.with_label(f.label().empty() ? "" : "Hardy[" + f.label() + "]");
  // Beyond R: (1/x) (S + int_R^x g) = S_eff / x + sum c/(1-e) x^{-e}.
  if (f.is_complex() && f.tail()) throw ConfigError("complex tailed input");
  // A 1/x input term integrates to c (log x - log R) / x.
  std::vector<PowerTerm> terms, log_terms;
  double s_eff = sr;
  const double R = ax.half_width;
  if (const auto* t = dynamic_cast<const PowerSumTail*>(f.tail().get())) {
    for (const auto& term : t->terms()) {
      if (term.exponent == 1.0) {
        log_terms.push_back({term.coefficient, 1.0});
        s_eff -= term.coefficient * std::log(R);
        continue;
      }
      const double c = term.coefficient / (1.0 - term.exponent);
      terms.push_back({c, term.exponent});
      s_eff -= c * std::pow(R, 1.0 - term.exponent);
    }
  } else if (f.tail()) {
    throw ConfigError("Hardy kernel needs a power-sum input tail");
  }
  if (!f.is_complex()) {
    terms.push_back({s_eff, 1.0});
    if (log_terms.empty())
      g = g.with_tail(std::make_shared<PowerSumTail>(R, TailSides::right, std::move(terms)));
    else
      g = g.with_tail(std::make_shared<PowerLogTail>(R, TailSides::right, std::move(terms), std::move(log_terms)));
  }
  return g;
}

}  // namespace

GridFunction kernel_apply(const Kernel& kernel, const GridFunction& f) {
  if (kernel.is_hardy_average()) return hardy_apply(f);
  if (f.tail()) throw ConfigError("kernel operators other than Hardy take compactly supported inputs");
  GridShape out_shape = f.shape();
  if (kernel.tag() == Kernel::Tag::table) {
    const GridFunction& t = *kernel.table_data();
    if (!(y_shape_of_table(t) == f.shape())) throw ConfigError("input grid does not match the kernel table's y grid");
    out_shape = x_shape_of_table(t);
  }
  if (static_cast<std::size_t>(kernel.dimension()) != f.dimension()) throw ConfigError("kernel dimension mismatch");
  const bool same_grid = out_shape == f.shape();
  const std::size_t n = f.dimension();
  GridFunction probe(out_shape, std::vector<double>(out_shape.size(), 0.0));
  const std::size_t P = f.size(), Q = probe.size();
  std::vector<std::vector<double>> ys(P, std::vector<double>(n));
  for (std::size_t j = 0; j < P; ++j) f.coordinates(j, ys[j]);
  const double vol = f.shape().cell_volume();
  cvec out(Q);
  parallel_for(Q, [&](std::size_t i) {
    std::vector<double> x(n);
    probe.coordinates(i, x);
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < P; ++j) {
      const auto v = f.value(j);
      if (v == 0.0) continue;
      acc += kernel_entry(kernel, x, ys[j], same_grid && i == j && kernel.singular_diagonal(), f.shape()) * v;
    }
    out[i] = acc * vol;
  });
  return from_complex(out_shape, out, !f.is_complex());
}

GridFunction kernel_sample(const Kernel& kernel, const GridShape& shape) {
  if (kernel.tag() == Kernel::Tag::table) return *kernel.table_data();
  if (static_cast<std::size_t>(kernel.dimension()) != shape.dimension()) throw ConfigError("kernel dimension mismatch");
  GridShape two;
  two.axes = shape.axes;
  two.axes.insert(two.axes.end(), shape.axes.begin(), shape.axes.end());
  two.blocks = {shape.dimension(), shape.dimension()};
  GridFunction probe(shape, std::vector<double>(shape.size(), 0.0));
  const std::size_t P = probe.size(), n = shape.dimension();
  std::vector<std::vector<double>> c(P, std::vector<double>(n));
  for (std::size_t i = 0; i < P; ++i) probe.coordinates(i, c[i]);
  std::vector<double> v(P * P);
  parallel_for(P, [&](std::size_t i) {
    for (std::size_t j = 0; j < P; ++j) v[i * P + j] = kernel_entry(kernel, c[i], c[j], i == j && kernel.singular_diagonal(), shape);
  });
  return GridFunction(std::move(two), std::move(v)).with_label(kernel.label());
}

double kernel_norm_bound(const Kernel& kernel, double p, double q, const GridShape& shape) {
  if (!(q > 1.0)) throw DomainError("kernel bound needs q > 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("kernel bound needs p in (1, inf)");
  const double q1 = std::isinf(q) ? 1.0 : q / (q - 1.0);
  const GridFunction k = kernel_sample(kernel, shape);
  const double v = anisotropic_norm(k, {q1, p}, k.shape().blocks);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------- spec

std::string to_string(OperatorSpec::Kind kind) {
  switch (kind) {
    case OperatorSpec::Kind::identity: return "identity";
    case OperatorSpec::Kind::fourier: return "fourier";
    case OperatorSpec::Kind::weighted_fourier: return "weighted_fourier";
    case OperatorSpec::Kind::hilbert: return "hilbert";
    case OperatorSpec::Kind::maximal_hl: return "maximal_hl";
    case OperatorSpec::Kind::dilation: return "dilation";
    case OperatorSpec::Kind::convolution: return "convolution";
    case OperatorSpec::Kind::integral_kernel: return "integral_kernel";
  }
  return "?";
}

OperatorSpec::Kind operator_kind_from_string(const std::string& s) {
  for (auto k : {OperatorSpec::Kind::identity, OperatorSpec::Kind::fourier, OperatorSpec::Kind::weighted_fourier,
                 OperatorSpec::Kind::hilbert, OperatorSpec::Kind::maximal_hl, OperatorSpec::Kind::dilation,
                 OperatorSpec::Kind::convolution, OperatorSpec::Kind::integral_kernel})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown operator kind '" + s + "'");
}

void OperatorSpec::validate(const GridShape& shape) const {
  switch (kind) {
    case Kind::weighted_fourier: weight.validate(shape.blocks.size()); break;
    case Kind::hilbert:
      if (shape.dimension() != 1) throw ConfigError("Hilbert transform needs n = 1");
      break;
    case Kind::dilation:
      if (lambdas.size() != shape.blocks.size()) throw ConfigError("need one dilation factor per block");
      for (double l : lambdas)
        if (!(l > 0.0)) throw DomainError("dilation factors must be positive");
      break;
    case Kind::convolution:
      if (!convolution_kernel) throw ConfigError("convolution needs a kernel function");
      break;
    case Kind::integral_kernel:
      if (!kernel) throw ConfigError("integral operator needs a kernel");
      break;
    default: break;
  }
}

GridFunction apply(const OperatorSpec& op, const GridFunction& f) {
  op.validate(f.shape());
  switch (op.kind) {
    case OperatorSpec::Kind::identity: return f;
    case OperatorSpec::Kind::fourier: return fourier(f, op.convention);
    case OperatorSpec::Kind::weighted_fourier: return weighted_fourier(f, op.weight, op.weighted_form);
    case OperatorSpec::Kind::hilbert: return hilbert_transform(f, op.hilbert_method);
    case OperatorSpec::Kind::maximal_hl: return maximal_hl(f);
    case OperatorSpec::Kind::dilation: return dilate(f, op.lambdas, op.dilation_mode);
    case OperatorSpec::Kind::convolution: return convolve(*op.convolution_kernel, f);
    case OperatorSpec::Kind::integral_kernel: return kernel_apply(*op.kernel, f);
  }
  throw InvariantError("unhandled operator kind");
}

}  // namespace glspace
