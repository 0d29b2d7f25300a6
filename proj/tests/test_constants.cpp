#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "glspace/constants.hpp"
#include "glspace/error.hpp"
#include "glspace/grid_function.hpp"

using namespace glspace;

namespace {

constexpr double kPi = std::numbers::pi;

double a_oracle(double p) {
  const double pc = p / (p - 1.0);
  return std::sqrt(std::pow(p, 1.0 / p) / std::pow(pc, 1.0 / pc));
}

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return v;
}

}  // namespace

TEST_CASE("pichorides") {
  CHECK(pichorides(2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pichorides(2.0 - 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(pichorides(2.0 + 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  for (double p : {1.25, 1.5, 3.0, 6.0}) {
    CHECK(pichorides(p) >= 1.0);
    CHECK(pichorides(p) == doctest::Approx(pichorides(p / (p - 1.0))).epsilon(1e-12));
  }
  CHECK(pichorides(4.0) == doctest::Approx(1.0 / std::tan(kPi / 8)));
  CHECK_THROWS_AS(pichorides(1.0), DomainError);
  CHECK_THROWS_AS(pichorides(INFINITY), DomainError);
}

TEST_CASE("beckner A") {
  CHECK(beckner_A(2.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(beckner_A(1.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  for (double p = 1.05; p < 2.0; p += 0.05) {
    CHECK(beckner_A(p, 1) < 1.0);
    CHECK(beckner_A(p, 1) == doctest::Approx(a_oracle(p)).epsilon(1e-14));
    CHECK(beckner_A(p, 3) == doctest::Approx(std::pow(a_oracle(p), 3)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(beckner_A(2.5, 1), DomainError);

  ConstantQuery q;
  q.kind = ConstantKind::young_convolution;
  q.p = 4.0 / 3.0;
  q.q = 4.0 / 3.0;
  const auto y = sharp_constant(q);
  CHECK(y.value == doctest::Approx(a_oracle(4.0 / 3.0) * a_oracle(4.0 / 3.0)).epsilon(1e-14));
  CHECK(y.q == doctest::Approx(2.0));
}

TEST_CASE("stein weiss and okikiolu") {
  for (double p : {1.5, 2.0, 3.0}) CHECK(stein_weiss(Kernel::hardy(), p) == doctest::Approx(p / (p - 1.0)).epsilon(1e-9));

  // 2D kernel |x|^{-2} 1_{|x|>1}: 2 pi int_1^inf r^{-2} r^{-2/p'} r dr = pi p
  const Kernel k2 = Kernel::homogeneous(
      [](std::span<const double> x, std::span<const double> y) {
        const double rx = std::hypot(x[0], x[1]), ry = std::hypot(y[0], y[1]);
        return rx > ry ? 1.0 / (rx * rx) : 0.0;
      },
      2, false, "outer");
  const double p = 2.0;
  CHECK(stein_weiss(k2, p) == doctest::Approx(kPi * p / (p - 1)).epsilon(1e-6));
  CHECK(stein_weiss(k2, 3.0) == doctest::Approx(kPi * 1.5).epsilon(1e-6));
  const Kernel flat = Kernel::homogeneous([](std::span<const double>, std::span<const double>) { return 1.0; }, 1, false, "flat");
  CHECK(std::isinf(stein_weiss(flat, 2.0)));

  ConstantQuery q;
  q.kind = ConstantKind::okikiolu;
  q.p = 2.0;
  q.mu = 0.75;
  const double sigma = 1.0 / (1.0 + q.mu - 2.0 / q.p);
  const double a = sigma * (q.p - 1.0) / q.p;
  const auto g = sharp_constant(q);
  CHECK(g.value == doctest::Approx(std::pow(std::tgamma((1 - a) / 2) * std::pow(sigma, -(1 - a) / 2), 1 / sigma)).epsilon(1e-9));
  CHECK(g.q == doctest::Approx(4.0));
  q.h_profile = "exponential";
  CHECK(sharp_constant(q).value == doctest::Approx(std::pow(2 * std::tgamma(1 - a) * std::pow(sigma, a - 1), 1 / sigma)).epsilon(1e-9));
  q.h_profile = "indicator";
  CHECK(sharp_constant(q).value == doctest::Approx(std::pow(2 / (1 - a), 1 / sigma)).epsilon(1e-9));
  q.mu = 0.25;
  CHECK_THROWS_AS(sharp_constant(q), DomainError);
}

TEST_CASE("fractional sobolev") {
  const double expect = std::pow(kPi, 0.25) * std::tgamma(0.25) / std::tgamma(0.75);
  for (double p : {1.2, 1.5, 1.9}) CHECK(fractional_sobolev(1, 0.5, p) == doctest::Approx(expect).epsilon(1e-12));
  const double n = 3, s = 1;
  const double e3 = std::pow(kPi, s / 2) * std::tgamma((n - s) / 2) / std::tgamma((n + s) / 2) *
                    std::pow(std::tgamma(s) / std::tgamma(n / 2), s / n);
  CHECK(fractional_sobolev(3, 1.0, 2.0) == doctest::Approx(e3).epsilon(1e-12));
  CHECK_THROWS_AS(fractional_sobolev(1, 0.5, 2.0), DomainError);
  CHECK_THROWS_AS(fractional_sobolev(1, 1.5, 1.2), DomainError);
  ConstantQuery q;
  q.kind = ConstantKind::fractional_sobolev;
  q.p = 1.5;
  CHECK(sharp_constant(q).q == doctest::Approx(6.0));
}

TEST_CASE("envelopes") {
  for (int n : {1, 2, 3})
    for (double beta : {0.0, 0.25, 0.5 * n})
      for (double alpha : {0.0, 0.25, 1.0, 2.0 * n}) {
        const double p0 = n / (n - beta);
        for (double eps : {0.01, 0.3, 2.0}) {
          const double p = p0 * (1 + eps);
          CHECK(pbo_upper(p, alpha, beta, n) >= pbo_lower(p, alpha, beta, n));
          CHECK(pbo_lower(p, alpha, beta, n) >= 1.0);
        }
        CHECK_THROWS_AS(pbo_upper(p0, alpha, beta, n), DomainError);
      }
  CHECK(marcinkiewicz_factor(0.5) == 4.0);
  for (double t = 0.01; t < 1.0; t += 0.01) CHECK(marcinkiewicz_factor(t) >= 4.0);
  CHECK_THROWS_AS(marcinkiewicz_factor(0.0), DomainError);

  for (auto k : all_constant_kinds()) CHECK(constant_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(constant_kind_from_string("nope"), ConfigError);

  ConstantQuery q;
  q.p = 3.0;
  q.alpha = 0.25;
  q.beta = 0.25;
  for (auto k : {ConstantKind::pbo_lower, ConstantKind::pbo_upper, ConstantKind::maximal_envelope,
                 ConstantKind::calderon_zygmund_envelope, ConstantKind::maximal_fourier_envelope,
                 ConstantKind::marcinkiewicz_factor}) {
    q.kind = k;
    const auto v = sharp_constant(q);
    CHECK(v.regime == Regime::envelope);
    CHECK(v.note.find("modulo absolute constant") != std::string::npos);
  }
  q.kind = ConstantKind::pbo_upper;
  CHECK(sharp_constant(q).q == doctest::Approx(1.5));
  q.kind = ConstantKind::marcinkiewicz_factor;
  q.M0 = 2.0;
  q.M1 = 3.0;
  CHECK(sharp_constant(q).value == 12.0);

  q.kind = ConstantKind::aniso_pbo_upper;
  q.blocks = {1, 2};
  q.p_vec = {3.0, 3.0};
  q.alpha_vec = {0.25, 0.5};
  q.beta_vec = {0.25, 0.5};
  CHECK(sharp_constant(q).value == doctest::Approx(pbo_upper(3.0, 0.25, 0.25, 1) * pbo_upper(3.0, 0.5, 0.5, 2)));
  q.beta_vec = {0.25};
  CHECK_THROWS_AS(sharp_constant(q), DomainError);

  q = ConstantQuery{};
  q.kind = ConstantKind::riesz_potential;
  q.p = 1.5;
  q.q = 4.0;
  q.p0 = 4.0;
  q.q0 = 4.0;
  q.beta = 0.5;
  q.a_norm = 2.0;
  q.b_norm = 3.0;
  const auto rp = sharp_constant(q);
  CHECK(rp.regime == Regime::ambiguous);
  CHECK(rp.value == 6.0);
  CHECK(rp.note.find("ambiguous") != std::string::npos);
  q.p0 = 1.5;
  CHECK_THROWS_AS(sharp_constant(q), DomainError);
}

TEST_CASE("muckenhoupt examples") {
  const auto grid = logspace(1e-9, 1e3, 1201);
  RadialProfile zero{1, 0.0, INFINITY, [](double) { return 0.0; }};
  RadialProfile unit{1, 0.0, 1.0, [](double) { return 1.0; }, RadialProfile::Monotone::none, 1.0};
  CHECK(muckenhoupt_I(zero, unit, 2.0, 1.0, 1.0, grid).value() == 0.0);
  CHECK(muckenhoupt_I(zero, unit, 1.5, 3.0, 0.5, grid).value() == 0.0);

  CHECK(muckenhoupt_I(unit, unit, 2.0, 1.0, 1.0, grid).value() == 0.0);

  RadialProfile inv2{1, 1.0, INFINITY, [](double r) { return 1.0 / (r * r); }, RadialProfile::Monotone::decreasing};
  // with A = 1 the sublevel set of v is empty whenever the superlevel set of u is not
  CHECK(muckenhoupt_I(inv2, unit, 2.0, 1.0, 1.0, grid).value() == 0.0);
  const Extended I = muckenhoupt_I(inv2, unit, 2.0, 1e8, 1.0, grid);
  CHECK(I.value() == doctest::Approx(2.0).epsilon(1e-3));

  RadialProfile slow{1, 1.0, INFINITY, [](double r) { return 1.0 / std::sqrt(r); }, RadialProfile::Monotone::decreasing};
  // the sup sits at the grid's lower end and grows like 4/r_min under refinement
  const double s1 = muckenhoupt_I(slow, unit, 2.0, 1e8, 1.0, logspace(1e-4, 1e3, 301)).value();
  const double s2 = muckenhoupt_I(slow, unit, 2.0, 1e8, 1.0, logspace(1e-6, 1e3, 401)).value();
  CHECK(s1 == doctest::Approx(4.0 * (1e4 - 1.0)).epsilon(1e-6));
  CHECK(s2 > 90.0 * s1);
  CHECK_THROWS_AS(muckenhoupt_I(inv2, unit, 2.5, 1.0, 1.0, grid), DomainError);
  CHECK_THROWS_AS(muckenhoupt_I(inv2, unit, 1.0, 1.0, 1.0, grid), DomainError);
}

TEST_CASE("muckenhoupt monotone in u") {
  const GridShape s = GridShape::line(4.0, 256);
  const auto grid = logspace(1e-4, 1e2, 301);
  auto v = GridFunction::sample(s, [](std::span<const double> x) { return 0.5 + x[0] * x[0]; });
  for (int k = 0; k < 5; ++k) {
    const double c = 0.3 + 0.4 * k;
    auto u1 = GridFunction::sample(s, [c](std::span<const double> x) { return std::exp(-c * x[0] * x[0]); });
    auto u2 = GridFunction::sample(s, [c](std::span<const double> x) { return std::exp(-c * x[0] * x[0]) * (1.2 + 0.1 * std::sin(x[0])); });
    for (double p : {1.25, 1.6, 2.0}) {
      const double a = muckenhoupt_I(SampledProfile{u1}, SampledProfile{v}, p, 1.5, 0.7, grid).value();
      const double b = muckenhoupt_I(SampledProfile{u2}, SampledProfile{v}, p, 1.5, 0.7, grid).value();
      CHECK(a > 0.0);
      CHECK(b >= a);
    }
  }
}
