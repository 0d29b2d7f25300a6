#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "glspace/constants.hpp"
#include "glspace/error.hpp"
#include "glspace/extremal.hpp"
#include "glspace/norms.hpp"
#include "glspace/psi.hpp"

using namespace glspace;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return v;
}

OperatorSpec fourier_op(FourierConvention c = FourierConvention::unitary) {
  OperatorSpec op = OperatorSpec::make(OperatorSpec::Kind::fourier);
  op.convention = c;
  return op;
}

OperatorSpec weighted_op(std::size_t blocks, std::vector<double> alpha, std::vector<double> beta) {
  OperatorSpec op = OperatorSpec::make(OperatorSpec::Kind::weighted_fourier);
  op.weight = WeightSpec::uniform(blocks, 0.0, 0.0);
  op.weight.alpha = std::move(alpha);
  op.weight.beta = std::move(beta);
  return op;
}

PsiFunction power_psi(double lo, double hi) { return PsiFunction::closed_form({lo, hi}, ClosedForm{1.0, 1.0}, "p"); }

}  // namespace

TEST_CASE("operator norm estimates") {
  const TestFamily g = TestFamily::gaussians(GridShape::line(20.0, 4096), logspace(0.25, 2.0, 8));
  const NormEstimate plain = estimate_operator_norm(fourier_op(), 2.0, 2.0, g);
  for (double r : plain.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-9));

  const NormEstimate b = estimate_operator_norm(fourier_op(FourierConvention::beckner), 1.5, 3.0, g);
  const double A = std::sqrt(std::pow(1.5, 2.0 / 3.0) / std::pow(3.0, 1.0 / 3.0));
  CHECK(b.value == doctest::Approx(A).epsilon(1e-3));
  CHECK(b.value == doctest::Approx(fourier_norm(1.5, 1, FourierConvention::beckner)).epsilon(1e-3));
  const NormEstimate u = estimate_operator_norm(fourier_op(), 1.5, 3.0, g);
  CHECK(u.value == doctest::Approx(fourier_norm(1.5, 1, FourierConvention::unitary)).epsilon(1e-3));

  OperatorSpec hardy = OperatorSpec::make(OperatorSpec::Kind::integral_kernel);
  hardy.kernel = Kernel::hardy();
  const TestFamily tails = TestFamily::power_tail(GridShape::line(64.0, 8192), {0.01});
  const NormEstimate h = estimate_operator_norm(hardy, 2.0, 2.0, tails);
  CHECK(h.value >= 1.9);
  CHECK(h.value <= 2.0 * (1 + 1e-3));

  // enlarging the family never lowers the estimate
  const TestFamily small = TestFamily::gaussians(GridShape::line(20.0, 1024), {0.5, 1.0});
  const TestFamily big = TestFamily::gaussians(GridShape::line(20.0, 1024), {0.5, 1.0, 0.3, 1.7});
  const OperatorSpec m = OperatorSpec::make(OperatorSpec::Kind::maximal_hl);
  CHECK(estimate_operator_norm(m, 1.5, 1.5, big).value >= estimate_operator_norm(m, 1.5, 1.5, small).value);

  CHECK_THROWS_AS(estimate_operator_norm(m, 2.0, 2.0, TestFamily::from_functions({})), ConfigError);
  for (auto k : {TestFamily::Kind::gaussians, TestFamily::Kind::indicator_dilates, TestFamily::Kind::power_tail,
                 TestFamily::Kind::pbo_f0, TestFamily::Kind::custom})
    CHECK(family_kind_from_string(to_string(k)) == k);
}

TEST_CASE("counterexample") {
  const GridFunction f0 = pbo_counterexample(1, 0.25);
  const WeightSpec w = WeightSpec::uniform(1, 0.0, 0.25);
  for (double p : {2.0, 3.0}) {
    const double expect = 2.0 / (p * 0.75 - 1.0);
    CHECK(std::pow(weighted_lp_norm(f0, p, w, WeightSide::beta_positive), p) == doctest::Approx(expect).epsilon(1e-4));
  }
  CHECK(std::isinf(weighted_lp_norm(f0, 4.0 / 3.0, w, WeightSide::beta_positive)));
  CHECK_THROWS_AS(pbo_counterexample(1, 0.25, PboParams{1.5, 2.0}), ConfigError);
  CHECK_THROWS_AS(pbo_counterexample(1, 0.25, PboParams{0.5, 0.9}), ConfigError);

  const GridFunction f2 = pbo_counterexample(2, 0.5, PboParams{}, GridShape::cube(2, 8.0, 64));
  std::vector<double> x(2);
  for (std::size_t i = 0; i < f2.size(); ++i) {
    f2.coordinates(i, x);
    if (std::abs(x[0]) < 1.0 || std::abs(x[1]) < 1.0) CHECK(f2.real()[i] == 0.0);
    else if (f2.real()[i] != 0.0) CHECK(f2.real()[i] == doctest::Approx(1.0 / std::abs(x[0] * x[1])));
  }
}

TEST_CASE("pbo blow-up") {
  const PboBlowup r = pbo_blowup(0.25, 0.25);
  CHECK(r.p0 == doctest::Approx(4.0 / 3.0));
  CHECK(r.monotone);
  for (std::size_t i = 1; i < r.monotone_points.size(); ++i) CHECK(r.monotone_points[i].ratio > r.monotone_points[i - 1].ratio);
  CHECK(r.band_lower == doctest::Approx(0.3));
  CHECK(r.band_upper == doctest::Approx(1.2));
  CHECK(r.slope_fit.slope >= r.band_lower);
  CHECK(r.slope_fit.slope <= r.band_upper);
  CHECK(r.log_fit.r_squared > 0.99);
  CHECK(r.log_fit.slope > 0.0);
  CHECK(r.report.passed);
}

TEST_CASE("dilation necessity") {
  const OperatorSpec op = weighted_op(1, {0.25}, {0.25});
  const std::vector<double> lam{0.125, 1.0, 8.0};
  const VerificationReport ok = dilation_necessity_check(op, op.weight, {2.0}, {2.0}, lam);
  CHECK(ok.passed);
  CHECK(std::abs(*ok.measurement("slope_block0")) < 1e-6);
  for (double d : {0.05, 0.1, 0.2}) {
    const double q = 1.0 / (0.5 + d);
    const VerificationReport bad = dilation_necessity_check(op, op.weight, {2.0}, {q}, lam);
    CHECK_FALSE(bad.passed);
    CHECK(*bad.measurement("slope_block0") == doctest::Approx(d).epsilon(1e-3));
    CHECK(*bad.measurement("defect_block0") == doctest::Approx(d).epsilon(1e-12));
  }
  // p = 3, alpha = 0.1, beta = 0.3: 1/q = 1 - 1/3 - 0.2
  const OperatorSpec op2 = weighted_op(1, {0.1}, {0.3});
  const VerificationReport r3 = dilation_necessity_check(op2, op2.weight, {3.0}, {1.0 / (2.0 / 3.0 - 0.2)}, {0.1, 1.0, 10.0, 100.0});
  CHECK(std::abs(*r3.measurement("slope_block0")) < 1e-6);

  // two blocks with a common q: only the first block balances
  const OperatorSpec two = weighted_op(2, {0.25, 0.25}, {0.25, 0.5});
  const VerificationReport t = dilation_necessity_check(two, two.weight, {2.0, 2.0}, {2.0, 2.0}, lam);
  CHECK_FALSE(t.passed);
  CHECK(std::abs(*t.measurement("slope_block0")) < 1e-3);
  CHECK(*t.measurement("slope_block1") == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(t.meta("failure_block1").has_value());
  const VerificationReport t2 = dilation_necessity_check(two, two.weight, {2.0, 2.0}, {2.0, 4.0}, lam);
  CHECK(t2.passed);
  CHECK(std::abs(*t2.measurement("slope_block1")) < 1e-3);
}

TEST_CASE("gls transfer") {
  const TestFamily ind = TestFamily::indicator_dilates(GridShape::line(16.0, 2048), logspace(0.25, 2.0, 6));
  const PsiFunction psi = power_psi(1.0, 4.0);

  const VerificationReport id = verify_gls_transfer(OperatorSpec::make(OperatorSpec::Kind::identity), psi,
                                                    [](double) { return 1.0; }, ExponentMap::identity({1.0, 4.0}), ind);
  CHECK(id.passed);
  for (const auto& row : id.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*id.measurement("probe_ratio") >= 0.999);

  const OperatorSpec m = OperatorSpec::make(OperatorSpec::Kind::maximal_hl);
  auto K = [](double p) { return p / (p - 1.0); };
  const VerificationReport mr = verify_gls_transfer(m, psi, K, ExponentMap::identity({1.0, 4.0}), ind);
  CHECK(mr.meta("catalog") == std::optional<std::string>("consistent"));
  CHECK(mr.passed);
  const VerificationReport m2 = verify_gls_transfer(m, psi, [&](double p) { return 2 * K(p); }, ExponentMap::identity({1.0, 4.0}), ind);
  REQUIRE(m2.rows.size() == mr.rows.size());
  for (std::size_t i = 0; i < m2.rows.size(); ++i) {
    CHECK(m2.rows[i].ratio <= 0.5 * (1 + 1e-9));
    CHECK(m2.rows[i].ratio == doctest::Approx(0.5 * mr.rows[i].ratio).epsilon(1e-12));
  }

  // a constant that is too small is flagged, not hidden
  const VerificationReport low = verify_gls_transfer(m, psi, [](double) { return 0.5; }, ExponentMap::identity({1.0, 4.0}), ind);
  CHECK(low.meta("catalog") == std::optional<std::string>("inconsistent"));

  // homogeneity
  const GridFunction f = ind.member(2, 2.0);
  const TestFamily pair = TestFamily::from_functions({f, f.scaled(3.5)});
  const VerificationReport h = verify_gls_transfer(m, psi, K, ExponentMap::identity({1.0, 4.0}), pair);
  CHECK(h.rows[0].ratio == doctest::Approx(h.rows[1].ratio).epsilon(1e-12));

  // degenerate psi reduces to the plain ratio
  const VerificationReport d = verify_gls_transfer(m, PsiFunction::degenerate(2.5), K, ExponentMap::identity({1.0, 4.0}), ind);
  for (std::size_t i = 0; i < ind.size(); ++i) {
    const GridFunction g = ind.member(i, 2.5);
    const double plain = lp_norm(maximal_hl(g), 2.5) / lp_norm(g, 2.5) / K(2.5);
    CHECK(d.rows[i].ratio == doctest::Approx(plain).epsilon(1e-12));
  }

  // Plancherel sharpness at the catalog exponent
  const TestFamily gs = TestFamily::gaussians(GridShape::line(20.0, 1024), logspace(0.5, 2.0, 4));
  TransferOptions opt;
  opt.probe = 2.0;
  const VerificationReport fr = verify_gls_transfer(fourier_op(), power_psi(1.0, 2.0),
                                                    [](double p) { return fourier_norm(p, 1, FourierConvention::unitary); },
                                                    ExponentMap::conjugate({1.0, 2.0}), gs, opt);
  CHECK(fr.meta("catalog") == std::optional<std::string>("consistent"));
  CHECK(fr.passed);
  CHECK(*fr.measurement("probe_ratio") >= 1 - 1e-3);

  // determinism
  const VerificationReport again = verify_gls_transfer(m, psi, K, ExponentMap::identity({1.0, 4.0}), ind);
  REQUIRE(again.rows.size() == mr.rows.size());
  for (std::size_t i = 0; i < mr.rows.size(); ++i) {
    CHECK(again.rows[i].lhs == mr.rows[i].lhs);
    CHECK(again.rows[i].rhs == mr.rows[i].rhs);
  }
}

TEST_CASE("interpolation") {
  const TestFamily gs = TestFamily::gaussians(GridShape::line(20.0, 2048), logspace(0.5, 2.0, 4));
  const VerificationReport rt = verify_interpolation(fourier_op(FourierConvention::beckner), {1.0, kInf, 1.0}, {2.0, 2.0, 1.0},
                                                     InterpolationKind::riesz_thorin, gs, 1e-9, 3);
  CHECK(rt.passed);
  bool saw = false;
  for (const auto& row : rt.rows) {
    if (std::abs(row.p - 1.5) > 1e-12) continue;
    saw = true;
    CHECK(row.constant == 2.0);
    CHECK(row.ratio == doctest::Approx(beckner_A(1.5, 1)).epsilon(1e-3));
    CHECK(row.ratio < 1.0);
  }
  CHECK(saw);

  const VerificationReport idr = verify_interpolation(OperatorSpec::make(OperatorSpec::Kind::identity), {1.0, 1.0, 1.0},
                                                      {4.0, 4.0, 1.0}, InterpolationKind::riesz_thorin, gs);
  CHECK(idr.passed);
  CHECK(idr.rows.size() == 2 * gs.size() + 9 * gs.size());
  for (const auto& row : idr.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-12));

  const VerificationReport mk = verify_interpolation(OperatorSpec::make(OperatorSpec::Kind::identity), {1.0, 1.0, 2.0},
                                                     {4.0, 4.0, 3.0}, InterpolationKind::marcinkiewicz, gs, 1e-9, 2);
  CHECK(mk.meta("regime") == std::optional<std::string>("modulo absolute constant"));
  for (const auto& row : mk.rows)
    if (row.member.rfind("theta=", 0) == 0) CHECK(row.constant == 12.0);

  const VerificationReport bad = verify_interpolation(fourier_op(), {1.0, kInf, 0.01}, {2.0, 2.0, 1.0},
                                                      InterpolationKind::riesz_thorin, gs);
  CHECK_FALSE(bad.passed);
  CHECK(bad.meta("aborted").has_value());
  CHECK(bad.rows.size() == 2 * gs.size());
}

TEST_CASE("kernel bound on random kernels") {
  GridShape s2 = GridShape::cube(2, 1.0, 16);
  s2.blocks = {1, 1};
  std::vector<double> vals(s2.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = 0.5 + 0.5 * std::sin(1.7 * static_cast<double>(i));
  const Kernel K = Kernel::table(GridFunction(s2, vals));
  const TestFamily fam = TestFamily::indicator_dilates(GridShape::line(1.0, 16), {0.25, 0.5, 1.0});
  for (auto [p, q] : {std::pair{2.0, 2.0}, std::pair{1.5, 3.0}}) {
    const VerificationReport r = verify_kernel_bound(K, p, q, fam);
    CHECK(r.passed);
    for (const auto& row : r.rows) CHECK(row.ratio <= row.constant * (1 + 1e-6));
  }
}
