#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "glspace/cli.hpp"
#include "glspace/error.hpp"
#include "glspace/io.hpp"

using namespace glspace;
namespace fs = std::filesystem;

namespace {

std::string source_dir() {
  const char* s = std::getenv("GLSPACE_SOURCE_DIR");
  return s ? s : ".";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "glspace_io_cli";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("numbers") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(kInf) == "inf");
  CHECK(format_number(-kInf) == "-inf");
  CHECK(number_from_json(number_to_json(kInf)) == kInf);
  CHECK(number_from_json(number_to_json(-kInf)) == -kInf);
  for (double x : {1.0 / 3.0, 1e-300, 6.02e23, -2.5}) CHECK(number_from_json(Json::parse(number_to_json(x).dump())) == x);
}

TEST_CASE("json round trips") {
  const PsiFunction a = PsiFunction::closed_form({1.0, 4.0}, ClosedForm{2.0, 1.0, 0.5, 0.25, 1.5}, "a");
  const PsiFunction b = psi_from_json(Json::parse(to_json(a).dump()));
  CHECK(b.kind() == PsiFunction::Kind::closed_form);
  CHECK(b.support() == a.support());
  for (double p : {1.1, 2.0, 3.9}) CHECK(b(p).value() == a(p).value());

  const PsiFunction t = PsiFunction::tabulated({1.0, kInf}, {1.5, 2.0, 8.0}, {1.0, 3.0, 2.0}, "t");
  const PsiFunction t2 = psi_from_json(Json::parse(to_json(t).dump()));
  CHECK(t2.knots() == t.knots());
  CHECK(t2.knot_values() == t.knot_values());
  CHECK(t2.support() == t.support());

  const PsiFunction d = psi_from_json(to_json(PsiFunction::degenerate(3.0, 2.0)));
  CHECK(d.is_degenerate());
  CHECK(d.degenerate_point() == 3.0);
  CHECK(d(3.0).value() == 2.0);

  const ExponentGrid g{1.0, kInf, 17, Spacing::log, 500.0, 1e-5};
  const ExponentGrid g2 = exponent_grid_from_json(Json::parse(to_json(g).dump()));
  CHECK(g2.points() == g.points());
  CHECK(exponent_grid_from_json(Json("1:4:5:linear")).points() == std::vector<double>{1.0, 1.75, 2.5, 3.25, 4.0});

  WeightSpec w = WeightSpec::uniform(2, 0.25, 0.5);
  w.theta_beta = {1.0, 0.0};
  const WeightSpec w2 = weight_from_json(Json::parse(to_json(w).dump()));
  CHECK(w2.alpha == w.alpha);
  CHECK(w2.beta == w.beta);
  CHECK(w2.theta_beta == w.theta_beta);

  GridShape s = GridShape::cube(3, 2.5, 16);
  s.blocks = {1, 2};
  const GridShape s2 = grid_shape_from_json(Json::parse(to_json(s).dump()));
  CHECK(s2.blocks == s.blocks);
  CHECK(s2.size() == s.size());
  CHECK(s2.axes[2].half_width == 2.5);

  OperatorSpec op = OperatorSpec::make(OperatorSpec::Kind::weighted_fourier);
  op.weight = WeightSpec::uniform(1, 0.25, 0.25);
  op.weighted_form = WeightedForm::positive_output;
  const OperatorSpec op2 = operator_from_json(Json::parse(to_json(op).dump()));
  CHECK(op2.kind == op.kind);
  OperatorSpec fb = OperatorSpec::make(OperatorSpec::Kind::fourier);
  fb.convention = FourierConvention::beckner;
  CHECK(operator_from_json(Json::parse(to_json(fb).dump())).convention == FourierConvention::beckner);
  CHECK(op2.weighted_form == op.weighted_form);
  CHECK(op2.weight.alpha == op.weight.alpha);

  OperatorSpec h = OperatorSpec::make(OperatorSpec::Kind::integral_kernel);
  h.kernel = Kernel::hardy();
  CHECK(operator_from_json(to_json(h)).kernel->is_hardy_average());

  CHECK_THROWS_AS(operator_from_json(Json::parse(R"({"kind": "nope"})")), ConfigError);
  CHECK_THROWS_AS(psi_from_json(Json::parse(R"({"kind": "closed_form"})")), Error);
}

TEST_CASE("binary and csv grids") {
  GridShape s = GridShape::cube(2, 3.0, 8);
  s.blocks = {1, 1};
  const GridFunction c = GridFunction::sample_complex(s, [](std::span<const double> x) {
    return std::complex<double>(std::exp(-x[0] * x[0]), x[1] / 3.0);
  });
  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  write_grid(ss, c);
  const std::string bytes = ss.str();
  CHECK(bytes.substr(0, 4) == "GLSG");
  const GridFunction c2 = read_grid(ss);
  CHECK(c2.shape().blocks == c.shape().blocks);
  CHECK(vec(c2.real()) == vec(c.real()));
  CHECK(vec(c2.imag()) == vec(c.imag()));
  std::stringstream again(std::ios::in | std::ios::out | std::ios::binary);
  write_grid(again, c2);
  CHECK(again.str() == bytes);

  std::istringstream junk("GLSX....");
  CHECK_THROWS_AS(read_grid(junk), ConfigError);

  const GridFunction r = GridFunction::sample(GridShape::line(2.0, 8), [](std::span<const double> x) { return x[0] * x[0]; });
  std::ostringstream os;
  write_grid_csv(os, r);
  std::istringstream is(os.str());
  const GridFunction r2 = read_grid_csv(is);
  CHECK(vec(r2.real()) == vec(r.real()));
  CHECK(r2.shape().axes[0].half_width == doctest::Approx(2.0));

  std::istringstream shuffled("x,value\n0.5,3\n-0.5,2\n1.5,4\n-1.5,1\n");
  const GridFunction sh = read_grid_csv(shuffled);
  CHECK(vec(sh.real()) == std::vector<double>{1, 2, 3, 4});
  std::istringstream uneven("-1,1\n0,2\n2,3\n");
  CHECK_THROWS_AS(read_grid_csv(uneven), ConfigError);
}

TEST_CASE("reports") {
  VerificationReport empty;
  empty.check = "none";
  CHECK(report_csv(empty) == "member,p,q,lhs,rhs,ratio,constant,verdict\n");

  VerificationReport r;
  r.check = "kernel-bound";
  r.note("kernel", "hardy");
  r.measure("bound", 2.5);
  r.add({"gaussian s=0.5", 1.5, 3.0, 0.125, 0.5, 0.25, kInf, true});
  const VerificationReport back = report_from_json(Json::parse(report_json(r)));
  REQUIRE(back.rows.size() == 1);
  CHECK(back.rows[0].member == "gaussian s=0.5");
  CHECK(back.rows[0].ratio == 0.25);
  CHECK(back.rows[0].constant == kInf);
  CHECK(back.passed);
  CHECK(back.meta("kernel") == std::optional<std::string>("hardy"));
  CHECK(back.measurement("bound") == std::optional<double>(2.5));
  CHECK(report_json(back) == report_json(r));
}

TEST_CASE("cli examples") {
  const Run t = run({"constants", "table", "--kind", "pichorides", "--p", "1.5,2,3"});
  CHECK(t.code == kExitPass);
  std::istringstream lines(t.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "kind,p,q,value,regime");
  CHECK(rows[1].rfind("pichorides,1.5,", 0) == 0);

  const Run grid = run({"constants", "table", "--kind", "pbo_upper", "--p-grid", "2:4:3:linear", "--alpha", "0.25", "--beta", "0.25"});
  CHECK(grid.code == kExitPass);
  CHECK(grid.out.find("envelope") != std::string::npos);

  const std::string cfg = (fs::path(source_dir()) / "configs").string();
  const Run ok = run({"verify", "dilation", "--config", cfg + "/pbo1d.json"});
  CHECK(ok.code == kExitPass);
  CHECK(ok.out == slurp(fs::path(source_dir()) / "tests/golden/pbo1d.csv"));
  const Run ok2 = run({"verify", "dilation", "--config", cfg + "/pbo1d.json"});
  CHECK(ok2.out == ok.out);

  const Run bad = run({"verify", "dilation", "--config", cfg + "/pbo1d-broken.json"});
  CHECK(bad.code == kExitFail);
  CHECK(bad.err.find("slope_block0=0.1") != std::string::npos);

  const Run js = run({"verify", "dilation", "--config", cfg + "/pbo1d.json", "--format", "json"});
  const Json parsed = Json::parse(js.out);
  CHECK(parsed.at("passed").get<bool>());

  CHECK(run({"frobnicate"}).code == kExitConfig);
  CHECK(run({}).code == kExitConfig);
  const Run flag = run({"constants", "table", "--kind", "pichorides", "--bogus", "1"});
  CHECK(flag.code == kExitConfig);
  CHECK_FALSE(flag.err.empty());
  CHECK(run({"constants", "table", "--kind", "pichorides", "--p", "0.5"}).code == kExitConfig);
  CHECK(run({"verify", "dilation", "--config", "/nonexistent/x.json"}).code == kExitConfig);
}

TEST_CASE("cli outputs are atomic and deterministic") {
  const fs::path bad_cfg = scratch("bad.json");
  { std::ofstream(bad_cfg) << R"({"operator": {"kind": "weighted_fourier"}, "grid": {"n": 1, "half_width": -1, "count": 8}})"; }
  const fs::path out = scratch("never.csv");
  fs::remove(out);
  CHECK(run({"verify", "dilation", "--config", bad_cfg.string(), "--out", out.string()}).code == kExitConfig);
  CHECK_FALSE(fs::exists(out));
  fs::path tmp = out;
  tmp += ".tmp";
  CHECK_FALSE(fs::exists(tmp));

  { std::ofstream(bad_cfg) << "{ not json"; }
  CHECK(run({"verify", "dilation", "--config", bad_cfg.string(), "--out", out.string()}).code == kExitConfig);
  CHECK_FALSE(fs::exists(out));

  const fs::path a = scratch("a.bin"), b = scratch("b.bin");
  CHECK(run({"counterexample", "--n", "1", "--beta", "0.25", "--format", "bin", "--out", a.string()}).code == kExitPass);
  CHECK(run({"counterexample", "--n", "1", "--beta", "0.25", "--format", "bin", "--out", b.string()}).code == kExitPass);
  CHECK(slurp(a) == slurp(b));
  const GridFunction f0 = read_grid_file(a.string());
  CHECK(f0.size() > 0);

  // op apply reads the grid back and writes a transform
  const fs::path op_cfg = scratch("op.json");
  { std::ofstream(op_cfg) << R"({"operator": {"kind": "hilbert"}})"; }
  const fs::path in_csv = scratch("in.csv");
  {
    std::ofstream os(in_csv);
    write_grid_csv(os, GridFunction::sample(GridShape::line(4.0, 64), [](std::span<const double> x) { return std::exp(-x[0] * x[0]); }));
  }
  const Run applied = run({"op", "apply", "--config", op_cfg.string(), "--input", in_csv.string()});
  CHECK(applied.code == kExitPass);
  std::istringstream back(applied.out);
  CHECK(read_grid_csv(back).size() == 64);

  const Run nrm = run({"norm", "--input", in_csv.string(), "--kind", "lp", "--p", "2"});
  CHECK(nrm.code == kExitPass);
  CHECK(nrm.out.find("0.886") == std::string::npos);  // |e^{-x^2}|_2^2 = sqrt(pi/2), not the square
  CHECK(nrm.out.find("1.11") != std::string::npos);
  CHECK(run({"norm", "--input", scratch("missing.csv").string(), "--kind", "lp"}).code == kExitConfig);
}
