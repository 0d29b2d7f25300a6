#include "glspace/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "glspace/constants.hpp"
#include "glspace/error.hpp"

namespace glspace {

// ---------------------------------------------------------------- numbers

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw InvariantError("number formatting failed");
  return std::string(buf.data(), ptr);
}

Json number_to_json(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  }
  throw ConfigError("expected a number, got " + j.dump());
}

namespace {

std::vector<double> numbers_from_json(const Json& j) {
  std::vector<double> v;
  if (j.is_array())
    for (const auto& x : j) v.push_back(number_from_json(x));
  else
    v.push_back(number_from_json(j));
  return v;
}

Json numbers_to_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double get_or(const Json& j, const char* key, double dflt) {
  return j.is_object() && j.contains(key) ? number_from_json(j.at(key)) : dflt;
}

Support support_from_json(const Json& j) {
  const auto v = numbers_from_json(j);
  if (v.size() != 2) throw ConfigError("support needs [lower, upper]");
  return {v[0], v[1]};
}

}  // namespace

// ---------------------------------------------------------------- psi

Json to_json(const PsiFunction& psi) {
  Json j;
  switch (psi.kind()) {
    case PsiFunction::Kind::closed_form: {
      const ClosedForm& c = psi.closed_form_params();
      j["kind"] = "closed_form";
      j["support"] = numbers_to_json({psi.support().lower, psi.support().upper});
      j["scale"] = c.scale;
      j["power"] = c.power;
      j["log_power"] = c.log_power;
      j["left_pole"] = c.left_pole;
      j["right_pole"] = c.right_pole;
      break;
    }
    case PsiFunction::Kind::tabulated:
      j["kind"] = "tabulated";
      j["support"] = numbers_to_json({psi.support().lower, psi.support().upper});
      j["knots"] = numbers_to_json(psi.knots());
      j["values"] = numbers_to_json(psi.knot_values());
      break;
    case PsiFunction::Kind::degenerate:
      j["kind"] = "degenerate";
      j["r"] = number_to_json(psi.degenerate_point());
      j["value"] = number_to_json(psi(psi.degenerate_point()).value());
      break;
    case PsiFunction::Kind::composed: throw ConfigError("composed psi functions are not serializable");
  }
  if (!psi.label().empty()) j["label"] = psi.label();
  return j;
}

PsiFunction psi_from_json(const Json& j) {
  const std::string kind = need(j, "kind").get<std::string>();
  const std::string label = j.value("label", std::string{});
  if (kind == "closed_form") {
    ClosedForm c;
    c.scale = get_or(j, "scale", 1.0);
    c.power = get_or(j, "power", 0.0);
    c.log_power = get_or(j, "log_power", 0.0);
    c.left_pole = get_or(j, "left_pole", 0.0);
    c.right_pole = get_or(j, "right_pole", 0.0);
    return PsiFunction::closed_form(support_from_json(need(j, "support")), c, label);
  }
  if (kind == "tabulated")
    return PsiFunction::tabulated(support_from_json(need(j, "support")), numbers_from_json(need(j, "knots")),
                                  numbers_from_json(need(j, "values")), label);
  if (kind == "degenerate") return PsiFunction::degenerate(number_from_json(need(j, "r")), get_or(j, "value", 1.0), label);
  throw ConfigError("unknown psi kind '" + kind + "'");
}

// ---------------------------------------------------------------- grids

Json to_json(const ExponentGrid& g) {
  Json j;
  j["start"] = number_to_json(g.start);
  j["stop"] = number_to_json(g.stop);
  j["count"] = g.count;
  j["spacing"] = to_string(g.spacing);
  j["infinity_cap"] = number_to_json(g.infinity_cap);
  j["endpoint_offset"] = number_to_json(g.endpoint_offset);
  return j;
}

ExponentGrid exponent_grid_from_json(const Json& j) {
  if (j.is_string()) return parse_exponent_grid(j.get<std::string>());
  ExponentGrid g;
  g.start = number_from_json(need(j, "start"));
  g.stop = number_from_json(need(j, "stop"));
  g.count = j.value("count", g.count);
  if (j.contains("spacing")) g.spacing = spacing_from_string(j.at("spacing").get<std::string>());
  g.infinity_cap = get_or(j, "infinity_cap", g.infinity_cap);
  g.endpoint_offset = get_or(j, "endpoint_offset", g.endpoint_offset);
  return g;
}

Json to_json(const WeightSpec& w) {
  Json j;
  j["alpha"] = numbers_to_json(w.alpha);
  j["beta"] = numbers_to_json(w.beta);
  if (!w.theta_alpha.empty()) j["theta_alpha"] = numbers_to_json(w.theta_alpha);
  if (!w.theta_beta.empty()) j["theta_beta"] = numbers_to_json(w.theta_beta);
  if (w.mu != 0.0) j["mu"] = w.mu;
  return j;
}

WeightSpec weight_from_json(const Json& j) {
  WeightSpec w;
  if (j.contains("alpha")) w.alpha = numbers_from_json(j.at("alpha"));
  if (j.contains("beta")) w.beta = numbers_from_json(j.at("beta"));
  if (j.contains("theta_alpha")) w.theta_alpha = numbers_from_json(j.at("theta_alpha"));
  if (j.contains("theta_beta")) w.theta_beta = numbers_from_json(j.at("theta_beta"));
  w.mu = get_or(j, "mu", 0.0);
  if (w.alpha.empty()) w.alpha.assign(w.beta.size(), 0.0);
  if (w.beta.empty()) w.beta.assign(w.alpha.size(), 0.0);
  return w;
}

Json to_json(const GridShape& s) {
  Json j;
  j["n"] = s.dimension();
  Json hw = Json::array(), cnt = Json::array();
  for (const auto& a : s.axes) {
    hw.push_back(a.half_width);
    cnt.push_back(a.count);
  }
  j["half_width"] = hw;
  j["count"] = cnt;
  j["blocks"] = s.blocks;
  return j;
}

GridShape grid_shape_from_json(const Json& j) {
  const std::size_t n = j.value("n", std::size_t{1});
  const auto hw = numbers_from_json(need(j, "half_width"));
  std::vector<std::size_t> cnt;
  const Json& c = need(j, "count");
  if (c.is_array())
    for (const auto& x : c) cnt.push_back(x.get<std::size_t>());
  else
    cnt.push_back(c.get<std::size_t>());
  GridShape s;
  for (std::size_t i = 0; i < n; ++i)
    s.axes.push_back({hw.size() == 1 ? hw[0] : hw.at(i), cnt.size() == 1 ? cnt[0] : cnt.at(i)});
  if (j.contains("blocks"))
    s.blocks = j.at("blocks").get<std::vector<std::size_t>>();
  else
    s.blocks = {n};
  s.validate();
  return s;
}

// ---------------------------------------------------------------- operators

namespace {

constexpr const char* kFilePrefix = "file:";

Json kernel_to_json(const Kernel& k) {
  Json j;
  if (k.is_hardy_average()) {
    j["type"] = "hardy";
    return j;
  }
  if (k.tag() == Kernel::Tag::table && k.label().rfind(kFilePrefix, 0) == 0) {
    j["type"] = "table";
    j["path"] = k.label().substr(std::char_traits<char>::length(kFilePrefix));
    return j;
  }
  throw ConfigError("kernel '" + k.label() + "' is not serializable");
}

Kernel kernel_from_json(const Json& j) {
  const std::string type = need(j, "type").get<std::string>();
  if (type == "hardy") return Kernel::hardy();
  if (type == "okikiolu") {
    const std::string h = j.value("h", std::string("gaussian"));
    return Kernel::okikiolu(okikiolu_profile(h), number_from_json(need(j, "mu")), h);
  }
  if (type == "table") {
    const std::string path = need(j, "path").get<std::string>();
    return Kernel::table(read_grid_file(path).with_label(kFilePrefix + path));
  }
  throw ConfigError("unknown kernel type '" + type + "'");
}

}  // namespace

Json to_json(const OperatorSpec& op) {
  Json j;
  j["kind"] = to_string(op.kind);
  Json p = Json::object();
  switch (op.kind) {
    case OperatorSpec::Kind::fourier: p["convention"] = op.convention == FourierConvention::unitary ? "unitary" : "beckner"; break;
    case OperatorSpec::Kind::weighted_fourier:
      p["weight"] = to_json(op.weight);
      p["form"] = op.weighted_form == WeightedForm::negative_output ? "negative_output" : "positive_output";
      break;
    case OperatorSpec::Kind::hilbert:
      p["method"] = op.hilbert_method == HilbertMethod::spectral ? "spectral" : "pv_quadrature";
      break;
    case OperatorSpec::Kind::dilation:
      p["lambdas"] = numbers_to_json(op.lambdas);
      p["mode"] = op.dilation_mode == DilationMode::rescale ? "rescale" : "resample";
      break;
    case OperatorSpec::Kind::convolution: {
      const std::string& l = op.convolution_kernel ? op.convolution_kernel->label() : std::string{};
      if (l.rfind(kFilePrefix, 0) != 0) throw ConfigError("convolution kernel must come from a file to serialize");
      p["kernel_path"] = l.substr(std::char_traits<char>::length(kFilePrefix));
      break;
    }
    case OperatorSpec::Kind::integral_kernel:
      if (!op.kernel) throw ConfigError("integral operator needs a kernel");
      p["kernel"] = kernel_to_json(*op.kernel);
      break;
    default: break;
  }
  j["params"] = p;
  return j;
}

OperatorSpec operator_from_json(const Json& j) {
  OperatorSpec op = OperatorSpec::make(operator_kind_from_string(need(j, "kind").get<std::string>()));
  const Json p = j.contains("params") ? j.at("params") : Json::object();
  const std::string conv = p.value("convention", std::string("unitary"));
  if (conv == "beckner")
    op.convention = FourierConvention::beckner;
  else if (conv != "unitary")
    throw ConfigError("unknown Fourier convention '" + conv + "'");
  if (p.contains("weight")) op.weight = weight_from_json(p.at("weight"));
  const std::string form = p.value("form", std::string("negative_output"));
  if (form == "positive_output")
    op.weighted_form = WeightedForm::positive_output;
  else if (form != "negative_output")
    throw ConfigError("unknown weighted form '" + form + "'");
  const std::string method = p.value("method", std::string("spectral"));
  if (method == "pv_quadrature")
    op.hilbert_method = HilbertMethod::pv_quadrature;
  else if (method != "spectral")
    throw ConfigError("unknown Hilbert method '" + method + "'");
  if (p.contains("lambdas")) op.lambdas = numbers_from_json(p.at("lambdas"));
  const std::string mode = p.value("mode", std::string("rescale"));
  if (mode == "resample")
    op.dilation_mode = DilationMode::resample;
  else if (mode != "rescale")
    throw ConfigError("unknown dilation mode '" + mode + "'");
  if (p.contains("kernel_path")) {
    const std::string path = p.at("kernel_path").get<std::string>();
    op.convolution_kernel = read_grid_file(path).with_label(kFilePrefix + path);
  }
  if (p.contains("kernel")) op.kernel = kernel_from_json(p.at("kernel"));
  return op;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------- binary container

namespace {

constexpr std::array<char, 4> kMagic{'G', 'L', 'S', 'G'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double x) {
  std::uint64_t v = std::bit_cast<std::uint64_t>(x);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void read_exact(std::istream& is, unsigned char* b, std::size_t n) {
  is.read(reinterpret_cast<char*>(b), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n) throw ConfigError("truncated grid container");
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  read_exact(is, b, 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  read_exact(is, b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void write_grid(std::ostream& os, const GridFunction& f) {
  const GridShape& s = f.shape();
  os.write(kMagic.data(), 4);
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(s.dimension()));
  put_u32(os, static_cast<std::uint32_t>(s.blocks.size()));
  for (auto m : s.blocks) put_u32(os, static_cast<std::uint32_t>(m));
  for (const auto& a : s.axes) put_f64(os, a.half_width);
  for (const auto& a : s.axes) put_u32(os, static_cast<std::uint32_t>(a.count));
  const unsigned char kind = f.is_complex() ? 1 : 0;
  os.put(static_cast<char>(kind));
  const auto re = f.real();
  const auto im = f.imag();
  for (std::size_t i = 0; i < f.size(); ++i) {
    put_f64(os, re[i]);
    if (kind) put_f64(os, im[i]);
  }
  if (!os) throw ConfigError("failed to write grid container");
}

GridFunction read_grid(std::istream& is) {
  std::array<char, 4> magic{};
  is.read(magic.data(), 4);
  if (is.gcount() != 4 || magic != kMagic) throw ConfigError("not a grid container (bad magic)");
  const std::uint32_t version = get_u32(is);
  if (version != kVersion) throw ConfigError("unsupported grid container version " + std::to_string(version));
  const std::uint32_t n = get_u32(is), l = get_u32(is);
  if (n == 0 || n > 16 || l == 0 || l > n) throw ConfigError("grid container has an invalid header");
  GridShape s;
  for (std::uint32_t j = 0; j < l; ++j) s.blocks.push_back(get_u32(is));
  s.axes.resize(n);
  for (auto& a : s.axes) a.half_width = get_f64(is);
  for (auto& a : s.axes) a.count = get_u32(is);
  s.validate();
  unsigned char kind = 0;
  read_exact(is, &kind, 1);
  if (kind > 1) throw ConfigError("grid container has an unknown scalar kind");
  const std::size_t size = s.size();
  std::vector<double> re(size), im(kind ? size : 0);
  for (std::size_t i = 0; i < size; ++i) {
    re[i] = get_f64(is);
    if (kind) im[i] = get_f64(is);
  }
  if (kind) return GridFunction(std::move(s), std::move(re), std::move(im));
  return GridFunction(std::move(s), std::move(re));
}

void write_grid_file(const std::string& path, const GridFunction& f) {
  std::ostringstream os(std::ios::binary);
  write_grid(os, f);
  write_file_atomic(path, os.str());
}

GridFunction read_grid_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_grid(in);
}

// ---------------------------------------------------------------- CSV grids

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r' && c != ' ' && c != '\t') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& v) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

Axis axis_from_centers(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.size() < 2) throw ConfigError("CSV grid needs at least two distinct coordinates per axis");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  const double R = 0.5 * h * static_cast<double>(xs.size());
  Axis a{R, xs.size()};
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - a.center(i)) > 1e-9 * std::max(1.0, R))
      throw ConfigError("CSV coordinates are not a centered uniform grid");
  return a;
}

std::size_t index_on(const Axis& a, double x) {
  const double k = (x + a.half_width) / a.spacing() - 0.5;
  return static_cast<std::size_t>(std::llround(k));
}

}  // namespace

GridFunction read_grid_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t cols = 0;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) numeric = numeric && parse_double(fields[i], row[i]);
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("non-numeric CSV row: " + line);
    }
    first = false;
    if (cols == 0) cols = row.size();
    if (row.size() != cols) throw ConfigError("CSV rows have differing column counts");
    rows.push_back(std::move(row));
  }
  if (cols != 2 && cols != 3) throw ConfigError("CSV grids need columns x,value or x,y,value");
  const std::size_t n = cols - 1;
  GridShape s;
  for (std::size_t d = 0; d < n; ++d) {
    std::vector<double> xs;
    for (const auto& r : rows) xs.push_back(r[d]);
    s.axes.push_back(axis_from_centers(std::move(xs)));
  }
  s.blocks = {n};
  s.validate();
  if (rows.size() != s.size()) throw ConfigError("CSV grid is incomplete");
  std::vector<double> v(s.size(), 0.0);
  std::vector<bool> seen(s.size(), false);
  for (const auto& r : rows) {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < n; ++d) flat = flat * s.axes[d].count + index_on(s.axes[d], r[d]);
    if (seen[flat]) throw ConfigError("CSV grid has a duplicate point");
    seen[flat] = true;
    v[flat] = r[n];
  }
  return GridFunction(std::move(s), std::move(v));
}

GridFunction read_grid_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_grid_csv(in);
}

void write_grid_csv(std::ostream& os, const GridFunction& f) {
  const std::size_t n = f.dimension();
  std::vector<double> x(n);
  for (std::size_t d = 0; d < n; ++d) os << (d == 0 ? "x" : ",x" + std::to_string(d));
  os << (f.is_complex() ? ",re,im\n" : ",value\n");
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.coordinates(i, x);
    for (std::size_t d = 0; d < n; ++d) os << (d ? "," : "") << format_number(x[d]);
    os << ',' << format_number(f.real()[i]);
    if (f.is_complex()) os << ',' << format_number(f.imag()[i]);
    os << '\n';
  }
}

// ---------------------------------------------------------------- reports

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string report_csv(const VerificationReport& r) {
  std::string out = "member,p,q,lhs,rhs,ratio,constant,verdict\n";
  for (const auto& row : r.rows) {
    out += csv_field(row.member);
    for (double x : {row.p, row.q, row.lhs, row.rhs, row.ratio, row.constant}) out += "," + format_number(x);
    out += row.pass ? ",pass\n" : ",fail\n";
  }
  return out;
}

std::string report_json(const VerificationReport& r) {
  Json j;
  j["check"] = r.check;
  j["passed"] = r.passed;
  Json meta = Json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = meta;
  Json meas = Json::object();
  for (const auto& [k, v] : r.measurements) meas[k] = number_to_json(v);
  j["measurements"] = meas;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json o;
    o["member"] = row.member;
    o["p"] = number_to_json(row.p);
    o["q"] = number_to_json(row.q);
    o["lhs"] = number_to_json(row.lhs);
    o["rhs"] = number_to_json(row.rhs);
    o["ratio"] = number_to_json(row.ratio);
    o["constant"] = number_to_json(row.constant);
    o["verdict"] = row.pass ? "pass" : "fail";
    rows.push_back(o);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

VerificationReport report_from_json(const Json& j) {
  VerificationReport r;
  r.check = j.value("check", std::string{});
  if (j.contains("metadata"))
    for (const auto& [k, v] : j.at("metadata").items()) r.metadata.emplace_back(k, v.get<std::string>());
  if (j.contains("measurements"))
    for (const auto& [k, v] : j.at("measurements").items()) r.measurements.emplace_back(k, number_from_json(v));
  if (j.contains("rows"))
    for (const auto& o : j.at("rows"))
      r.add({o.at("member").get<std::string>(), number_from_json(o.at("p")), number_from_json(o.at("q")),
             number_from_json(o.at("lhs")), number_from_json(o.at("rhs")), number_from_json(o.at("ratio")),
             number_from_json(o.at("constant")), o.at("verdict").get<std::string>() == "pass"});
  r.passed = j.value("passed", r.passed);
  return r;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot write '" + path + "'");
  }
}

}  // namespace glspace
