#include "phlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "phlab/error.hpp"

namespace phlab {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  double x;
  if (!(is >> x)) fail(ErrorCode::ConfigError, "config: '" + key + "' is not a number: " + v);
  std::string rest;
  if (is >> rest) fail(ErrorCode::ConfigError, "config: trailing text after '" + key + "'");
  if (!std::isfinite(x)) fail(ErrorCode::ConfigError, "config: '" + key + "' must be finite");
  return x;
}

std::vector<double> parse_reals(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_real(key, tok));
  return out;
}

std::vector<long long> parse_ints(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  std::vector<long long> out;
  std::string tok;
  while (is >> tok) {
    size_t pos = 0;
    long long x = 0;
    try {
      x = std::stoll(tok, &pos);
    } catch (...) {
      fail(ErrorCode::ConfigError, "config: '" + key + "' entry is not an integer: " + tok);
    }
    if (pos != tok.size()) fail(ErrorCode::ConfigError, "config: '" + key + "' entry is not an integer: " + tok);
    out.push_back(x);
  }
  return out;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SystemSpec system_from_config(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> kv;
  std::vector<std::vector<long long>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ConfigError, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "matrix") {
      rows.push_back(parse_ints(key, val));
      continue;
    }
    static const char* known[] = {"kind", "rotation", "q", "rho", "rho_inner", "strength"};
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(ErrorCode::ConfigError, "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (kv.count(key)) fail(ErrorCode::ConfigError, "config: duplicate key '" + key + "'");
    kv[key] = val;
  }
  if (!kv.count("kind")) fail(ErrorCode::ConfigError, "config: missing 'kind'");
  if (rows.empty()) fail(ErrorCode::ConfigError, "config: missing 'matrix' rows");
  const auto d = static_cast<long>(rows.size());
  if (d > kMaxDim) fail(ErrorCode::ConfigError, "config: at most 3 matrix rows");
  IMat m(d, d);
  for (long i = 0; i < d; ++i) {
    if (static_cast<long>(rows[static_cast<size_t>(i)].size()) != d)
      fail(ErrorCode::ConfigError, "config: matrix must be square");
    for (long j = 0; j < d; ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  const std::string kind = kv["kind"];
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (kv.count(k)) fail(ErrorCode::ConfigError, std::string("config: key '") + k + "' not valid for kind " + kind);
  };
  try {
    if (kind == "linear") {
      forbid({"rotation", "q", "rho", "rho_inner", "strength"});
      return SystemSpec::linear(m);
    }
    if (kind == "product-rotation") {
      forbid({"q", "rho", "rho_inner", "strength"});
      if (!kv.count("rotation")) fail(ErrorCode::ConfigError, "config: product-rotation needs 'rotation'");
      return SystemSpec::product_rotation(m, parse_real("rotation", kv["rotation"]));
    }
    if (kind == "mane") {
      forbid({"rotation"});
      for (const char* k : {"q", "rho", "rho_inner", "strength"})
        if (!kv.count(k)) fail(ErrorCode::ConfigError, std::string("config: mane needs '") + k + "'");
      auto q = parse_reals("q", kv["q"]);
      if (static_cast<long>(q.size()) != d) fail(ErrorCode::ConfigError, "config: q has wrong dimension");
      Vec qv(d);
      for (long i = 0; i < d; ++i) qv[i] = q[static_cast<size_t>(i)];
      return build_mane_example(make_linear_spec(m), TorusPoint(qv), parse_real("rho", kv["rho"]),
                                parse_real("rho_inner", kv["rho_inner"]), parse_real("strength", kv["strength"]));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) fail(ErrorCode::ConfigError, e.what());
    throw;
  }
  fail(ErrorCode::ConfigError, "config: unknown kind '" + kind + "'");
}

std::string system_to_config(const SystemSpec& s) {
  std::ostringstream os;
  os << "kind = " << kind_name(s.kind()) << "\n";
  IMat m = s.matrix();
  int rows = s.dim();
  if (s.kind() == SystemKind::ProductRotation) rows = 2;
  for (int i = 0; i < rows; ++i) {
    os << "matrix =";
    for (int j = 0; j < rows; ++j) os << " " << m(i, j);
    os << "\n";
  }
  if (s.kind() == SystemKind::ProductRotation) os << "rotation = " << format_real(s.rotation()) << "\n";
  if (s.kind() == SystemKind::Mane) {
    const ManeParams& mp = *s.mane();
    os << "q =";
    for (int i = 0; i < s.dim(); ++i) os << " " << format_real(mp.q[i]);
    os << "\n";
    os << "rho = " << format_real(mp.rho) << "\n";
    os << "rho_inner = " << format_real(mp.rho_inner) << "\n";
    os << "strength = " << format_real(mp.strength) << "\n";
  }
  return os.str();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ConfigError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::ConfigError, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::ConfigError, "write failed: " + path);
}

SystemSpec load_system(const std::string& path) { return system_from_config(read_text(path)); }

}  // namespace phlab
