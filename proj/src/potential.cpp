#include "phlab/potential.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "phlab/config.hpp"
#include "phlab/error.hpp"

namespace phlab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double to_real(const std::string& s) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (...) {
    fail(ErrorCode::ConfigError, "potential: bad number '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) fail(ErrorCode::ConfigError, "potential: bad number '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (...) {
    fail(ErrorCode::ConfigError, "potential: bad integer '" + s + "'");
  }
  if (pos != s.size()) fail(ErrorCode::ConfigError, "potential: bad integer '" + s + "'");
  return v;
}

Potential parse_term(const std::string& term, int dim) {
  auto parts = split(term, ':');
  const std::string& head = parts[0];
  if (head == "zero" && parts.size() == 1) return Potential::zero();
  if (head == "const" && parts.size() == 2) return Potential::constant(to_real(parts[1]));
  if (head == "cos" && (parts.size() == 2 || parts.size() == 3)) {
    int i = to_int(parts[1]);
    if (i < 1 || i > dim) fail(ErrorCode::ConfigError, "potential: coordinate index out of range in '" + term + "'");
    return Potential::cosine(i, parts.size() == 3 ? to_real(parts[2]) : 1.0);
  }
  if (head == "wave" && parts.size() == 4) {
    auto ks = split(parts[1], ',');
    if (static_cast<int>(ks.size()) != dim) fail(ErrorCode::ConfigError, "potential: wave vector has wrong dimension");
    Vec k(dim);
    for (int i = 0; i < dim; ++i) k[i] = to_int(ks[static_cast<size_t>(i)]);
    const double a = to_real(parts[2]), ph = to_real(parts[3]);
    const double two_pi = 2.0 * std::numbers::pi;
    return Potential(
        term, [k, a, ph, two_pi](const TorusPoint& x) { return a * std::cos(two_pi * k.dot(x.vec()) + ph); }, 1.0,
        two_pi * std::fabs(a) * k.norm(), std::fabs(a));
  }
  fail(ErrorCode::ConfigError, "potential: cannot parse term '" + term + "'");
}

}  // namespace

Potential::Potential() : Potential(Potential::zero()) {}

Potential::Potential(std::string name, std::function<double(const TorusPoint&)> f, double alpha, double K,
                     double sup_norm)
    : name_(std::move(name)), f_(std::move(f)), alpha_(alpha), K_(K), sup_(sup_norm) {
  if (!(alpha_ > 0.0 && alpha_ <= 1.0)) fail(ErrorCode::InvalidArgument, "Hölder exponent must lie in (0,1]");
  if (!(K_ >= 0.0)) fail(ErrorCode::InvalidArgument, "Hölder constant must be >= 0");
}

Potential Potential::zero() {
  return Potential("zero", [](const TorusPoint&) { return 0.0; }, 1.0, 0.0, 0.0);
}

Potential Potential::constant(double c) {
  return Potential("const:" + format_real(c), [c](const TorusPoint&) { return c; }, 1.0, 0.0, std::fabs(c));
}

Potential Potential::cosine(int coord, double amplitude) {
  const int i = coord - 1;
  const double two_pi = 2.0 * std::numbers::pi;
  std::string name = "cos:" + std::to_string(coord);
  if (amplitude != 1.0) name += ":" + format_real(amplitude);
  return Potential(
      name, [i, amplitude, two_pi](const TorusPoint& x) { return amplitude * std::cos(two_pi * x[i]); }, 1.0,
      two_pi * std::fabs(amplitude), std::fabs(amplitude));
}

Potential Potential::parse(const std::string& spec, int dim) {
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(ErrorCode::ConfigError, "potential: empty spec");
  auto terms = split(s, '+');
  Potential acc = parse_term(terms[0], dim);
  for (size_t i = 1; i < terms.size(); ++i) acc = acc.plus(parse_term(terms[i], dim));
  acc.name_ = s;
  return acc;
}

Potential Potential::plus(const Potential& other) const {
  auto f = f_, g = other.f_;
  return Potential(name_ + "+" + other.name_, [f, g](const TorusPoint& x) { return f(x) + g(x); },
                   std::min(alpha_, other.alpha_), K_ + other.K_, sup_ + other.sup_);
}

Potential Potential::shifted(double c) const {
  auto f = f_;
  return Potential(name_ + "+const:" + format_real(c), [f, c](const TorusPoint& x) { return f(x) + c; }, alpha_, K_,
                   sup_ + std::fabs(c));
}

Potential Potential::with_holder(double alpha, double K) const {
  Potential p = *this;
  if (!(alpha > 0.0 && alpha <= 1.0) || !(K >= 0.0)) fail(ErrorCode::InvalidArgument, "bad Hölder data");
  p.alpha_ = alpha;
  p.K_ = K;
  return p;
}

double measure_holder_constant(const Potential& phi, int dim, double alpha, int samples, double max_dist,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  std::normal_distribution<double> nd(0.0, 1.0);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x(dim), v(dim);
    for (int i = 0; i < dim; ++i) {
      x[i] = ud(rng);
      v[i] = nd(rng);
    }
    // Log-uniform distances probe both the local slope and larger separations.
    const double r = max_dist * std::pow(10.0, -6.0 * ud(rng));
    v *= r / v.norm();
    TorusPoint a(x), b = translate(a, v);
    const double dd = torus_distance(a, b);
    if (dd <= 0.0) continue;
    best = std::max(best, std::fabs(phi(a) - phi(b)) / std::pow(dd, alpha));
  }
  return best;
}

}  // namespace phlab
