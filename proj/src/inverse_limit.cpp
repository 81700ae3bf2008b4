#include "phlab/inverse_limit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "phlab/config.hpp"
#include "phlab/error.hpp"

namespace phlab {

OrbitHistory::OrbitHistory(std::vector<TorusPoint> states) : states_(std::move(states)) {
  if (states_.empty()) fail(ErrorCode::InvalidArgument, "history needs at least x_0");
}

BranchPolicy BranchPolicy::enumerate_all(std::size_t cap) {
  BranchPolicy p;
  p.kind = Kind::EnumerateAll;
  p.cap = cap;
  return p;
}

BranchPolicy BranchPolicy::random(std::uint64_t seed) {
  BranchPolicy p;
  p.kind = Kind::Random;
  p.seed = seed;
  return p;
}

BranchPolicy BranchPolicy::fixed(std::vector<int> indices) {
  BranchPolicy p;
  p.kind = Kind::Fixed;
  if (indices.empty()) indices.push_back(0);
  p.indices = std::move(indices);
  return p;
}

OrbitHistory extend_history_one(const SystemSpec& sys, const TorusPoint& x, int m, const BranchPolicy& policy) {
  if (m < 0) fail(ErrorCode::InvalidArgument, "depth must be >= 0");
  if (policy.kind == BranchPolicy::Kind::EnumerateAll)
    fail(ErrorCode::InvalidArgument, "extend_history_one needs a single-branch policy");
  std::vector<TorusPoint> st;
  st.reserve(static_cast<size_t>(m) + 1);
  st.push_back(x);
  std::mt19937_64 rng(policy.seed);
  const int deg = sys.branch_count();
  for (int k = 0; k < m; ++k) {
    int b;
    if (policy.kind == BranchPolicy::Kind::Random) {
      b = static_cast<int>(rng() % static_cast<std::uint64_t>(deg));
    } else {
      b = policy.indices[static_cast<size_t>(k) % policy.indices.size()];
      if (b < 0 || b >= deg) fail(ErrorCode::InvalidArgument, "branch index out of range");
    }
    st.push_back(sys.preimage(st.back(), b));
  }
  return OrbitHistory(std::move(st));
}

std::vector<OrbitHistory> extend_history(const SystemSpec& sys, const TorusPoint& x, int m, const BranchPolicy& policy) {
  if (m < 0) fail(ErrorCode::InvalidArgument, "depth must be >= 0");
  if (policy.kind != BranchPolicy::Kind::EnumerateAll) return {extend_history_one(sys, x, m, policy)};
  const double total = std::pow(static_cast<double>(sys.branch_count()), m);
  if (total > static_cast<double>(policy.cap))
    fail(ErrorCode::BranchExplosion, "enumerate-all would produce " + format_real(total) + " histories");
  // Depth-first over branch indices keeps the output in branch-index order.
  std::vector<OrbitHistory> out;
  out.reserve(static_cast<size_t>(total));
  std::vector<TorusPoint> stack{x};
  auto rec = [&](auto&& self, int level) -> void {
    if (level == m) {
      out.emplace_back(stack);
      return;
    }
    auto ps = sys.preimages(stack.back());
    for (const auto& p : ps) {
      stack.push_back(p);
      self(self, level + 1);
      stack.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

OrbitHistory nearest_branch_history(const SystemSpec& sys, const TorusPoint& y0, const OrbitHistory& ref, int m) {
  if (m > ref.depth()) fail(ErrorCode::InsufficientDepth, "reference history too shallow");
  std::vector<TorusPoint> st{y0};
  for (int k = 1; k <= m; ++k) st.push_back(sys.nearest_preimage(st.back(), ref.state(k)));
  return OrbitHistory(std::move(st));
}

double consistency_error(const SystemSpec& sys, const OrbitHistory& h) {
  double e = 0.0;
  for (int k = 0; k < h.depth(); ++k) e = std::max(e, torus_distance(sys.apply(h.state(k + 1)), h.state(k)));
  return e;
}

double history_metric(const SystemSpec& sys, const OrbitHistory& h1, const OrbitHistory& h2, int forward_window) {
  if (h1.depth() != h2.depth()) fail(ErrorCode::DepthMismatch, "history_metric needs equal depths");
  if (forward_window < 0) fail(ErrorCode::InvalidArgument, "forward window must be >= 0");
  double s = 0.0;
  for (int k = h1.depth(); k >= 1; --k) s += std::ldexp(torus_distance(h1.state(k), h2.state(k)), -k);
  TorusPoint a = h1.head(), b = h2.head();
  s += torus_distance(a, b);
  for (int n = 1; n <= forward_window; ++n) {
    a = sys.apply(a);
    b = sys.apply(b);
    s += std::ldexp(torus_distance(a, b), -n);
  }
  return s;
}

OrbitHistory shift(const SystemSpec& sys, const OrbitHistory& h, int k) {
  if (k == 0) return h;
  const auto& st = h.states();
  if (k < 0) {
    if (-k > h.depth()) fail(ErrorCode::InsufficientDepth, "shift by " + std::to_string(k) + " exceeds depth");
    return OrbitHistory(std::vector<TorusPoint>(st.begin() - k, st.end()));
  }
  std::vector<TorusPoint> fwd;
  TorusPoint x = h.head();
  for (int i = 0; i < k; ++i) {
    x = sys.apply(x);
    fwd.push_back(x);
  }
  std::vector<TorusPoint> out;
  out.reserve(st.size());
  for (int i = k - 1; i >= 0 && out.size() < st.size(); --i) out.push_back(fwd[static_cast<size_t>(i)]);
  for (size_t i = 0; out.size() < st.size(); ++i) out.push_back(st[i]);
  return OrbitHistory(std::move(out));
}

double bowen_distance(const SystemSpec& sys, const TorusPoint& x, const TorusPoint& y, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "bowen_distance needs n >= 1");
  double d = torus_distance(x, y);
  TorusPoint a = x, b = y;
  for (int i = 1; i < n; ++i) {
    a = sys.apply(a);
    b = sys.apply(b);
    d = std::max(d, torus_distance(a, b));
  }
  return d;
}

double gamma_diameter(const SystemSpec& sys, const OrbitHistory& h, double eps, int m, const GammaOptions& opts) {
  if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "eps must be > 0");
  if (m < 0 || h.depth() < m) fail(ErrorCode::InsufficientDepth, "history depth below window");
  const int d = sys.dim();
  const TorusPoint x0 = h.head();

  std::vector<TorusPoint> fwd{x0};
  for (int k = 1; k <= m; ++k) fwd.push_back(sys.apply(fwd.back()));

  // Candidates do not depend on m, which makes the survivor sets nested in m.
  std::vector<Vec> offsets;
  const std::size_t budget = std::max<std::size_t>(opts.sample_budget, 2 * static_cast<std::size_t>(d));
  const std::size_t per_dir = budget / 2 / static_cast<std::size_t>(d);
  for (int j = 0; j < d; ++j) {
    const Vec& e = sys.eigendata()[static_cast<size_t>(j)].vector;
    for (std::size_t i = 0; i < per_dir; ++i) {
      double t = eps * (2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(per_dir) - 1.0);
      offsets.push_back(t * e);
    }
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  while (offsets.size() < budget) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = nd(rng);
    v *= eps * std::pow(ud(rng), 1.0 / d) / v.norm();
    offsets.push_back(v);
  }

  std::vector<TorusPoint> survivors{x0};
  for (const Vec& off : offsets) {
    TorusPoint y0 = translate(x0, off);
    if (!(torus_distance(y0, x0) < eps)) continue;
    bool ok = true;
    TorusPoint y = y0;
    for (int k = 1; k <= m && ok; ++k) {
      y = sys.nearest_preimage(y, h.state(k));
      ok = torus_distance(y, h.state(k)) < eps;
    }
    y = y0;
    for (int k = 1; k <= m && ok; ++k) {
      y = sys.apply(y);
      ok = torus_distance(y, fwd[static_cast<size_t>(k)]) < eps;
    }
    if (ok) survivors.push_back(y0);
  }
  double diam = 0.0;
  for (size_t i = 0; i < survivors.size(); ++i)
    for (size_t j = i + 1; j < survivors.size(); ++j) diam = std::max(diam, torus_distance(survivors[i], survivors[j]));
  return diam;
}

std::string history_to_text(const OrbitHistory& h) {
  std::ostringstream os;
  os << "# phlab history v1 (x_0 first, then x_-1, ...)\n";
  os << "dimension " << h.dim() << "\n";
  os << "depth " << h.depth() << "\n";
  for (const auto& p : h.states()) {
    for (int i = 0; i < p.dim(); ++i) os << (i ? " " : "") << format_real(p[i]);
    os << "\n";
  }
  return os.str();
}

OrbitHistory history_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int dim = -1, depth = -1;
  std::vector<TorusPoint> st;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (dim < 0 || depth < 0) {
      std::string key;
      int v;
      if (!(ls >> key >> v)) fail(ErrorCode::ConfigError, "history: bad header line");
      if (key == "dimension") dim = v;
      else if (key == "depth") depth = v;
      else fail(ErrorCode::ConfigError, "history: unknown header '" + key + "'");
      continue;
    }
    Vec x(dim);
    for (int i = 0; i < dim; ++i)
      if (!(ls >> x[i])) fail(ErrorCode::ConfigError, "history: short state line");
    st.emplace_back(x);
  }
  if (dim < 1 || dim > kMaxDim || depth < 0) fail(ErrorCode::ConfigError, "history: missing header");
  if (static_cast<int>(st.size()) != depth + 1) fail(ErrorCode::ConfigError, "history: state count does not match depth");
  return OrbitHistory(std::move(st));
}

HistoryClosenessCalibration calibrate_history_closeness(const SystemSpec& sys, double eps, int depth, int max_J,
                                                        int samples, std::uint64_t seed) {
  if (!(eps > 0.0) || max_J < 1 || samples < 1) fail(ErrorCode::InvalidArgument, "bad calibration arguments");
  const int d = sys.dim();
  for (double delta = eps; delta > 1e-12; delta *= 0.5) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<std::pair<OrbitHistory, OrbitHistory>> pairs;
    for (int s = 0; s < samples; ++s) {
      Vec x(d), v(d);
      for (int i = 0; i < d; ++i) {
        x[i] = ud(rng);
        v[i] = nd(rng);
      }
      v *= 0.999 * delta * ud(rng) / v.norm();
      TorusPoint x0(x), y0 = translate(x0, v);
      pairs.emplace_back(extend_history_one(sys, x0, depth, BranchPolicy::random(rng())),
                         extend_history_one(sys, y0, depth, BranchPolicy::random(rng())));
    }
    for (int J = 1; J <= max_J; ++J) {
      bool ok = true;
      for (const auto& pr : pairs) {
        if (!(history_metric(sys, shift(sys, pr.first, J), shift(sys, pr.second, J), depth) < eps)) {
          ok = false;
          break;
        }
      }
      if (ok) return {delta, J, samples};
    }
  }
  fail(ErrorCode::DepthTooSmall, "no (delta, J) pair found within max_J");
}

}  // namespace phlab
