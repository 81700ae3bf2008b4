#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "phlab/cocycle.hpp"
#include "phlab/error.hpp"
#include "phlab/parallel.hpp"
#include "phlab/pressure.hpp"

namespace phlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Seeds shorter than this lose too many digits to be grown reliably.
constexpr double kMinSeedLength = 1e-9;

struct Curve {
  std::vector<Vec> pts;
  std::vector<double> s;
  std::vector<double> sigma;
};

// Samples sigma -> image(sigma) on [-sigma_max, sigma_max] with chord spacing at most
// 2 delta / resolution, then trims to arclength [-delta, delta] measured from image(0).
Curve grow_curve(const std::function<Vec(double)>& image, double sigma_max, double delta, int resolution,
                 std::size_t cap) {
  if (resolution < 16) fail(ErrorCode::InvalidArgument, "disk resolution must be >= 16");
  if (resolution % 2) ++resolution;
  const double spacing = 2.0 * delta / resolution;
  for (int attempt = 0; attempt < 40; ++attempt, sigma_max *= 2.0) {
    std::vector<double> sig;
    std::vector<Vec> img;
    for (int j = 0; j <= resolution; ++j) {
      sig.push_back(j == resolution / 2 ? 0.0 : sigma_max * (2.0 * j / resolution - 1.0));
      img.push_back(image(sig.back()));
    }
    bool refined = true;
    while (refined) {
      refined = false;
      std::vector<double> s2{sig.front()};
      std::vector<Vec> i2{img.front()};
      for (std::size_t j = 0; j + 1 < sig.size(); ++j) {
        if ((img[j + 1] - img[j]).norm() > spacing) {
          const double mid = 0.5 * (sig[j] + sig[j + 1]);
          if (mid == sig[j] || mid == sig[j + 1]) fail(ErrorCode::ResamplingOverflow, "curve parameter underflow");
          s2.push_back(mid);
          i2.push_back(image(mid));
          refined = true;
        }
        s2.push_back(sig[j + 1]);
        i2.push_back(img[j + 1]);
      }
      sig.swap(s2);
      img.swap(i2);
      if (sig.size() > cap) fail(ErrorCode::ResamplingOverflow, "disk resampling exceeded the point cap");
    }
    std::vector<double> s(sig.size(), 0.0);
    for (std::size_t j = 1; j < sig.size(); ++j) s[j] = s[j - 1] + (img[j] - img[j - 1]).norm();
    const std::size_t z = static_cast<std::size_t>(std::find(sig.begin(), sig.end(), 0.0) - sig.begin());
    const double s0 = s[z];
    for (double& v : s) v -= s0;
    if (s.front() > -delta || s.back() < delta) continue;

    auto endpoint = [&](double target) {
      std::size_t j = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), target) - s.begin());
      j = std::clamp<std::size_t>(j, 1, s.size() - 1);
      const double f = (target - s[j - 1]) / (s[j] - s[j - 1]);
      const double sg = sig[j - 1] + f * (sig[j] - sig[j - 1]);
      return std::make_pair(sg, image(sg));
    };
    Curve c;
    auto lo = endpoint(-delta), hi = endpoint(delta);
    c.sigma.push_back(lo.first);
    c.pts.push_back(lo.second);
    c.s.push_back(-delta);
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] <= -delta || s[j] >= delta) continue;
      c.sigma.push_back(sig[j]);
      c.pts.push_back(img[j]);
      c.s.push_back(s[j]);
    }
    c.sigma.push_back(hi.first);
    c.pts.push_back(hi.second);
    c.s.push_back(delta);
    return c;
  }
  fail(ErrorCode::ResamplingOverflow, "disk did not reach the requested radius");
}

std::vector<Vec> tangents(const std::vector<Vec>& pts) {
  const std::size_t V = pts.size();
  std::vector<Vec> t(V);
  for (std::size_t j = 0; j < V; ++j) {
    const std::size_t a = j == 0 ? 0 : j - 1, b = j + 1 == V ? j : j + 1;
    t[j] = (pts[b] - pts[a]).normalized();
  }
  return t;
}

// Cumulative trapezoid lengths of a curve whose local stretch at vertex j is J[j].
std::vector<double> cumulative_length(const std::vector<double>& J, const std::vector<double>& s) {
  std::vector<double> C(J.size(), 0.0);
  for (std::size_t j = 1; j < J.size(); ++j) C[j] = C[j - 1] + 0.5 * (J[j - 1] + J[j]) * (s[j] - s[j - 1]);
  return C;
}

double eval_at(const std::vector<double>& C, double u) {
  const std::size_t j = std::min(static_cast<std::size_t>(u), C.size() - 2);
  return C[j] + (u - static_cast<double>(j)) * (C[j + 1] - C[j]);
}

double inverse_at(const std::vector<double>& C, double t) {
  if (t > C.back()) return kInf;
  std::size_t j = static_cast<std::size_t>(std::lower_bound(C.begin(), C.end(), t) - C.begin());
  if (j == 0) return 0.0;
  const double span = C[j] - C[j - 1];
  return static_cast<double>(j - 1) + (span > 0.0 ? (t - C[j - 1]) / span : 1.0);
}

// Greedy sweep from the left end under d(a, b) = max_i |C_i(b) - C_i(a)|. Positions are
// fractional vertex indices.
std::vector<double> sweep(const std::vector<const std::vector<double>*>& C, double eps) {
  const double step = eps * (1.0 + 1e-9);
  std::vector<double> out{0.0};
  double u = 0.0;
  while (true) {
    double b = kInf;
    for (const auto* c : C) b = std::min(b, inverse_at(*c, eval_at(*c, u) + step));
    if (!std::isfinite(b) || b <= u) break;
    out.push_back(b);
    u = b;
  }
  return out;
}

Vec interpolate(const std::vector<Vec>& pts, double u) {
  const std::size_t j = std::min(static_cast<std::size_t>(u), pts.size() - 2);
  const double f = u - static_cast<double>(j);
  return (1.0 - f) * pts[j] + f * pts[j + 1];
}

// Accumulates one curve's contribution: density quadrature, and (optionally) the enumerated sweep.
struct LevelAccumulator {
  double lse_m = -kInf, lse_s = 0.0;
  double count = 0.0;
  void add_log(double v) {
    if (v == -kInf) return;
    if (v > lse_m) {
      lse_s = lse_s * std::exp(lse_m - v) + 1.0;
      lse_m = v;
    } else {
      lse_s += std::exp(v - lse_m);
    }
  }
  double log_value() const { return lse_m == -kInf ? -kInf : lse_m + std::log(lse_s); }
};

void add_density(LevelAccumulator& acc, const std::vector<double>& phi_sum, const std::vector<double>& jmax,
                 const std::vector<double>& s, double eps) {
  acc.add_log(phi_sum.front());
  double len = 0.0;
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    const double ds = s[j + 1] - s[j];
    if (ds <= 0.0) continue;
    const double base = std::log(0.5 * ds / eps);
    acc.add_log(base + phi_sum[j] + std::log(jmax[j]));
    acc.add_log(base + phi_sum[j + 1] + std::log(jmax[j + 1]));
    len += 0.5 * (jmax[j] + jmax[j + 1]) * ds;
  }
  acc.count += 1.0 + len / eps;
}

void check_leaf_args(double delta, double eps, int n_min, int n_max) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCode::InvalidArgument, "eps must be positive");
  if (n_min < 1 || n_max < n_min) fail(ErrorCode::InvalidArgument, "need 1 <= n_min <= n_max");
}

bool is_zero_potential(const Potential& phi) { return phi.name() == "zero"; }

}  // namespace

std::vector<TorusPoint> UnstableDisk::torus_points() const {
  std::vector<TorusPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.emplace_back(p);
  return out;
}

UnstableDisk grow_unstable_disk(const SystemSpec& sys, const OrbitHistory& h, double delta, int resolution,
                                const LeafOptions& opts) {
  if (!(delta > 0.0)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  const int d = sys.dim();
  const double lam = std::fabs(sys.eigendata().front().value);
  CocycleOptions co;
  int k = std::min(opts.seed_depth, d == 1 ? h.depth() : h.depth() - co.min_depth);
  k = std::max(k, 0);
  while (k > 0 && delta * std::pow(lam, -k) < kMinSeedLength) --k;

  UnstableDisk disk;
  disk.base = h;
  disk.seed_depth = k;
  disk.seed_direction = estimate_unstable_direction(sys, k ? shift(sys, h, -k) : h, co).direction;
  disk.seed_origin = h.state(k).vec();
  Vec end = disk.seed_origin;
  for (int i = 0; i < k; ++i) end = sys.apply_lift(end);
  disk.lift_offset = (end - h.head().vec()).array().round().matrix();

  auto image = [&](double sigma) {
    Vec p = disk.seed_origin + sigma * disk.seed_direction;
    for (int i = 0; i < k; ++i) p = sys.apply_lift(p);
    return Vec(p - disk.lift_offset);
  };
  const double probe = delta * std::pow(lam, -k) * 1e-3;
  const double stretch = (image(probe) - image(0.0)).norm() / probe;
  Curve c = grow_curve(image, 1.5 * delta / stretch, delta, resolution, opts.point_cap);
  disk.points = std::move(c.pts);
  disk.arclength = std::move(c.s);
  disk.seed_param = std::move(c.sigma);
  return disk;
}

OrbitHistory disk_point_history(const SystemSpec& sys, const UnstableDisk& disk, std::size_t idx, int depth) {
  if (idx >= disk.points.size()) fail(ErrorCode::InvalidArgument, "disk index out of range");
  if (depth < 0) fail(ErrorCode::InvalidArgument, "depth must be >= 0");
  const int k = disk.seed_depth;
  std::vector<Vec> chain{disk.seed_origin + disk.seed_param[idx] * disk.seed_direction};
  for (int i = 0; i < k; ++i) chain.push_back(sys.apply_lift(chain.back()));
  std::vector<TorusPoint> states;
  for (int i = 0; i <= std::min(depth, k); ++i) states.emplace_back(chain[static_cast<std::size_t>(k - i)]);
  for (int i = k + 1; i <= depth; ++i) {
    const TorusPoint& y = states.back();
    if (i <= disk.base.depth())
      states.push_back(sys.nearest_preimage(y, disk.base.state(i)));
    else
      states.push_back(sys.preimage(y, 0));
  }
  return OrbitHistory(std::move(states));
}

PressureEstimate unstable_pressure_estimate(const SystemSpec& sys, const Potential& phi, const OrbitHistory& h,
                                            double delta, double eps, int n_min, int n_max,
                                            const LeafOptions& opts) {
  check_leaf_args(delta, eps, n_min, n_max);
  UnstableDisk disk = grow_unstable_disk(sys, h, delta, opts.resolution, opts);
  const std::size_t V = disk.points.size();
  const auto tan = tangents(disk.points);
  const bool zero = is_zero_potential(phi);

  // J[i][j]: stretch of the leaf at vertex j after i steps; S[i][j]: Phi_i at vertex j.
  std::vector<std::vector<double>> J(static_cast<std::size_t>(n_max), std::vector<double>(V));
  std::vector<std::vector<double>> S(static_cast<std::size_t>(n_max) + 1, std::vector<double>(V, 0.0));
  parallel_for(V, [&](std::size_t j) {
    TorusPoint y(disk.points[j]);
    Vec w = tan[j];
    for (int i = 0; i < n_max; ++i) {
      J[static_cast<std::size_t>(i)][j] = w.norm();
      S[static_cast<std::size_t>(i) + 1][j] = S[static_cast<std::size_t>(i)][j] + (zero ? 0.0 : phi(y));
      w = sys.jacobian(y) * w;
      y = sys.apply(y);
    }
  });
  std::vector<std::vector<double>> C(static_cast<std::size_t>(n_max));
  for (int i = 0; i < n_max; ++i) C[static_cast<std::size_t>(i)] = cumulative_length(J[static_cast<std::size_t>(i)], disk.arclength);

  double predicted = 0.0;
  for (int i = 0; i < n_max; ++i) predicted = std::max(predicted, C[static_cast<std::size_t>(i)].back());
  predicted = 1.0 + predicted / eps;
  const bool enumerate = predicted <= static_cast<double>(opts.enumeration_cap);

  PressureEstimate est;
  est.delta = delta;
  est.eps = eps;
  est.n_min = n_min;
  est.n_max = n_max;
  est.method = "unstable-disk";
  est.counting = enumerate ? "enumerated" : "density";
  est.sample_size = V;
  est.seed = opts.seed;
  for (int n = n_min; n <= n_max; ++n) {
    LevelAccumulator acc;
    if (enumerate) {
      std::vector<const std::vector<double>*> cs;
      for (int i = 0; i < n; ++i) cs.push_back(&C[static_cast<std::size_t>(i)]);
      const auto pos = sweep(cs, eps);
      std::vector<double> sums(pos.size(), 0.0);
      if (!zero)
        parallel_for(pos.size(), [&](std::size_t q) {
          sums[q] = birkhoff_sum(sys, phi, TorusPoint(interpolate(disk.points, pos[q])), n);
        });
      for (double v : sums) acc.add_log(v);
      acc.count = static_cast<double>(pos.size());
    } else {
      std::vector<double> jmax(V, 0.0);
      for (std::size_t j = 0; j < V; ++j)
        for (int i = 0; i < n; ++i) jmax[j] = std::max(jmax[j], J[static_cast<std::size_t>(i)][j]);
      add_density(acc, S[static_cast<std::size_t>(n)], jmax, disk.arclength, eps);
    }
    est.per_n.push_back({n, acc.count, acc.log_value(), 0.0});
  }
  finalize_estimate(est);
  return est;
}

StableDisk grow_stable_disk(const SystemSpec& sys, const TorusPoint& x, double delta, int resolution,
                            const LeafOptions& opts) {
  if (!sys.has_stable()) fail(ErrorCode::NoStableDirection, "system has no stable direction");
  if (!(delta > 0.0)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  const double lam_s = std::fabs(sys.eigendata().back().value);
  int k = std::max(0, opts.seed_depth);
  while (k > 0 && delta * std::pow(lam_s, k) < kMinSeedLength) --k;

  std::vector<TorusPoint> orbit{x};
  for (int i = 0; i < k; ++i) orbit.push_back(sys.apply(orbit.back()));
  std::vector<int> branch(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) sys.nearest_preimage(orbit[static_cast<std::size_t>(i) + 1], orbit[static_cast<std::size_t>(i)], &branch[static_cast<std::size_t>(i)]);

  CocycleOptions co;
  const Vec es = estimate_stable_direction(sys, orbit.back(), opts.lookahead, co).direction;
  const Vec origin = orbit.back().vec();
  auto pull = [&](Vec p) {
    for (int i = k - 1; i >= 0; --i) p = sys.preimage_lift(p, branch[static_cast<std::size_t>(i)]);
    return p;
  };
  const Vec offset = (pull(origin) - x.vec()).array().round().matrix();
  auto image = [&](double sigma) { return Vec(pull(origin + sigma * es) - offset); };
  const double probe = delta * std::pow(lam_s, k) * 1e-3;
  const double stretch = (image(probe) - image(0.0)).norm() / probe;
  Curve c = grow_curve(image, 1.5 * delta / stretch, delta, resolution, opts.point_cap);
  StableDisk disk;
  disk.base = x;
  disk.points = std::move(c.pts);
  disk.arclength = std::move(c.s);
  disk.direction = es;
  return disk;
}

namespace {

struct StableLevel {
  std::vector<Vec> pts;      // lifted component
  std::vector<Vec> tan;      // Df^{-level} applied to the base tangent
  std::vector<double> J;     // |tan|
  std::vector<double> C;     // cumulative length
  std::vector<double> S;     // phi summed over levels 1..level at each vertex
};

struct StableWalk {
  const SystemSpec& sys;
  const Potential& phi;
  const std::vector<double>& s;
  double eps;
  int n_min, n_max;
  bool enumerate;
  bool zero;
  std::vector<LevelAccumulator> acc;
  std::vector<StableLevel> stack;
  std::size_t nodes = 0;
  std::size_t cap;

  void visit(int level) {
    const StableLevel& cur = stack.back();
    if (level >= n_min) {
      LevelAccumulator& a = acc[static_cast<std::size_t>(level - n_min)];
      if (enumerate) {
        std::vector<const std::vector<double>*> cs;
        for (int l = 1; l <= level; ++l) cs.push_back(&stack[static_cast<std::size_t>(l)].C);
        const auto pos = sweep(cs, eps);
        for (double u : pos) {
          double sum = 0.0;
          if (!zero)
            for (int l = 1; l <= level; ++l) sum += phi(TorusPoint(interpolate(stack[static_cast<std::size_t>(l)].pts, u)));
          a.add_log(sum);
        }
        a.count += static_cast<double>(pos.size());
      } else {
        std::vector<double> jmax(cur.J.size(), 0.0);
        for (int l = 1; l <= level; ++l)
          for (std::size_t j = 0; j < jmax.size(); ++j) jmax[j] = std::max(jmax[j], stack[static_cast<std::size_t>(l)].J[j]);
        add_density(a, cur.S, jmax, s, eps);
      }
    }
    if (level == n_max) return;
    for (int b = 0; b < sys.branch_count(); ++b) {
      if (++nodes > cap) fail(ErrorCode::BranchExplosion, "stable branch enumeration exceeded the cap");
      const StableLevel& parent = stack.back();
      StableLevel next;
      const std::size_t V = parent.pts.size();
      next.pts.resize(V);
      next.tan.resize(V);
      next.J.resize(V);
      next.S.resize(V);
      for (std::size_t j = 0; j < V; ++j) {
        next.pts[j] = sys.preimage_lift(parent.pts[j], b);
        const Mat jac = sys.jacobian_lift(next.pts[j]);
        next.tan[j] = jac.partialPivLu().solve(parent.tan[j]);
        next.J[j] = next.tan[j].norm();
        next.S[j] = parent.S[j] + (zero ? 0.0 : phi(TorusPoint(next.pts[j])));
      }
      next.C = cumulative_length(next.J, s);
      stack.push_back(std::move(next));
      visit(level + 1);
      stack.pop_back();
    }
  }
};

}  // namespace

PressureEstimate stable_pressure_estimate(const SystemSpec& sys, const Potential& phi, const TorusPoint& x,
                                          double delta, double eps, int n_min, int n_max,
                                          const LeafOptions& opts) {
  check_leaf_args(delta, eps, n_min, n_max);
  double total = 0.0, layer = 1.0;
  for (int l = 1; l <= n_max; ++l) total += (layer *= static_cast<double>(sys.branch_count()));
  if (total > static_cast<double>(opts.branch_cap))
    fail(ErrorCode::BranchExplosion, "degree^n components exceed the branch cap");

  StableDisk disk = grow_stable_disk(sys, x, delta, opts.resolution, opts);
  StableLevel root;
  root.pts = disk.points;
  root.tan = tangents(disk.points);
  root.J.assign(root.pts.size(), 1.0);
  root.C = cumulative_length(root.J, disk.arclength);
  root.S.assign(root.pts.size(), 0.0);

  auto run = [&](bool enumerate) {
    StableWalk w{sys, phi, disk.arclength, eps, n_min, n_max, enumerate, is_zero_potential(phi),
                 std::vector<LevelAccumulator>(static_cast<std::size_t>(n_max - n_min + 1)), {root}, 0,
                 opts.branch_cap};
    w.visit(0);
    return w.acc;
  };
  auto acc = run(false);
  const bool enumerate = acc.back().count <= static_cast<double>(opts.enumeration_cap);
  if (enumerate) acc = run(true);

  PressureEstimate est;
  est.delta = delta;
  est.eps = eps;
  est.n_min = n_min;
  est.n_max = n_max;
  est.method = "stable-branches";
  est.counting = enumerate ? "enumerated" : "density";
  est.sample_size = disk.points.size();
  est.seed = opts.seed;
  est.components = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(sys.branch_count()), n_max)));
  for (int n = n_min; n <= n_max; ++n) {
    const auto& a = acc[static_cast<std::size_t>(n - n_min)];
    est.per_n.push_back({n, a.count, a.log_value(), 0.0});
  }
  finalize_estimate(est);
  return est;
}

}  // namespace phlab
