#include "phlab/specification.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "frame.hpp"
#include "phlab/error.hpp"
#include "phlab/parallel.hpp"

namespace phlab {

namespace detail {

Frame local_frame(const SystemSpec& sys, const OrbitHistory& h, const CocycleOptions& opts) {
  const int d = sys.dim();
  Frame f;
  SplittingFrame s = estimate_frame(sys, h, opts);
  f.eu = s.e_u;
  f.ec = s.e_c;
  f.es = s.e_s;
  f.basis = Mat(d, d);
  int col = 0;
  f.basis.col(col++) = f.eu;
  if (f.ec.size()) {
    f.row_c = col;
    f.basis.col(col++) = f.ec;
  }
  if (f.es.size()) {
    f.row_s = col;
    f.basis.col(col++) = f.es;
  }
  if (col != d) fail(ErrorCode::Internal, "splitting frame does not span the tangent space");
  const double det = f.basis.determinant();
  if (!(std::fabs(det) > 1e-10)) fail(ErrorCode::IllConditionedIntersection, "splitting frame is degenerate");
  f.dual = f.basis.inverse();
  return f;
}

}  // namespace detail

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec cross3(const Vec& a, const Vec& b) {
  Vec c(3);
  c << a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0];
  return c;
}

Vec aligned(Vec v, const Vec& ref) { return v.dot(ref) < 0.0 ? Vec(-v) : v; }

std::vector<TorusPoint> forward_orbit(const SystemSpec& sys, const TorusPoint& x, int n) {
  std::vector<TorusPoint> o{x};
  for (int i = 1; i < n; ++i) o.push_back(sys.apply(o.back()));
  return o;
}

}  // namespace

CsDisk build_center_stable_disk(const SystemSpec& sys, const OrbitHistory& h, double kappa, int resolution,
                                const CocycleOptions& opts) {
  if (!(kappa > 0.0)) fail(ErrorCode::InvalidArgument, "disk radius must be positive");
  if (resolution < 3) fail(ErrorCode::InvalidArgument, "disk resolution must be >= 3");
  const int d = sys.dim();
  const int half = resolution / 2;
  const double step = kappa / half;
  CsDisk disk;
  disk.base = h.head();
  disk.radius = kappa;
  const Vec x0 = h.head().vec();
  const auto frame = detail::local_frame(sys, h, opts);
  disk.e_c = frame.ec;
  disk.e_s = frame.es;
  if (d == 3) {
    disk.normal = cross3(frame.ec, frame.es).normalized();
  } else if (d == 2) {
    disk.normal = Vec(2);
    disk.normal << -frame.es[1], frame.es[0];
  } else {
    disk.normal = Vec::Ones(1);
  }

  // Center curve: Euler steps along the re-estimated field, both ways from x_0.
  std::vector<Vec> center{x0};
  std::vector<Vec> center_dir{frame.ec};
  if (sys.has_center()) {
    for (int sign : {1, -1}) {
      Vec p = x0, dir = frame.ec * sign;
      std::vector<Vec> pts, dirs;
      for (int i = 0; i < half; ++i) {
        p = p + step * dir;
        OrbitHistory hp = nearest_branch_history(sys, TorusPoint(p), h, h.depth());
        dir = aligned(estimate_center_direction(sys, hp, opts.lookahead, opts).direction, dir);
        pts.push_back(p);
        dirs.push_back(dir * sign);
      }
      if (sign > 0) {
        center.insert(center.end(), pts.begin(), pts.end());
        center_dir.insert(center_dir.end(), dirs.begin(), dirs.end());
      } else {
        std::reverse(pts.begin(), pts.end());
        std::reverse(dirs.begin(), dirs.end());
        center.insert(center.begin(), pts.begin(), pts.end());
        center_dir.insert(center_dir.begin(), dirs.begin(), dirs.end());
      }
    }
  }
  disk.center = center;
  for (const Vec& c : center) {
    if (!sys.has_stable()) {
      disk.cloud.push_back(c);
      continue;
    }
    Vec es = frame.es;
    if ((c - x0).norm() > 0.0)
      es = aligned(estimate_stable_direction(sys, TorusPoint(c), opts.lookahead, opts).direction, frame.es);
    for (int j = -half; j <= half; ++j) disk.cloud.push_back(c + (j * step) * es);
  }
  return disk;
}

ProductScales calibrate_product_structure(const SystemSpec& sys, int samples, std::uint64_t seed, double beta_cap,
                                          double angle_tol) {
  if (samples < 1 || !(beta_cap > 0.0) || !(angle_tol > 0.0))
    fail(ErrorCode::InvalidArgument, "bad product-structure calibration parameters");
  const int d = sys.dim();
  CocycleOptions co;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<OrbitHistory> hs;
  std::vector<detail::Frame> frames;
  std::vector<Vec> offsets;
  ProductScales ps;
  ps.samples = samples;
  for (int s = 0; s < samples; ++s) {
    Vec x(d), v(d);
    for (int i = 0; i < d; ++i) {
      x[i] = ud(rng);
      v[i] = nd(rng);
    }
    hs.push_back(extend_history_one(sys, TorusPoint(x), co.min_depth + 10, BranchPolicy::random(rng())));
    frames.push_back(detail::local_frame(sys, hs.back(), co));
    offsets.push_back(v.normalized());
    for (int r = 0; r < d; ++r) ps.projection_constant = std::max(ps.projection_constant, frames.back().dual.row(r).norm());
  }
  double beta = beta_cap;
  for (; beta > 1e-6; beta *= 0.5) {
    bool ok = true;
    for (int s = 0; s < samples && ok; ++s) {
      const TorusPoint y = translate(hs[static_cast<std::size_t>(s)].head(), beta * offsets[static_cast<std::size_t>(s)]);
      OrbitHistory hy = nearest_branch_history(sys, y, hs[static_cast<std::size_t>(s)], hs[static_cast<std::size_t>(s)].depth());
      auto fy = detail::local_frame(sys, hy, co);
      const auto& fx = frames[static_cast<std::size_t>(s)];
      for (int c = 0; c < d; ++c) ok = ok && line_angle(fx.basis.col(c), fy.basis.col(c)) <= angle_tol;
    }
    if (ok) break;
  }
  ps.beta = beta;
  ps.delta0 = beta / (2.0 * ps.projection_constant);
  ps.beta_prime = 0.5 * std::min(ps.beta, 0.5 * ps.delta0);
  return ps;
}

namespace {

// Coordinates adapted to a cs-plane: row 0 reads the offset along the plane normal,
// the remaining rows read the e_c / e_s coordinates of points on the plane.
struct PlaneCoords {
  Mat rows;
  explicit PlaneCoords(const CsDisk& cs) {
    const int d = static_cast<int>(cs.normal.size());
    Mat B(d, d);
    int col = 0;
    B.col(col++) = cs.normal;
    if (cs.e_c.size()) B.col(col++) = cs.e_c;
    if (cs.e_s.size()) B.col(col++) = cs.e_s;
    if (col != d) fail(ErrorCode::Internal, "cs-plane does not have codimension one");
    if (!(std::fabs(B.determinant()) > 1e-12)) fail(ErrorCode::IllConditionedIntersection, "cs-plane is degenerate");
    rows = B.inverse();
  }
  // Offset D from the plane point crossed by the chord D + t v: sets t and the
  // in-plane coordinates; false when the chord does not reach the plane.
  bool cross(const Vec& D, const Vec& v, double& t, double c[2]) const {
    const double ga = rows.row(0).dot(D), gv = rows.row(0).dot(v);
    if (gv == 0.0) return false;
    t = -ga / gv;
    if (!(t >= -1e-9 && t <= 1.0 + 1e-9)) return false;
    c[0] = c[1] = 0.0;
    for (int r = 1; r < rows.rows(); ++r) c[r - 1] = rows.row(r).dot(D + t * v);
    return true;
  }
};

}  // namespace

MinimalityCalibration calibrate_minimality_radius(const SystemSpec& sys, double delta, int samples,
                                                  std::uint64_t seed, double length_cap) {
  if (!(delta > 0.0) || samples < 1) fail(ErrorCode::InvalidArgument, "bad minimality calibration parameters");
  const int d = sys.dim();
  const auto& eig = sys.eigendata();
  const double lam = std::fabs(eig.front().value);
  Mat basis(d, d);
  for (int j = 0; j < d; ++j) basis.col(j) = eig[static_cast<std::size_t>(j)].vector;
  const Mat dual = basis.inverse();
  const Vec eu = eig.front().vector;
  const double h = 0.45;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  MinimalityCalibration out;
  out.samples = samples;
  for (int s = 0; s < samples; ++s) {
    double x[3], y[3];
    for (int i = 0; i < d; ++i) {
      x[i] = ud(rng);
      y[i] = ud(rng);
    }
    double hit = -1.0;
    if (d == 1) hit = std::fabs(lift_coord(y[0] - x[0]));
    for (double t = 0.0; hit < 0.0 && t <= length_cap; t += h) {
      double D[3];
      for (int i = 0; i < d; ++i) D[i] = lift_coord(x[i] + t * eu[i] - y[i]);
      double cu = 0.0;
      for (int i = 0; i < d; ++i) cu += dual(0, i) * D[i];
      if (std::fabs(cu) > 0.5 * h) continue;
      bool inside = true;
      for (int r = 1; r < d && inside; ++r) {
        double c = 0.0;
        for (int i = 0; i < d; ++i) c += dual(r, i) * D[i];
        inside = std::fabs(c) <= delta;
      }
      if (inside) hit = t - cu;
    }
    if (hit < 0.0) fail(ErrorCode::NoIntersection, "unstable leaf did not meet the sampled patch within the length cap");
    out.L = std::max(out.L, hit);
  }
  if (lam <= 1.0) fail(ErrorCode::SpectrumViolation, "no expanding direction");
  out.T_analytic = std::max(1, static_cast<int>(std::ceil(std::log(std::max(out.L, delta) / delta) / std::log(lam))));
  out.T_max = 4 * out.T_analytic;
  return out;
}

namespace {

struct Transition {
  GlueJunction j;
  bool found = false;
};

// F(x + e) - F(x) without forming x + e for the linear part.
Vec difference_map(const SystemSpec& sys, const Vec& x, const Vec& e) {
  Vec r = sys.matrix_real() * e;
  const auto& mp = sys.mane();
  if (mp && mp->strength != 0.0) {
    const double dg = sys.bump_profile(Vec(x + e), nullptr) - sys.bump_profile(x, nullptr);
    if (dg != 0.0) r += mp->strength * dg * sys.center_vector();
  }
  return r;
}

// First point of f^T(W^u_delta(end)) (scanned along the seed parameter) lying on the
// tangent cs-plane of the target inside its delta patch and near its cs cloud.
Transition find_transition(const SystemSpec& sys, const UnstableDisk& disk, int T, const TorusPoint& target,
                           const CsDisk& cs, double delta, const GlueOptions& opts, double& scanned) {
  const PlaneCoords pc(cs);
  // Points of the curve are an anchor orbit plus a small offset pushed by the difference
  // map, so offsets far below the anchor's rounding unit keep their relative precision.
  // Anchor iterates are re-centered by integer vectors shared by the whole curve.
  const int k = disk.seed_depth;
  std::vector<Vec> anchor{disk.seed_origin};
  for (int i = 0; i < k + T; ++i) {
    Vec r = sys.apply_lift(anchor.back());
    anchor.push_back(r - Vec(r.array().round().matrix()));
  }
  const Vec head_shift = (anchor[static_cast<std::size_t>(k)] - disk.base.head().vec()).array().round().matrix();
  auto offset_after = [&](double sigma, int steps) {
    Vec e = sigma * disk.seed_direction;
    for (int i = 0; i < steps; ++i) e = difference_map(sys, anchor[static_cast<std::size_t>(i)], e);
    return e;
  };
  auto base_point = [&](double sigma) {
    return Vec(anchor[static_cast<std::size_t>(k)] - head_shift + offset_after(sigma, k));
  };
  auto image = [&](double sigma) { return Vec(anchor.back() + offset_after(sigma, k + T)); };
  const double lo = disk.seed_param.front(), hi = disk.seed_param.back();
  const Vec tvec = target.vec();
  const int d = sys.dim();
  const double tol = 0.05 * delta;  // allowed midpoint deviation of a chord
  const double sub = 0.2;           // linear sub-step, short enough for nearest-representative wrapping
  Transition tr;

  // Exact refinement on [l, r] once a straight sub-chord met the patch.
  auto refine = [&](double l, double r, const Vec& tau) {
    Vec pl = image(l), pr = image(r);
    auto offset = [&](const Vec& p) { return pc.rows.row(0).dot(p - tau); };
    const bool neg_left = offset(pl) < 0.0;
    if ((offset(pr) < 0.0) == neg_left) return false;
    for (int it = 0; it < 200 && (pr - pl).norm() > opts.refine_factor * delta; ++it) {
      const double m = 0.5 * (l + r);
      if (m == l || m == r) break;
      Vec pm = image(m);
      if ((offset(pm) < 0.0) == neg_left) {
        l = m;
        pl = pm;
      } else {
        r = m;
        pr = pm;
      }
    }
    double t, cc[2] = {0.0, 0.0};
    if (!pc.cross(Vec(pl - tau), pr - pl, t, cc) || std::fabs(cc[0]) > delta || std::fabs(cc[1]) > delta) return false;
    const double sigma = l + t * (r - l);
    const Vec local = image(sigma) - tau + tvec;  // same lattice cell as the cloud
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& q : cs.cloud) best = std::min(best, (q - local).norm());
    if (!(best < opts.match_factor * delta)) return false;
    tr.found = true;
    tr.j.T = T;
    tr.j.sigma = sigma;
    tr.j.u = base_point(sigma);
    tr.j.w = local;
    tr.j.cs_a = cc[0];
    tr.j.cs_b = cc[1];
    tr.j.cloud_distance = best;
    return true;
  };

  // Walks a straight chord in short linear pieces, wrapping the offset to the target.
  double R[3][3];
  for (int r = 0; r < d; ++r)
    for (int i = 0; i < d; ++i) R[r][i] = pc.rows(r, i);
  auto walk = [&](double sa, double sb, const Vec& pa, Vec pb) {
    const double len = (pb - pa).norm();
    const double budget = std::max(0.0, opts.scan_length_cap - scanned) + sub;
    const long m = std::max(1L, static_cast<long>(std::ceil(std::min(len, budget) / sub)));
    if (len > budget) sb = sa + (sb - sa) * (budget / len);
    double v[3], D[3];
    if (len > budget) pb = pa + (pb - pa) * (budget / len);
    for (int i = 0; i < d; ++i) v[i] = (pb[i] - pa[i]) / static_cast<double>(m);
    double gv = 0.0;
    for (int i = 0; i < d; ++i) gv += R[0][i] * v[i];
    for (long k = 0; k < m; ++k) {
      const double f = static_cast<double>(k);
      double g = 0.0;
      for (int i = 0; i < d; ++i) {
        D[i] = lift_coord(pa[i] + f * v[i] - tvec[i]);
        g += R[0][i] * D[i];
      }
      if (gv == 0.0 || (g < 0.0) == (g + gv < 0.0)) continue;
      const double t = -g / gv;
      bool inside = true;
      for (int r = 1; r < d && inside; ++r) {
        double c = 0.0;
        for (int i = 0; i < d; ++i) c += R[r][i] * (D[i] + t * v[i]);
        inside = std::fabs(c) <= delta;
      }
      if (!inside) continue;
      Vec tau(d);
      for (int i = 0; i < d; ++i) tau[i] = pa[i] + f * v[i] - D[i];
      const double w = (sb - sa) / static_cast<double>(m);
      if (refine(sa + f * w, k + 1 == m ? sb : sa + (f + 1.0) * w, tau)) return true;
    }
    return false;
  };

  double sa = lo;
  Vec pa = image(sa);
  double ds = hi - lo;
  {
    const double probe = (hi - lo) * 1e-9;
    const double stretch = (image(lo + probe) - pa).norm() / probe;
    if (stretch > 0.0) ds = std::min(hi - lo, 0.2 / stretch);
  }
  while (sa < hi) {
    const double sb = std::min(hi, sa + ds);
    const Vec pb = image(sb);
    const Vec pm = image(0.5 * (sa + sb));
    const double dev = (pm - 0.5 * (pa + pb)).norm();
    if (dev > tol && ds > (hi - lo) * 1e-15) {
      ds *= 0.5;
      continue;
    }
    if (walk(sa, sb, pa, pb)) return tr;
    scanned += (pb - pa).norm();
    if (scanned > opts.scan_length_cap) return tr;
    if (dev < 0.25 * tol) ds *= 2.0;
    sa = sb;
    pa = pb;
  }
  return tr;
}

// Least-squares Newton refinement of a pseudo-orbit into an orbit (minimum-norm steps).
double refine_orbit(const SystemSpec& sys, std::vector<Vec>& z) {
  const int d = sys.dim();
  const int N = static_cast<int>(z.size());
  if (N < 2) return 0.0;
  std::vector<Vec> m(static_cast<std::size_t>(N - 1));
  for (int k = 0; k + 1 < N; ++k)
    m[static_cast<std::size_t>(k)] = (sys.apply_lift(z[static_cast<std::size_t>(k)]) - z[static_cast<std::size_t>(k) + 1]).array().round().matrix();
  auto residual = [&](Eigen::VectorXd& G) {
    G.resize(d * (N - 1));
    double mx = 0.0;
    for (int k = 0; k + 1 < N; ++k) {
      Vec g = sys.apply_lift(z[static_cast<std::size_t>(k)]) - z[static_cast<std::size_t>(k) + 1] - m[static_cast<std::size_t>(k)];
      G.segment(d * k, d) = g;
      mx = std::max(mx, g.cwiseAbs().maxCoeff());
    }
    return mx;
  };
  Eigen::VectorXd G;
  double res = residual(G);
  for (int it = 0; it < 30 && res > 1e-13; ++it) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d * (N - 1), d * N);
    for (int k = 0; k + 1 < N; ++k) {
      J.block(d * k, d * k, d, d) = sys.jacobian_lift(z[static_cast<std::size_t>(k)]);
      J.block(d * k, d * (k + 1), d, d) = -Eigen::MatrixXd::Identity(d, d);
    }
    Eigen::VectorXd step = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(J).solve(-G);
    for (int k = 0; k < N; ++k) z[static_cast<std::size_t>(k)] += step.segment(d * k, d);
    const double next = residual(G);
    if (!(next < res) && next > 1e-13) {
      res = next;
      break;
    }
    res = next;
  }
  return res;
}

}  // namespace

GlueReport glue_segments(const SystemSpec& sys, const std::vector<OrbitSegment>& segments, double delta, int T_max,
                         const GlueOptions& opts) {
  if (!(delta > 0.0)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  if (segments.empty()) fail(ErrorCode::NoGoodSegments, "no segments to glue");
  for (const auto& s : segments) {
    if (s.length < 1) fail(ErrorCode::InvalidArgument, "segment length must be >= 1");
    if (opts.require_good && sys.has_center() && !is_good(sys, s.history, s.length, opts.params, opts.cocycle))
      fail(ErrorCode::NoGoodSegments, "segment is not good at r = " + std::to_string(opts.params.r));
  }
  GlueReport rep;
  rep.segments = segments;
  rep.delta = delta;
  if (segments.size() > 1 && T_max <= 0) {
    auto cal = calibrate_minimality_radius(sys, delta, opts.calibration_samples, opts.seed);
    rep.L = cal.L;
    rep.T_analytic = cal.T_analytic;
    T_max = cal.T_max;
  }
  rep.T_max = T_max;

  std::vector<std::vector<TorusPoint>> orbits;
  for (const auto& s : segments) orbits.push_back(forward_orbit(sys, s.history.head(), s.length));

  std::vector<Vec> z;
  for (std::size_t j = 0; j < segments.size(); ++j) {
    const auto& orb = orbits[j];
    rep.block_starts.push_back(static_cast<int>(z.size()));
    if (j + 1 == segments.size()) {
      for (const auto& p : orb) z.push_back(p.vec());
      break;
    }
    const int nj = segments[j].length;
    OrbitHistory end_h = shift(sys, segments[j].history, nj - 1);
    if (end_h.depth() < opts.cocycle.min_depth) fail(ErrorCode::DepthExhausted, "segment history too shallow for gluing");
    LeafOptions lo;
    UnstableDisk disk = grow_unstable_disk(sys, end_h, delta, 64, lo);
    const CsDisk cs = build_center_stable_disk(sys, segments[j + 1].history, delta, opts.cs_resolution, opts.cocycle);
    Transition tr;
    double scanned = 0.0;
    for (int T = 1; T <= T_max && !tr.found && scanned <= opts.scan_length_cap; ++T)
      tr = find_transition(sys, disk, T, orbits[j + 1].front(), cs, delta, opts, scanned);
    if (!tr.found)
      fail(ErrorCode::NoIntersection, "no unstable / center-stable intersection up to T_max = " + std::to_string(T_max));
    for (int i = 0; i + 1 < nj; ++i) z.push_back(orb[static_cast<std::size_t>(i)].vec());
    // The transition starts on W^u of the block end; its lift is kept continuous.
    Vec p = tr.j.u;
    const Vec shift_u = orb.back().vec() - lift_diff(orb.back(), TorusPoint(p)) - p;
    p += shift_u;
    for (int t = 0; t < tr.j.T; ++t) {
      z.push_back(p);
      p = sys.apply_lift(p);
    }
    rep.gluing_times.push_back(tr.j.T);
    rep.junctions.push_back(tr.j);
  }
  for (auto& v : z) v = TorusPoint(v).vec();
  rep.consistency = refine_orbit(sys, z);
  if (!(rep.consistency < 1e-9))
    fail(ErrorCode::NoIntersection, "shadowing refinement did not converge (residual " + std::to_string(rep.consistency) + ")");
  for (const auto& v : z) rep.orbit.emplace_back(v);
  rep.glued = nearest_branch_history(sys, rep.orbit.front(), segments.front().history, segments.front().history.depth());
  auto check = verify_glue(sys, rep);
  rep.max_shadow_error = check.max_shadow_error;
  rep.consistency = check.consistency;
  return rep;
}

GlueCheck verify_glue(const SystemSpec& sys, const GlueReport& rep) {
  GlueCheck c{0.0, 0.0};
  for (std::size_t k = 0; k + 1 < rep.orbit.size(); ++k)
    c.consistency = std::max(c.consistency, torus_distance(sys.apply(rep.orbit[k]), rep.orbit[k + 1]));
  auto& errs = const_cast<std::vector<double>&>(rep.block_errors);
  errs.clear();
  for (std::size_t j = 0; j < rep.segments.size(); ++j) {
    double e = 0.0;
    TorusPoint x = rep.segments[j].history.head();
    const std::size_t s = static_cast<std::size_t>(rep.block_starts[j]);
    for (int i = 0; i < rep.segments[j].length; ++i) {
      if (s + static_cast<std::size_t>(i) >= rep.orbit.size()) {
        e = std::numeric_limits<double>::infinity();
        break;
      }
      e = std::max(e, torus_distance(rep.orbit[s + static_cast<std::size_t>(i)], x));
      x = sys.apply(x);
    }
    errs.push_back(e);
    c.max_shadow_error = std::max(c.max_shadow_error, e);
  }
  return c;
}

ExpansivityReport expansivity_diagnostic(const SystemSpec& sys, const std::vector<OrbitHistory>& samples, double eps,
                                         int m, double tolerance, const GammaOptions& gopts) {
  if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "eps must be positive");
  if (m < 0) fail(ErrorCode::InvalidArgument, "window must be >= 0");
  ExpansivityReport rep;
  rep.eps = eps;
  rep.window = m;
  rep.tolerance = tolerance > 0.0 ? tolerance : eps / 100.0;
  rep.diameters.resize(samples.size());
  rep.center_exponents.assign(samples.size(), kNaN);
  parallel_for(samples.size(), [&](std::size_t i) {
    GammaOptions g = gopts;
    g.seed = gopts.seed + i;
    rep.diameters[i] = gamma_diameter(sys, samples[i], eps, m, g);
    if (sys.has_center() && samples[i].depth() >= CocycleOptions{}.min_depth)
      rep.center_exponents[i] = central_exponent(sys, samples[i], std::max(1, m));
  });
  std::size_t ne = 0;
  for (double dmt : rep.diameters)
    if (dmt > rep.tolerance) ++ne;
  rep.fraction = samples.empty() ? 0.0 : static_cast<double>(ne) / static_cast<double>(samples.size());
  return rep;
}

}  // namespace phlab
