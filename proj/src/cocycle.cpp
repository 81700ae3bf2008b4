#include "phlab/cocycle.hpp"

#include <cmath>
#include <random>

#include "phlab/error.hpp"

namespace phlab {

namespace {

void canonical(Vec& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (std::fabs(v[i]) > std::fabs(v[best]) + 1e-14) best = i;
  if (v[best] < 0) v = -v;
}

Mat checked_inverse(const Mat& j) {
  const double det = j.determinant();
  if (!(std::fabs(det) > 1e-300) || !std::isfinite(det)) fail(ErrorCode::SingularJacobian, "Jacobian is singular");
  return j.inverse();
}

Vec cross3(const Vec& a, const Vec& b) {
  Vec c(3);
  c << a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0];
  return c;
}

// Pushes v through Jacobians at states[first..last] (in that order), renormalizing.
Vec push(const std::vector<Mat>& mats, int first, int last, Vec v) {
  for (int k = first; k <= last; ++k) {
    v = mats[static_cast<size_t>(k)] * v;
    v.normalize();
  }
  return v;
}

struct CenterNormals {
  std::vector<Vec> n_cu;  // at x_0 .. x_{n-1}
  std::vector<Vec> n_cs;
  std::vector<Mat> jac;   // Df(x_i), i = 0..n-1
  double residual = 0.0;
};

// Normals of E^{cu} and E^{cs} along x_0..x_{n-1}: E^{cu} normals move forward by Df^{-T},
// E^{cs} normals move backward by Df^T.
CenterNormals center_normals(const SystemSpec& sys, const OrbitHistory& h, int n, const CocycleOptions& opts,
                             bool want_residual) {
  if (!sys.has_center()) fail(ErrorCode::NoCenterDirection, "system has no one-dimensional center");
  const int m = h.depth();
  const int L = opts.lookahead;
  if (m < std::max(1, opts.min_depth)) fail(ErrorCode::DepthTooSmall, "history depth below the configured minimum");
  if (L < 2) fail(ErrorCode::DepthTooSmall, "lookahead below minimum");

  // Backward part: Df^{-T} at x_{-m}..x_{-1}.
  std::vector<Mat> back_it(static_cast<size_t>(m));
  for (int k = m; k >= 1; --k) back_it[static_cast<size_t>(m - k)] = checked_inverse(sys.jacobian(h.state(k))).transpose();

  std::vector<TorusPoint> orbit{h.head()};
  for (int i = 1; i < n + L; ++i) orbit.push_back(sys.apply(orbit.back()));
  CenterNormals out;
  out.jac.reserve(static_cast<size_t>(n + L));
  std::vector<Mat> all_jac;
  for (const auto& x : orbit) all_jac.push_back(sys.jacobian(x));

  const Vec g = generic_vector(3, opts.seed);
  Vec ncu = push(back_it, 0, m - 1, g);
  Vec ncu_short = push(back_it, 1, m - 1, g);
  out.n_cu.push_back(ncu);
  for (int i = 1; i < n; ++i) {
    ncu = checked_inverse(all_jac[static_cast<size_t>(i - 1)]).transpose() * ncu;
    ncu.normalize();
    out.n_cu.push_back(ncu);
  }

  out.n_cs.assign(static_cast<size_t>(n), Vec());
  Vec ncs = g;
  for (int i = n + L - 2; i >= 0; --i) {
    ncs = all_jac[static_cast<size_t>(i)].transpose() * ncs;
    ncs.normalize();
    if (i < n) out.n_cs[static_cast<size_t>(i)] = ncs;
  }
  if (want_residual) {
    Vec ncs_short = g;
    for (int i = n + L - 3; i >= 0; --i) {
      ncs_short = all_jac[static_cast<size_t>(i)].transpose() * ncs_short;
      ncs_short.normalize();
    }
    Vec c1 = cross3(out.n_cu[0], out.n_cs[0]), c2 = cross3(ncu_short, ncs_short);
    if (c1.norm() > 1e-8 && c2.norm() > 1e-8) out.residual = line_angle(c1, c2);
    out.residual = std::max({out.residual, line_angle(out.n_cu[0], ncu_short), line_angle(out.n_cs[0], ncs_short)});
  }
  all_jac.resize(static_cast<size_t>(n));
  out.jac = std::move(all_jac);
  return out;
}

Vec center_from_normals(const Vec& ncu, const Vec& ncs) {
  Vec c = cross3(ncu, ncs);
  const double s = c.norm();
  if (!(s >= 1e-8)) fail(ErrorCode::IllConditionedIntersection, "center-unstable and center-stable planes nearly parallel");
  c /= s;
  canonical(c);
  return c;
}

}  // namespace

Vec generic_vector(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = nd(rng);
  return v.normalized();
}

double line_angle(const Vec& a, const Vec& b) {
  double c = std::fabs(a.dot(b)) / (a.norm() * b.norm());
  if (c > 1.0) c = 1.0;
  // acos loses precision near 1; use the cross-product magnitude instead.
  double s2 = std::max(0.0, (a.squaredNorm() * b.squaredNorm() - a.dot(b) * a.dot(b))) / (a.squaredNorm() * b.squaredNorm());
  return std::atan2(std::sqrt(s2), c);
}

DirectionEstimate estimate_unstable_direction(const SystemSpec& sys, const OrbitHistory& h, const CocycleOptions& opts) {
  const int d = sys.dim();
  if (d == 1) return {Vec::Ones(1), 0.0};
  const int m = h.depth();
  if (m < std::max(2, opts.min_depth)) fail(ErrorCode::DepthTooSmall, "history depth below the configured minimum");
  std::vector<Mat> mats(static_cast<size_t>(m));
  for (int k = m; k >= 1; --k) mats[static_cast<size_t>(m - k)] = sys.jacobian(h.state(k));
  const Vec g = generic_vector(d, opts.seed);
  Vec v = push(mats, 0, m - 1, g);
  Vec w = push(mats, 1, m - 1, g);
  DirectionEstimate e{v, line_angle(v, w)};
  canonical(e.direction);
  if (!(e.residual <= opts.residual_tol)) fail(ErrorCode::DepthTooSmall, "unstable direction residual above tolerance");
  return e;
}

DirectionEstimate estimate_stable_direction(const SystemSpec& sys, const TorusPoint& x, int lookahead,
                                            const CocycleOptions& opts) {
  if (!sys.has_stable()) fail(ErrorCode::NoStableDirection, "system has no stable direction");
  const int d = sys.dim();
  if (lookahead < 2) fail(ErrorCode::DepthTooSmall, "lookahead below minimum");
  std::vector<Mat> inv;
  TorusPoint y = x;
  for (int i = 0; i < lookahead; ++i) {
    inv.push_back(checked_inverse(sys.jacobian(y)));
    y = sys.apply(y);
  }
  const Vec g = generic_vector(d, opts.seed);
  Vec v = g, w = g;
  for (int i = lookahead - 1; i >= 0; --i) {
    v = inv[static_cast<size_t>(i)] * v;
    v.normalize();
    if (i < lookahead - 1) {
      w = inv[static_cast<size_t>(i)] * w;
      w.normalize();
    }
  }
  DirectionEstimate e{v, line_angle(v, w)};
  canonical(e.direction);
  if (!(e.residual <= opts.residual_tol)) fail(ErrorCode::DepthTooSmall, "stable direction residual above tolerance");
  return e;
}

DirectionEstimate estimate_center_direction(const SystemSpec& sys, const OrbitHistory& h, int lookahead,
                                            const CocycleOptions& opts) {
  CocycleOptions o = opts;
  o.lookahead = lookahead;
  CenterNormals cn = center_normals(sys, h, 1, o, true);
  DirectionEstimate e{center_from_normals(cn.n_cu[0], cn.n_cs[0]), cn.residual};
  if (!(e.residual <= opts.residual_tol)) fail(ErrorCode::DepthTooSmall, "center direction residual above tolerance");
  return e;
}

SplittingFrame estimate_frame(const SystemSpec& sys, const OrbitHistory& h, const CocycleOptions& opts) {
  SplittingFrame f;
  auto u = estimate_unstable_direction(sys, h, opts);
  f.e_u = u.direction;
  f.residual_u = u.residual;
  if (sys.has_stable()) {
    auto s = estimate_stable_direction(sys, h.head(), opts.lookahead, opts);
    f.e_s = s.direction;
    f.residual_s = s.residual;
  }
  if (sys.has_center()) {
    auto c = estimate_center_direction(sys, h, opts.lookahead, opts);
    f.e_c = c.direction;
    f.residual_c = c.residual;
  }
  return f;
}

std::vector<double> phi_c_series(const SystemSpec& sys, const OrbitHistory& h, int n, const CocycleOptions& opts) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "phi_c_series needs n >= 1");
  CenterNormals cn = center_normals(sys, h, n, opts, false);
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec c = center_from_normals(cn.n_cu[static_cast<size_t>(i)], cn.n_cs[static_cast<size_t>(i)]);
    out[static_cast<size_t>(i)] = std::log((cn.jac[static_cast<size_t>(i)] * c).norm());
  }
  return out;
}

double phi_c(const SystemSpec& sys, const OrbitHistory& h, const CocycleOptions& opts) {
  return phi_c_series(sys, h, 1, opts)[0];
}

double central_exponent(const SystemSpec& sys, const OrbitHistory& h, int n, const CocycleOptions& opts) {
  auto s = phi_c_series(sys, h, n, opts);
  double t = 0.0;
  for (double v : s) t += v;
  return t / n;
}

}  // namespace phlab
