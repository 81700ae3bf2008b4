#include "phlab/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "phlab/config.hpp"
#include "phlab/error.hpp"

namespace phlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonIters = 50;
constexpr int kSeparationSamples = 1000;
constexpr std::uint64_t kSeparationSeed = 0x5eedC0FFEEull;

void canonical_sign(Vec& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (std::fabs(v[i]) > std::fabs(v[best]) + 1e-14) best = i;
  if (v[best] < 0) v = -v;
}

Eigendata eigendata_impl(const Eigen::MatrixXd& a) {
  const int d = static_cast<int>(a.rows());
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, true);
  if (es.info() != Eigen::Success) fail(ErrorCode::NonSimpleSpectrum, "eigensolver did not converge");
  std::vector<int> order(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) order[static_cast<size_t>(i)] = i;
  auto ev = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int i, int j) { return std::abs(ev[i]) > std::abs(ev[j]); });
  for (int k = 0; k + 1 < d; ++k) {
    double m1 = std::abs(ev[order[static_cast<size_t>(k)]]);
    double m2 = std::abs(ev[order[static_cast<size_t>(k) + 1]]);
    if (std::fabs(m1 - m2) <= 1e-9 * std::max(1.0, m1))
      fail(ErrorCode::NonSimpleSpectrum, "eigenvalue moduli coincide within 1e-9");
  }
  Eigendata out;
  for (int idx : order) {
    // Distinct moduli rule out complex pairs, so every eigenvalue is real here.
    double lam = ev[idx].real();
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = es.eigenvectors()(i, idx).real();
    // One step of inverse iteration tightens the vector at large spectral spread.
    Eigen::MatrixXd shifted = a - (lam + 1e-13 * std::max(1.0, std::fabs(lam))) * Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd w = shifted.fullPivLu().solve(Eigen::VectorXd(v));
    if (w.allFinite() && w.norm() > 0) {
      for (int i = 0; i < d; ++i) v[i] = w[i];
    }
    v.normalize();
    canonical_sign(v);
    out.push_back({lam, v});
  }
  return out;
}

}  // namespace

const char* kind_name(SystemKind kind) {
  switch (kind) {
    case SystemKind::Linear: return "linear";
    case SystemKind::ProductRotation: return "product-rotation";
    case SystemKind::Mane: return "mane";
  }
  return "unknown";
}

long long integer_det(const IMat& m) {
  const auto d = m.rows();
  if (d == 1) return m(0, 0);
  if (d == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

IMat integer_adjugate(const IMat& m) {
  const auto d = m.rows();
  IMat adj(d, d);
  if (d == 1) {
    adj(0, 0) = 1;
  } else if (d == 2) {
    adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  } else {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        // Cyclic index choice makes the sign of the cofactor come out right.
        adj(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
      }
    }
  }
  return adj;
}

Eigendata toral_eigendata(const IMat& matrix) {
  if (integer_det(matrix) == 0) fail(ErrorCode::InvalidArgument, "toral_eigendata: det = 0");
  return eigendata_impl(matrix.cast<double>());
}

Eigendata real_eigendata(const Mat& matrix) { return eigendata_impl(Eigen::MatrixXd(matrix)); }

LinearToralSpec make_linear_spec(const IMat& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1 || matrix.rows() > kMaxDim)
    fail(ErrorCode::InvalidArgument, "matrix must be square of size 1..3");
  LinearToralSpec s;
  s.matrix = matrix;
  long long det = integer_det(matrix);
  if (det == 0) fail(ErrorCode::InvalidArgument, "matrix is degenerate (det = 0)");
  s.degree = det < 0 ? -det : det;
  s.eigen = toral_eigendata(matrix);
  return s;
}

bool SystemSpec::has_stable() const {
  for (const auto& e : eigen_)
    if (std::fabs(e.value) < 1.0) return true;
  return false;
}

void SystemSpec::finalize() {
  dim_ = static_cast<int>(m_.rows());
  md_ = m_.cast<double>();
  det_ = integer_det(m_);
  if (det_ == 0) fail(ErrorCode::InvalidArgument, "matrix is degenerate (det = 0)");
  adj_ = integer_adjugate(m_);
  if (b_.size() != dim_) b_ = Vec::Zero(dim_);
  eigen_ = toral_eigendata(m_);

  // Coset representatives of Z^d / M Z^d: two k give the same preimage iff adj (k - k') is 0 mod det.
  const long long n = degree();
  cosets_.clear();
  std::vector<std::vector<long long>> classes;
  std::vector<long long> k(static_cast<size_t>(dim_), 0);
  while (true) {
    std::vector<long long> cls(static_cast<size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
      long long s = 0;
      for (int j = 0; j < dim_; ++j) s += adj_(i, j) * k[static_cast<size_t>(j)];
      cls[static_cast<size_t>(i)] = ((s % n) + n) % n;
    }
    if (std::find(classes.begin(), classes.end(), cls) == classes.end()) {
      classes.push_back(cls);
      Vec kv(dim_);
      for (int i = 0; i < dim_; ++i) kv[i] = static_cast<double>(k[static_cast<size_t>(i)]);
      cosets_.push_back(kv);
      if (static_cast<long long>(cosets_.size()) == n) break;
    }
    int i = dim_ - 1;
    while (i >= 0 && ++k[static_cast<size_t>(i)] == n) k[static_cast<size_t>(i--)] = 0;
    if (i < 0) break;
  }
  if (static_cast<long long>(cosets_.size()) != n) fail(ErrorCode::Internal, "coset enumeration incomplete");

  lip_ = Eigen::JacobiSVD<Mat>(md_).singularValues()[0];

  std::vector<double> mods;
  for (const auto& e : eigen_) mods.push_back(std::fabs(e.value));
  ph_ = {kNaN, kNaN, kNaN, mods.front(), 1.0};
  if (dim_ >= 2 && mods.back() < 1.0) ph_.lambda_s = mods.back();
  if (dim_ == 3) ph_.lambda_1 = ph_.lambda_2 = mods[1];
  compute_separation_exponent();
}

void SystemSpec::compute_separation_exponent() {
  if (degree() == 1) {
    eps0_ = 0.5;
    return;
  }
  std::mt19937_64 rng(kSeparationSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < kSeparationSamples; ++s) {
    Vec y(dim_);
    for (int i = 0; i < dim_; ++i) y[i] = u(rng);
    auto pre = preimages(TorusPoint(y));
    for (size_t i = 0; i < pre.size(); ++i)
      for (size_t j = i + 1; j < pre.size(); ++j) best = std::min(best, torus_distance(pre[i], pre[j]));
  }
  eps0_ = 0.5 * best;
}

SystemSpec SystemSpec::linear(const IMat& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1 || matrix.rows() > kMaxDim)
    fail(ErrorCode::InvalidArgument, "matrix must be square of size 1..3");
  SystemSpec s;
  s.kind_ = SystemKind::Linear;
  s.m_ = matrix;
  s.finalize();
  return s;
}

SystemSpec SystemSpec::product_rotation(const IMat& a, double theta) {
  if (a.rows() != 2 || a.cols() != 2) fail(ErrorCode::InvalidArgument, "product-rotation needs a 2x2 matrix");
  if (!std::isfinite(theta)) fail(ErrorCode::InvalidArgument, "rotation must be finite");
  SystemSpec s;
  s.kind_ = SystemKind::ProductRotation;
  s.m_ = IMat::Zero(3, 3);
  s.m_.topLeftCorner(2, 2) = a;
  s.m_(2, 2) = 1;
  s.b_ = Vec::Zero(3);
  s.b_[2] = wrap01(theta);
  s.finalize();
  return s;
}

double SystemSpec::bump_profile(const Vec& x, Vec* grad) const {
  if (grad) *grad = Vec::Zero(dim_);
  if (!mane_ || mane_->strength == 0.0) return 0.0;
  const ManeParams& mp = *mane_;
  Vec z(dim_);
  for (int i = 0; i < dim_; ++i) z[i] = lift_coord(x[i] - mp.q[i]);
  const double nz = z.norm();
  const double r = nz / mp.rho;
  if (r >= 1.0) return 0.0;
  const double r0 = mp.rho_inner / mp.rho;
  double b = 1.0, db = 0.0;
  if (r > r0) {
    const double t = (r - r0) / (1.0 - r0);
    const double t2 = t * t, t3 = t2 * t;
    b = 1.0 - (10.0 * t3 - 15.0 * t3 * t + 6.0 * t3 * t2);
    db = -(30.0 * t2 - 60.0 * t3 + 30.0 * t3 * t) / (1.0 - r0);
  }
  const double xi = wc_.dot(z);
  const double w2 = width_ * width_;
  const double p = xi - xi * xi * xi / w2;
  if (grad) {
    const double dp = 1.0 - 3.0 * xi * xi / w2;
    Vec g = b * dp * wc_;
    if (nz > 0.0 && db != 0.0) g += (db / mp.rho) * p * (z / nz);
    *grad = g;
  }
  return b * p;
}

Vec SystemSpec::apply_lift(const Vec& x) const {
  Vec y = md_ * x + b_;
  if (mane_ && mane_->strength != 0.0) {
    const double g = bump_profile(x, nullptr);
    if (g != 0.0) y += mane_->strength * g * vc_;
  }
  return y;
}

TorusPoint SystemSpec::apply(const TorusPoint& x) const { return TorusPoint(apply_lift(x.vec())); }

Mat SystemSpec::jacobian_lift(const Vec& x) const {
  Mat j = md_;
  if (mane_ && mane_->strength != 0.0) {
    Vec grad;
    bump_profile(x, &grad);
    if (grad.squaredNorm() > 0.0) j += mane_->strength * vc_ * grad.transpose();
  }
  return j;
}

Mat SystemSpec::jacobian(const TorusPoint& x) const { return jacobian_lift(x.vec()); }

Vec SystemSpec::newton_preimage(const Vec& target, const Vec& start) const {
  Vec x = start;
  Vec r = apply_lift(x) - target;
  double rn = r.lpNorm<Eigen::Infinity>();
  // Lifted targets can be large; rounding alone leaves a residual proportional to |target|.
  const double tol = kNewtonTol * std::max(1.0, target.lpNorm<Eigen::Infinity>());
  for (int it = 0; it < kNewtonIters; ++it) {
    if (rn <= tol) return x;
    Mat j = jacobian_lift(x);
    Vec step = j.fullPivLu().solve(r);
    double lam = 1.0;
    bool accepted = false;
    for (int h = 0; h < 30; ++h) {
      Vec xn = x - lam * step;
      Vec rnew = apply_lift(xn) - target;
      double nn = rnew.lpNorm<Eigen::Infinity>();
      if (nn < rn || nn <= tol) {
        x = xn;
        r = rnew;
        rn = nn;
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted) break;
  }
  if (rn <= tol) return x;
  fail(ErrorCode::RootNotConverged, "preimage Newton iteration did not converge (residual " + format_real(rn) + ")");
}

Vec SystemSpec::preimage_lift(const Vec& y, int branch) const {
  const Vec& k = cosets_[static_cast<size_t>(branch)];
  Vec rhs = y - b_ + k;
  Vec x = (adj_.cast<double>() * rhs) / static_cast<double>(det_);
  if (mane_ && mane_->strength != 0.0) x = newton_preimage(y + k, x);
  return x;
}

TorusPoint SystemSpec::preimage(const TorusPoint& y, int branch) const {
  return TorusPoint(preimage_lift(y.vec(), branch));
}

std::vector<TorusPoint> SystemSpec::preimages(const TorusPoint& y) const {
  std::vector<TorusPoint> out;
  out.reserve(cosets_.size());
  for (int b = 0; b < branch_count(); ++b) out.push_back(preimage(y, b));
  return out;
}

TorusPoint SystemSpec::nearest_preimage(const TorusPoint& y, const TorusPoint& ref, int* branch) const {
  TorusPoint best;
  double bd = std::numeric_limits<double>::infinity();
  int bi = 0;
  for (int b = 0; b < branch_count(); ++b) {
    TorusPoint p = preimage(y, b);
    double d = torus_distance(p, ref);
    if (d < bd) {
      bd = d;
      best = p;
      bi = b;
    }
  }
  if (branch) *branch = bi;
  return best;
}

SystemSpec build_mane_example(const LinearToralSpec& base, const TorusPoint& q, double rho, double rho_inner,
                              double strength) {
  if (base.matrix.rows() != 3) fail(ErrorCode::InvalidArgument, "mane example needs a 3x3 base matrix");
  if (q.dim() != 3) fail(ErrorCode::InvalidArgument, "q must be a point of T^3");
  if (!(rho_inner > 0.0 && rho_inner < rho && rho < 0.5))
    fail(ErrorCode::InvalidArgument, "radii must satisfy 0 < rho_inner < rho < 1/2");
  if (!(strength >= 0.0) || !std::isfinite(strength)) fail(ErrorCode::InvalidArgument, "strength must be >= 0");

  Eigendata eig;
  try {
    eig = toral_eigendata(base.matrix);
  } catch (const Error&) {
    fail(ErrorCode::SpectrumViolation, "base spectrum is not simple");
  }
  int outside = 0;
  for (const auto& e : eig) {
    if (e.value <= 0.0) fail(ErrorCode::SpectrumViolation, "base has a negative eigenvalue");
    if (std::fabs(e.value) > 1.0) ++outside;
  }
  if (outside != 1) fail(ErrorCode::SpectrumViolation, "base must have exactly one eigenvalue outside the unit circle");

  SystemSpec s = SystemSpec::linear(base.matrix);
  if (torus_distance(s.apply(q), q) > 1e-12) fail(ErrorCode::NotAFixedPoint, "q is not fixed by the base map");

  s.kind_ = SystemKind::Mane;
  Mat v(3, 3);
  for (int j = 0; j < 3; ++j) v.col(j) = eig[static_cast<size_t>(j)].vector;
  Mat w = v.inverse();
  s.vc_ = eig[1].vector;
  s.wc_ = w.row(1).transpose();
  s.width_ = s.wc_.norm() * rho;
  s.mane_ = ManeParams{q, rho, rho_inner, strength};

  if (strength > 0.0) {
    // Sampled non-degeneracy check inside the ball, plus the center-rate bound kept as metadata.
    std::mt19937_64 rng(kSeparationSeed ^ 0xB0B);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    const double sign = s.det_ > 0 ? 1.0 : -1.0;
    double cmax = 0.0, gmax = 0.0;
    for (int i = 0; i < 4000; ++i) {
      Vec dir(3);
      for (int k = 0; k < 3; ++k) dir[k] = nd(rng);
      dir.normalize();
      Vec x = q.vec() + dir * (rho * std::cbrt(ud(rng)));
      Mat j = s.jacobian_lift(x);
      if (sign * j.determinant() <= 1e-9)
        fail(ErrorCode::InvalidArgument, "perturbation too strong: det Df vanishes inside B(q, rho)");
      Vec grad;
      s.bump_profile(x, &grad);
      cmax = std::max(cmax, std::fabs(grad.dot(s.vc_)));
      gmax = std::max(gmax, grad.norm());
    }
    // Sampled, so pad it.
    s.lip_ += 1.25 * strength * s.vc_.norm() * gmax;
    s.ph_.lambda_1 = std::max(0.0, s.ph_.lambda_1 - strength * cmax);
    s.ph_.lambda_2 = s.ph_.lambda_2 + strength * cmax;
  }
  s.compute_separation_exponent();
  return s;
}

namespace catalog {

IMat ph_linear_matrix() {
  IMat m(3, 3);
  m << 100, 1, 0, -100, 0, 1, 3, 0, 0;
  return m;
}

double golden_rotation() { return (std::sqrt(5.0) - 1.0) / 2.0; }

SystemSpec doubling() {
  IMat m(1, 1);
  m << 2;
  return SystemSpec::linear(m);
}

SystemSpec cat_map() {
  IMat m(2, 2);
  m << 2, 1, 1, 1;
  return SystemSpec::linear(m);
}

SystemSpec anosov_endomorphism() {
  IMat m(2, 2);
  m << 3, 1, 1, 1;
  return SystemSpec::linear(m);
}

SystemSpec ph_linear() { return SystemSpec::linear(ph_linear_matrix()); }

SystemSpec product_rotation() {
  IMat m(2, 2);
  m << 3, 1, 1, 1;
  return SystemSpec::product_rotation(m, golden_rotation());
}

SystemSpec mane(double strength) {
  return build_mane_example(make_linear_spec(ph_linear_matrix()), TorusPoint{0.0, 0.0, 0.0}, 0.05, 0.025, strength);
}

}  // namespace catalog

}  // namespace phlab
