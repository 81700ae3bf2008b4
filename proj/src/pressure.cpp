#include "phlab/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include "phlab/error.hpp"
#include "phlab/parallel.hpp"

namespace phlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct StreamLse {
  double m = -kInf;
  double s = 0.0;
  void add(double v) {
    if (v == -kInf) return;
    if (v > m) {
      s = s * std::exp(m - v) + 1.0;
      m = v;
    } else {
      s += std::exp(v - m);
    }
  }
  double value() const { return m == -kInf ? -kInf : m + std::log(s); }
};

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct CellKey {
  std::array<std::int64_t, 6> c{};
  bool operator==(const CellKey& o) const { return c == o.c; }
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 0;
    for (auto v : k.c) h = mix64(h ^ static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
  }
};

// Selected points bucketed by cell; buckets are singly linked through `next`.
class CellIndex {
 public:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;
  void insert(const CellKey& key, std::uint32_t sel) {
    auto [it, fresh] = head_.try_emplace(key, sel);
    next_.push_back(fresh ? kNone : it->second);
    if (!fresh) it->second = sel;
  }
  std::uint32_t head(const CellKey& key) const {
    auto it = head_.find(key);
    return it == head_.end() ? kNone : it->second;
  }
  std::uint32_t next(std::uint32_t sel) const { return next_[sel]; }

 private:
  std::unordered_map<CellKey, std::uint32_t, CellKeyHash> head_;
  std::vector<std::uint32_t> next_;
};

// Offsets {0, -1, +1} of the cells within reach of coordinate y (cell size w, radius r).
int reach(double y, double w, double r, std::int64_t& cell, int offs[3]) {
  cell = static_cast<std::int64_t>(std::floor(y / w));
  int k = 0;
  offs[k++] = 0;
  const double lo = static_cast<double>(cell) * w;
  if (y - r < lo) offs[k++] = -1;
  if (y + r >= lo + w) offs[k++] = 1;
  return k;
}

bool matrix_power_exact(const IMat& m, int p, Mat& out) {
  const int d = static_cast<int>(m.rows());
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim> acc =
      Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>::Identity(d, d);
  const auto ml = m.cast<long double>();
  for (int i = 0; i < p; ++i) {
    acc = (acc * ml).eval();
    if (acc.cwiseAbs().maxCoeff() > 4.0e15L) return false;
  }
  out = acc.cast<double>();
  return true;
}

std::vector<std::size_t> greedy_lifted(const SystemSpec& sys, const std::vector<TorusPoint>& cands, int n,
                                       double delta, const Mat& P, bool& ok) {
  const int d = sys.dim();
  const std::size_t N = cands.size();
  std::vector<double> X(N * static_cast<std::size_t>(d));
  parallel_for(N, [&](std::size_t i) {
    Vec v = cands[i].vec();
    for (int s = 1; s < n; ++s) v = sys.apply_lift(v);
    for (int j = 0; j < d; ++j) X[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] = v[j];
  });
  double xmax = 1.0;
  for (double v : X) xmax = std::max(xmax, std::fabs(v));
  const double eta = 64.0 * std::numeric_limits<double>::epsilon() * xmax * n;
  if (!(eta < 0.25 * delta) || !(xmax / (2.0 * delta) < 1e17)) {
    ok = false;
    return {};
  }
  ok = true;
  const double w = 2.0 * delta, r = delta + eta;

  CellIndex index;
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < N; ++i) {
    const TorusPoint& c = cands[i];
    const double* xc = &X[i * static_cast<std::size_t>(d)];
    int opts[3][3], nopt[3];
    for (int j = 0; j < d; ++j) {
      nopt[j] = 0;
      opts[j][nopt[j]++] = 0;
      if (c[j] < delta + 1e-12) opts[j][nopt[j]++] = 1;
      if (c[j] > 1.0 - delta - 1e-12) opts[j][nopt[j]++] = -1;
    }
    bool rejected = false;
    int kidx[3] = {0, 0, 0};
    while (!rejected) {
      double y[3];
      for (int a = 0; a < d; ++a) {
        y[a] = xc[a];
        for (int b = 0; b < d; ++b) y[a] += P(a, b) * opts[b][kidx[b]];
      }
      std::int64_t cell[3];
      int offs[3][3], noff[3];
      for (int a = 0; a < d; ++a) noff[a] = reach(y[a], w, r, cell[a], offs[a]);
      int oidx[3] = {0, 0, 0};
      while (!rejected) {
        CellKey key;
        for (int a = 0; a < d; ++a) key.c[static_cast<std::size_t>(a)] = cell[a] + offs[a][oidx[a]];
        for (std::uint32_t s = index.head(key); s != CellIndex::kNone; s = index.next(s)) {
          const std::size_t si = selected[s];
          const double* xs = &X[si * static_cast<std::size_t>(d)];
          bool close = true;
          for (int a = 0; a < d && close; ++a) close = std::fabs(xs[a] - y[a]) <= r;
          if (close && bowen_distance(sys, c, cands[si], n) <= delta) {
            rejected = true;
            break;
          }
        }
        int a = 0;
        while (a < d && ++oidx[a] == noff[a]) oidx[a++] = 0;
        if (a == d) break;
      }
      int b = 0;
      while (b < d && ++kidx[b] == nopt[b]) kidx[b++] = 0;
      if (b == d) break;
    }
    if (rejected) continue;
    CellKey own;
    for (int a = 0; a < d; ++a) own.c[static_cast<std::size_t>(a)] = static_cast<std::int64_t>(std::floor(xc[a] / w));
    index.insert(own, static_cast<std::uint32_t>(selected.size()));
    selected.push_back(i);
  }
  return selected;
}

// Keyed on the torus cells of x_0 and x_{n-1}; valid at any scale.
std::vector<std::size_t> greedy_coarse(const SystemSpec& sys, const std::vector<TorusPoint>& cands, int n,
                                       double delta) {
  const int d = sys.dim();
  const std::size_t N = cands.size();
  std::vector<TorusPoint> last(N);
  parallel_for(N, [&](std::size_t i) {
    TorusPoint y = cands[i];
    for (int s = 1; s < n; ++s) y = sys.apply(y);
    last[i] = y;
  });
  const std::int64_t C = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(1.0 / (2.0 * delta))));
  const double w = 1.0 / static_cast<double>(C), r = delta + 1e-12;
  auto cells_of = [&](const TorusPoint& p, std::int64_t* base, std::int64_t (*offs)[3], int* noff, int off0) {
    for (int a = 0; a < d; ++a) {
      const std::int64_t cell = std::min<std::int64_t>(C - 1, static_cast<std::int64_t>(std::floor(p[a] / w)));
      base[off0 + a] = cell;
      int k = 0;
      offs[off0 + a][k++] = cell;
      if (C >= 2) {
        const double lo = static_cast<double>(cell) * w;
        std::int64_t lft = (cell + C - 1) % C, rgt = (cell + 1) % C;
        if (p[a] - r < lo && lft != cell) offs[off0 + a][k++] = lft;
        if (p[a] + r >= lo + w && rgt != cell && !(k == 2 && rgt == lft)) offs[off0 + a][k++] = rgt;
      }
      noff[off0 + a] = k;
    }
  };
  CellIndex index;
  std::vector<std::size_t> selected;
  const int D = 2 * d;
  for (std::size_t i = 0; i < N; ++i) {
    std::int64_t base[6], offs[6][3];
    int noff[6], idx[6] = {0, 0, 0, 0, 0, 0};
    cells_of(cands[i], base, offs, noff, 0);
    cells_of(last[i], base, offs, noff, d);
    bool rejected = false;
    while (!rejected) {
      CellKey key;
      for (int a = 0; a < D; ++a) key.c[static_cast<std::size_t>(a)] = offs[a][idx[a]];
      for (std::uint32_t s = index.head(key); s != CellIndex::kNone; s = index.next(s)) {
        const std::size_t si = selected[s];
        if (torus_distance(cands[i], cands[si]) <= r && torus_distance(last[i], last[si]) <= r &&
            bowen_distance(sys, cands[i], cands[si], n) <= delta) {
          rejected = true;
          break;
        }
      }
      int a = 0;
      while (a < D && ++idx[a] == noff[a]) idx[a++] = 0;
      if (a == D) break;
    }
    if (rejected) continue;
    CellKey own;
    for (int a = 0; a < D; ++a) own.c[static_cast<std::size_t>(a)] = base[a];
    index.insert(own, static_cast<std::uint32_t>(selected.size()));
    selected.push_back(i);
  }
  return selected;
}

void check_scales(double delta, int n_min, int n_max) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  if (n_min < 1 || n_max < n_min) fail(ErrorCode::InvalidArgument, "need 1 <= n_min <= n_max");
}

bool is_zero_potential(const Potential& phi) { return phi.name() == "zero"; }

// Doubling-type maps on the circle: the Bowen ball is an interval as long as delta < 1/(2|k|),
// so a sorted sweep only compares against the last selected point (and the first one, across 0).
PerN circle_row(const SystemSpec& sys, const Potential& phi, double delta, int n, double refine) {
  const double k = sys.matrix_real()(0, 0), b = sys.translation()[0];
  const double lam = std::fabs(k);
  const double h = delta / (refine * std::pow(lam, n - 1));
  const double Nd = std::ceil(1.0 / h);
  if (Nd > 4.0e9) fail(ErrorCode::BudgetExceeded, "circle grid exceeds 4e9 candidates");
  const std::uint64_t N = static_cast<std::uint64_t>(Nd);
  auto dist = [&](double x, double y) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      double t = std::fabs(x - y);
      m = std::max(m, std::min(t, 1.0 - t));
      if (m > delta) return m;
      x = wrap01(k * x + b);
      y = wrap01(k * y + b);
    }
    return m;
  };
  const bool zero = is_zero_potential(phi);
  StreamLse lse;
  double first = -1.0, prev = -1.0;
  double count = 0.0;
  for (std::uint64_t j = 0; j < N; ++j) {
    const double x = static_cast<double>(j) / Nd;
    if (prev >= 0.0 && dist(x, prev) <= delta) continue;
    if (first >= 0.0 && x > 1.0 - delta && dist(x, first) <= delta) continue;
    if (first < 0.0) first = x;
    prev = x;
    count += 1.0;
    lse.add(zero ? 0.0 : birkhoff_sum(sys, phi, TorusPoint{x}, n));
  }
  return {n, count, lse.value(), 0.0};
}

}  // namespace

double log_sum_exp(const std::vector<double>& v) {
  StreamLse s;
  for (double x : v) s.add(x);
  return s.value();
}

double fit_slope(const std::vector<PerN>& rows) {
  const std::size_t L = rows.size();
  if (L == 0) return 0.0;
  if (L == 1) return rows[0].log_lambda / rows[0].n;
  const std::size_t k = std::max<std::size_t>(2, (L + 1) / 2);
  double sx = 0, sy = 0;
  for (std::size_t i = L - k; i < L; ++i) {
    sx += rows[i].n;
    sy += rows[i].log_lambda;
  }
  const double mx = sx / static_cast<double>(k), my = sy / static_cast<double>(k);
  double sxy = 0, sxx = 0;
  for (std::size_t i = L - k; i < L; ++i) {
    sxy += (rows[i].n - mx) * (rows[i].log_lambda - my);
    sxx += (rows[i].n - mx) * (rows[i].n - mx);
  }
  return sxy / sxx;
}

void finalize_estimate(PressureEstimate& est) {
  std::vector<PerN> prefix;
  est.counts_monotone = true;
  for (std::size_t i = 0; i < est.per_n.size(); ++i) {
    prefix.push_back(est.per_n[i]);
    est.per_n[i].slope_so_far = fit_slope(prefix);
    if (i > 0 && est.per_n[i].count < est.per_n[i - 1].count) est.counts_monotone = false;
  }
  est.value = fit_slope(est.per_n);
  est.error_bar = 0.0;
  const std::size_t L = est.per_n.size();
  if (L >= 2) {
    const std::size_t k = std::max<std::size_t>(2, (L + 1) / 2);
    for (std::size_t i = L - k + 1; i < L; ++i) {
      const double inc = (est.per_n[i].log_lambda - est.per_n[i - 1].log_lambda) /
                         (est.per_n[i].n - est.per_n[i - 1].n);
      est.error_bar = std::max(est.error_bar, std::fabs(inc - est.value));
    }
  }
}

double birkhoff_sum(const SystemSpec& sys, const Potential& phi, const TorusPoint& x, int n) {
  double s = 0.0;
  TorusPoint y = x;
  for (int i = 0; i < n; ++i) {
    s += phi(y);
    if (i + 1 < n) y = sys.apply(y);
  }
  return s;
}

namespace detail {

std::vector<std::size_t> greedy_separated(const SystemSpec& sys, const std::vector<TorusPoint>& cands, int n,
                                          double delta) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  if (!(delta > 0.0)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  if (cands.empty()) return {};
  if (cands.size() >= CellIndex::kNone) fail(ErrorCode::BudgetExceeded, "too many candidates");
  if (sys.lipschitz_bound() * delta < 0.45) {
    Mat P;
    if (matrix_power_exact(sys.matrix(), n - 1, P)) {
      bool ok = false;
      auto sel = greedy_lifted(sys, cands, n, delta, P, ok);
      if (ok) return sel;
    }
  }
  return greedy_coarse(sys, cands, n, delta);
}

std::vector<TorusPoint> grid_candidates(const SystemSpec& sys, double delta, int n, const PressureOptions& opts) {
  const int d = sys.dim();
  const double lam = std::fabs(sys.eigendata().front().value);
  const Vec eu = sys.eigendata().front().vector;
  const double g = 0.5 * delta;
  const std::int64_t G = static_cast<std::int64_t>(std::ceil(1.0 / g));
  double seg = 1.0;
  if (lam > 1.0) seg = std::ceil(g / (delta / (opts.refine * std::pow(lam, n - 1))));
  const double total = std::pow(static_cast<double>(G), d) * seg +
                       static_cast<double>(opts.orbit_samples) * opts.orbit_length;
  if (!(total <= static_cast<double>(opts.candidate_budget)))
    fail(ErrorCode::BudgetExceeded, "candidate set of " + std::to_string(static_cast<long long>(total)) +
                                        " points exceeds the budget");
  const std::int64_t S = static_cast<std::int64_t>(seg);
  std::vector<TorusPoint> out;
  out.reserve(static_cast<std::size_t>(total));
  std::int64_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= G;
  for (std::int64_t c = 0; c < cells; ++c) {
    Vec base(d);
    std::int64_t r = c;
    for (int i = 0; i < d; ++i) {
      base[i] = (static_cast<double>(r % G) + 0.5) / static_cast<double>(G);
      r /= G;
    }
    for (std::int64_t j = 0; j < S; ++j) {
      const double t = S == 1 ? 0.0 : g * (static_cast<double>(j) / static_cast<double>(S) - 0.5);
      out.emplace_back(Vec(base + t * eu));
    }
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int s = 0; s < opts.orbit_samples; ++s) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = ud(rng);
    TorusPoint y(x);
    for (int t = 0; t < opts.orbit_length; ++t) {
      out.push_back(y);
      y = sys.apply(y);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double log_lambda_of(const SystemSpec& sys, const Potential& phi, const std::vector<TorusPoint>& pts, int n) {
  if (is_zero_potential(phi)) return pts.empty() ? -kInf : std::log(static_cast<double>(pts.size()));
  std::vector<double> sums(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { sums[i] = birkhoff_sum(sys, phi, pts[i], n); });
  return log_sum_exp(sums);
}

}  // namespace detail

std::vector<TorusPoint> max_separated_set(const SystemSpec& sys, std::vector<TorusPoint> candidates, int n,
                                          double delta) {
  std::sort(candidates.begin(), candidates.end());
  auto sel = detail::greedy_separated(sys, candidates, n, delta);
  std::vector<TorusPoint> out;
  out.reserve(sel.size());
  for (auto i : sel) out.push_back(candidates[i]);
  return out;
}

double log_partition_function(const SystemSpec& sys, const Potential& phi, const std::vector<TorusPoint>& E, int n,
                              double delta, double eps, const PartitionOptions& opts) {
  if (!(eps >= 0.0)) fail(ErrorCode::InvalidArgument, "eps must be >= 0");
  auto sel = detail::greedy_separated(sys, E, n, delta);
  if (sel.size() != E.size()) fail(ErrorCode::NotSeparated, "point set is not (n, delta)-separated");
  if (eps == 0.0) return detail::log_lambda_of(sys, phi, E, n);
  const int d = sys.dim();
  std::vector<double> sums(E.size());
  parallel_for(E.size(), [&](std::size_t i) {
    std::mt19937_64 rng(opts.seed ^ mix64(i));
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    double best = birkhoff_sum(sys, phi, E[i], n);
    for (int s = 0; s < opts.ball_samples; ++s) {
      Vec v(d);
      for (int a = 0; a < d; ++a) v[a] = nd(rng);
      // Radii spread over several octaves so that thin Bowen balls are still hit.
      const double rad = eps * std::pow(ud(rng), 1.0 / d) * std::pow(2.0, -std::floor(ud(rng) * (n + 1)));
      v *= rad / v.norm();
      TorusPoint y = translate(E[i], v);
      if (bowen_distance(sys, E[i], y, n) < eps) best = std::max(best, birkhoff_sum(sys, phi, y, n));
    }
    sums[i] = best;
  });
  return log_sum_exp(sums);
}

double partition_function(const SystemSpec& sys, const Potential& phi, const std::vector<TorusPoint>& E, int n,
                          double delta, double eps, const PartitionOptions& opts) {
  return std::exp(log_partition_function(sys, phi, E, n, delta, eps, opts));
}

PressureEstimate pressure_estimate(const SystemSpec& sys, const Potential& phi, double delta, int n_min, int n_max,
                                   const PressureOptions& opts) {
  check_scales(delta, n_min, n_max);
  PressureEstimate est;
  est.delta = delta;
  est.n_min = n_min;
  est.n_max = n_max;
  est.method = "grid";
  est.counting = "enumerated";
  est.seed = opts.seed;
  const bool circle = sys.dim() == 1 && delta < 0.5 / std::fabs(sys.matrix_real()(0, 0));
  for (int n = n_min; n <= n_max; ++n) {
    if (circle) {
      est.per_n.push_back(circle_row(sys, phi, delta, n, opts.refine));
      est.sample_size = static_cast<std::size_t>(
          std::ceil(opts.refine * std::pow(std::fabs(sys.matrix_real()(0, 0)), n - 1) / delta));
      continue;
    }
    auto cands = detail::grid_candidates(sys, delta, n, opts);
    auto sel = detail::greedy_separated(sys, cands, n, delta);
    std::vector<TorusPoint> pts;
    pts.reserve(sel.size());
    for (auto i : sel) pts.push_back(cands[i]);
    est.per_n.push_back({n, static_cast<double>(pts.size()), detail::log_lambda_of(sys, phi, pts, n), 0.0});
    est.sample_size = cands.size();
  }
  finalize_estimate(est);
  return est;
}

}  // namespace phlab
