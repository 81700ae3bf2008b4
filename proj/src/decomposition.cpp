#include "phlab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "phlab/error.hpp"
#include "phlab/parallel.hpp"

namespace phlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

SegmentClass classify_series(const std::vector<double>& phic, double r) {
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "r must be positive");
  const int n = static_cast<int>(phic.size());
  if (n < 1) fail(ErrorCode::InvalidArgument, "segment length must be >= 1");
  SegmentClass c;
  c.prefix_sums.resize(static_cast<std::size_t>(n));
  double s = 0.0;
  for (int j = 0; j < n; ++j) c.prefix_sums[static_cast<std::size_t>(j)] = (s += phic[static_cast<std::size_t>(j)]);
  c.p = 0;
  for (int p = n; p >= 1; --p)
    if (c.prefix_sums[static_cast<std::size_t>(p - 1)] >= -r * p) {
      c.p = p;
      break;
    }
  c.g = n - c.p;
  c.s = 0;
  // The good core is summed afresh from index p so that round-off in the prefix sums
  // cannot hide a violation.
  double t = 0.0;
  for (int j = 1; j <= c.g; ++j) {
    t += phic[static_cast<std::size_t>(c.p + j - 1)];
    if (!(t < -r * j))
      fail(ErrorCode::ConsistencyViolation, "good core violates the contraction condition at j = " + std::to_string(j));
  }
  return c;
}

SegmentClass classify_segment(const SystemSpec& sys, const OrbitHistory& h, int n, const DecompositionParams& params,
                              const CocycleOptions& opts) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "segment length must be >= 1");
  return classify_series(phi_c_series(sys, h, n, opts), params.r);
}

bool is_good(const SystemSpec& sys, const OrbitHistory& h, int n, const DecompositionParams& params,
             const CocycleOptions& opts) {
  return classify_segment(sys, h, n, params, opts).p == 0;
}

double EmpiricalMeasure::integrate(const Potential& phi) const {
  double s = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) s += weights[i] * phi(atoms[i].head());
  return s;
}

double EmpiricalMeasure::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

std::pair<EmpiricalMeasure, EmpiricalMeasure> weighted_empirical_measure(const SystemSpec& sys, const Potential& phi,
                                                                         const std::vector<OrbitHistory>& E, int n) {
  if (E.empty()) fail(ErrorCode::EmptyCollection, "empirical measure of an empty set");
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  std::vector<double> logw(E.size());
  for (std::size_t i = 0; i < E.size(); ++i) logw[i] = birkhoff_sum(sys, phi, E[i].head(), n);
  const double lse = log_sum_exp(logw);
  EmpiricalMeasure sigma, mu;
  for (std::size_t i = 0; i < E.size(); ++i) {
    const double w = std::exp(logw[i] - lse);
    sigma.atoms.push_back(E[i]);
    sigma.weights.push_back(w);
    OrbitHistory cur = E[i];
    for (int k = 0; k < n; ++k) {
      mu.atoms.push_back(cur);
      mu.weights.push_back(w / n);
      if (k + 1 < n) cur = shift(sys, cur, 1);
    }
  }
  return {std::move(sigma), std::move(mu)};
}

bool constant_center_rate(const SystemSpec& sys, double* value) {
  if (!sys.has_center() || sys.kind() == SystemKind::Mane) return false;
  // The center direction is the middle eigenvector everywhere; |Df e_c| is its eigenvalue.
  if (value) *value = std::log(std::fabs(sys.eigendata()[1].value));
  return true;
}

std::vector<BadPressureReport> bad_pressure_ladder(const SystemSpec& sys, const Potential& phi,
                                                  const std::vector<double>& rs, double delta, int n_min, int n_max,
                                                  const BadPressureOptions& opts) {
  if (!sys.has_center()) fail(ErrorCode::NoCenterDirection, "bad pressure needs a one-dimensional center");
  for (double r : rs)
    if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "r must be positive");
  std::vector<BadPressureReport> reps(rs.size());
  if (rs.empty()) return reps;
  const PressureEstimate full = pressure_estimate(sys, phi, delta, n_min, n_max, opts.pressure);
  for (auto& rep : reps) {
    rep.full = full;
    rep.bad = full;
    rep.bad.per_n.clear();
  }
  double rate = 0.0;
  const bool constant = constant_center_rate(sys, &rate);
  for (int n = n_min; n <= n_max; ++n) {
    auto cands = detail::grid_candidates(sys, delta, n, opts.pressure);
    // Mean of phi_c over the first n steps; a candidate is bad for r when it is >= -r.
    std::vector<double> mean(cands.size(), rate);
    if (!constant) {
      parallel_for(cands.size(), [&](std::size_t i) {
        OrbitHistory h = extend_history_one(sys, cands[i], opts.history_depth, BranchPolicy::fixed({0}));
        auto series = phi_c_series(sys, h, n, opts.cocycle);
        double s = 0.0;
        for (double v : series) s += v;
        mean[i] = s / n;
      });
    }
    const auto& full_row = full.per_n[static_cast<std::size_t>(n - n_min)];
    for (std::size_t k = 0; k < rs.size(); ++k) {
      auto& rep = reps[k];
      std::vector<TorusPoint> kept;
      for (std::size_t i = 0; i < cands.size(); ++i)
        if (mean[i] >= -rs[k]) kept.push_back(cands[i]);
      rep.bad_candidates.push_back(kept.size());
      if (kept.empty()) {
        if (opts.require_nonempty) fail(ErrorCode::EmptyCollection, "no bad segments at n = " + std::to_string(n));
        rep.empty_n.push_back(n);
        rep.bad.per_n.push_back({n, 0.0, -kInf, 0.0});
        continue;
      }
      if (kept.size() == cands.size()) {
        // Same candidates as the full estimate, so the greedy selection is the same too.
        rep.bad.per_n.push_back({n, full_row.count, full_row.log_lambda, 0.0});
        continue;
      }
      auto sel = detail::greedy_separated(sys, kept, n, delta);
      std::vector<TorusPoint> pts;
      for (auto i : sel) pts.push_back(kept[i]);
      rep.bad.per_n.push_back({n, static_cast<double>(pts.size()), detail::log_lambda_of(sys, phi, pts, n), 0.0});
    }
  }
  for (auto& rep : reps) {
    if (rep.empty_n.empty()) {
      finalize_estimate(rep.bad);
      rep.gap = rep.full.value - rep.bad.value;
    } else {
      for (auto& row : rep.bad.per_n) row.slope_so_far = -kInf;
      rep.bad.value = -kInf;
      rep.bad.error_bar = 0.0;
      rep.gap = kInf;
    }
    for (std::size_t i = 0; i < rep.full.per_n.size(); ++i)
      rep.gap_per_n.push_back(rep.full.per_n[i].log_lambda - rep.bad.per_n[i].log_lambda);
  }
  return reps;
}

BadPressureReport bad_pressure_estimate(const SystemSpec& sys, const Potential& phi, const DecompositionParams& params,
                                        double delta, int n_min, int n_max, const BadPressureOptions& opts) {
  return bad_pressure_ladder(sys, phi, {params.r}, delta, n_min, n_max, opts).front();
}

std::vector<OrbitSegment> sample_segments(const SystemSpec& sys, const SegmentSampling& s) {
  if (s.count < 0 || s.min_length < 1 || s.max_length < s.min_length || s.depth < 0)
    fail(ErrorCode::InvalidArgument, "bad segment sampling parameters");
  std::vector<OrbitSegment> out(static_cast<std::size_t>(s.count));
  const double l0 = std::log(s.min_length), l1 = std::log(s.max_length);
  parallel_for(out.size(), [&](std::size_t i) {
    std::mt19937_64 rng(s.seed * 0x9E3779B97F4A7C15ull + i);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    Vec x(sys.dim());
    for (int k = 0; k < sys.dim(); ++k) x[k] = ud(rng);
    const double f = s.count > 1 ? static_cast<double>(i) / (s.count - 1) : 0.0;
    out[i].length = static_cast<int>(std::lround(std::exp(l0 + f * (l1 - l0))));
    out[i].history = extend_history_one(sys, TorusPoint(x), s.depth, BranchPolicy::random(rng()));
  });
  return out;
}

RScanReport r_scan(const SystemSpec& sys, const Potential& phi, const std::vector<double>& r_candidates,
                   const RScanOptions& opts) {
  for (double r : r_candidates)
    if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "r candidates must be positive");
  RScanReport rep;
  auto segs = sample_segments(sys, opts.sampling);
  std::vector<std::vector<double>> series(segs.size());
  parallel_for(segs.size(), [&](std::size_t i) {
    series[i] = phi_c_series(sys, segs[i].history, segs[i].length, opts.bad.cocycle);
  });
  for (const auto& s : series) {
    double t = 0.0;
    for (double v : s) t += v;
    rep.center_exponents.push_back(t / static_cast<double>(s.size()));
  }
  if (!rep.center_exponents.empty() && opts.bins > 0) {
    auto [mn, mx] = std::minmax_element(rep.center_exponents.begin(), rep.center_exponents.end());
    double lo = *mn, hi = *mx;
    if (hi - lo < 1e-12) {
      lo -= 1e-3;
      hi += 1e-3;
    }
    for (int b = 0; b <= opts.bins; ++b) rep.hist_edges.push_back(lo + (hi - lo) * b / opts.bins);
    rep.hist_counts.assign(static_cast<std::size_t>(opts.bins), 0);
    for (double v : rep.center_exponents) {
      int b = static_cast<int>((v - lo) / (hi - lo) * opts.bins);
      ++rep.hist_counts[static_cast<std::size_t>(std::clamp(b, 0, opts.bins - 1))];
    }
  }
  std::vector<double> rs = r_candidates;
  std::sort(rs.begin(), rs.end());
  std::vector<BadPressureReport> bps;
  if (opts.with_pressure) bps = bad_pressure_ladder(sys, phi, rs, opts.delta, opts.n_min, opts.n_max, opts.bad);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const double r = rs[k];
    RScanRow row{r, 0.0, 0.0, kNaN, kNaN, kNaN};
    std::size_t good = 0, badm = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (classify_series(series[i], r).p == 0) ++good;
      if (rep.center_exponents[i] >= -r) ++badm;
    }
    if (!series.empty()) {
      row.fraction_good = static_cast<double>(good) / static_cast<double>(series.size());
      row.bad_mass = static_cast<double>(badm) / static_cast<double>(series.size());
    }
    if (opts.with_pressure) {
      const auto& bp = bps[k];
      row.bad_pressure = bp.bad.value;
      row.full_pressure = bp.full.value;
      row.gap = bp.gap;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace phlab
