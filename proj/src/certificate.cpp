#include <cmath>
#include <limits>

#include "phlab/error.hpp"
#include "phlab/specification.hpp"

namespace phlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs one check; sub-errors are recorded on the check instead of aborting the certificate.
template <class F>
CertificateCheck run_check(int id, const std::string& name, F&& body) {
  CertificateCheck c;
  c.id = id;
  c.name = name;
  try {
    body(c);
  } catch (const Error& e) {
    c.passed = false;
    c.error = error_name(e.code());
    c.message = e.what();
  } catch (const std::exception& e) {
    c.passed = false;
    c.error = error_name(ErrorCode::Internal);
    c.message = e.what();
  }
  return c;
}

bool segment_good(const SystemSpec& sys, const OrbitSegment& s, double r) {
  return !sys.has_center() || is_good(sys, s.history, s.length, {r});
}

}  // namespace

Certificate certificate(const SystemSpec& sys, const Potential& phi, const CertificateOptions& opts) {
  if (!(opts.r > 0.0) || !(opts.delta > 0.0) || !(opts.eps > 0.0) || !(opts.pressure_delta > 0.0))
    fail(ErrorCode::InvalidArgument, "certificate scales must be positive");
  if (opts.n_min < 1 || opts.n_max < opts.n_min) fail(ErrorCode::InvalidArgument, "bad n range");
  Certificate cert;
  cert.system = kind_name(sys.kind());
  cert.potential = phi.name();
  cert.options = opts;

  cert.checks.push_back(run_check(0, "expansivity", [&](CertificateCheck& c) {
    SegmentSampling ss;
    ss.count = opts.expansivity_samples;
    ss.min_length = ss.max_length = 1;
    ss.depth = opts.window;
    ss.seed = opts.seed;
    std::vector<OrbitHistory> hs;
    for (auto& s : sample_segments(sys, ss)) hs.push_back(s.history);
    GammaOptions g;
    g.seed = opts.seed;
    auto rep = expansivity_diagnostic(sys, hs, opts.eps, opts.window, 0.0, g);
    c.passed = true;
    c.message = "informational";
    c.values = {{"eps", opts.eps}, {"window", opts.window}, {"fraction_nonexpansive", rep.fraction}};
  }));

  cert.checks.push_back(run_check(1, "scale_relation", [&](CertificateCheck& c) {
    c.passed = opts.eps >= 2000.0 * opts.delta;
    c.values = {{"eps", opts.eps}, {"delta", opts.delta}, {"ratio", opts.eps / opts.delta}};
    if (!c.passed) c.message = "eps < 2000 delta";
  }));

  // Checks 2 and 3 share one estimate.
  BadPressureReport bp;
  bool have_bp = false;
  auto pressure_check = run_check(2, "full_pressure", [&](CertificateCheck& c) {
    BadPressureOptions bo;
    bo.pressure.seed = opts.seed;
    if (sys.has_center()) {
      bp = bad_pressure_estimate(sys, phi, {opts.r}, opts.pressure_delta, opts.n_min, opts.n_max, bo);
      have_bp = true;
    } else {
      bp.full = pressure_estimate(sys, phi, opts.pressure_delta, opts.n_min, opts.n_max, bo.pressure);
    }
    c.passed = std::isfinite(bp.full.value);
    c.values = {{"pressure", bp.full.value}, {"error_bar", bp.full.error_bar}, {"delta", opts.pressure_delta}};
  });
  cert.checks.push_back(pressure_check);

  cert.checks.push_back(run_check(3, "bad_pressure_gap", [&](CertificateCheck& c) {
    if (!pressure_check.error.empty()) fail(ErrorCode::InvalidArgument, "full pressure unavailable");
    if (!have_bp) {
      // No center direction: every segment is good and the bad collection is empty.
      c.passed = true;
      c.values = {{"bad_pressure", -kInf}, {"gap", kInf}};
      c.message = "no center direction";
      return;
    }
    c.passed = bp.gap > 0.0;
    c.values = {{"bad_pressure", bp.bad.value}, {"full_pressure", bp.full.value}, {"gap", bp.gap}};
    if (!c.passed) c.message = "gap is not positive";
  }));

  SegmentSampling ss;
  ss.count = 4 * (2 * opts.glue_pairs + opts.distortion_segments);
  ss.min_length = std::min(4, opts.segment_length);
  ss.max_length = opts.segment_length;
  ss.depth = 32;
  ss.seed = opts.seed;
  std::vector<OrbitSegment> good;
  for (auto& s : sample_segments(sys, ss))
    if (segment_good(sys, s, opts.r)) good.push_back(s);

  cert.checks.push_back(run_check(4, "gluing", [&](CertificateCheck& c) {
    const int pairs = std::min<int>(opts.glue_pairs, static_cast<int>(good.size() / 2));
    if (pairs == 0) fail(ErrorCode::NoGoodSegments, "no good segment pairs were sampled");
    GlueOptions go;
    go.params.r = opts.r;
    go.seed = opts.seed;
    int ok = 0, max_T = 0;
    double worst = 0.0;
    std::string last_error;
    for (int p = 0; p < pairs; ++p) {
      try {
        auto rep = glue_segments(sys, {good[static_cast<std::size_t>(2 * p)], good[static_cast<std::size_t>(2 * p + 1)]},
                                 opts.delta, 0, go);
        worst = std::max(worst, rep.max_shadow_error);
        for (int T : rep.gluing_times) max_T = std::max(max_T, T);
        if (rep.max_shadow_error < 4.0 * opts.delta) ++ok;
      } catch (const Error& e) {
        last_error = error_name(e.code());
      }
    }
    const double rate = static_cast<double>(ok) / pairs;
    c.passed = ok == pairs;
    c.values = {{"pairs", pairs}, {"success_rate", rate}, {"max_shadow_error", worst}, {"max_gluing_time", max_T}};
    if (!last_error.empty()) c.message = "last failure: " + last_error;
  }));

  cert.checks.push_back(run_check(5, "bowen_distortion", [&](CertificateCheck& c) {
    const int count = std::min<int>(opts.distortion_segments, static_cast<int>(good.size()));
    if (count == 0) fail(ErrorCode::NoGoodSegments, "no good segments were sampled");
    DistortionOptions dopt;
    dopt.seed = opts.seed;
    dopt.params.r = opts.r;
    dopt.require_good = sys.has_center();
    double worst_ratio = 0.0, worst = 0.0, bound = 0.0;
    bool all = true;
    for (int i = 0; i < count; ++i) {
      auto rep = bowen_distortion(sys, phi, good[static_cast<std::size_t>(i)], opts.eps, dopt);
      dopt.beta_prime = rep.beta_prime;  // calibrated once
      all = all && rep.observed <= rep.bound;
      worst = std::max(worst, rep.observed);
      bound = rep.bound;
      if (rep.bound > 0.0) worst_ratio = std::max(worst_ratio, rep.observed / rep.bound);
    }
    c.passed = all;
    c.values = {{"segments", count}, {"max_observed", worst}, {"bound", bound}, {"max_ratio", worst_ratio}};
  }));

  cert.all_passed = true;
  for (const auto& c : cert.checks)
    if (c.id >= 1) cert.all_passed = cert.all_passed && c.passed;
  cert.note =
      "Passing checks are numerical evidence at the stated fixed scales and sample sizes, not a proof; "
      "the bad collection is explored through sampled segments only.";
  return cert;
}

}  // namespace phlab
