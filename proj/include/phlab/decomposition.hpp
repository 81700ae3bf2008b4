// Prefix / good-core decomposition of orbit segments driven by the center observable,
// weighted empirical measures, and pressure of the bad collection.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "phlab/cocycle.hpp"
#include "phlab/pressure.hpp"

namespace phlab {

struct DecompositionParams {
  double r = 0.01;
};

struct SegmentClass {
  int p = 0, g = 0, s = 0;
  std::vector<double> prefix_sums;  // S_1 .. S_n of phi_c
};

// Pure classification of a phi_c series of length n. Ties S_p = -r p count as bad (prefix).
SegmentClass classify_series(const std::vector<double>& phic, double r);

SegmentClass classify_segment(const SystemSpec& sys, const OrbitHistory& h, int n, const DecompositionParams& params,
                              const CocycleOptions& opts = {});
bool is_good(const SystemSpec& sys, const OrbitHistory& h, int n, const DecompositionParams& params,
             const CocycleOptions& opts = {});

struct EmpiricalMeasure {
  std::vector<OrbitHistory> atoms;
  std::vector<double> weights;
  double integrate(const Potential& phi) const;
  double total_weight() const;
};

// sigma_n (weights proportional to exp Phi_n) and mu_n (sigma_n averaged over n shifts).
std::pair<EmpiricalMeasure, EmpiricalMeasure> weighted_empirical_measure(const SystemSpec& sys, const Potential& phi,
                                                                         const std::vector<OrbitHistory>& E, int n);

// phi_c is constant for linear and product kinds; returns it when so.
bool constant_center_rate(const SystemSpec& sys, double* value);

struct BadPressureOptions {
  PressureOptions pressure;
  int history_depth = 20;
  bool require_nonempty = false;  // throw EmptyCollection instead of reporting an infinite gap
  CocycleOptions cocycle;
};

struct BadPressureReport {
  PressureEstimate bad;
  PressureEstimate full;
  double gap = 0.0;                 // full.value - bad.value (+inf when some n has no bad segment)
  std::vector<double> gap_per_n;    // log Lambda differences
  std::vector<int> empty_n;
  std::vector<std::size_t> bad_candidates;  // per n
};

BadPressureReport bad_pressure_estimate(const SystemSpec& sys, const Potential& phi, const DecompositionParams& params,
                                        double delta, int n_min, int n_max, const BadPressureOptions& opts = {});
// One report per r; the full estimate and the center averages are shared across the ladder.
std::vector<BadPressureReport> bad_pressure_ladder(const SystemSpec& sys, const Potential& phi,
                                                  const std::vector<double>& rs, double delta, int n_min, int n_max,
                                                  const BadPressureOptions& opts = {});

struct SegmentSampling {
  int count = 200;
  int min_length = 4;
  int max_length = 64;
  int depth = 20;
  std::uint64_t seed = 1;
};

// Random base points with random branch choices; lengths log-spaced over [min_length, max_length].
std::vector<OrbitSegment> sample_segments(const SystemSpec& sys, const SegmentSampling& s);

struct RScanRow {
  double r;
  double fraction_good;
  double bad_mass;  // fraction of sampled segments with mean phi_c >= -r
  double bad_pressure;
  double full_pressure;
  double gap;
};

struct RScanReport {
  std::vector<RScanRow> rows;
  std::vector<double> hist_edges;   // lambda^c histogram of sampled segment averages
  std::vector<int> hist_counts;
  std::vector<double> center_exponents;
};

struct RScanOptions {
  SegmentSampling sampling;
  bool with_pressure = true;
  double delta = 0.2;
  int n_min = 1, n_max = 2;
  int bins = 20;
  BadPressureOptions bad;
};

RScanReport r_scan(const SystemSpec& sys, const Potential& phi, const std::vector<double>& r_candidates,
                   const RScanOptions& opts = {});

}  // namespace phlab
