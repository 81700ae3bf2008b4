// Separated sets and pressure estimators: topological pressure on a grid of candidates,
// unstable pressure on local unstable disks, stable pressure on pulled-back stable disks.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phlab/inverse_limit.hpp"
#include "phlab/potential.hpp"

namespace phlab {

struct PerN {
  int n;
  double count;  // |E| (enumerated) or the leaf-length quadrature value (density)
  double log_lambda;
  double slope_so_far;
};

struct PressureEstimate {
  double value = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  int n_min = 0, n_max = 0;
  std::vector<PerN> per_n;
  std::size_t sample_size = 0;
  std::string method;    // grid | unstable-disk | stable-branches
  std::string counting;  // enumerated | density
  std::uint64_t seed = 0;
  // Largest deviation of a log Lambda increment from the fitted slope inside the fit window.
  double error_bar = 0.0;
  bool counts_monotone = true;
  std::size_t components = 0;  // stable-branches: number of leaf components at n_max
};

// Least-squares slope of log Lambda against n over the top half of the rows (at least two).
double fit_slope(const std::vector<PerN>& rows);
// Fills value, slope_so_far and error_bar from per_n.
void finalize_estimate(PressureEstimate& est);

double log_sum_exp(const std::vector<double>& v);

double birkhoff_sum(const SystemSpec& sys, const Potential& phi, const TorusPoint& x, int n);

// Greedy maximal subset with pairwise Bowen distance > delta, scanning candidates in
// lexicographic order.
std::vector<TorusPoint> max_separated_set(const SystemSpec& sys, std::vector<TorusPoint> candidates, int n, double delta);

struct PartitionOptions {
  // eps > 0: Phi_eps(x, n) is approximated by the max of Phi_0 over this many Bowen-ball samples.
  int ball_samples = 64;
  std::uint64_t seed = 1;
};

// log sum_{x in E} exp(Phi_eps(x, n)); throws NotSeparated unless E is (n, delta)-separated.
double log_partition_function(const SystemSpec& sys, const Potential& phi, const std::vector<TorusPoint>& E, int n,
                              double delta, double eps, const PartitionOptions& opts = {});
double partition_function(const SystemSpec& sys, const Potential& phi, const std::vector<TorusPoint>& E, int n,
                          double delta, double eps, const PartitionOptions& opts = {});

struct PressureOptions {
  std::uint64_t seed = 1;
  std::size_t candidate_budget = 40000000;
  int orbit_samples = 64;
  int orbit_length = 16;
  // Candidate spacing along e_u is delta / (refine * lambda_u^{n-1}).
  double refine = 2.5;
};

PressureEstimate pressure_estimate(const SystemSpec& sys, const Potential& phi, double delta, int n_min, int n_max,
                                   const PressureOptions& opts = {});

namespace detail {
// Candidate cloud for pressure_estimate at order n (d >= 2), lexicographically sorted.
std::vector<TorusPoint> grid_candidates(const SystemSpec& sys, double delta, int n, const PressureOptions& opts);
// Greedy selection over candidates in the given order; returns selected indices.
std::vector<std::size_t> greedy_separated(const SystemSpec& sys, const std::vector<TorusPoint>& cands, int n,
                                          double delta);
// Log of the partition function over selected points with exact Birkhoff sums.
double log_lambda_of(const SystemSpec& sys, const Potential& phi, const std::vector<TorusPoint>& pts, int n);
}  // namespace detail

// ---- leaf pressures ----

struct LeafOptions {
  int resolution = 64;          // initial vertices per disk, >= 16
  std::size_t point_cap = 200000;
  int seed_depth = 6;           // k in "seed at x_{-k}"
  std::size_t enumeration_cap = 2000000;
  std::size_t branch_cap = 1000000;
  int lookahead = 40;
  std::uint64_t seed = 1;
};

struct UnstableDisk {
  OrbitHistory base;
  int seed_depth = 0;
  std::vector<Vec> points;         // lifted coordinates near the representative of x_0
  std::vector<double> arclength;   // signed, 0 at x_0
  std::vector<double> seed_param;  // offset along e_u at x_{-k}
  Vec seed_direction;
  Vec seed_origin;                 // lifted x_{-k}
  Vec lift_offset;                 // integer vector subtracted after k lifted steps

  std::vector<TorusPoint> torus_points() const;
};

UnstableDisk grow_unstable_disk(const SystemSpec& sys, const OrbitHistory& h, double delta, int resolution,
                                const LeafOptions& opts = {});

// History of disk point idx: intermediate images of its seed point, then nearest branches along h.
OrbitHistory disk_point_history(const SystemSpec& sys, const UnstableDisk& disk, std::size_t idx, int depth);

PressureEstimate unstable_pressure_estimate(const SystemSpec& sys, const Potential& phi, const OrbitHistory& h,
                                            double delta, double eps, int n_min, int n_max,
                                            const LeafOptions& opts = {});

struct StableDisk {
  TorusPoint base;
  std::vector<Vec> points;  // lifted, near the representative of x
  std::vector<double> arclength;
  Vec direction;
};

StableDisk grow_stable_disk(const SystemSpec& sys, const TorusPoint& x, double delta, int resolution,
                            const LeafOptions& opts = {});

PressureEstimate stable_pressure_estimate(const SystemSpec& sys, const Potential& phi, const TorusPoint& x,
                                          double delta, double eps, int n_min, int n_max,
                                          const LeafOptions& opts = {});

}  // namespace phlab
