// Invariant splitting E^u + E^c + E^s along orbit histories, and the center observable.
#pragma once

#include <cstdint>
#include <vector>

#include "phlab/inverse_limit.hpp"

namespace phlab {

struct CocycleOptions {
  int min_depth = 20;
  int lookahead = 40;
  double residual_tol = 1e-4;
  std::uint64_t seed = 0x9E3779B97F4A7C15ull;
};

struct DirectionEstimate {
  Vec direction;    // unit, canonical sign
  double residual;  // angle between the m-step and (m-1)-step estimates
};

// Fixed pseudo-random unit vector for power iteration.
Vec generic_vector(int d, std::uint64_t seed);

// Angle between the lines spanned by a and b, in [0, pi/2].
double line_angle(const Vec& a, const Vec& b);

DirectionEstimate estimate_unstable_direction(const SystemSpec& sys, const OrbitHistory& h,
                                              const CocycleOptions& opts = {});
DirectionEstimate estimate_stable_direction(const SystemSpec& sys, const TorusPoint& x, int lookahead,
                                            const CocycleOptions& opts = {});
DirectionEstimate estimate_center_direction(const SystemSpec& sys, const OrbitHistory& h, int lookahead,
                                            const CocycleOptions& opts = {});

struct SplittingFrame {
  Vec e_u, e_c, e_s;  // e_c / e_s are empty when the system has no such direction
  double residual_u = 0.0, residual_c = 0.0, residual_s = 0.0;
};

SplittingFrame estimate_frame(const SystemSpec& sys, const OrbitHistory& h, const CocycleOptions& opts = {});

// log |Df(x_0) e_c| at h.
double phi_c(const SystemSpec& sys, const OrbitHistory& h, const CocycleOptions& opts = {});
// phi_c at h, tau h, ..., tau^{n-1} h, sharing one forward orbit.
std::vector<double> phi_c_series(const SystemSpec& sys, const OrbitHistory& h, int n, const CocycleOptions& opts = {});
double central_exponent(const SystemSpec& sys, const OrbitHistory& h, int n, const CocycleOptions& opts = {});

}  // namespace phlab
