// Gluing of good orbit segments through unstable / center-stable intersections, Bowen
// distortion probes, expansivity sampling and the combined certificate.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phlab/decomposition.hpp"

namespace phlab {

struct CsDisk {
  TorusPoint base;
  Vec e_c, e_s;               // empty when the system lacks the direction
  Vec normal;                 // unit normal of the tangent cs-plane at base
  std::vector<Vec> center;    // lifted center curve through the base
  std::vector<Vec> cloud;     // lifted points of the disk
  double radius = 0.0;
};

// Center curve by Euler steps along the re-estimated center field, with stable segments
// of radius kappa attached at sampled center points.
CsDisk build_center_stable_disk(const SystemSpec& sys, const OrbitHistory& h, double kappa, int resolution,
                                const CocycleOptions& opts = {});

struct ProductScales {
  double beta = 0.0;
  double delta0 = 0.0;
  double beta_prime = 0.0;
  double projection_constant = 0.0;  // max norm of the oblique projections onto E^u, E^c, E^s
  int samples = 0;
};

// Largest beta (<= beta_cap, halving) on which the sampled splitting turns by less than
// angle_tol; delta0 = beta / (2 C_proj); beta' = min(beta, delta0 / 2) / 2.
ProductScales calibrate_product_structure(const SystemSpec& sys, int samples, std::uint64_t seed,
                                          double beta_cap = 0.1, double angle_tol = 0.05);

struct MinimalityCalibration {
  double L = 0.0;  // unstable length after which sampled leaves met every sampled cs-patch of radius delta
  int T_analytic = 0;
  int T_max = 0;
  int samples = 0;
};

// Uses straight leaves along the base unstable eigendirection and flat cs-patches.
MinimalityCalibration calibrate_minimality_radius(const SystemSpec& sys, double delta, int samples,
                                                  std::uint64_t seed, double length_cap = 1e9);

struct GlueOptions {
  DecompositionParams params;
  bool require_good = true;
  double match_factor = 0.1;     // nearest cs-cloud point must lie within match_factor * delta
  double refine_factor = 0.01;   // bisection along the unstable curve down to this * delta
  int cs_resolution = 21;
  double scan_length_cap = 2e8;  // lifted length of f^T W^u scanned before giving up
  int calibration_samples = 8;
  std::uint64_t seed = 1;
  CocycleOptions cocycle;
};

struct GlueJunction {
  int T = 0;
  double sigma = 0.0;   // seed parameter on W^u_delta of the block end
  Vec u;                // lifted start of the transition, near the block end
  Vec w;                // lifted intersection, near the next block start
  double cs_a = 0.0, cs_b = 0.0;  // coordinates of w - x_0^{next} along e_c, e_s
  double cloud_distance = 0.0;
};

struct GlueReport {
  std::vector<OrbitSegment> segments;
  OrbitHistory glued;
  std::vector<TorusPoint> orbit;  // refined forward orbit of the shadowing point
  std::vector<int> block_starts;
  std::vector<int> gluing_times;
  std::vector<GlueJunction> junctions;
  std::vector<double> block_errors;
  double max_shadow_error = 0.0;
  double consistency = 0.0;  // max one-step residual of the refined orbit
  double delta = 0.0;
  int T_max = 0;
  int T_analytic = 0;
  double L = 0.0;
};

// T_max <= 0 selects 4 x the analytic transition time from calibrate_minimality_radius.
GlueReport glue_segments(const SystemSpec& sys, const std::vector<OrbitSegment>& segments, double delta, int T_max,
                         const GlueOptions& opts = {});

struct GlueCheck {
  double max_shadow_error;
  double consistency;
};
// Re-iterates each step of the glued orbit and re-measures the block distances.
GlueCheck verify_glue(const SystemSpec& sys, const GlueReport& rep);

// K' = K (4 beta')^alpha sum_{i>=0} (e^{-r alpha i / 2} + lambda_u^{-i alpha}).
double bowen_constant(double K, double alpha, double r, double lambda_u, double beta_prime);

struct DistortionOptions {
  int probes = 16;
  std::uint64_t seed = 1;
  bool require_good = true;
  DecompositionParams params;
  double beta_prime = 0.0;  // <= 0: calibrate
  int history_window = 0;   // forward terms kept in d~; 0 is the metric on past coordinates
  int calibration_samples = 64;
  CocycleOptions cocycle;
};

struct DistortionReport {
  OrbitSegment segment;
  double observed = 0.0;
  std::vector<double> observed_prefix;  // max over probes of |S_j phi(x) - S_j phi(y)|, j = 1..n
  double bound = 0.0;
  double K = 0.0, alpha = 1.0, r = 0.0, lambda_u = 0.0, beta_prime = 0.0;
  double eps = 0.0;
  int probes_used = 0;
  double max_amplitude = 0.0;
};

DistortionReport bowen_distortion(const SystemSpec& sys, const Potential& phi, const OrbitSegment& seg, double eps,
                                  const DistortionOptions& opts = {});

struct ExpansivityReport {
  double eps = 0.0;
  int window = 0;
  double tolerance = 0.0;
  double fraction = 0.0;
  std::vector<double> diameters;
  std::vector<double> center_exponents;  // NaN without a center
};

// tolerance <= 0 selects eps / 100.
ExpansivityReport expansivity_diagnostic(const SystemSpec& sys, const std::vector<OrbitHistory>& samples, double eps,
                                         int m, double tolerance = 0.0, const GammaOptions& gopts = {});

struct CertificateOptions {
  double r = 0.01;
  double delta = 2e-4;
  double eps = 0.4;
  double pressure_delta = 0.2;
  int n_min = 1, n_max = 2;
  int glue_pairs = 4;
  int distortion_segments = 8;
  int segment_length = 12;
  int expansivity_samples = 32;
  int window = 20;
  std::uint64_t seed = 1;
};

struct CertificateCheck {
  int id = 0;  // 0 = expansivity diagnostic (informational)
  std::string name;
  bool passed = false;
  std::string error;  // error code name when the check aborted
  std::string message;
  std::vector<std::pair<std::string, double>> values;
};

struct Certificate {
  std::string system;
  std::string potential;
  CertificateOptions options;
  std::vector<CertificateCheck> checks;
  bool all_passed = false;
  std::string note;
};

Certificate certificate(const SystemSpec& sys, const Potential& phi, const CertificateOptions& opts = {});

}  // namespace phlab
