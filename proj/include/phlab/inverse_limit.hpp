// Truncated points of the natural extension: backward orbits (x_0, x_{-1}, ..., x_{-m}).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phlab/systems.hpp"

namespace phlab {

class OrbitHistory {
 public:
  OrbitHistory() = default;
  explicit OrbitHistory(std::vector<TorusPoint> states);

  int depth() const { return static_cast<int>(states_.size()) - 1; }
  int dim() const { return states_.empty() ? 0 : states_.front().dim(); }
  const TorusPoint& head() const { return states_.front(); }
  // state(k) = x_{-k}, 0 <= k <= depth
  const TorusPoint& state(int k) const { return states_[static_cast<size_t>(k)]; }
  const std::vector<TorusPoint>& states() const { return states_; }

  bool operator==(const OrbitHistory& o) const { return states_ == o.states_; }

 private:
  std::vector<TorusPoint> states_;
};

struct OrbitSegment {
  OrbitHistory history;
  int length = 1;
};

struct BranchPolicy {
  enum class Kind { EnumerateAll, Random, Fixed };
  Kind kind = Kind::Fixed;
  std::uint64_t seed = 0;
  // Fixed: branch index per step (cycled when shorter than the depth).
  std::vector<int> indices{0};
  std::size_t cap = 1000000;

  static BranchPolicy enumerate_all(std::size_t cap = 1000000);
  static BranchPolicy random(std::uint64_t seed);
  static BranchPolicy fixed(std::vector<int> indices);
};

// Enumerate-all returns degree^m histories ordered by branch index (x_{-1} branch most significant).
std::vector<OrbitHistory> extend_history(const SystemSpec& sys, const TorusPoint& x, int m, const BranchPolicy& policy);
OrbitHistory extend_history_one(const SystemSpec& sys, const TorusPoint& x, int m, const BranchPolicy& policy);

// Backward states of y0 chosen as the preimage nearest to the reference history at each step.
OrbitHistory nearest_branch_history(const SystemSpec& sys, const TorusPoint& y0, const OrbitHistory& ref, int m);

// Largest one-step inconsistency max_k d(f(x_{-k-1}), x_{-k}).
double consistency_error(const SystemSpec& sys, const OrbitHistory& h);
constexpr double kConsistencyTol = 1e-9;

// sum_{n=-m}^{F} 2^{-|n|} d(x_n, y_n); forward terms by iterating apply from x_0.
double history_metric(const SystemSpec& sys, const OrbitHistory& h1, const OrbitHistory& h2, int forward_window);

// tau^k. k > 0 keeps the depth (oldest states drop out); k < 0 drops the newest |k| states.
OrbitHistory shift(const SystemSpec& sys, const OrbitHistory& h, int k);

double bowen_distance(const SystemSpec& sys, const TorusPoint& x, const TorusPoint& y, int n);

struct GammaOptions {
  std::size_t sample_budget = 2000;
  std::uint64_t seed = 1;
};

// Diameter of a sampled Gamma_eps over the window [-m, m]; 0 for an empty survivor set.
double gamma_diameter(const SystemSpec& sys, const OrbitHistory& h, double eps, int m, const GammaOptions& opts = {});

// Columnar text: header lines then one state per line, x_0 first.
std::string history_to_text(const OrbitHistory& h);
OrbitHistory history_from_text(const std::string& text);

struct HistoryClosenessCalibration {
  double delta;
  int J;
  int samples;
};

// Smallest J (on sampled pairs) such that d(x_0, y_0) < delta forces d~(tau^J x, tau^J y) < eps
// with nearest-branch histories; delta is halved from eps until J <= max_J.
HistoryClosenessCalibration calibrate_history_closeness(const SystemSpec& sys, double eps, int depth, int max_J,
                                                        int samples, std::uint64_t seed);

}  // namespace phlab
