// Points of the flat torus T^d (d <= 3) and the lift conventions used everywhere.
#pragma once

#include <array>
#include <initializer_list>
#include <Eigen/Dense>

namespace phlab {

constexpr int kMaxDim = 3;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// Reduce to [0,1). A value that rounds up to 1.0 is mapped to 0.
double wrap01(double v);

// Representative of v mod 1 in (-1/2, 1/2].
double lift_coord(double v);

class TorusPoint {
 public:
  TorusPoint() = default;
  // Coordinates are reduced mod 1 on construction.
  explicit TorusPoint(const Vec& v);
  TorusPoint(std::initializer_list<double> coords);

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<size_t>(i)]; }
  Vec vec() const;

  bool operator==(const TorusPoint& o) const;
  bool operator!=(const TorusPoint& o) const { return !(*this == o); }
  // Lexicographic order on coordinates; used for canonical candidate order.
  bool operator<(const TorusPoint& o) const;

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

// lift(a - b): per-coordinate representative in (-1/2, 1/2].
Vec lift_diff(const TorusPoint& a, const TorusPoint& b);

// Flat torus metric.
double torus_distance(const TorusPoint& a, const TorusPoint& b);

// Translate a by a real vector and reduce.
TorusPoint translate(const TorusPoint& a, const Vec& v);

}  // namespace phlab
