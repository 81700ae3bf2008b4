#include "phlab/torus.hpp"

#include <cmath>
#include <stdexcept>

namespace phlab {

double wrap01(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r = 0.0;
  return r;
}

double lift_coord(double v) {
  double r = v - std::floor(v);  // [0,1]
  if (r > 0.5) r -= 1.0;
  if (r <= -0.5) r += 1.0;
  return r;
}

TorusPoint::TorusPoint(const Vec& v) : dim_(static_cast<int>(v.size())) {
  if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("TorusPoint: dimension must be 1..3");
  for (int i = 0; i < dim_; ++i) c_[static_cast<size_t>(i)] = wrap01(v[i]);
}

TorusPoint::TorusPoint(std::initializer_list<double> coords) : dim_(static_cast<int>(coords.size())) {
  if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("TorusPoint: dimension must be 1..3");
  size_t i = 0;
  for (double c : coords) c_[i++] = wrap01(c);
}

Vec TorusPoint::vec() const {
  Vec v(dim_);
  for (int i = 0; i < dim_; ++i) v[i] = c_[static_cast<size_t>(i)];
  return v;
}

bool TorusPoint::operator==(const TorusPoint& o) const {
  if (dim_ != o.dim_) return false;
  for (int i = 0; i < dim_; ++i)
    if (c_[static_cast<size_t>(i)] != o.c_[static_cast<size_t>(i)]) return false;
  return true;
}

bool TorusPoint::operator<(const TorusPoint& o) const {
  for (int i = 0; i < dim_; ++i) {
    double a = c_[static_cast<size_t>(i)], b = o.c_[static_cast<size_t>(i)];
    if (a < b) return true;
    if (b < a) return false;
  }
  return false;
}

Vec lift_diff(const TorusPoint& a, const TorusPoint& b) {
  Vec d(a.dim());
  for (int i = 0; i < a.dim(); ++i) d[i] = lift_coord(a[i] - b[i]);
  return d;
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    double t = std::fabs(a[i] - b[i]);
    t = std::min(t, 1.0 - t);
    s += t * t;
  }
  return std::sqrt(s);
}

TorusPoint translate(const TorusPoint& a, const Vec& v) { return TorusPoint(Vec(a.vec() + v)); }

}  // namespace phlab
