// Hölder potentials on T^d.
//
// Spec grammar: terms joined by '+', each one of
//   zero
//   const:C
//   cos:I[:A]        A cos(2 pi x_I), I counted from 1
//   wave:K1,K2,..:A:P   A cos(2 pi (K.x) + P)
#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "phlab/torus.hpp"

namespace phlab {

class Potential {
 public:
  Potential();
  Potential(std::string name, std::function<double(const TorusPoint&)> f, double alpha, double K, double sup_norm);

  static Potential parse(const std::string& spec, int dim);
  static Potential zero();
  static Potential constant(double c);
  static Potential cosine(int coord, double amplitude = 1.0);

  double operator()(const TorusPoint& x) const { return f_(x); }
  const std::string& name() const { return name_; }
  double holder_exponent() const { return alpha_; }
  double holder_constant() const { return K_; }
  // Upper bound on sup |phi|.
  double sup_norm() const { return sup_; }

  Potential plus(const Potential& other) const;
  Potential shifted(double c) const;
  Potential with_holder(double alpha, double K) const;

 private:
  std::string name_;
  std::function<double(const TorusPoint&)> f_;
  double alpha_ = 1.0;
  double K_ = 0.0;
  double sup_ = 0.0;
};

// Largest |phi(x) - phi(y)| / d(x,y)^alpha over sampled pairs at distances up to max_dist.
double measure_holder_constant(const Potential& phi, int dim, double alpha, int samples, double max_dist,
                               std::uint64_t seed);

}  // namespace phlab
