#include <doctest.h>

#include <cmath>

#include "oracles/oracles.hpp"
#include "phlab/cocycle.hpp"
#include "phlab/inverse_limit.hpp"

using namespace phlab;

namespace {

Vec oracle_eigenvector(const double m[3][3], double lambda) {
  const auto e = oracle::eigenvector3(m, lambda);
  Vec v(3);
  v << e[0], e[1], e[2];
  return v;
}

const double kPhLinear[3][3] = {{100, 1, 0}, {-100, 0, 1}, {3, 0, 0}};

}  // namespace

TEST_CASE("line angle") {
  Vec a(2), b(2);
  a << 1, 0;
  b << -1, 0;
  CHECK(line_angle(a, b) == doctest::Approx(0.0));
  b << 0, 2;
  CHECK(line_angle(a, b) == doctest::Approx(M_PI / 2));
  b << 1, 1;
  CHECK(line_angle(a, b) == doctest::Approx(M_PI / 4));
}

TEST_CASE("splitting of the linear partially hyperbolic map matches eigenvectors") {
  const auto sys = catalog::ph_linear();
  const auto cp = oracle::char_poly3(kPhLinear);
  const auto roots = oracle::cubic_roots(cp[0], cp[1], cp[2]);
  const auto h = extend_history_one(sys, TorusPoint{0.2, 0.4, 0.6}, 40, BranchPolicy::random(1));
  const auto fr = estimate_frame(sys, h);
  CHECK(line_angle(fr.e_u, oracle_eigenvector(kPhLinear, roots[0])) < 1e-8);
  CHECK(line_angle(fr.e_c, oracle_eigenvector(kPhLinear, roots[1])) < 1e-6);
  CHECK(line_angle(fr.e_s, oracle_eigenvector(kPhLinear, roots[2])) < 1e-8);
  CHECK(phi_c(sys, h) == doctest::Approx(std::log(roots[1])).epsilon(1e-8));
  for (double v : phi_c_series(sys, h, 10)) CHECK(v == doctest::Approx(std::log(roots[1])).epsilon(1e-8));
  CHECK(central_exponent(sys, h, 10) == doctest::Approx(std::log(roots[1])).epsilon(1e-8));
}

TEST_CASE("product with a rotation has a neutral center") {
  const auto sys = catalog::product_rotation();
  const auto h = extend_history_one(sys, TorusPoint{0.1, 0.5, 0.9}, 40, BranchPolicy::random(2));
  const auto fr = estimate_frame(sys, h);
  Vec ez = Vec::Zero(3);
  ez[2] = 1.0;
  CHECK(line_angle(fr.e_c, ez) < 1e-8);
  CHECK(std::fabs(phi_c(sys, h)) < 1e-10);
}

TEST_CASE("two-dimensional maps have no center") {
  const auto sys = catalog::anosov_endomorphism();
  const auto h = extend_history_one(sys, TorusPoint{0.1, 0.5}, 40, BranchPolicy::random(2));
  const auto fr = estimate_frame(sys, h);
  CHECK(fr.e_c.size() == 0);
  const auto r = oracle::quadratic_roots(3, 1, 1, 1);
  Vec vu(2);
  vu << 1.0, r[0] - 3.0;
  CHECK(line_angle(fr.e_u, vu) < 1e-6);
}

TEST_CASE("mane splitting is invariant along the orbit") {
  const auto sys = catalog::mane(0.1);
  // Start inside the perturbation window so the center rate varies.
  const auto h = extend_history_one(sys, TorusPoint{0.01, 0.005, 0.002}, 40, BranchPolicy::fixed({0}));
  const auto f0 = estimate_frame(sys, h);
  const auto f1 = estimate_frame(sys, shift(sys, h, 1));
  const Mat J = sys.jacobian(h.head());
  CHECK(line_angle(J * f0.e_u, f1.e_u) < 1e-6);
  CHECK(line_angle(J * f0.e_c, f1.e_c) < 1e-5);
  CHECK(line_angle(J * f0.e_s, f1.e_s) < 1e-5);
  // phi_c is log of the stretch of e_c.
  CHECK(phi_c(sys, h) == doctest::Approx(std::log((J * f0.e_c).norm() / f0.e_c.norm())).epsilon(1e-6));
  CHECK(f0.residual_u < 1e-4);
}

TEST_CASE("generic vector is deterministic and unit") {
  const Vec a = generic_vector(3, 5), b = generic_vector(3, 5);
  CHECK((a - b).norm() == 0.0);
  CHECK(a.norm() == doctest::Approx(1.0));
}
