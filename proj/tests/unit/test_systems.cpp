#include <doctest.h>

#include <cmath>

#include "oracles/oracles.hpp"
#include "phlab/error.hpp"
#include "phlab/systems.hpp"

using namespace phlab;

namespace {

IMat mat3(std::initializer_list<long long> v) {
  IMat m(3, 3);
  auto it = v.begin();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = *it++;
  return m;
}

TorusPoint random_point(oracle::SplitMix& g, int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = g.uniform();
  return TorusPoint(v);
}

}  // namespace

TEST_CASE("wrap01 and lift_coord conventions") {
  CHECK(wrap01(1.0) == 0.0);
  CHECK(wrap01(-0.25) == doctest::Approx(0.75));
  CHECK(wrap01(-1e-18) == 0.0);  // rounds up to 1.0, which maps to 0
  CHECK(lift_coord(0.5) == doctest::Approx(0.5));
  CHECK(lift_coord(-0.5) == doctest::Approx(0.5));
  CHECK(lift_coord(0.75) == doctest::Approx(-0.25));
}

TEST_CASE("torus distance agrees with brute force over lattice translates") {
  oracle::SplitMix g{7};
  for (int d = 1; d <= 3; ++d)
    for (int s = 0; s < 200; ++s) {
      auto a = random_point(g, d), b = random_point(g, d);
      std::vector<double> va, vb;
      for (int i = 0; i < d; ++i) {
        va.push_back(a[i]);
        vb.push_back(b[i]);
      }
      CHECK(torus_distance(a, b) == doctest::Approx(oracle::torus_dist(va, vb)).epsilon(1e-12));
    }
}

TEST_CASE("partially hyperbolic matrix: eigendata against the characteristic polynomial") {
  const IMat m = catalog::ph_linear_matrix();
  CHECK(integer_det(m) == 3);
  const double md[3][3] = {{100, 1, 0}, {-100, 0, 1}, {3, 0, 0}};
  const auto cp = oracle::char_poly3(md);
  CHECK(cp[0] == -100.0);
  CHECK(cp[1] == 100.0);
  CHECK(cp[2] == -3.0);
  const auto roots = oracle::cubic_roots(cp[0], cp[1], cp[2]);
  const auto eig = toral_eigendata(m);
  REQUIRE(eig.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(eig[static_cast<std::size_t>(i)].value == doctest::Approx(roots[static_cast<std::size_t>(i)]).epsilon(1e-12));
  CHECK(eig[0].value > 1.0);
  CHECK(eig[1].value < 1.0);
  CHECK(eig[1].value > eig[2].value);
  CHECK(eig[2].value > 0.0);
  // Eigenvectors: M v = lambda v, unit length.
  for (const auto& e : eig) {
    CHECK(e.vector.norm() == doctest::Approx(1.0));
    CHECK((m.cast<double>() * e.vector - e.value * e.vector).norm() < 1e-9 * std::max(1.0, std::fabs(e.value)));
  }
}

TEST_CASE("two-dimensional spectra against the quadratic formula") {
  const auto cat = catalog::cat_map();
  const auto r = oracle::quadratic_roots(2, 1, 1, 1);
  CHECK(cat.eigendata()[0].value == doctest::Approx(r[0]));
  CHECK(cat.eigendata()[1].value == doctest::Approx(r[1]));
  const auto an = catalog::anosov_endomorphism();
  CHECK(an.degree() == 2);
  CHECK(an.eigendata()[0].value == doctest::Approx(2.0 + std::sqrt(2.0)));
  CHECK(an.eigendata()[1].value == doctest::Approx(2.0 - std::sqrt(2.0)));
}

TEST_CASE("complex and repeated spectra are rejected") {
  IMat rot(2, 2);
  rot << 0, -1, 1, 0;
  CHECK_THROWS_AS(toral_eigendata(rot), Error);
  IMat id = IMat::Identity(2, 2) * 2;
  CHECK_THROWS_AS(toral_eigendata(id), Error);
  IMat sing(2, 2);
  sing << 1, 2, 2, 4;
  CHECK_THROWS_AS(SystemSpec::linear(sing), Error);
}

TEST_CASE("product with a rotation has a neutral center eigenvalue") {
  const auto p = catalog::product_rotation();
  CHECK(p.dim() == 3);
  CHECK(p.has_center());
  CHECK(p.degree() == 2);
  CHECK(p.eigendata()[1].value == 1.0);
  CHECK(p.rotation() == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0));
  const TorusPoint x{0.1, 0.2, 0.3};
  const auto fx = p.apply(x);
  CHECK(fx[2] == doctest::Approx(wrap01(0.3 + p.rotation())));
}

TEST_CASE("every branch is a preimage and branches are distinct") {
  oracle::SplitMix g{11};
  for (const auto& sys : {catalog::doubling(), catalog::anosov_endomorphism(), catalog::ph_linear(),
                          catalog::product_rotation(), catalog::mane(0.1)}) {
    CHECK(sys.branch_count() == sys.degree());
    for (int s = 0; s < 30; ++s) {
      const auto y = random_point(g, sys.dim());
      const auto pre = sys.preimages(y);
      REQUIRE(pre.size() == static_cast<std::size_t>(sys.degree()));
      for (std::size_t i = 0; i < pre.size(); ++i) {
        CHECK(torus_distance(sys.apply(pre[i]), y) < 1e-9);
        for (std::size_t j = i + 1; j < pre.size(); ++j) CHECK(torus_distance(pre[i], pre[j]) > 1e-6);
      }
    }
    CHECK(sys.separation_exponent() > 0.0);
  }
}

TEST_CASE("lift equivariance F(x + k) = F(x) + M k") {
  oracle::SplitMix g{5};
  const auto sys = catalog::mane(0.2);
  for (int s = 0; s < 50; ++s) {
    Vec x(3), k(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = g.uniform();
      k[i] = std::floor(7.0 * g.uniform()) - 3.0;
    }
    const Vec lhs = sys.apply_lift(x + k);
    const Vec rhs = sys.apply_lift(x) + sys.matrix_real() * k;
    CHECK((lhs - rhs).norm() < 1e-9);
  }
}

TEST_CASE("mane jacobian matches finite differences") {
  const auto sys = catalog::mane(0.1);
  const Vec q = sys.mane()->q.vec();
  const double h = 1e-7;
  for (double off : {0.0, 0.01, 0.02, 0.04}) {
    Vec x = q + Vec::Constant(3, off);
    const Mat J = sys.jacobian_lift(x);
    for (int c = 0; c < 3; ++c) {
      Vec e = Vec::Zero(3);
      e[c] = h;
      const Vec fd = (sys.apply_lift(x + e) - sys.apply_lift(x - e)) / (2.0 * h);
      CHECK((fd - J.col(c)).norm() < 1e-4);
    }
  }
  // Far from q the map is the linear one.
  const TorusPoint far{0.5, 0.5, 0.5};
  CHECK((sys.jacobian(far) - sys.matrix_real()).norm() == 0.0);
}

TEST_CASE("nearest preimage picks the branch closest to the reference") {
  const auto sys = catalog::anosov_endomorphism();
  const TorusPoint x{0.3, 0.7};
  const auto y = sys.apply(x);
  int branch = -1;
  const auto p = sys.nearest_preimage(y, x, &branch);
  CHECK(torus_distance(p, x) < 1e-12);
  CHECK(branch >= 0);
  CHECK(branch < 2);
}

TEST_CASE("integer adjugate and determinant") {
  const IMat m = mat3({2, 1, 0, 1, 3, 1, 0, 1, 4});
  const IMat adj = integer_adjugate(m);
  const IMat prod = m * adj;
  CHECK(prod == IMat::Identity(3, 3) * integer_det(m));
}
