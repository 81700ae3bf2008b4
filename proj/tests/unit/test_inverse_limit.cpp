#include <doctest.h>

#include <cmath>

#include "oracles/oracles.hpp"
#include "phlab/error.hpp"
#include "phlab/inverse_limit.hpp"

using namespace phlab;

TEST_CASE("enumerate-all produces degree^m consistent histories in branch order") {
  const auto sys = catalog::anosov_endomorphism();
  const TorusPoint x{0.2, 0.6};
  const auto hs = extend_history(sys, x, 5, BranchPolicy::enumerate_all());
  CHECK(hs.size() == 32);
  for (const auto& h : hs) {
    CHECK(h.depth() == 5);
    CHECK(h.head() == x);
    CHECK(consistency_error(sys, h) < kConsistencyTol);
  }
  // x_{-1} branch is the most significant digit: the first 16 share x_{-1}.
  CHECK(hs[0].state(1) == hs[15].state(1));
  CHECK(hs[0].state(1) != hs[16].state(1));
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j) CHECK_FALSE(hs[i] == hs[j]);
}

TEST_CASE("branch explosion is reported") {
  const auto sys = catalog::ph_linear();
  CHECK_THROWS_AS(extend_history(sys, TorusPoint{0.1, 0.1, 0.1}, 20, BranchPolicy::enumerate_all(1000)), Error);
}

TEST_CASE("random and fixed policies") {
  const auto sys = catalog::ph_linear();
  const TorusPoint x{0.3, 0.1, 0.9};
  const auto a = extend_history_one(sys, x, 30, BranchPolicy::random(9));
  const auto b = extend_history_one(sys, x, 30, BranchPolicy::random(9));
  CHECK(a == b);
  CHECK(consistency_error(sys, a) < kConsistencyTol);
  const auto f = extend_history_one(sys, x, 4, BranchPolicy::fixed({1, 2}));
  CHECK(f.state(1) == sys.preimage(x, 1));
  CHECK(f.state(2) == sys.preimage(f.state(1), 2));
  CHECK(f.state(3) == sys.preimage(f.state(2), 1));
}

TEST_CASE("shift moves along the orbit in both directions") {
  const auto sys = catalog::mane(0.1);
  const auto h = extend_history_one(sys, TorusPoint{0.4, 0.2, 0.7}, 10, BranchPolicy::random(3));
  const auto fwd = shift(sys, h, 1);
  CHECK(fwd.depth() == h.depth());
  CHECK(torus_distance(fwd.head(), sys.apply(h.head())) == 0.0);
  CHECK(fwd.state(1) == h.head());
  const auto back = shift(sys, h, -2);
  CHECK(back.depth() == h.depth() - 2);
  CHECK(back.head() == h.state(2));
  CHECK(consistency_error(sys, shift(sys, h, 5)) < kConsistencyTol);
}

TEST_CASE("history metric is a metric on sampled histories") {
  const auto sys = catalog::anosov_endomorphism();
  const auto a = extend_history_one(sys, TorusPoint{0.1, 0.2}, 12, BranchPolicy::random(1));
  const auto b = extend_history_one(sys, TorusPoint{0.15, 0.25}, 12, BranchPolicy::random(2));
  const auto c = extend_history_one(sys, TorusPoint{0.7, 0.9}, 12, BranchPolicy::random(3));
  CHECK(history_metric(sys, a, a, 0) == 0.0);
  CHECK(history_metric(sys, a, b, 3) == doctest::Approx(history_metric(sys, b, a, 3)));
  CHECK(history_metric(sys, a, c, 0) <= history_metric(sys, a, b, 0) + history_metric(sys, b, c, 0) + 1e-15);
  // Explicit sum for the past part.
  double s = 0.0;
  for (int k = 0; k <= 12; ++k) s += std::pow(2.0, -k) * torus_distance(a.state(k), b.state(k));
  CHECK(history_metric(sys, a, b, 0) == doctest::Approx(s));
}

TEST_CASE("bowen distance is the max over explicit iterates") {
  const auto sys = catalog::cat_map();
  oracle::SplitMix g{4};
  for (int s = 0; s < 50; ++s) {
    TorusPoint x{g.uniform(), g.uniform()}, y{g.uniform(), g.uniform()};
    double m = 0.0;
    TorusPoint a = x, b = y;
    for (int k = 0; k < 6; ++k) {
      m = std::max(m, torus_distance(a, b));
      a = sys.apply(a);
      b = sys.apply(b);
    }
    CHECK(bowen_distance(sys, x, y, 6) == doctest::Approx(m));
  }
}

TEST_CASE("gamma diameter is nonincreasing in the window") {
  for (const auto& sys : {catalog::ph_linear(), catalog::product_rotation()}) {
    const auto h = extend_history_one(sys, TorusPoint{0.3, 0.3, 0.3}, 24, BranchPolicy::random(5));
    double prev = 1e9;
    for (int m = 1; m <= 20; m += 3) {
      const double d = gamma_diameter(sys, h, 1e-2, m);
      CHECK(d <= prev + 1e-15);
      prev = d;
    }
  }
}

TEST_CASE("history text round trip") {
  const auto sys = catalog::ph_linear();
  const auto h = extend_history_one(sys, TorusPoint{0.123, 0.456, 0.789}, 7, BranchPolicy::random(2));
  CHECK(history_from_text(history_to_text(h)) == h);
  CHECK_THROWS_AS(history_from_text("garbage"), Error);
}

TEST_CASE("nearest-branch histories track the reference") {
  const auto sys = catalog::anosov_endomorphism();
  const auto ref = extend_history_one(sys, TorusPoint{0.5, 0.5}, 10, BranchPolicy::random(8));
  // An unstable offset contracts backwards by 1/lambda_u per step.
  const Vec eu = sys.eigendata()[0].vector;
  const TorusPoint y0 = translate(ref.head(), 1e-4 * eu);
  const auto h = nearest_branch_history(sys, y0, ref, 10);
  CHECK(consistency_error(sys, h) < kConsistencyTol);
  for (int k = 0; k <= 10; ++k)
    CHECK(torus_distance(h.state(k), ref.state(k)) == doctest::Approx(1e-4 * std::pow(2.0 + std::sqrt(2.0), -k)).epsilon(1e-6));
}
