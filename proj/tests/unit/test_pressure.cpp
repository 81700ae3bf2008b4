#include <doctest.h>

#include <cmath>

#include "oracles/oracles.hpp"
#include "phlab/error.hpp"
#include "phlab/pressure.hpp"

using namespace phlab;

TEST_CASE("log_sum_exp against the naive sum") {
  const std::vector<double> v{0.1, -2.0, 3.5, 1.25};
  double s = 0.0;
  for (double x : v) s += std::exp(x);
  CHECK(log_sum_exp(v) == doctest::Approx(std::log(s)));
  CHECK(std::isfinite(log_sum_exp({1000.0, 1000.0})));
  CHECK(log_sum_exp({1000.0, 1000.0}) == doctest::Approx(1000.0 + std::log(2.0)));
}

TEST_CASE("fit_slope recovers an exact line over the top half") {
  std::vector<PerN> rows;
  for (int n = 1; n <= 8; ++n) rows.push_back({n, 0.0, 0.7 * n + 0.3, 0.0});
  CHECK(fit_slope(rows) == doctest::Approx(0.7));
  rows[0].log_lambda = 100.0;  // outside the fit window
  CHECK(fit_slope(rows) == doctest::Approx(0.7));
}

TEST_CASE("birkhoff sums") {
  const auto sys = catalog::doubling();
  const auto phi = Potential::cosine(1);
  const TorusPoint x{0.1};
  double s = 0.0, y = 0.1;
  for (int k = 0; k < 5; ++k) {
    s += std::cos(2.0 * M_PI * y);
    y = std::fmod(2.0 * y, 1.0);
  }
  CHECK(birkhoff_sum(sys, phi, x, 5) == doctest::Approx(s));
}

TEST_CASE("max_separated_set is separated and maximal") {
  const auto sys = catalog::cat_map();
  oracle::SplitMix g{3};
  std::vector<TorusPoint> cands;
  for (int i = 0; i < 600; ++i) cands.push_back(TorusPoint{g.uniform(), g.uniform()});
  const int n = 3;
  const double delta = 0.1;
  const auto E = max_separated_set(sys, cands, n, delta);
  for (std::size_t i = 0; i < E.size(); ++i)
    for (std::size_t j = i + 1; j < E.size(); ++j) CHECK(bowen_distance(sys, E[i], E[j], n) > delta);
  for (const auto& c : cands) {
    double best = 1e9;
    for (const auto& e : E) best = std::min(best, bowen_distance(sys, c, e, n));
    CHECK(best <= delta);
  }
}

TEST_CASE("partition function rejects non-separated sets") {
  const auto sys = catalog::doubling();
  const std::vector<TorusPoint> E{TorusPoint{0.1}, TorusPoint{0.1001}};
  CHECK_THROWS_AS(log_partition_function(sys, Potential::zero(), E, 3, 0.01, 0.0), Error);
  const std::vector<TorusPoint> F{TorusPoint{0.1}, TorusPoint{0.6}};
  CHECK(partition_function(sys, Potential::zero(), F, 3, 0.01, 0.0) == doctest::Approx(2.0));
  CHECK(log_partition_function(sys, Potential::constant(0.5), F, 3, 0.01, 0.0) == doctest::Approx(std::log(2.0) + 1.5));
}

TEST_CASE("doubling counts against brute-force separated sets") {
  const auto sys = catalog::doubling();
  const double delta = 0.05;
  PressureOptions po;
  const auto est = pressure_estimate(sys, Potential::zero(), delta, 3, 6, po);
  std::vector<double> fine;
  for (const auto& row : est.per_n) {
    // Same candidate grid as the estimator: the counts agree exactly.
    const auto N = static_cast<std::size_t>(std::ceil(po.refine * std::pow(2.0, row.n - 1) / delta));
    CHECK(row.count == static_cast<double>(oracle::circle_separated_count(2, row.n, delta, N, 0.0)));
    fine.push_back(std::log(static_cast<double>(oracle::circle_separated_count(2, row.n, delta, 40000))));
  }
  // On a fine grid the counts differ by a constant factor; the growth rate is the same.
  CHECK((fine.back() - fine.front()) / 3.0 == doctest::Approx(std::log(2.0)).epsilon(0.02));
  CHECK(est.value == doctest::Approx(std::log(2.0)).epsilon(0.02));
}

TEST_CASE("constant shift moves pressure by exactly c") {
  const double c = 0.37;
  for (const auto& sys : {catalog::doubling(), catalog::cat_map(), catalog::anosov_endomorphism()}) {
    const auto phi = Potential::cosine(1);
    const auto a = pressure_estimate(sys, phi, 0.1, 2, 4);
    const auto b = pressure_estimate(sys, phi.shifted(c), 0.1, 2, 4);
    CHECK(std::fabs(b.value - a.value - c) < 1e-12);
    for (std::size_t i = 0; i < a.per_n.size(); ++i) CHECK(a.per_n[i].count == b.per_n[i].count);
  }
}

TEST_CASE("separated counts are antitone in delta") {
  for (const auto& sys : {catalog::doubling(), catalog::cat_map()}) {
    std::vector<PressureEstimate> ladder;
    for (double d : {0.05, 0.1, 0.2}) ladder.push_back(pressure_estimate(sys, Potential::zero(), d, 2, 4));
    for (std::size_t i = 0; i < ladder[0].per_n.size(); ++i) {
      CHECK(ladder[0].per_n[i].count >= ladder[1].per_n[i].count);
      CHECK(ladder[1].per_n[i].count >= ladder[2].per_n[i].count);
    }
  }
}

TEST_CASE("pressure of a bounded potential lies between the entropy shifted by its extremes") {
  const auto sys = catalog::cat_map();
  const auto h = pressure_estimate(sys, Potential::zero(), 0.1, 2, 5).value;
  const auto p = pressure_estimate(sys, Potential::cosine(1, 0.3), 0.1, 2, 5).value;
  CHECK(p >= h - 0.3 - 0.05);
  CHECK(p <= h + 0.3 + 0.05);
}

TEST_CASE("bad scales are rejected") {
  const auto sys = catalog::doubling();
  CHECK_THROWS_AS(pressure_estimate(sys, Potential::zero(), -0.1, 2, 4), Error);
  CHECK_THROWS_AS(pressure_estimate(sys, Potential::zero(), 0.1, 4, 2), Error);
}
