#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dsched/oracle.hpp"

using namespace dsched;
using namespace dsched::oracle;

TEST_CASE("bipartite oracle on a hand-solved 2x2 instance") {
  // AM1->{MC1:5, MC2:3}, AM2->{MC1:4, MC2:1}: best is (1,2)+(2,1) = 3+4 = 7.
  std::vector<WeightedEdge> edges{{0, 0, 5}, {0, 1, 3}, {1, 0, 4}, {1, 1, 1}};
  CHECK(brute_bipartite_matching(2, 2, edges) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("bipartite oracle ignores nonpositive edges and empty graphs") {
  CHECK(brute_bipartite_matching(2, 2, {}) == 0.0);
  std::vector<WeightedEdge> edges{{0, 0, -2}, {1, 1, 0}};
  CHECK(brute_bipartite_matching(2, 2, edges) == 0.0);
}

TEST_CASE("bipartite oracle on the two-copy skew instance") {
  // One worker, two sources with w = (8, 2); copies carry ln w and ln(w/4).
  // Best single assignment: source 1 on copy 1 at ln 8; pairing both gives
  // ln 8 + ln(2/4) = ln 4, so the singleton wins.
  std::vector<WeightedEdge> edges{
      {0, 0, std::log(8.0)}, {0, 1, std::log(8.0 / 4.0)},
      {1, 0, std::log(2.0)}, {1, 1, std::log(2.0 / 4.0)}};
  CHECK(brute_bipartite_matching(2, 2, edges) == doctest::Approx(std::log(8.0)));
}

TEST_CASE("general oracle picks pair over two solos when it pays") {
  // Workers {0,1}, virtual nodes {2,3}; solo weights 3+3 vs pair weight 7.
  std::vector<WeightedEdge> edges{{0, 2, 3}, {1, 3, 3}, {0, 1, 7}};
  CHECK(brute_general_matching(4, edges) == doctest::Approx(7.0));
  edges[2].w = 5;  // now the two solos (3+3) beat the pair
  CHECK(brute_general_matching(4, edges) == doctest::Approx(6.0));
}

TEST_CASE("general oracle takes a single positive edge") {
  std::vector<WeightedEdge> edges{{0, 1, 2}};
  CHECK(brute_general_matching(2, edges) == doctest::Approx(2.0));
}

TEST_CASE("general oracle rejects oversized instances") {
  CHECK_THROWS_AS(brute_general_matching(13, {}), SizeError);
}

TEST_CASE("grid solver reproduces the solo-log reference value") {
  // max ln(x0) + ln(x1), x0 <= 10, x1 <= 2, x0 + x1 <= 6 -> x = (4, 2), ln 8.
  auto f = [](const std::vector<double>& x) {
    if (x[0] <= 1e-9 || x[1] <= 1e-9 || x[0] + x[1] > 6) return -1e18;
    return std::log(x[0]) + std::log(x[1]);
  };
  auto r = grid_concave_solve(f, {10, 2}, 0.01, 6);
  CHECK(r.objective == doctest::Approx(std::log(8.0)).epsilon(0.02));
}

TEST_CASE("grid solver zero-budget instance returns zero") {
  auto f = [](const std::vector<double>& x) { return x[0] > 0 ? -1e18 : 0.0; };
  auto r = grid_concave_solve(f, {5}, 0.5, 4);
  CHECK(r.objective == 0.0);
  CHECK(r.point[0] == 0.0);
}

TEST_CASE("halving the step never decreases the grid objective") {
  auto f = [](const std::vector<double>& x) {
    return -(x[0] - 1.37) * (x[0] - 1.37) - (x[1] - 0.61) * (x[1] - 0.61);
  };
  double prev = -1e18;
  for (double step : {0.8, 0.4, 0.2, 0.1}) {
    auto r = grid_concave_solve(f, {3, 3}, step, 0);
    CHECK(r.objective >= prev - 1e-12);
    prev = r.objective;
  }
}

TEST_CASE("grid solver refinement tightens around the optimum") {
  auto f = [](const std::vector<double>& x) { return -(x[0] - 2.0 / 3) * (x[0] - 2.0 / 3); };
  auto coarse = grid_concave_solve(f, {2}, 0.5, 0);
  auto fine = grid_concave_solve(f, {2}, 0.5, 10);
  CHECK(fine.objective >= coarse.objective);
  CHECK(fine.point[0] == doctest::Approx(2.0 / 3).epsilon(1e-3));
}

TEST_CASE("grid solver dimension guard") {
  auto f = [](const std::vector<double>&) { return 0.0; };
  CHECK_THROWS_AS(grid_concave_solve(f, {}, 0.1, 1), StructuralError);
  CHECK_THROWS_AS(grid_concave_solve(f, {1, 1, 1, 1, 1, 1, 1}, 0.1, 1), StructuralError);
}
