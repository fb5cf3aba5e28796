#include <doctest.h>

#include <cmath>
#include <random>

#include "bess/lp.hpp"
#include "support/fixtures.hpp"

using namespace bess::lp;

namespace {

// Best objective of max c.x over {A x <= b} in two variables, by checking every
// pairwise intersection of constraint lines. Box bounds are part of A.
double vertex_oracle(const std::vector<std::array<double, 3>>& rows, double c0, double c1, bool& feasible) {
  feasible = false;
  double best = -kInf;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const auto& a = rows[i];
      const auto& b = rows[j];
      const double det = a[0] * b[1] - a[1] * b[0];
      if (std::fabs(det) < 1e-12) continue;
      const double x = (a[2] * b[1] - a[1] * b[2]) / det;
      const double y = (a[0] * b[2] - a[2] * b[0]) / det;
      bool ok = true;
      for (const auto& r : rows) ok = ok && r[0] * x + r[1] * y <= r[2] + 1e-9;
      if (!ok) continue;
      feasible = true;
      best = std::max(best, c0 * x + c1 * y);
    }
  return best;
}

}  // namespace

TEST_SUITE("lp") {
  TEST_CASE("textbook maximisation") {
    // max 3x + 5y; x <= 4; 2y <= 12; 3x + 2y <= 18  ->  36 at (2, 6)
    LinearProgram p;
    const int x = p.add_variable(0, kInf, 3);
    const int y = p.add_variable(0, kInf, 5);
    p.add_row({{x, 1}}, Sense::LessEqual, 4);
    p.add_row({{y, 2}}, Sense::LessEqual, 12);
    p.add_row({{x, 3}, {y, 2}}, Sense::LessEqual, 18);
    const auto r = solve(p);
    REQUIRE(r.status == Status::Optimal);
    CHECK(r.objective == doctest::Approx(36));
    CHECK(r.x[0] == doctest::Approx(2));
    CHECK(r.x[1] == doctest::Approx(6));
    CHECK(p.max_violation(r.x) < 1e-9);
  }

  TEST_CASE("equality, >= rows, offset and free variables") {
    // max -x - y + 10 s.t. x + y = 3, x >= 1 (row), y free in [-2, inf)
    LinearProgram p;
    const int x = p.add_variable(0, kInf, -1);
    const int y = p.add_variable(-2, kInf, -2);
    p.set_objective_offset(10);
    p.add_row({{x, 1}, {y, 1}}, Sense::Equal, 3);
    p.add_row({{x, 1}}, Sense::GreaterEqual, 1);
    const auto r = solve(p);
    REQUIRE(r.status == Status::Optimal);
    // Cheapest is to push everything into x: x = 3, y = 0 gives 7; y = -2, x = 5 gives 9.
    CHECK(r.x[0] == doctest::Approx(5));
    CHECK(r.x[1] == doctest::Approx(-2));
    CHECK(r.objective == doctest::Approx(9));
    CHECK(p.evaluate(r.x) == doctest::Approx(r.objective));
  }

  TEST_CASE("fully free variable") {
    LinearProgram p;
    const int x = p.add_variable(-kInf, kInf, 1);
    p.add_row({{x, 1}}, Sense::LessEqual, -4);
    const auto r = solve(p);
    REQUIRE(r.status == Status::Optimal);
    CHECK(r.x[0] == doctest::Approx(-4));
  }

  TEST_CASE("infeasible and unbounded programs") {
    LinearProgram inf;
    const int a = inf.add_variable(0, 1, 1);
    inf.add_row({{a, 1}}, Sense::GreaterEqual, 2);
    CHECK(solve(inf).status == Status::Infeasible);

    LinearProgram unb;
    const int u = unb.add_variable(0, kInf, 1);
    const int v = unb.add_variable(0, kInf, 0);
    unb.add_row({{u, 1}, {v, -1}}, Sense::LessEqual, 1);
    CHECK(solve(unb).status == Status::Unbounded);
  }

  TEST_CASE("fixed variables via equal bounds") {
    LinearProgram p;
    const int x = p.add_variable(0, 5, 1);
    const int y = p.add_variable(0, 5, 1);
    p.add_row({{x, 1}, {y, 1}}, Sense::LessEqual, 6);
    p.set_bounds(x, 2.5, 2.5);
    const auto r = solve(p);
    REQUIRE(r.status == Status::Optimal);
    CHECK(r.x[0] == 2.5);
    CHECK(r.objective == doctest::Approx(6));
  }

  TEST_CASE("random two-variable programs match vertex enumeration") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<std::array<double, 3>> rows{{1, 0, 10}, {-1, 0, 10}, {0, 1, 10}, {0, -1, 10}};
      LinearProgram p;
      const double c0 = bess::testing::uniform(rng, -5, 5), c1 = bess::testing::uniform(rng, -5, 5);
      p.add_variable(-10, 10, c0);
      p.add_variable(-10, 10, c1);
      const int m = 1 + static_cast<int>(rng() % 5);
      for (int i = 0; i < m; ++i) {
        std::array<double, 3> r{bess::testing::uniform(rng, -3, 3), bess::testing::uniform(rng, -3, 3),
                                bess::testing::uniform(rng, -8, 12)};
        rows.push_back(r);
        p.add_row({{0, r[0]}, {1, r[1]}}, Sense::LessEqual, r[2]);
      }
      bool feasible = false;
      const double best = vertex_oracle(rows, c0, c1, feasible);
      const auto res = solve(p);
      if (!feasible) {
        CHECK(res.status == Status::Infeasible);
        continue;
      }
      REQUIRE(res.status == Status::Optimal);
      CHECK(res.objective == doctest::Approx(best).epsilon(1e-7));
      CHECK(p.max_violation(res.x) < 1e-8);
    }
  }
}
