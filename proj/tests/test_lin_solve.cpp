#include <cmath>
#include <random>

#include "bdc/lin_solve.hpp"
#include "catch_amalgamated.hpp"
#include "oracles.hpp"

using namespace bdc;
using Catch::Matchers::WithinAbs;

namespace {

LpProblem make_lp(const Vec& c, const std::vector<Vec>& rows, const Vec& b, const Vec& l,
                  const Vec& u) {
  LpProblem p;
  p.c = c;
  p.G = Matrix(0, c.size());
  for (const auto& r : rows) p.G.append_row(r);
  p.b = b;
  p.l = l;
  p.u = u;
  return p;
}

LpProblem random_lp(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_int_distribution<int> coef(-5, 5);
  LpProblem p;
  p.c.resize(n);
  for (auto& v : p.c) v = coef(rng);
  p.G = Matrix(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) p.G(i, j) = coef(rng);
  p.b.resize(m);
  for (auto& v : p.b) v = coef(rng) - 3;
  p.l.assign(n, -3.0);
  p.u.assign(n, 4.0);
  return p;
}

// Checks primal and dual feasibility, complementarity and the vertex property.
void check_optimality(const LpProblem& p, const LpOutcome& o, double tol) {
  const std::size_t n = p.num_vars(), m = p.num_rows();
  Vec gz = m ? p.G.multiply(o.z) : Vec{};
  for (std::size_t i = 0; i < m; ++i) CHECK(gz[i] >= p.b[i] - tol);
  std::size_t interior = 0;
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(o.z[j] >= p.l[j] - tol);
    CHECK(o.z[j] <= p.u[j] + tol);
    const bool at_l = std::fabs(o.z[j] - p.l[j]) <= tol;
    const bool at_u = std::fabs(o.z[j] - p.u[j]) <= tol;
    if (!at_l && !at_u) ++interior;
    const double d = o.reduced_costs[j];
    if (!at_l && !at_u) CHECK(std::fabs(d) <= tol);
    if (at_l && !at_u) CHECK(d >= -tol);
    if (at_u && !at_l) CHECK(d <= tol);
  }
  CHECK(interior <= m);
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    CHECK(o.duals[i] >= -tol);
    CHECK(o.duals[i] * (gz[i] - p.b[i]) <= tol * (1 + std::fabs(o.duals[i])));
    dual_obj += o.duals[i] * p.b[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double d = o.reduced_costs[j];
    dual_obj += d > 0 ? d * p.l[j] : d * p.u[j];
  }
  CHECK(std::fabs(dual_obj - o.objective) <= tol * (1 + std::fabs(o.objective)) * 10);
}

}  // namespace

TEST_CASE("single variable with an upper row") {
  auto p = make_lp({-1.0}, {{-1.0}}, {-1.0}, {0.0}, {2.0});
  auto o = lp_solve(p);
  REQUIRE(o.status == LpStatus::kOptimal);
  CHECK_THAT(o.z[0], WithinAbs(1.0, 1e-9));
  CHECK_THAT(o.objective, WithinAbs(-1.0, 1e-9));
}

TEST_CASE("contradictory rows yield a Farkas certificate") {
  auto p = make_lp({0.0}, {{1.0}, {-1.0}}, {1.0, 0.0}, {-5.0}, {5.0});
  auto o = lp_solve(p);
  REQUIRE(o.status == LpStatus::kInfeasible);
  for (double r : o.farkas) CHECK(r >= 0.0);
  CHECK(o.farkas_value > 0.0);
  CHECK_THAT(farkas_value(p, o.farkas), WithinAbs(o.farkas_value, 1e-12));
}

TEST_CASE("HPR relaxation of the Moore-Bard example matches vertex enumeration") {
  // min x - y over the four linking rows, box [-10, 10]^2
  auto p = make_lp({1.0, -1.0}, {{25, -20}, {-1, -2}, {-2, 1}, {2, 10}}, {-30, -10, -4, 15},
                   {-10, -10}, {10, 10});
  auto o = lp_solve(p);
  REQUIRE(o.status == LpStatus::kOptimal);
  auto v = oracle::lp_by_vertices(p);
  REQUIRE(v.feasible);
  CHECK_THAT(o.objective, WithinAbs(v.objective, 1e-9));
  // Optimal vertex (2, 4).
  CHECK_THAT(o.z[0], WithinAbs(2.0, 1e-9));
  CHECK_THAT(o.z[1], WithinAbs(4.0, 1e-9));
  check_optimality(p, o, 1e-7);
}

TEST_CASE("random LPs agree with vertex enumeration and satisfy optimality") {
  std::mt19937_64 rng(2024);
  int optimal = 0, infeasible = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 2 + rep % 3, m = 1 + rep % 4;
    auto p = random_lp(rng, n, m);
    auto o = lp_solve(p);
    auto v = oracle::lp_by_vertices(p);
    if (v.feasible) {
      REQUIRE(o.status == LpStatus::kOptimal);
      CHECK_THAT(o.objective, WithinAbs(v.objective, 1e-7));
      check_optimality(p, o, 1e-7);
      ++optimal;
    } else {
      REQUIRE(o.status == LpStatus::kInfeasible);
      CHECK(o.farkas_value > 0.0);
      ++infeasible;
    }
  }
  CHECK(optimal > 0);
  CHECK(infeasible > 0);
}

TEST_CASE("adding rows never lowers the optimum and warm starts reuse the basis") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 30; ++rep) {
    auto p = random_lp(rng, 4, 3);
    auto o = lp_solve(p);
    if (o.status != LpStatus::kOptimal) continue;
    // A row cutting off the current optimum.
    Matrix row(1, 4);
    Vec dir(4);
    for (std::size_t j = 0; j < 4; ++j) row(0, j) = dir[j] = (j % 2 ? 1.0 : -1.0);
    double rhs = dot(dir, o.z) + 0.5;
    auto p2 = lp_add_rows(p, row, {rhs});
    auto warm = extend_basis(o.basis, 4, 1);
    auto o2 = lp_solve(p2, {}, &warm);
    auto cold = lp_solve(p2);
    REQUIRE(o2.status == cold.status);
    if (o2.status == LpStatus::kOptimal) {
      CHECK(o2.objective >= o.objective - 1e-9);
      CHECK_THAT(o2.objective, WithinAbs(cold.objective, 1e-7));
      check_optimality(p2, o2, 1e-7);
    }
    // A redundant row leaves the optimum unchanged.
    Matrix red(1, 4);
    red(0, 0) = 1.0;
    auto p3 = lp_add_rows(p, red, {p.l[0] - 1.0});
    auto w3 = extend_basis(o.basis, 4, 1);
    auto o3 = lp_solve(p3, {}, &w3);
    REQUIRE(o3.status == LpStatus::kOptimal);
    CHECK_THAT(o3.objective, WithinAbs(o.objective, 1e-9));
    CHECK(o3.iterations <= 1);
  }
}

TEST_CASE("tightening bounds to an empty region is detected") {
  auto p = make_lp({1.0, 1.0}, {{1.0, 1.0}}, {3.0}, {0.0, 0.0}, {2.0, 2.0});
  auto o = lp_solve(p);
  REQUIRE(o.status == LpStatus::kOptimal);
  auto p2 = lp_change_bounds(p, {0.0, 0.0}, {1.0, 1.0});
  auto o2 = lp_solve(p2, {}, &o.basis);
  REQUIRE(o2.status == LpStatus::kInfeasible);
  CHECK(o2.farkas_value > 0.0);
}

TEST_CASE("degenerate LP terminates") {
  // Many rows through the same vertex.
  std::vector<Vec> rows;
  Vec b;
  for (int k = 1; k <= 12; ++k) {
    rows.push_back({double(k), double(13 - k), 1.0});
    b.push_back(0.0);
  }
  auto p = make_lp({-1.0, -1.0, -1.0}, rows, b, {-1, -1, -1}, {1, 1, 1});
  auto o = lp_solve(p);
  REQUIRE(o.status == LpStatus::kOptimal);
  auto v = oracle::lp_by_vertices(p);
  CHECK_THAT(o.objective, WithinAbs(v.objective, 1e-8));
}

TEST_CASE("empty row set solves by bounds") {
  auto p = make_lp({1.0, -2.0}, {}, {}, {-1.0, 0.0}, {3.0, 5.0});
  auto o = lp_solve(p);
  REQUIRE(o.status == LpStatus::kOptimal);
  CHECK(o.z == Vec{-1.0, 5.0});
}
