#include <cmath>
#include <random>

#include "bdc/conic_solve.hpp"
#include "bdc/lin_solve.hpp"
#include "catch_amalgamated.hpp"
#include "oracles.hpp"

using namespace bdc;
using Catch::Matchers::WithinAbs;
using oracle::conic_from_lp;
using oracle::planted_socp;
using oracle::random_vec;

namespace {

SparseRow row(std::initializer_list<std::pair<int, double>> e) {
  SparseRow r;
  for (const auto& [j, v] : e) r.add(j, v);
  return r;
}

}  // namespace

TEST_CASE("nesterov-todd scaling maps s and z to the same point") {
  std::mt19937_64 rng(11);
  std::vector<ConeBlock> cones{{ConeType::kNonneg, 3}, {ConeType::kSoc, 4}, {ConeType::kSoc, 1}};
  for (int trial = 0; trial < 200; ++trial) {
    Vec s = random_vec(rng, 8, -1, 1), z = random_vec(rng, 8, -1, 1);
    for (int i = 0; i < 3; ++i) {
      s[i] = std::fabs(s[i]) + 0.01;
      z[i] = std::fabs(z[i]) + 0.01;
    }
    s[3] = 0.01 + std::sqrt(s[4] * s[4] + s[5] * s[5] + s[6] * s[6]);
    z[3] = 0.01 + std::sqrt(z[4] * z[4] + z[5] * z[5] + z[6] * z[6]);
    s[7] = std::fabs(s[7]) + 0.01;
    z[7] = std::fabs(z[7]) + 0.01;
    auto sc = cone::nt_scaling(cones, s, z);
    Vec wz = cone::apply_w(cones, sc, z);
    Vec wis = cone::apply_winv(cones, sc, s);
    for (std::size_t i = 0; i < 8; ++i) CHECK_THAT(wz[i], WithinAbs(wis[i], 1e-10));
    // W^{-1} (W u) = u
    Vec u = random_vec(rng, 8, -3, 3);
    Vec back = cone::apply_winv(cones, sc, cone::apply_w(cones, sc, u));
    for (std::size_t i = 0; i < 8; ++i) CHECK_THAT(back[i], WithinAbs(u[i], 1e-10));
    // lambda o (lambda \ r) = r
    Vec rr = random_vec(rng, 8, -2, 2);
    Vec q = cone::jordan(cones, wz, cone::jordan_div(cones, wz, rr));
    for (std::size_t i = 0; i < 8; ++i) CHECK_THAT(q[i], WithinAbs(rr[i], 1e-9));
  }
}

TEST_CASE("step to the boundary of a second-order cone") {
  std::vector<ConeBlock> cones{{ConeType::kSoc, 3}};
  // u = (2, 0, 0), d = (-1, 1, 0): 2 - a = a  ->  a = 1.
  CHECK_THAT(cone::max_step(cones, {2, 0, 0}, {-1, 1, 0}), WithinAbs(1.0, 1e-12));
  CHECK(std::isinf(cone::max_step(cones, {2, 0, 0}, {1, 0.5, 0})));
  std::vector<ConeBlock> nn{{ConeType::kNonneg, 2}};
  CHECK_THAT(cone::max_step(nn, {1, 4}, {-2, -1}), WithinAbs(0.5, 1e-15));
}

TEST_CASE("projection onto a second-order cone") {
  Vec p = cone::project_soc({0, 3, 4});
  CHECK_THAT(p[0], WithinAbs(2.5, 1e-12));
  CHECK_THAT(p[1], WithinAbs(1.5, 1e-12));
  CHECK_THAT(p[2], WithinAbs(2.0, 1e-12));
  Vec q = cone::project_soc({-6, 3, 4});
  for (double v : q) CHECK_THAT(v, WithinAbs(0.0, 1e-15));
  Vec r = cone::project_soc({6, 3, 4});
  CHECK(r == Vec{6, 3, 4});
}

TEST_CASE("euclidean norm as a cone program") {
  // min t  s.t.  x1 = 3, x2 = 4, (t, x1, x2) in Q3
  ConicProblem p;
  p.c = {1, 0, 0};
  p.A.cols = p.G.cols = 3;
  p.A.rows = {row({{1, 1}}), row({{2, 1}})};
  p.b = {3, 4};
  p.G.rows = {row({{0, -1}}), row({{1, -1}}), row({{2, -1}})};
  p.h = {0, 0, 0};
  p.cones = {{ConeType::kSoc, 3}};
  auto o = conic_solve(p);
  REQUIRE(o.status == ConicStatus::kOptimal);
  CHECK_FALSE(o.reduced_accuracy);
  CHECK_THAT(o.x[0], WithinAbs(5.0, 1e-7));
  CHECK_THAT(o.primal_objective, WithinAbs(5.0, 1e-7));
  CHECK(conic_residuals(p, o).max() <= 1e-8);
  auto d = conic_extract_duals(p, o);
  REQUIRE(d.blocks.size() == 1);
  CHECK_THAT(d.blocks[0][0], WithinAbs(1.0, 1e-6));
  CHECK_THAT(d.equality[0], WithinAbs(-0.6, 1e-6));
}

TEST_CASE("primal infeasibility certificate") {
  // x >= 1 and x <= 0
  ConicProblem p;
  p.c = {1};
  p.A.cols = p.G.cols = 1;
  p.G.rows = {row({{0, -1}}), row({{0, 1}})};
  p.h = {-1, 0};
  p.cones = {{ConeType::kNonneg, 2}};
  auto o = conic_solve(p);
  REQUIRE(o.status == ConicStatus::kPrimalInfeasible);
  Vec gtz = p.G.multiply_transpose(o.z);
  CHECK(std::fabs(gtz[0]) <= 1e-7);
  CHECK_THAT(dot(p.h, o.z), WithinAbs(-1.0, 1e-9));
  CHECK(cone::violation(p.cones, o.z) <= 1e-12);
  CHECK_THROWS_AS(conic_extract_duals(p, o), std::logic_error);
}

TEST_CASE("conic infeasibility: disc and half-plane do not meet") {
  // ||(x1, x2)|| <= 1, x1 >= 2
  ConicProblem p;
  p.c = {0, 0};
  p.A.cols = p.G.cols = 2;
  p.G.rows = {row({}), row({{0, -1}}), row({{1, -1}}), row({{0, -1}})};
  p.h = {1, 0, 0, -2};
  p.cones = {{ConeType::kSoc, 3}, {ConeType::kNonneg, 1}};
  auto o = conic_solve(p);
  REQUIRE(o.status == ConicStatus::kPrimalInfeasible);
  Vec gtz = p.G.multiply_transpose(o.z);
  CHECK(norm2(gtz) <= 1e-7);
  CHECK(cone::violation(p.cones, o.z) <= 1e-9);
}

TEST_CASE("dual infeasibility certificate") {
  // min -x1  s.t.  x1 >= ||x2||, x2 = 1
  ConicProblem p;
  p.c = {-1, 0};
  p.A.cols = p.G.cols = 2;
  p.A.rows = {row({{1, 1}})};
  p.b = {1};
  p.G.rows = {row({{0, -1}}), row({{1, -1}})};
  p.h = {0, 0};
  p.cones = {{ConeType::kSoc, 2}};
  auto o = conic_solve(p);
  REQUIRE(o.status == ConicStatus::kDualInfeasible);
  CHECK_THAT(dot(p.c, o.x), WithinAbs(-1.0, 1e-9));
  Vec ax = p.A.multiply(o.x);
  CHECK(std::fabs(ax[0]) <= 1e-7);
  Vec gx = p.G.multiply(o.x);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::fabs(gx[i] + o.s[i]) <= 1e-7);
}

TEST_CASE("linear programs agree with the simplex solver") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-5, 5);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 5, m = 1 + trial % 4;
    LpProblem lp;
    lp.c.resize(n);
    for (auto& v : lp.c) v = coef(rng);
    lp.G = Matrix(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) lp.G(i, j) = coef(rng);
    lp.b.resize(m);
    for (auto& v : lp.b) v = coef(rng) - 3;
    lp.l.assign(n, -3.0);
    lp.u.assign(n, 4.0);
    const auto ref = lp_solve(lp);
    const auto p = conic_from_lp(lp);
    const auto o = conic_solve(p);
    if (ref.status == LpStatus::kInfeasible) {
      CHECK(o.status == ConicStatus::kPrimalInfeasible);
      continue;
    }
    REQUIRE(ref.status == LpStatus::kOptimal);
    REQUIRE(o.status == ConicStatus::kOptimal);
    ++solved;
    CHECK_THAT(o.primal_objective, WithinAbs(ref.objective, 1e-6 * (1 + std::fabs(ref.objective))));
    auto kk = conic_residuals(p, o);
    INFO(kk.primal_eq << " " << kk.primal_cone << " " << kk.dual << " " << kk.gap << " " << kk.complementarity << " " << kk.cone_violation);
    CHECK(kk.max() <= 1e-8);
    // Dual objective of the conic form is the simplex dual objective.
    double lp_dual = dot(ref.duals, lp.b);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = ref.reduced_costs[j];
      lp_dual += d > 0 ? d * lp.l[j] : d * lp.u[j];
    }
    CHECK_THAT(o.dual_objective, WithinAbs(lp_dual, 1e-6 * (1 + std::fabs(lp_dual))));
  }
  CHECK(solved > 20);
}

TEST_CASE("planted second-order cone programs") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<ConeBlock> cones;
    const int nb = 1 + trial % 4;
    for (int b = 0; b < nb; ++b)
      cones.push_back({(b + trial) % 3 == 0 ? ConeType::kNonneg : ConeType::kSoc,
                       static_cast<std::size_t>(2 + (b * 7 + trial) % 4)});
    std::size_t m = 0;
    for (const auto& k : cones) m += k.dim;
    const std::size_t n = std::max<std::size_t>(2, m / 2 + trial % 3);
    const std::size_t neq = trial % 3 == 0 ? 0 : 1;
    auto pl = planted_socp(rng, n, neq, cones);
    auto o = conic_solve(pl.p);
    INFO("trial " << trial);
    REQUIRE(o.status == ConicStatus::kOptimal);
    CHECK_THAT(o.primal_objective, WithinAbs(pl.opt, 1e-6 * (1 + std::fabs(pl.opt))));
    auto kk = conic_residuals(pl.p, o);
    INFO(kk.primal_eq << " " << kk.primal_cone << " " << kk.dual << " " << kk.gap << " " << kk.complementarity << " " << kk.cone_violation);
    CHECK(kk.max() <= 1e-8);
  }
}

TEST_CASE("malformed problems are rejected") {
  ConicProblem p;
  p.c = {1};
  p.G.rows = {row({{3, 1}})};
  p.h = {0};
  p.cones = {{ConeType::kNonneg, 1}};
  CHECK_THROWS_AS(conic_solve(p), std::invalid_argument);
  p.G.rows = {row({{0, 1}})};
  p.cones = {{ConeType::kNonneg, 2}};
  CHECK_THROWS_AS(conic_solve(p), std::invalid_argument);
}

TEST_CASE("larger planted programs") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ConeBlock> cones{{ConeType::kNonneg, 30},
                                 {ConeType::kSoc, static_cast<std::size_t>(10 + trial)},
                                 {ConeType::kSoc, 25},
                                 {ConeType::kSoc, 3}};
    auto pl = planted_socp(rng, 40, trial % 2 ? 5 : 0, cones);
    auto o = conic_solve(pl.p);
    INFO("trial " << trial);
    REQUIRE(o.status == ConicStatus::kOptimal);
    CHECK_THAT(o.primal_objective, WithinAbs(pl.opt, 1e-6 * (1 + std::fabs(pl.opt))));
    CHECK(conic_residuals(pl.p, o).max() <= 1e-8);
    CHECK(o.iterations < 60);
  }
}
