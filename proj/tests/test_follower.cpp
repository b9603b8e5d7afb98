#include <algorithm>
#include <random>

#include "bdc/follower.hpp"
#include "catch_amalgamated.hpp"
#include "oracles.hpp"

using namespace bdc;

namespace {

Vec as_vec(const std::vector<long>& v) { return Vec(v.begin(), v.end()); }

// Two binary leader and follower variables with x1 + x2 + y1 + y2 >= 3.
BilevelInstance small_cover() {
  BilevelInstance inst;
  inst.n1 = inst.n2 = 2;
  inst.c = {1, 1};
  inst.d = {1, 1};
  inst.M = RMat(0, 2);
  inst.N = RMat(0, 2);
  inst.Mt = RMat(0, 2);
  inst.Nt = RMat(0, 2);
  inst.A = RMat(1, 2);
  inst.A.data = {1, 1};
  inst.B = RMat(1, 2);
  inst.B.data = {1, 1};
  inst.f = {3};
  inst.V = RMat(2, 2);
  inst.V.data = {1, 0, 0, 2};
  inst.g = {0, 0};
  inst.CY = RMat(0, 2);
  inst.lb.assign(4, 0);
  inst.ub.assign(4, 1);
  inst.validate();
  return inst;
}

}  // namespace

TEST_CASE("moore-bard follower at x = 2") {
  auto inst = oracle::moore_bard();
  FollowerSolver fs(inst);
  auto r = fs.solve_optimal({2});
  REQUIRE(r.status == FollowerStatus::kOptimal);
  CHECK(r.q == 4);
  CHECK(r.y == std::vector<long>{2});
}

TEST_CASE("follower infeasible when the covering row cannot be met") {
  auto inst = small_cover();
  FollowerSolver fs(inst);
  CHECK(fs.solve_optimal({0, 0}).status == FollowerStatus::kInfeasible);
  auto r = fs.solve_optimal({1, 1});
  REQUIRE(r.status == FollowerStatus::kOptimal);
  CHECK(r.q == 1);
  CHECK(r.y == std::vector<long>{1, 0});
  bool called = false;
  fs.stream_improving({0, 0}, 100, [&](const std::vector<long>&, const Rational&) {
    called = true;
    return true;
  });
  CHECK_FALSE(called);
}

TEST_CASE("constant follower objective") {
  auto inst = small_cover();
  inst.V = RMat(2, 2);
  FollowerSolver fs(inst);
  auto r = fs.solve_optimal({1, 0});
  REQUIRE(r.status == FollowerStatus::kOptimal);
  CHECK(r.q == 0);
  CHECK(fs.in_follower_set({1, 0}, r.y));
}

TEST_CASE("improving stream on the moore-bard example") {
  auto inst = oracle::moore_bard();
  FollowerSolver fs(inst);
  std::vector<Rational> qs;
  fs.stream_improving({2}, 16, [&](const std::vector<long>& y, const Rational& q) {
    CHECK(fs.in_follower_set({2}, y));
    CHECK(q < 16);
    qs.push_back(q);
    return true;
  });
  REQUIRE_FALSE(qs.empty());
  for (const auto& q : qs) CHECK((q == 4 || q == 9));
  CHECK(qs.back() == 4);
  CHECK(std::is_sorted(qs.rbegin(), qs.rend()));

  std::size_t count = 0;
  fs.stream_improving({2}, 4, [&](const std::vector<long>&, const Rational&) {
    ++count;
    return true;
  });
  CHECK(count == 0);
}

TEST_CASE("pooled follower points come back without a search") {
  auto inst = oracle::moore_bard();
  FollowerSolver fs(inst);
  fs.stream_improving({2}, 100, [](const std::vector<long>&, const Rational&) { return true; });
  REQUIRE_FALSE(fs.pool().empty());
  // y = 2 is also feasible at x = 1: 25 - 40 >= -30, -1 - 4 >= -10, -2 + 2 >= -4, 2 + 20 >= 15.
  REQUIRE(fs.in_follower_set({1}, {2}));
  const long nodes = fs.stats().nodes;
  const long hits = fs.stats().pool_hits;
  std::vector<long> first;
  fs.stream_improving({1}, 100, [&](const std::vector<long>& y, const Rational&) {
    first = y;
    return false;
  });
  CHECK(fs.stats().nodes == nodes);
  CHECK(fs.stats().pool_hits == hits + 1);
  CHECK(fs.in_follower_set({1}, first));
}

TEST_CASE("pool keeps at most 64 points") {
  auto inst = oracle::moore_bard();
  inst.lb = {-10, -10};
  inst.ub = {10, 10};
  FollowerSolver fs(inst);
  for (int x = -10; x <= 10; ++x) fs.solve_optimal({static_cast<double>(x)});
  CHECK(fs.pool().size() <= FollowerSolver::kPoolCapacity);
}

TEST_CASE("follower optimum agrees with enumeration") {
  std::mt19937_64 rng(77);
  int feasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = oracle::random_small(rng, 2, 1 + trial % 3, -2, 3);
    FollowerSolver fs(inst);
    std::uniform_int_distribution<long> xs(-2, 3);
    std::vector<long> x{xs(rng), xs(rng)};
    auto ref = oracle::follower_by_enumeration(inst, x);
    auto r = fs.solve_optimal(as_vec(x));
    INFO("trial " << trial);
    if (!ref.feasible) {
      CHECK(r.status == FollowerStatus::kInfeasible);
      continue;
    }
    ++feasible;
    REQUIRE(r.status == FollowerStatus::kOptimal);
    CHECK(r.q == ref.phi);
    CHECK(r.y == *std::min_element(ref.argmin.begin(), ref.argmin.end()));

    // Stream from above the optimum: strictly decreasing, ends at Phi.
    const Rational top = ref.phi + 7;
    std::vector<Rational> qs;
    fs.stream_improving(as_vec(x), to_double(top), [&](const std::vector<long>& y, const Rational& q) {
      CHECK(fs.in_follower_set(as_vec(x), y));
      CHECK(q < top);
      if (!qs.empty()) CHECK(q < qs.back());
      qs.push_back(q);
      return true;
    });
    REQUIRE_FALSE(qs.empty());
    CHECK(qs.back() == ref.phi);

    // Optimistic choice among the optima.
    Vec d(inst.n2);
    for (std::size_t j = 0; j < inst.n2; ++j) d[j] = to_double(inst.d[j]);
    auto best = fs.best_for_leader(as_vec(x), ref.phi, d);
    REQUIRE(best.status == FollowerStatus::kOptimal);
    Rational want = 0;
    bool first = true;
    for (const auto& y : ref.argmin) {
      Rational v = 0;
      for (std::size_t j = 0; j < inst.n2; ++j) v += inst.d[j] * y[j];
      if (first || v < want) want = v;
      first = false;
    }
    Rational got = 0;
    for (std::size_t j = 0; j < inst.n2; ++j) got += inst.d[j] * best.y[j];
    CHECK(got == want);
    CHECK(best.q == ref.phi);
  }
  CHECK(feasible > 15);
}

TEST_CASE("improving cutoff") {
  auto inst = oracle::moore_bard();
  FollowerSolver fs(inst);
  CHECK(fs.improving_cutoff(16) == 15);
  CHECK(fs.improving_cutoff(15.5) == 15);
  inst.V.data = {Rational(1, 2)};
  FollowerSolver fs2(inst);
  CHECK(fs2.improving_cutoff(4.0) == Catch::Approx(4.0 - 1e-5));
}
