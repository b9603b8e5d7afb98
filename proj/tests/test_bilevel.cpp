#include <algorithm>
#include <random>
#include <set>

#include "bdc/bilevel.hpp"
#include "catch_amalgamated.hpp"
#include "oracles.hpp"

using namespace bdc;

namespace {

ValueFunctionOracle enum_oracle(const BilevelInstance& inst) {
  return [&inst](const std::vector<long>& x) -> std::optional<Rational> {
    auto f = oracle::follower_by_enumeration(inst, x);
    if (!f.feasible) return std::nullopt;
    return f.phi;
  };
}

void check_optimal(const BilevelInstance& inst, const BilevelResult& r) {
  const auto opt = oracle::bilevel_optimum(inst);
  if (!opt) {
    CHECK(r.status == RunStatus::kInfeasible);
    return;
  }
  REQUIRE(r.status == RunStatus::kOptimal);
  REQUIRE(r.z_star);
  CHECK(*r.z_star == *opt);
  REQUIRE(r.best);
  CHECK(is_bilevel_feasible(inst, *r.best, enum_oracle(inst)));
  REQUIRE(r.lower_bound);
  CHECK(*r.lower_bound <= to_double(*r.z_star) + 1e-9);
}

// Recorded cuts never exclude a bilevel-feasible point they must keep.
long audit_violations(const BilevelInstance& inst, const BilevelResult& r) {
  const auto pts = oracle::bilevel_feasible_points(inst);
  long bad = 0;
  for (const auto& rc : r.cuts) {
    for (const auto& p : pts) {
      bool inside = true;
      for (std::size_t j = 0; j < inst.n1; ++j)
        inside = inside && p.x[j] >= rc.lb[j] && p.x[j] <= rc.ub[j];
      for (std::size_t j = 0; j < inst.n2; ++j)
        inside = inside && p.y[j] >= rc.lb[inst.n1 + j] && p.y[j] <= rc.ub[inst.n1 + j];
      if (!inside) continue;
      if (rc.value_cap && to_double(p.value) > *rc.value_cap) continue;
      Rational lhs = 0;
      for (std::size_t j = 0; j < inst.n1; ++j) lhs += Rational(rc.cut.alpha[j]) * p.x[j];
      for (std::size_t j = 0; j < inst.n2; ++j) lhs += Rational(rc.cut.beta[j]) * p.y[j];
      if (Rational(rc.cut.tau) - lhs > Rational(1, 1000000)) ++bad;
    }
  }
  return bad;
}

BilevelInstance with_ball(BilevelInstance inst, long radius) {
  // (radius; x; y) in Q
  inst.Mt = RMat(3, 1);
  inst.Nt = RMat(3, 1);
  inst.Mt(1, 0) = 1;
  inst.Nt(2, 0) = 1;
  inst.ht = {Rational(-radius), 0, 0};
  inst.cones = {3};
  inst.validate();
  return inst;
}

const SolveConfig kSettings[] = {
    {Placement::kIO, Removal::kNone, NormalizationSpec::parse("S2")},
    {Placement::kIFO, Removal::kRelaxation, NormalizationSpec::parse("S1")},
    {Placement::kIG, Removal::kBound, NormalizationSpec::parse("U2")},
    {Placement::kIFG, Removal::kOptimality, NormalizationSpec::parse("S1")},
    {Placement::kIO, Removal::kIntegrality, NormalizationSpec::parse("C1")},
    {Placement::kIFG, Removal::kNone, NormalizationSpec::parse("U1")},
};

}  // namespace

TEST_CASE("placement names") {
  for (const char* s : {"IO", "IFO", "IG", "IFG"}) CHECK(to_string(parse_placement(s)) == s);
  CHECK_THROWS_AS(parse_placement("IF"), std::invalid_argument);
  CHECK(separates_fractional(Placement::kIFG));
  CHECK_FALSE(separates_fractional(Placement::kIG));
  CHECK(strategy_of(Placement::kIFO) == SeparationStrategy::kOptimal);
  SolveConfig c;
  CHECK(c.name() == "IO+RN+S2");
  CHECK(c.time_limit == 600.0);
}

TEST_CASE("brute force on the moore-bard example") {
  const auto inst = oracle::moore_bard();
  const auto r = brute_force(inst);
  check_optimal(inst, r);
}

TEST_CASE("branch-and-cut on the moore-bard example") {
  const auto inst = oracle::moore_bard();
  for (auto cfg : kSettings) {
    cfg.record_cuts = true;
    INFO(cfg.name());
    const auto r = branch_and_cut(inst, cfg);
    check_optimal(inst, r);
    CHECK(audit_violations(inst, r) == 0);
    CHECK(r.record.n_icut + r.record.n_fcut > 0);
    CHECK(r.record.setting == cfg.name());
  }
}

TEST_CASE("branch-and-cut with a leader cone") {
  const auto inst = with_ball(oracle::moore_bard(), 4);
  const auto r = branch_and_cut(inst, SolveConfig{});
  check_optimal(inst, r);
  check_optimal(inst, brute_force(inst));
}

TEST_CASE("methods agree on random integer instances") {
  std::mt19937_64 rng(99);
  int feasible = 0;
  std::size_t cuts = 0;
  for (int t = 0; t < 24; ++t) {
    const auto inst = oracle::random_small(rng, 2, 2, -2, 2);
    auto cfg = kSettings[t % 6];
    cfg.record_cuts = true;
    INFO("trial " << t << " " << cfg.name());
    const auto bc = branch_and_cut(inst, cfg);
    check_optimal(inst, bc);
    check_optimal(inst, brute_force(inst));
    CHECK(audit_violations(inst, bc) == 0);
    if (bc.status == RunStatus::kOptimal) ++feasible;
    cuts += bc.cuts.size();
  }
  CHECK(feasible >= 6);
  CHECK(cuts > 0);
}

TEST_CASE("cutting plane on random binary instances") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto inst = oracle::random_small(rng, 3, 3, 0, 1);
    auto cfg = kSettings[t % 6];
    cfg.record_cuts = true;
    INFO("trial " << t << " " << cfg.name());
    const auto cp = cutting_plane(inst, cfg);
    check_optimal(inst, cp);
    CHECK(audit_violations(inst, cp) == 0);
    CHECK(cp.iterations <= 64);
    // every iterate is distinct
    std::set<std::vector<long>> seen;
    for (const auto& z : cp.iterates) CHECK(seen.insert(*integer_vector(z)).second);
    const auto bc = branch_and_cut(inst, cfg);
    if (bc.z_star && cp.z_star) CHECK(*bc.z_star == *cp.z_star);
  }
}

TEST_CASE("empty high-point relaxation is infeasible") {
  auto inst = oracle::moore_bard();
  // x + y >= 100 cannot hold in the box
  inst.M = RMat(1, 1);
  inst.M(0, 0) = 1;
  inst.N = RMat(1, 1);
  inst.N(0, 0) = 1;
  inst.h = {100};
  inst.validate();
  CHECK(branch_and_cut(inst, SolveConfig{}).status == RunStatus::kInfeasible);
  CHECK(brute_force(inst).status == RunStatus::kInfeasible);
}

TEST_CASE("cutting plane stops at once when the follower is indifferent") {
  std::mt19937_64 rng(3);
  auto inst = oracle::random_small(rng, 3, 3, 0, 1);
  for (auto& v : inst.V.data) v = 0;
  for (auto& v : inst.g) v = 0;
  inst.validate();
  const auto cp = cutting_plane(inst, SolveConfig{});
  check_optimal(inst, cp);
  if (cp.status == RunStatus::kOptimal) {
    CHECK(cp.iterations == 1);
    CHECK(cp.record.n_icut == 0);
  }
}

TEST_CASE("cutting plane rejects general integers") {
  CHECK_THROWS_AS(cutting_plane(oracle::moore_bard(), SolveConfig{}), std::invalid_argument);
}

TEST_CASE("brute force guard") {
  CHECK_THROWS_AS(brute_force(oracle::moore_bard(), 10), std::invalid_argument);
}

TEST_CASE("single leader point") {
  auto inst = oracle::moore_bard();
  inst.lb[0] = inst.ub[0] = 2;
  inst.validate();
  const auto r = brute_force(inst);
  check_optimal(inst, r);
  CHECK((*r.best_x)[0] == 2);
}

TEST_CASE("gap formulas") {
  CHECK(*percent_gap(100.0, 80.0) == Catch::Approx(20.0));
  CHECK(*percent_gap(42.0, 42.0) == 0.0);
  CHECK_FALSE(percent_gap(0.0, -1.0));
  CHECK_FALSE(percent_gap(std::nullopt, 3.0));
  const auto g = compute_gaps(std::nullopt, 80.0, std::nullopt, 70.0, 100.0);
  CHECK_FALSE(g.gap);
  CHECK_FALSE(g.rgap);
  CHECK(*g.gap_star == Catch::Approx(20.0));
  CHECK(*g.rgap_star == Catch::Approx(30.0));
}
