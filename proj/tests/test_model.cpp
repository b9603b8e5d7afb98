#include <random>
#include <string>

#include "bdc/instance_io.hpp"
#include "bdc/model.hpp"
#include "catch_amalgamated.hpp"
#include "oracles.hpp"

using namespace bdc;


TEST_CASE("follower objective on the Moore-Bard example") {
  auto inst = oracle::moore_bard();
  CHECK(eval_follower_objective(inst, std::vector<long>{2}) == 4);
  CHECK(eval_follower_objective(inst, std::vector<long>{0}) == 0);
  FollowerQuadratic q(inst);
  CHECK(q.value({3.0}) == 9.0);
  CHECK(q.gradient({3.0})[0] == 6.0);
}

TEST_CASE("follower objective matches the double-loop oracle") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long> yv(-3, 3);
  for (int rep = 0; rep < 30; ++rep) {
    auto inst = oracle::random_small(rng, 2, 3, -3, 3);
    std::vector<long> y(3);
    for (auto& v : y) v = yv(rng);
    Rational q = eval_follower_objective(inst, y);
    CHECK(q == oracle::follower_value_double_loop(inst, y));
    if (inst.follower_objective_integral()) CHECK(is_integer(q));
    InstanceData data(inst);
    Vec yd(y.begin(), y.end());
    CHECK(std::abs(data.follower_objective(yd) - to_double(q)) < 1e-9);
  }
}

TEST_CASE("bilevel feasibility on the Moore-Bard example") {
  auto inst = oracle::moore_bard();
  ValueFunctionOracle phi = [&](const std::vector<long>& x) -> std::optional<Rational> {
    auto fe = oracle::follower_by_enumeration(inst, x);
    if (!fe.feasible) return std::nullopt;
    return fe.phi;
  };
  CHECK(is_bilevel_feasible(inst, {{2.0}, {2.0}}, phi));
  CHECK_FALSE(is_bilevel_feasible(inst, {{2.0}, {4.0}}, phi));
  CHECK_FALSE(is_bilevel_feasible(inst, {{2.5}, {2.0}}, phi));
  auto fe = oracle::follower_by_enumeration(inst, {2});
  CHECK(fe.phi == 4);
  CHECK(fe.feasible_set == std::vector<std::vector<long>>{{2}, {3}, {4}});
}

TEST_CASE("bilevel feasibility agrees with enumeration on small random instances") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 8; ++rep) {
    auto inst = oracle::random_small(rng, 2, 2, -2, 3);  // domain size 6
    ValueFunctionOracle phi = [&](const std::vector<long>& x) -> std::optional<Rational> {
      auto fe = oracle::follower_by_enumeration(inst, x);
      if (!fe.feasible) return std::nullopt;
      return fe.phi;
    };
    auto feasible = oracle::bilevel_feasible_points(inst);
    std::size_t count = 0;
    oracle::for_each_box_point(inst.lb, inst.ub, [&](const std::vector<long>& z) {
      Point p{{double(z[0]), double(z[1])}, {double(z[2]), double(z[3])}};
      bool expect = false;
      for (const auto& bp : feasible)
        if (bp.x == std::vector<long>{z[0], z[1]} && bp.y == std::vector<long>{z[2], z[3]})
          expect = true;
      CHECK(is_bilevel_feasible(inst, p, phi) == expect);
      count += expect;
    });
    CHECK(count == feasible.size());
  }
}

TEST_CASE("instance text round-trips") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 10; ++rep) {
    auto inst = oracle::random_small(rng, 3, 2, 0, 5);
    std::string text = write_instance(inst);
    auto back = parse_instance(text);
    CHECK(back == inst);
    CHECK(write_instance(back) == text);
  }
  auto mb = oracle::moore_bard();
  auto text = write_instance(mb);
  CHECK(text.find("cones") == std::string::npos);
  CHECK(parse_instance(text) == mb);
}

TEST_CASE("instances with cones and rational data round-trip") {
  auto inst = oracle::moore_bard();
  inst.Mt = RMat(3, 1);
  inst.Nt = RMat(3, 1);
  inst.Mt(0, 0) = Rational(1, 3);
  inst.Nt(1, 0) = 2;
  inst.Nt(2, 0) = Rational(-7, 4);
  inst.ht = {Rational(-100), 0, Rational(1, 2)};
  inst.cones = {1, 2};
  inst.c = {Rational(3, 7)};
  inst.validate();
  auto back = parse_instance(write_instance(inst));
  CHECK(back == inst);
}

TEST_CASE("parser accepts decimals and comments") {
  std::string text =
      "# example\n"
      "bilevel 1\n"
      "dims 1 1 0 0 1 0 1\n"
      "c\n1.5\n"
      "d\n-2e-1   # comment\n"
      "A\n1\nB\n1\nf\n1\n"
      "V\n1\ng\n0\n"
      "lb\n0 0\nub\n1 1\n";
  auto inst = parse_instance(text);
  CHECK(inst.c[0] == Rational(3, 2));
  CHECK(inst.d[0] == Rational(-1, 5));
  CHECK(inst.is_binary());
}

TEST_CASE("parser rejects invalid instances with a line number") {
  const std::string base =
      "bilevel 1\n"
      "dims 1 1 0 0 1 0 1\n"
      "c\n1\nd\n1\nA\n%A\nB\n%B\nf\n1\nV\n1\ng\n0\nlb\n0 0\nub\n%U\n";
  auto make = [&](const std::string& a, const std::string& b, const std::string& u) {
    std::string t = base;
    t.replace(t.find("%A"), 2, a);
    t.replace(t.find("%B"), 2, b);
    t.replace(t.find("%U"), 2, u);
    return t;
  };
  CHECK_NOTHROW(parse_instance(make("1", "1", "1 1")));
  try {
    parse_instance(make("0", "0", "1 1"));
    FAIL("zero linking row accepted");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("zero linking row") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_instance(make("1/2", "1", "1 1")), ParseError);
  CHECK_THROWS_AS(parse_instance(make("1", "1", "1 inf")), ParseError);
  try {
    parse_instance(make("1 2", "1", "1 1"));
    FAIL("wrong row width accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 8);
  }
  CHECK_THROWS_AS(parse_instance("bilevel 2\n"), ParseError);
  CHECK_THROWS_AS(parse_instance(make("1", "1", "1 1") + "extra\n"), ParseError);
}

TEST_CASE("solution records round-trip") {
  SolutionRecord s;
  s.status = RunStatus::kOptimal;
  s.objective = Rational(-5, 2);
  s.x = {1, 0, 3};
  s.y = {-2};
  auto back = parse_solution(write_solution(s));
  CHECK(back.status == s.status);
  CHECK(*back.objective == *s.objective);
  CHECK(back.x == s.x);
  CHECK(back.y == s.y);
  SolutionRecord none;
  none.status = RunStatus::kInfeasible;
  CHECK_FALSE(parse_solution(write_solution(none)).objective.has_value());
}

TEST_CASE("cuts report violation and the always-violated sentinel") {
  Cut c;
  c.alpha = {1.0};
  c.beta = {-1.0};
  c.tau = 2.0;
  CHECK(c.violation({1.0}, {0.0}) == 1.0);
  CHECK_FALSE(c.is_always_violated());
  CHECK(Cut::always_violated(2, 3).is_always_violated());
}
