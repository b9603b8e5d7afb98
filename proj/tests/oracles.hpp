// Independent reference computations used only by the tests. They favour
// obviously-correct enumeration over speed.

#pragma once

#include <optional>
#include <random>
#include <vector>

#include "bdc/conic_solve.hpp"
#include "bdc/lin_solve.hpp"
#include "bdc/model.hpp"

namespace oracle {

// Best vertex of {G z >= b, l <= z <= u} by enumerating every choice of n
// tight constraints. Practical for n <= 4 and a handful of rows.
struct VertexResult {
  bool feasible = false;
  double objective = 0.0;
  bdc::Vec z;
};
VertexResult lp_by_vertices(const bdc::LpProblem& p);

// q(y) by the double loop sum_ij R_ij y_i y_j + g'y with R = V'V, in rationals.
bdc::Rational follower_value_double_loop(const bdc::BilevelInstance& inst,
                                         const std::vector<long>& y);

// Exact enumeration of the follower problem at integer x.
struct FollowerEnum {
  bool feasible = false;
  bdc::Rational phi;
  std::vector<std::vector<long>> argmin;  // every optimal y
  std::vector<std::vector<long>> feasible_set;
};
FollowerEnum follower_by_enumeration(const bdc::BilevelInstance& inst, const std::vector<long>& x);

// Every bilevel-feasible (x, y) with its leader value, found by enumerating
// the whole box.
struct BilevelPoint {
  std::vector<long> x, y;
  bdc::Rational value;
};
std::vector<BilevelPoint> bilevel_feasible_points(const bdc::BilevelInstance& inst);
std::optional<bdc::Rational> bilevel_optimum(const bdc::BilevelInstance& inst);

// Calls fn on every integer point of the box [lb, ub].
template <class Fn>
void for_each_box_point(const std::vector<long>& lb, const std::vector<long>& ub, Fn&& fn) {
  std::vector<long> v = lb;
  if (v.empty()) {
    fn(v);
    return;
  }
  for (std::size_t j = 0; j < lb.size(); ++j)
    if (lb[j] > ub[j]) return;
  while (true) {
    fn(v);
    std::size_t k = 0;
    while (k < v.size() && v[k] == ub[k]) {
      v[k] = lb[k];
      ++k;
    }
    if (k == v.size()) return;
    ++v[k];
  }
}

// Small random instance with integer data, a mixed-sign box, one leader row,
// two linking rows and one follower-only row.
bdc::BilevelInstance random_small(std::mt19937_64& rng, std::size_t n1, std::size_t n2, long lo,
                                  long hi);

// The Moore-Bard style example with box [-10, 10]:
//   min x - y,  y in argmin { y^2 : 25x - 20y >= -30, -x - 2y >= -10,
//                                   -2x + y >= -4, 2x + 10y >= 15 }
bdc::BilevelInstance moore_bard();
// Same with the third constraint replaced by -4x + 3y >= -7.
bdc::BilevelInstance moore_bard_modified();

// LP in the lin_solve form rewritten as a conic problem over the nonnegative
// orthant: -Gz + s = -b, -z + s = -l, z + s = u.
bdc::ConicProblem conic_from_lp(const bdc::LpProblem& lp);

bdc::Vec random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi);

// Conic program built around a chosen primal-dual optimal pair, so its
// optimal value is known up front.
struct Planted {
  bdc::ConicProblem p;
  double opt;
};
Planted planted_socp(std::mt19937_64& rng, std::size_t n, std::size_t neq,
                     const std::vector<bdc::ConeBlock>& cones);

}  // namespace oracle
