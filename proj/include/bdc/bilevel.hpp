// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdc/cutgen.hpp"
#include "bdc/mip_engine.hpp"
#include "bdc/model.hpp"
#include "bdc/relaxations.hpp"

namespace bdc {

// Where the cuts are separated: I = integer relaxation optima only,
// IF = integer and fractional optima; O = from the optimal follower response,
// G = from the first improving follower point that yields a cut.
enum class Placement { kIO, kIFO, kIG, kIFG };
// "IO", "IFO", "IG" or "IFG"; throws std::invalid_argument.
Placement parse_placement(std::string_view text);
std::string to_string(Placement p);
bool separates_fractional(Placement p);
SeparationStrategy strategy_of(Placement p);

struct SolveConfig {
  Placement placement = Placement::kIO;
  Removal removal = Removal::kNone;
  NormalizationSpec norm;
  double time_limit = 600.0;
  int root_fractional_rounds = 1000;
  int node_fractional_rounds = 1;
  // Keep every cut together with the box it was derived for.
  bool record_cuts = false;

  // e.g. "IO+RN+S2"
  std::string name() const;
};

struct RecordedCut {
  Cut cut;
  // The cut is valid for bilevel-feasible points inside [lb, ub] whose leader
  // value is at most `value_cap`; the box is the global one for global cuts.
  Vec lb, ub;
  std::optional<double> value_cap;
  bool from_fractional = false;
};

struct BilevelResult {
  RunStatus status = RunStatus::kUnknown;
  std::optional<Point> best;
  std::optional<std::vector<long>> best_x, best_y;
  std::optional<Rational> z_star;  // exact leader value of `best`
  std::optional<double> lower_bound;
  std::optional<double> root_bound;
  std::optional<double> root_incumbent;
  RunRecord record;
  std::vector<RecordedCut> cuts;
  // Cutting plane: relaxation optima in iteration order, and the row added
  // after each of them (a disjunctive cut or a no-good cut).
  std::vector<Vec> iterates;
  std::vector<mip::Row> added_rows;
  long iterations = 0;
  long no_good_cuts = 0;
};

// The high-point relaxation over z = (x, y):
//   min c'x + d'y  s.t.  [M N; A B; 0 CY] z >= (h, f, UY),  Mt x + Nt y - ht in K.
mip::LpRelaxation make_hpr(const InstanceData& d);
std::vector<mip::SocBlock> leader_cones(const InstanceData& d);

BilevelResult branch_and_cut(const BilevelInstance& inst, const SolveConfig& cfg);

// Binary instances only; throws std::invalid_argument otherwise.
BilevelResult cutting_plane(const BilevelInstance& inst, const SolveConfig& cfg);

// Exhaustive oracle over the leader box; throws std::invalid_argument when the
// box holds more than `max_points` leader points.
BilevelResult brute_force(const BilevelInstance& inst, double max_points = 1e6);

struct Gaps {
  std::optional<double> gap, gap_star, rgap, rgap_star;
};
// 100 (z - LB) / |z| for each pair; undefined when z is missing or zero or the
// bound is missing.
std::optional<double> percent_gap(std::optional<double> z, std::optional<double> bound);
Gaps compute_gaps(std::optional<double> z_star, std::optional<double> lower_bound,
                  std::optional<double> root_incumbent, std::optional<double> root_bound,
                  std::optional<double> best_known);
// Fills the gap fields of r.record from its own values and `best_known`.
void apply_gaps(BilevelResult& r, std::optional<double> best_known);

}  // namespace bdc
