// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <chrono>

#include "bdc/cutgen.hpp"

namespace bdc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Separator::Separator(const BilevelInstance& inst, FollowerSolver& follower)
    : inst_(inst), follower_(follower), data_(follower.data()) {}

bool Separator::try_point(const PolyhedronP& P, const Vec& x_star, const Vec& y_star,
                          const std::vector<long>& y_hat, const SeparationConfig& cfg,
                          SeparationResult& out) {
  const auto t0 = std::chrono::steady_clock::now();
  auto ds = build_disjunctions(inst_, y_hat);
  RemovalOptions ro;
  ro.strategy = cfg.removal;
  ro.upper_bound = cfg.upper_bound;
  ro.time_limit = cfg.removal_time_limit;
  auto kept = remove_redundant(data_, std::move(ds), P, ro);
  stats_.removed += static_cast<long>(kept.removed);

  const auto prob = build_cgsocp(P, kept.kept, x_star, y_star, cfg.norm);
  const auto sol = solve_cgsocp(prob, cfg.min_violation);
  ++stats_.cgsocp_solves;
  if (sol.numerical_warning) {
    ++stats_.numerical_warnings;
    out.numerical_warning = true;
  }
  stats_.seconds += seconds_since(t0);
  if (sol.outcome == CutOutcome::kNoViolatedCut) return false;
  if (kept.removed > 0) ++stats_.cuts_with_removal;
  if (sol.outcome == CutOutcome::kRayCut) ++stats_.ray_cuts;
  if (sol.outcome == CutOutcome::kAlwaysViolated) ++stats_.always_violated;
  out.cut = sol.cut;
  out.outcome = sol.outcome;
  out.violation = sol.violation;
  out.y_hat = y_hat;
  if (cfg.removal == Removal::kOptimality) out.upper_bound = cfg.upper_bound;
  return true;
}

SeparationResult Separator::separate(const PolyhedronP& P, const Vec& x_star, const Vec& y_star,
                                     const SeparationConfig& cfg) {
  ++stats_.calls;
  SeparationResult out;
  const double q_star = data_.follower_objective(y_star);
  if (cfg.strategy == SeparationStrategy::kOptimal) {
    const auto r = follower_.solve_optimal(x_star, q_star);
    if (r.status == FollowerStatus::kTimeLimit) {
      out.follower_timeout = true;
      return out;
    }
    if (r.status != FollowerStatus::kOptimal) return out;
    out.improving_found = true;
    try_point(P, x_star, y_star, r.y, cfg, out);
    return out;
  }
  const bool complete = follower_.stream_improving(
      x_star, q_star, [&](const std::vector<long>& y_hat, const Rational&) {
        out.improving_found = true;
        return !try_point(P, x_star, y_star, y_hat, cfg, out);
      });
  if (!complete && !out.cut) out.follower_timeout = true;
  return out;
}

}  // namespace bdc
