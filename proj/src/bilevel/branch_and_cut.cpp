// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "bdc/bilevel.hpp"
#include "bdc/follower.hpp"
#include "internal.hpp"

namespace bdc {

BilevelResult branch_and_cut(const BilevelInstance& inst, const SolveConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  inst.validate();
  FollowerSolver fs(inst);
  fs.lexicographic_ties = false;
  Separator sep(inst, fs);
  const InstanceData& d = fs.data();
  auto relax = make_hpr(d);

  BilevelResult out;
  out.record.setting = cfg.name();
  std::optional<double> ub;

  auto remaining = [&] { return std::max(1e-3, cfg.time_limit - detail::seconds_since(t0)); };
  auto sep_config = [&] {
    SeparationConfig s;
    s.strategy = strategy_of(cfg.placement);
    s.norm = cfg.norm;
    s.removal = cfg.removal;
    s.upper_bound = ub;
    s.removal_time_limit = std::min(30.0, remaining());
    return s;
  };
  auto record = [&](const SeparationResult& r, const mip::NodeContext& ctx, bool fractional) {
    if (!cfg.record_cuts) return;
    RecordedCut rc;
    rc.cut = *r.cut;
    rc.lb = *ctx.lb;
    rc.ub = *ctx.ub;
    if (r.upper_bound) rc.value_cap = *r.upper_bound - 1e-5;
    rc.from_fractional = fractional;
    out.cuts.push_back(std::move(rc));
  };
  auto run_separation = [&](const Vec& z, const mip::NodeContext& ctx) {
    Vec x, y;
    detail::split(d, z, x, y);
    const auto P = make_polyhedron(d, *ctx.lb, *ctx.ub);
    fs.time_limit = remaining();
    return sep.separate(P, x, y, sep_config());
  };

  mip::Config ecfg;
  ecfg.time_limit = cfg.time_limit;
  ecfg.objective_integral = detail::leader_objective_integral(d);
  ecfg.root_fractional_rounds = cfg.root_fractional_rounds;
  ecfg.node_fractional_rounds = cfg.node_fractional_rounds;

  mip::Callbacks cb;
  cb.on_integer = [&](const Vec& z, bool heuristic, const mip::NodeContext& ctx) {
    if (heuristic) {
      // Bilevel feasible iff no follower point improves on q(y).
      Vec x, y;
      detail::split(d, z, x, y);
      fs.time_limit = remaining();
      const auto r = fs.solve_optimal(x, d.follower_objective(y));
      if (r.status == FollowerStatus::kInfeasible) return mip::Decision{};
      return mip::Decision{mip::Verdict::kReject, {}};
    }
    const auto r = run_separation(z, ctx);
    if (r.cut) {
      record(r, ctx, false);
      mip::Decision dec{mip::Verdict::kAddCuts, {}};
      dec.cuts.push_back(mip::CutRow{detail::to_row(*r.cut), ctx.root});
      return dec;
    }
    if (!r.improving_found && !r.follower_timeout) return mip::Decision{};
    return mip::Decision{mip::Verdict::kReject, {}};
  };
  if (separates_fractional(cfg.placement)) {
    cb.on_fractional = [&](const Vec& z, int, const mip::NodeContext& ctx) {
      std::vector<mip::CutRow> rows;
      const auto r = run_separation(z, ctx);
      if (r.cut) {
        record(r, ctx, true);
        rows.push_back(mip::CutRow{detail::to_row(*r.cut), ctx.root});
      }
      return rows;
    };
  }
  cb.on_new_incumbent = [&](const Vec&, double obj) {
    ub = obj;
    return true;
  };
  cb.on_root_done = [&](double bound, double incumbent) {
    out.root_bound = bound;
    if (std::isfinite(incumbent)) out.root_incumbent = incumbent;
  };

  mip::Engine engine(relax, d.lb, d.ub, ecfg, cb);
  const auto res = engine.solve();

  if (res.incumbent) detail::set_best(inst, *res.incumbent, out);
  switch (res.status) {
    case mip::Status::kOptimal:
      out.status = RunStatus::kOptimal;
      out.lower_bound = to_double(*out.z_star);
      break;
    case mip::Status::kInfeasible:
      out.status = RunStatus::kInfeasible;
      break;
    default:
      out.status = RunStatus::kTimeLimit;
      if (std::isfinite(res.bound)) out.lower_bound = res.bound;
      break;
  }
  if (out.root_bound && !std::isfinite(*out.root_bound)) out.root_bound.reset();
  if (out.lower_bound && out.z_star)
    out.lower_bound = std::min(*out.lower_bound, to_double(*out.z_star));

  out.record.status = out.status;
  out.record.n_node = res.stats.nodes;
  out.record.n_icut = res.stats.integer_cuts;
  out.record.n_fcut = res.stats.fractional_cuts;
  out.record.n_red = sep.stats().cuts_with_removal;
  out.record.t_follower = fs.stats().seconds;
  out.record.t_separation = sep.stats().seconds;
  out.record.runtime = detail::seconds_since(t0);
  apply_gaps(out, std::nullopt);
  return out;
}

}  // namespace bdc
