// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "bdc/bilevel.hpp"
#include "bdc/follower.hpp"
#include "internal.hpp"

namespace bdc {

namespace {

// Cuts off exactly the binary point z.
mip::Row no_good(const Vec& z) {
  mip::Row r;
  double ones = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (z[j] > 0.5) {
      r.a.add(static_cast<int>(j), -1.0);
      ones += 1.0;
    } else {
      r.a.add(static_cast<int>(j), 1.0);
    }
  }
  r.b = 1.0 - ones;
  return r;
}

}  // namespace

BilevelResult cutting_plane(const BilevelInstance& inst, const SolveConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  inst.validate();
  if (!inst.is_binary()) throw std::invalid_argument("cutting_plane: instance is not binary");
  FollowerSolver fs(inst);
  fs.lexicographic_ties = false;
  Separator sep(inst, fs);
  const InstanceData& d = fs.data();
  auto relax = make_hpr(d);
  const auto P = make_polyhedron(d, d.lb, d.ub);

  BilevelResult out;
  out.record.setting = "CP+" + cfg.name();
  std::vector<mip::Row> rows;
  long nodes = 0;

  auto remaining = [&] { return cfg.time_limit - detail::seconds_since(t0); };
  SeparationConfig scfg;
  scfg.strategy = strategy_of(cfg.placement);
  scfg.norm = cfg.norm;
  scfg.removal = cfg.removal;

  out.status = RunStatus::kTimeLimit;
  while (remaining() > 0.0) {
    mip::Config ecfg;
    ecfg.time_limit = remaining();
    ecfg.objective_integral = detail::leader_objective_integral(d);
    mip::Engine engine(relax, d.lb, d.ub, ecfg);
    for (const auto& r : rows) engine.add_global_row(r);
    const auto res = engine.solve();
    nodes += res.stats.nodes;
    if (res.status == mip::Status::kInfeasible) {
      out.status = RunStatus::kInfeasible;
      break;
    }
    if (res.status != mip::Status::kOptimal) {
      if (std::isfinite(res.bound))
        out.lower_bound = std::max(out.lower_bound.value_or(res.bound), res.bound);
      break;
    }
    const Vec z = *res.incumbent;
    out.lower_bound = res.objective;
    if (out.iterations == 0) out.root_bound = res.objective;
    out.iterates.push_back(z);
    ++out.iterations;

    Vec x, y;
    detail::split(d, z, x, y);
    fs.time_limit = std::max(1e-3, remaining());
    scfg.removal_time_limit = std::min(30.0, std::max(1e-3, remaining()));
    const auto r = sep.separate(P, x, y, scfg);
    if (r.cut) {
      auto row = detail::to_row(*r.cut);
      if (!row.satisfied(z, 1e-6)) {
        if (cfg.record_cuts) {
          RecordedCut rc;
          rc.cut = *r.cut;
          rc.lb = d.lb;
          rc.ub = d.ub;
          if (r.upper_bound) rc.value_cap = *r.upper_bound - 1e-5;
          out.cuts.push_back(std::move(rc));
        }
        rows.push_back(row);
        out.added_rows.push_back(std::move(row));
        continue;
      }
    } else if (r.follower_timeout) {
      break;
    } else if (!r.improving_found) {
      detail::set_best(inst, z, out);
      out.status = RunStatus::kOptimal;
      out.lower_bound = to_double(*out.z_star);
      break;
    }
    // Separation failed on a point known to be bilevel infeasible.
    rows.push_back(no_good(z));
    out.added_rows.push_back(rows.back());
    ++out.no_good_cuts;
  }

  out.record.status = out.status;
  out.record.n_node = nodes;
  out.record.n_icut = static_cast<long>(rows.size());
  out.record.n_red = sep.stats().cuts_with_removal;
  out.record.t_follower = fs.stats().seconds;
  out.record.t_separation = sep.stats().seconds;
  out.record.runtime = detail::seconds_since(t0);
  apply_gaps(out, std::nullopt);
  return out;
}

}  // namespace bdc
