// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "bdc/mip_engine.hpp"

namespace bdc::mip {

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kTimeLimit: return "time_limit";
    case Status::kSolutionLimit: return "solution_limit";
    case Status::kNodeLimit: return "node_limit";
    case Status::kAborted: return "aborted";
  }
  return "unknown";
}

struct Engine::Node {
  int id = 0;
  int depth = 0;
  Vec lb, ub;
  std::vector<int> local_rows;
  double bound = -std::numeric_limits<double>::infinity();
  std::shared_ptr<const WarmStart> warm;
};

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

Engine::Engine(Relaxation& relax, Vec lb, Vec ub, Config cfg, Callbacks cb)
    : relax_(relax), lb_(std::move(lb)), ub_(std::move(ub)), cfg_(std::move(cfg)), cb_(std::move(cb)) {
  if (lb_.size() != relax_.num_vars() || ub_.size() != relax_.num_vars())
    throw std::invalid_argument("mip: bound vectors do not match the relaxation");
}

void Engine::add_global_row(Row row) {
  rows_.push_back({std::move(row), -1});
  global_rows_.push_back(static_cast<int>(rows_.size()) - 1);
}

double Engine::elapsed() const { return now_seconds() - start_; }

bool Engine::prune(double bound) const {
  if (cfg_.cutoff) {
    const double c = *cfg_.cutoff;
    if (bound > c + 1e-7 * (1.0 + std::fabs(c))) return true;
    if (cfg_.objective_integral && std::ceil(bound - 1e-6 * (1.0 + std::fabs(bound))) > c + 1e-9)
      return true;
  }
  if (incumbent_) {
    if (cfg_.objective_integral) return bound > inc_obj_ - 1.0 + 1e-6 * (1.0 + std::fabs(inc_obj_));
    return bound >= inc_obj_ - 1e-9 * (1.0 + std::fabs(inc_obj_));
  }
  return false;
}

bool Engine::better(double obj) const {
  if (cfg_.cutoff && obj > *cfg_.cutoff + 1e-7 * (1.0 + std::fabs(*cfg_.cutoff))) return false;
  if (!incumbent_) return true;
  if (cfg_.objective_integral) return obj < inc_obj_ - 0.5;
  return obj < inc_obj_ - 1e-9 * (1.0 + std::fabs(inc_obj_));
}

bool Engine::is_ancestor(int a, int n) const {
  while (n >= 0) {
    if (n == a) return true;
    n = parent_[static_cast<std::size_t>(n)];
  }
  return false;
}

std::vector<ActiveRow> Engine::active_rows(const Node& n) const {
  std::vector<ActiveRow> out;
  out.reserve(global_rows_.size() + n.local_rows.size());
  for (int r : global_rows_) out.push_back({r, &rows_[static_cast<std::size_t>(r)].row});
  for (int r : n.local_rows) out.push_back({r, &rows_[static_cast<std::size_t>(r)].row});
  return out;
}

bool Engine::rows_satisfied(const Vec& z, const Node& n) const {
  for (const auto& ar : active_rows(n))
    if (!ar.row->satisfied(z, 1e-6)) return false;
  return true;
}

void Engine::add_cuts(const std::vector<CutRow>& cuts, Node& n, long& counter) {
  for (const auto& c : cuts) {
    if (c.global) {
      add_global_row(c.row);
    } else {
      rows_.push_back({c.row, n.id});
      n.local_rows.push_back(static_cast<int>(rows_.size()) - 1);
    }
    ++counter;
  }
}

Vec Engine::round_point(const Vec& z) const {
  Vec r = z;
  for (std::size_t j = 0; j < r.size(); ++j)
    if (relax_.is_integer(j)) r[j] = std::round(r[j]);
  return r;
}

bool Engine::single_point(const Vec& lb, const Vec& ub) const {
  for (std::size_t j = 0; j < lb.size(); ++j)
    if (lb[j] < ub[j]) return false;
  return true;
}

bool Engine::offer(const Vec& z, bool heuristic, const Node* n, Decision* out) {
  NodeContext ctx;
  if (n) {
    ctx = {n->id, n->depth, n->id == 0, &n->lb, &n->ub};
  } else {
    ctx = {0, 0, true, &lb_, &ub_};
  }
  Decision d;
  if (cb_.on_integer) d = cb_.on_integer(z, heuristic, ctx);
  if (d.verdict == Verdict::kAccept) {
    const double obj = relax_.objective(z);
    pool_.push_back(z);
    if (better(obj)) {
      incumbent_ = z;
      inc_obj_ = obj;
      ++solutions_;
      if (cb_.on_new_incumbent && !cb_.on_new_incumbent(z, obj)) {
        stop_ = true;
        stop_status_ = Status::kAborted;
      } else if (cfg_.solution_limit && solutions_ >= *cfg_.solution_limit) {
        stop_ = true;
        stop_status_ = Status::kSolutionLimit;
      }
    }
  } else if (d.verdict == Verdict::kReject) {
    ++stats_.rejected;
  }
  if (out) *out = std::move(d);
  return !stop_;
}

Result Engine::solve() {
  start_ = now_seconds();
  stats_ = {};
  const std::size_t nv = relax_.num_vars();

  auto worse = [](const std::unique_ptr<Node>& a, const std::unique_ptr<Node>& b) {
    if (a->bound != b->bound) return a->bound > b->bound;
    if (a->depth != b->depth) return a->depth < b->depth;
    return a->id > b->id;
  };
  std::vector<std::unique_ptr<Node>> open;  // binary heap under `worse`
  auto push = [&](std::unique_ptr<Node> n) {
    open.push_back(std::move(n));
    std::push_heap(open.begin(), open.end(), worse);
  };

  auto make_child = [&](const Node& p, Vec lb, Vec ub) {
    auto c = std::make_unique<Node>();
    c->id = static_cast<int>(parent_.size());
    parent_.push_back(p.id);
    c->depth = p.depth + 1;
    c->lb = std::move(lb);
    c->ub = std::move(ub);
    c->local_rows = p.local_rows;
    c->bound = p.bound;
    c->warm = p.warm;
    stats_.max_depth = std::max(stats_.max_depth, c->depth);
    push(std::move(c));
  };
  auto split = [&](const Node& p, std::size_t j, double left_ub, double right_lb) {
    Vec ub1 = p.ub, lb2 = p.lb;
    ub1[j] = left_ub;
    lb2[j] = right_lb;
    make_child(p, p.lb, std::move(ub1));
    make_child(p, std::move(lb2), p.ub);
  };
  auto widest = [&](const Node& p) {
    std::size_t best = nv;
    double w = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
      const double d = p.ub[j] - p.lb[j];
      if (relax_.is_integer(j) && d > w) {
        w = d;
        best = j;
      }
    }
    return best;
  };
  // Splits the box so that the integer point z lands in the smaller child.
  auto branch_on_point = [&](const Node& p, const Vec& z) {
    const std::size_t j = widest(p);
    if (j == nv) return;
    const double v = z[j];
    if (v - p.lb[j] <= p.ub[j] - v) split(p, j, v, v + 1.0);
    else split(p, j, v - 1.0, v);
  };

  for (const auto& z0 : cfg_.initial_solutions) {
    if (z0.size() != nv) continue;
    Vec z = round_point(z0);
    bool inside = true;
    for (std::size_t j = 0; j < nv; ++j)
      if (z[j] < lb_[j] || z[j] > ub_[j]) inside = false;
    if (!inside || !relax_.feasible(z)) continue;
    bool rows_ok = true;
    for (int r : global_rows_)
      if (!rows_[static_cast<std::size_t>(r)].row.satisfied(z, 1e-6)) rows_ok = false;
    if (!rows_ok || !better(relax_.objective(z))) continue;
    if (!offer(z, true, nullptr, nullptr)) break;
  }

  parent_.assign(1, -1);
  {
    auto root = std::make_unique<Node>();
    root->lb = lb_;
    root->ub = ub_;
    push(std::move(root));
  }
  bool root_done = false;
  double inflight = std::numeric_limits<double>::infinity();
  bool timed_out = false, node_capped = false;

  while (!open.empty() && !stop_) {
    if (elapsed() > cfg_.time_limit) {
      timed_out = true;
      break;
    }
    if (cfg_.node_limit > 0 && stats_.nodes >= cfg_.node_limit) {
      node_capped = true;
      break;
    }
    std::pop_heap(open.begin(), open.end(), worse);
    std::unique_ptr<Node> node = std::move(open.back());
    open.pop_back();
    if (prune(node->bound)) continue;
    ++stats_.nodes;
    const bool is_root = node->id == 0;
    const NodeContext ctx{node->id, node->depth, is_root, &node->lb, &node->ub};
    inflight = node->bound;

    int round = 0;
    while (!stop_) {
      if (elapsed() > cfg_.time_limit) {
        timed_out = true;
        break;
      }
      const auto rows = active_rows(*node);
      if (cfg_.audit_local_rows) {
        for (int r : node->local_rows)
          if (!is_ancestor(rows_[static_cast<std::size_t>(r)].owner, node->id)) ++stats_.audit_violations;
      }
      RelaxResult res = relax_.solve(node->lb, node->ub, rows, node->warm.get());
      ++stats_.relaxations;
      if (res.status == RelaxStatus::kInfeasible) {
        node->bound = std::numeric_limits<double>::infinity();
        break;
      }
      if (res.status == RelaxStatus::kFailed) {
        ++stats_.relax_failures;
        if (single_point(node->lb, node->ub)) {
          const Vec& z = node->lb;
          if (relax_.feasible(z) && rows_satisfied(z, *node) && better(relax_.objective(z))) {
            Decision d;
            offer(z, false, node.get(), &d);
          }
        } else {
          const std::size_t j = widest(*node);
          const double mid = std::floor(0.5 * (node->lb[j] + node->ub[j]));
          split(*node, j, mid, mid + 1.0);
        }
        break;
      }
      node->warm = res.warm;
      node->bound = std::max(node->bound, res.bound);
      if (prune(node->bound)) break;
      const Vec& z = res.z;

      std::size_t frac_j = nv;
      double frac_score = cfg_.int_tol;
      for (std::size_t j = 0; j < nv; ++j) {
        if (!relax_.is_integer(j)) continue;
        const double f = z[j] - std::floor(z[j]);
        const double s = std::min(f, 1.0 - f);
        if (s > frac_score) {
          frac_score = s;
          frac_j = j;
        }
      }

      if (frac_j == nv) {
        Vec zi = round_point(z);
        if (!relax_.feasible(zi) || !rows_satisfied(zi, *node)) {
          // Rounded point drifted outside; fall back to splitting the box.
          if (single_point(node->lb, node->ub)) break;
          branch_on_point(*node, zi);
          break;
        }
        Decision d;
        if (!offer(zi, false, node.get(), &d)) break;
        if (d.verdict == Verdict::kAddCuts) {
          bool cuts_off = false;
          for (const auto& c : d.cuts)
            if (!c.row.satisfied(zi, 1e-9)) cuts_off = true;
          add_cuts(d.cuts, *node, stats_.integer_cuts);
          if (cuts_off) continue;
          ++stats_.rejected;
          d.verdict = Verdict::kReject;
        }
        if (d.verdict == Verdict::kReject && !single_point(node->lb, node->ub))
          branch_on_point(*node, zi);
        break;
      }

      if (cfg_.rounding_heuristic) {
        Vec zr = round_point(z);
        bool inside = true;
        for (std::size_t j = 0; j < nv; ++j)
          if (zr[j] < node->lb[j] || zr[j] > node->ub[j]) inside = false;
        if (inside && relax_.feasible(zr) && rows_satisfied(zr, *node) &&
            better(relax_.objective(zr))) {
          Decision d;
          if (!offer(zr, true, node.get(), &d)) break;
          if (d.verdict == Verdict::kAddCuts) add_cuts(d.cuts, *node, stats_.integer_cuts);
          if (prune(node->bound)) break;
        }
      }
      const int limit = is_root ? cfg_.root_fractional_rounds : cfg_.node_fractional_rounds;
      if (cb_.on_fractional && round < limit) {
        auto cuts = cb_.on_fractional(z, round, ctx);
        if (!cuts.empty()) {
          add_cuts(cuts, *node, stats_.fractional_cuts);
          ++round;
          continue;
        }
      }
      split(*node, frac_j, std::floor(z[frac_j]), std::ceil(z[frac_j]));
      break;
    }
    if (timed_out || stop_) {
      // The node may be unfinished; its bound still counts.
      if (!prune(node->bound)) inflight = node->bound;
      else inflight = std::numeric_limits<double>::infinity();
    } else {
      inflight = std::numeric_limits<double>::infinity();
    }
    if (is_root && !root_done) {
      root_done = true;
      if (cb_.on_root_done) cb_.on_root_done(node->bound, inc_obj_);
    }
    if (timed_out) break;
  }

  Result res;
  res.stats = stats_;
  res.stats.seconds = elapsed();
  res.incumbent = incumbent_;
  res.objective = inc_obj_;
  double open_min = inflight;
  for (const auto& n : open)
    if (!prune(n->bound)) open_min = std::min(open_min, n->bound);
  const bool finished = !stop_ && !timed_out && !node_capped;
  if (finished) {
    res.status = incumbent_ ? Status::kOptimal : Status::kInfeasible;
    res.bound = inc_obj_;
  } else {
    res.status = stop_ ? stop_status_ : timed_out ? Status::kTimeLimit : Status::kNodeLimit;
    res.bound = std::min(open_min, inc_obj_);
  }
  return res;
}

Result enumerate_improving(Relaxation& relax, const Vec& lb, const Vec& ub, Config cfg,
                           double incumbent_value, double relief,
                           const std::function<bool(const Vec&, double)>& yield) {
  const double c = incumbent_value - relief;
  cfg.cutoff = cfg.cutoff ? std::min(*cfg.cutoff, c) : c;
  Callbacks cb;
  cb.on_new_incumbent = yield;
  Engine e(relax, lb, ub, std::move(cfg), std::move(cb));
  return e.solve();
}

}  // namespace bdc::mip
