// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "bdc/model.hpp"
#include "bdc/relaxations.hpp"

namespace bdc {

enum class FollowerStatus { kOptimal, kInfeasible, kTimeLimit };

struct FollowerResult {
  FollowerStatus status = FollowerStatus::kInfeasible;
  std::vector<long> y;
  Rational q;
};

struct FollowerStats {
  long calls = 0;
  long nodes = 0;
  long pool_hits = 0;
  double seconds = 0.0;
};

// Return false to stop the stream.
using FollowerYield = std::function<bool(const std::vector<long>& y, const Rational& q)>;

// The follower problem  min { q(y) : B y >= f - A x, CY y >= UY, y in Y, y integer }
// for a given leader decision x, solved by branch-and-bound over its SOCP
// relaxation. One solver keeps a small pool of follower points across calls.
class FollowerSolver {
 public:
  static constexpr std::size_t kPoolCapacity = 64;

  explicit FollowerSolver(const BilevelInstance& inst);

  // Phi(x) with an optimal y. Ties among optimal y go to the lexicographically
  // smallest one when lexicographic_ties is set. With q_star given only points
  // with q(y) < q_star are searched, and kInfeasible means none exists.
  FollowerResult solve_optimal(const Vec& x, std::optional<double> q_star = std::nullopt);

  // Streams follower points with q(y) < q_star in discovery order, each better
  // than the previous one. Pooled points are tried before any search.
  // Returns false when the stream was cut short by the time limit.
  bool stream_improving(const Vec& x, double q_star, const FollowerYield& yield);

  // min d'y over F(x) with q(y) <= phi (optimistic choice among follower optima).
  // With leader_rows set, y must also satisfy the leader constraints at x.
  FollowerResult best_for_leader(const Vec& x, const Rational& phi, const Vec& d,
                                 bool leader_rows = false);

  // The largest value an improving point may take: q_star - 1 rounded for
  // integral objectives, q_star - 1e-5 otherwise.
  double improving_cutoff(double q_star) const;

  // Exact test of y in F(x) when x is integral, tolerance 1e-9 otherwise.
  bool in_follower_set(const Vec& x, const std::vector<long>& y) const;

  const std::deque<std::vector<long>>& pool() const { return pool_; }
  const FollowerStats& stats() const { return stats_; }
  const InstanceData& data() const { return data_; }

  bool lexicographic_ties = true;
  double time_limit = std::numeric_limits<double>::infinity();

 private:
  mip::ConicRelaxation relaxation(const Vec& x) const;
  void remember(const std::vector<long>& y);
  std::vector<long> to_long(const Vec& z) const;
  void lexicographic_min(const Vec& x, FollowerResult& r);

  const BilevelInstance& inst_;
  InstanceData data_;
  std::deque<std::vector<long>> pool_;
  FollowerStats stats_;
};

}  // namespace bdc
