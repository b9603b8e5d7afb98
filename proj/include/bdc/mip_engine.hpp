// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "bdc/dense.hpp"

namespace bdc::mip {

// a'z >= b
struct Row {
  SparseRow a;
  double b = 0.0;
  bool satisfied(const Vec& z, double tol) const { return a.dot(z.data()) >= b - tol; }
};

// A row handed to a relaxation. The id is stable for the lifetime of an
// engine and lets relaxations carry warm starts across row sets.
struct ActiveRow {
  std::int64_t id;
  const Row* row;
};

// Opaque per-relaxation warm-start payload.
struct WarmStart {
  virtual ~WarmStart() = default;
};

enum class RelaxStatus { kOptimal, kInfeasible, kFailed };

struct RelaxResult {
  RelaxStatus status = RelaxStatus::kFailed;
  Vec z;
  double bound = -std::numeric_limits<double>::infinity();
  std::shared_ptr<const WarmStart> warm;
};

class Relaxation {
 public:
  virtual ~Relaxation() = default;
  virtual std::size_t num_vars() const = 0;
  virtual RelaxResult solve(const Vec& lb, const Vec& ub, const std::vector<ActiveRow>& rows,
                            const WarmStart* warm) = 0;
  virtual double objective(const Vec& z) const = 0;
  // Base constraints only; the engine checks the extra rows itself.
  virtual bool feasible(const Vec& z) const = 0;
  virtual bool is_integer(std::size_t j) const {
    (void)j;
    return true;
  }
};

struct NodeContext {
  int node = 0;
  int depth = 0;
  bool root = true;
  const Vec* lb = nullptr;
  const Vec* ub = nullptr;
};

struct CutRow {
  Row row;
  bool global = true;
};

enum class Verdict { kAccept, kReject, kAddCuts };

struct Decision {
  Verdict verdict = Verdict::kAccept;
  std::vector<CutRow> cuts;  // kAddCuts only
};

struct Callbacks {
  // Integer candidate from a relaxation optimum (heuristic = false) or from the
  // rounding heuristic / initial solutions (heuristic = true).
  std::function<Decision(const Vec& z, bool heuristic, const NodeContext&)> on_integer;
  // Fractional relaxation optimum; returns rows to add (empty = branch).
  std::function<std::vector<CutRow>(const Vec& z, int round, const NodeContext&)> on_fractional;
  // New incumbent; returning false stops the search (status kAborted).
  std::function<bool(const Vec& z, double objective)> on_new_incumbent;
  // Called once after the root node finished (bound, incumbent value or inf).
  std::function<void(double bound, double incumbent)> on_root_done;
};

struct Config {
  double int_tol = 1e-6;
  std::optional<double> cutoff;  // prune nodes whose bound exceeds this
  std::optional<long> solution_limit;
  long node_limit = 0;  // 0 = none
  double time_limit = std::numeric_limits<double>::infinity();
  // Objective is integral on integer points: prune with a unit gap.
  bool objective_integral = false;
  bool rounding_heuristic = true;
  int root_fractional_rounds = 1000;
  int node_fractional_rounds = 1;
  std::vector<Vec> initial_solutions;
  bool audit_local_rows = true;
};

enum class Status { kOptimal, kInfeasible, kTimeLimit, kSolutionLimit, kNodeLimit, kAborted };

const char* to_string(Status s);

struct Stats {
  long nodes = 0;
  long relaxations = 0;
  long integer_cuts = 0;
  long fractional_cuts = 0;
  long rejected = 0;
  long relax_failures = 0;
  long audit_violations = 0;
  int max_depth = 0;
  double seconds = 0.0;
};

struct Result {
  Status status = Status::kInfeasible;
  std::optional<Vec> incumbent;
  double objective = std::numeric_limits<double>::infinity();
  double bound = -std::numeric_limits<double>::infinity();
  Stats stats;
};

class Engine {
 public:
  Engine(Relaxation& relax, Vec lb, Vec ub, Config cfg = {}, Callbacks cb = {});

  void add_global_row(Row row);
  Result solve();

  // Integer points accepted as feasible so far, in discovery order.
  const std::vector<Vec>& pool() const { return pool_; }

 private:
  struct Node;
  struct StoredRow {
    Row row;
    int owner;  // -1 for global rows
  };

  bool prune(double bound) const;
  bool better(double obj) const;
  std::vector<ActiveRow> active_rows(const Node& n) const;
  bool rows_satisfied(const Vec& z, const Node& n) const;
  bool is_ancestor(int a, int n) const;
  void add_cuts(const std::vector<CutRow>& cuts, Node& n, long& counter);
  // Returns false when the search must stop.
  bool offer(const Vec& z, bool heuristic, const Node* n, Decision* out);
  Vec round_point(const Vec& z) const;
  bool single_point(const Vec& lb, const Vec& ub) const;
  double elapsed() const;

  Relaxation& relax_;
  Vec lb_, ub_;
  Config cfg_;
  Callbacks cb_;
  std::vector<StoredRow> rows_;
  std::vector<int> global_rows_;
  std::vector<int> parent_;
  std::vector<Vec> pool_;
  std::optional<Vec> incumbent_;
  double inc_obj_ = std::numeric_limits<double>::infinity();
  long solutions_ = 0;
  bool stop_ = false;
  Status stop_status_ = Status::kAborted;
  Stats stats_;
  double start_ = 0.0;
};

// Runs the engine with cutoff below `incumbent_value` and streams every new
// incumbent (each strictly better than the last) to `yield`. `yield` returns
// false to abort. `relief` is the required improvement.
Result enumerate_improving(Relaxation& relax, const Vec& lb, const Vec& ub, Config cfg,
                           double incumbent_value, double relief,
                           const std::function<bool(const Vec&, double)>& yield);

}  // namespace bdc::mip
