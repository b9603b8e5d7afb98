// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdc/bilevel.hpp"
#include "bdc/model.hpp"

namespace bdc {

// SplitMix64 (Steele, Lea and Flood). The state is a counter advanced by the
// golden-ratio increment, so streams are identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform on {lo, ..., hi} by rejection; requires lo <= hi.
  long uniform(long lo, long hi);

 private:
  std::uint64_t state_;
};

// n items, m budget rows a'z <= cap, maximize profit'z over binaries.
struct MkpData {
  std::size_t n = 0, m = 0;
  std::vector<long> profit;
  std::vector<std::vector<long>> weight;  // m rows of n
  std::vector<long> capacity;
};

// Plain-text layout: a line "n m [optimum]", then n profits, m*n weights row by
// row and m capacities, whitespace separated. Throws std::invalid_argument
// ("malformed MKP: ...").
MkpData parse_mkp(std::string_view text);
MkpData read_mkp_file(const std::string& path);
std::string write_mkp(const MkpData& mkp);
// Profits in 1..99, weights in 0..99, capacity half the row sum.
MkpData synthetic_mkp(std::size_t n, std::size_t m, std::uint64_t seed);

struct GeneratorSpec {
  enum class Family { kQBCov, kQBMKP };
  Family family = Family::kQBCov;
  std::size_t n = 20;
  std::size_t m1 = 0;
  std::size_t m2 = 1;
  double leader_share = 0.5;
  bool integer_domain = false;
  std::uint64_t seed = 1;
  std::string mkp_path;  // QBMKP source; empty = synthetic
  std::size_t mkp_constraints = 3;  // synthetic source only
};

// n1 = n2 = n/2. Throws std::invalid_argument on invalid dimensions.
BilevelInstance gen_qbcov(std::size_t n, std::size_t m1, std::size_t m2, std::uint64_t seed);
// Requires mkp.m >= m2 + 1.
BilevelInstance gen_qbmkp(const MkpData& mkp, std::size_t m2, double leader_share,
                          bool integer_domain, std::uint64_t seed);
BilevelInstance generate(const GeneratorSpec& spec);

// a'z <= cap on binaries becomes a'z' >= a'e - cap for z' = e - z.
std::vector<long> covering_complement(const std::vector<long>& z);

// McCormick linearization: w_ij = y_i y_j (i < j) with
//   w >= y_i + y_j - 1,  w <= y_i,  w <= y_j,  w >= 0,
// and y_i^2 = y_i on the diagonal.
struct McCormickModel {
  std::size_t n1 = 0, n2 = 0;
  std::vector<std::pair<std::size_t, std::size_t>> products;  // (i, j), i < j
  RVec follower_linear;   // coefficient of y_i: R_ii + g_i
  RVec follower_product;  // coefficient of w_k: 2 R_ij
  std::string lp;   // LP format
  std::string aux;  // follower variables, rows and objective
  // Linearized follower objective at binary y with w = y_i y_j.
  Rational follower_value(const std::vector<long>& y, const std::vector<long>& w) const;
};
// Binary instances without leader cones only; throws std::invalid_argument.
McCormickModel export_mccormick(const BilevelInstance& inst);

enum class Method { kBranchAndCut, kCuttingPlane, kBruteForce };
Method parse_method(std::string_view text);  // "bc", "cp" or "brute"
std::string to_string(Method m);

struct BenchSetting {
  std::string label;  // e.g. "BC-base"
  Method method = Method::kBranchAndCut;
  SolveConfig config;
};
// "LABEL=bc:IO+RN+S2", "bc:IFG+RO+S1" or the names BC-base, BC-best, CP-base, CP-best.
BenchSetting parse_setting(std::string_view text);

struct BenchInstance {
  std::string name;
  BilevelInstance inst;
};

struct BenchRow {
  RunRecord record;
  std::optional<double> z_star;
  std::optional<double> lower_bound, root_bound, root_incumbent;
  std::string error;  // non-empty when the run threw
};

struct EcdfSeries {
  std::string label;
  std::vector<double> values;     // sorted
  std::vector<double> fractions;  // cumulative, over the filtered instances
};

struct BenchReport {
  std::vector<BenchRow> rows;        // instance-major, setting order
  std::vector<std::string> kept;     // instances that pass the filter
  std::vector<EcdfSeries> runtime;   // one per setting
  std::vector<EcdfSeries> gap_star;  // one per setting
};

// Runs every setting on every instance with `workers` threads. Failures are
// recorded in the row and the run continues.
BenchReport run_benchmark(const std::vector<BenchInstance>& instances,
                          const std::vector<BenchSetting>& settings, double time_limit,
                          unsigned workers = 1);

std::string records_csv(const std::vector<BenchRow>& rows);
std::string ecdf_csv(const EcdfSeries& s);

}  // namespace bdc
