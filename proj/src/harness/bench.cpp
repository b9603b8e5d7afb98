// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bdc/harness.hpp"

namespace bdc {

namespace {

SolveConfig parse_config(std::string_view text) {
  // PLACEMENT+REMOVAL+NORM
  const auto a = text.find('+');
  const auto b = a == std::string_view::npos ? a : text.find('+', a + 1);
  if (b == std::string_view::npos)
    throw std::invalid_argument("setting must read PLACEMENT+REMOVAL+NORM: " + std::string(text));
  SolveConfig c;
  c.placement = parse_placement(text.substr(0, a));
  c.removal = parse_removal(text.substr(a + 1, b - a - 1));
  c.norm = NormalizationSpec::parse(text.substr(b + 1));
  return c;
}

BenchRow run_one(const BenchInstance& bi, const BenchSetting& s, double time_limit) {
  BenchRow row;
  row.record.instance = bi.name;
  row.record.setting = s.label;
  try {
    SolveConfig cfg = s.config;
    cfg.time_limit = time_limit;
    BilevelResult r;
    switch (s.method) {
      case Method::kBranchAndCut: r = branch_and_cut(bi.inst, cfg); break;
      case Method::kCuttingPlane: r = cutting_plane(bi.inst, cfg); break;
      case Method::kBruteForce: r = brute_force(bi.inst); break;
    }
    row.record = r.record;
    row.record.instance = bi.name;
    row.record.setting = s.label;
    if (r.z_star) row.z_star = to_double(*r.z_star);
    row.lower_bound = r.lower_bound;
    row.root_bound = r.root_bound;
    row.root_incumbent = r.root_incumbent;
  } catch (const std::exception& e) {
    row.error = e.what();
    row.record.status = RunStatus::kUnknown;
  }
  return row;
}

bool solved(RunStatus s) { return s == RunStatus::kOptimal || s == RunStatus::kInfeasible; }

std::string cell(std::optional<double> v, const char* fmt) {
  if (!v) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, *v);
  return buf;
}

EcdfSeries make_series(const std::string& label, std::vector<double> values, std::size_t total) {
  EcdfSeries s;
  s.label = label;
  std::sort(values.begin(), values.end());
  s.values = values;
  for (std::size_t i = 0; i < values.size(); ++i)
    s.fractions.push_back(static_cast<double>(i + 1) / static_cast<double>(total));
  return s;
}

}  // namespace

Method parse_method(std::string_view text) {
  if (text == "bc") return Method::kBranchAndCut;
  if (text == "cp") return Method::kCuttingPlane;
  if (text == "brute") return Method::kBruteForce;
  throw std::invalid_argument("unknown method: " + std::string(text));
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kBranchAndCut: return "bc";
    case Method::kCuttingPlane: return "cp";
    case Method::kBruteForce: return "brute";
  }
  return "?";
}

BenchSetting parse_setting(std::string_view text) {
  static const std::map<std::string, std::string, std::less<>> named = {
      {"BC-base", "bc:IO+RN+S2"},
      {"BC-best", "bc:IFG+RO+S1"},
      {"CP-base", "cp:IO+RN+S2"},
      {"CP-best", "cp:IG+RO+S1"},
  };
  BenchSetting s;
  std::string spec(text);
  if (auto it = named.find(text); it != named.end()) {
    s.label = it->first;
    spec = it->second;
  } else if (auto eq = spec.find('='); eq != std::string::npos) {
    s.label = spec.substr(0, eq);
    spec = spec.substr(eq + 1);
  }
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("setting must read METHOD:CONFIG: " + std::string(text));
  s.method = parse_method(std::string_view(spec).substr(0, colon));
  if (s.method != Method::kBruteForce) s.config = parse_config(std::string_view(spec).substr(colon + 1));
  if (s.label.empty()) s.label = spec;
  return s;
}

BenchReport run_benchmark(const std::vector<BenchInstance>& instances,
                          const std::vector<BenchSetting>& settings, double time_limit,
                          unsigned workers) {
  const std::size_t ni = instances.size(), ns = settings.size();
  BenchReport rep;
  rep.rows.resize(ni * ns);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < ni * ns; k = next++)
      rep.rows[k] = run_one(instances[k / ns], settings[k % ns], time_limit);
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(ni * ns)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::vector<bool> keep(ni, false);
  for (std::size_t i = 0; i < ni; ++i) {
    std::optional<double> best;
    for (std::size_t s = 0; s < ns; ++s) {
      const auto& row = rep.rows[i * ns + s];
      if (row.z_star) best = std::min(best.value_or(*row.z_star), *row.z_star);
      if (row.z_star || row.record.status == RunStatus::kInfeasible) keep[i] = true;
    }
    for (std::size_t s = 0; s < ns; ++s) {
      auto& row = rep.rows[i * ns + s];
      const auto g = compute_gaps(row.z_star, row.lower_bound, row.root_incumbent,
                                  row.root_bound, best);
      row.record.gap = g.gap;
      row.record.gap_star = g.gap_star;
      row.record.rgap = g.rgap;
      row.record.rgap_star = g.rgap_star;
    }
    if (keep[i]) rep.kept.push_back(instances[i].name);
  }

  const std::size_t total = rep.kept.size();
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<double> times, gaps;
    for (std::size_t i = 0; i < ni; ++i) {
      if (!keep[i]) continue;
      const auto& row = rep.rows[i * ns + s];
      if (solved(row.record.status)) times.push_back(row.record.runtime);
      if (row.record.gap_star) gaps.push_back(*row.record.gap_star);
    }
    rep.runtime.push_back(make_series(settings[s].label, times, total));
    rep.gap_star.push_back(make_series(settings[s].label, gaps, total));
  }
  return rep;
}

std::string records_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "instance,setting,t,Gap,Gap*,RGap,RGap*,nNode,nICut,nFCut,nRed,t_F,t_S,status\n";
  for (const auto& row : rows) {
    const auto& r = row.record;
    out << r.instance << ',' << r.setting << ',' << cell(r.runtime, "%.3f") << ','
        << cell(r.gap, "%.2f") << ',' << cell(r.gap_star, "%.2f") << ','
        << cell(r.rgap, "%.2f") << ',' << cell(r.rgap_star, "%.2f") << ',' << r.n_node << ','
        << r.n_icut << ',' << r.n_fcut << ',' << r.n_red << ','
        << cell(r.t_follower, "%.3f") << ',' << cell(r.t_separation, "%.3f") << ','
        << to_string(r.status) << '\n';
  }
  return out.str();
}

std::string ecdf_csv(const EcdfSeries& s) {
  std::ostringstream out;
  out << "value,fraction\n";
  char buf[64];
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g\n", s.values[i], s.fractions[i]);
    out << buf;
  }
  return out.str();
}

}  // namespace bdc
