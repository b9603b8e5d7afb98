// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.
//
// bdc gen | solve | bench | export-milp

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bdc/bilevel.hpp"
#include "bdc/harness.hpp"
#include "bdc/instance_io.hpp"

namespace {

using namespace bdc;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string opt(const std::optional<double>& v) {
  if (!v) return "-";
  std::ostringstream o;
  o << *v;
  return o.str();
}

// Manifest: one instance path per line, relative to the manifest; '#' starts a comment.
std::vector<BenchInstance> read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  const auto dir = std::filesystem::path(path).parent_path();
  std::vector<BenchInstance> out;
  for (std::string line; std::getline(f, line);) {
    line = line.substr(0, line.find('#'));
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    const auto p = std::filesystem::path(line).is_absolute() ? std::filesystem::path(line) : dir / line;
    out.push_back({std::filesystem::path(line).stem().string(), read_instance_file(p.string())});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integer bilevel solver with SOCP-based disjunctive cuts"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a QBCov or QBMKP instance");
  std::string family = "qbcov", gen_out;
  GeneratorSpec spec;
  gen->add_option("--family", family, "qbcov or qbmkp")->check(CLI::IsMember({"qbcov", "qbmkp"}));
  gen->add_option("--n", spec.n, "Number of variables (QBCov) or synthetic MKP items");
  gen->add_option("--m1", spec.m1, "Leader rows (QBCov, 0 or 1)");
  gen->add_option("--m2", spec.m2, "Linking rows (1 or 2)");
  gen->add_option("--share", spec.leader_share, "Leader item share (QBMKP)");
  gen->add_flag("--integer", spec.integer_domain, "Integer domain {0..5} with doubled rhs (QBMKP)");
  gen->add_option("--mkp", spec.mkp_path, "Source MKP file (QBMKP); synthetic when omitted");
  gen->add_option("--mkp-constraints", spec.mkp_constraints, "Rows of the synthetic MKP");
  gen->add_option("--seed", spec.seed, "Seed");
  gen->add_option("-o,--out", gen_out, "Output path (stdout when omitted)");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  std::string inst_path, method = "bc", sep = "IO", removal = "RN", norm = "S2", sol_out;
  double time_limit = 600.0;
  solve->add_option("instance", inst_path, "Instance file")->required();
  solve->add_option("--method", method, "bc, cp or brute")->check(CLI::IsMember({"bc", "cp", "brute"}));
  solve->add_option("--sep", sep, "IO, IFO, IG or IFG");
  solve->add_option("--removal", removal, "RN, RB, RR, RI or RO");
  solve->add_option("--norm", norm, "S1, S2, U1, U2, C1 or C2");
  solve->add_option("--time-limit", time_limit, "Seconds");
  solve->add_option("--solution", sol_out, "Write the solution record here");

  // bench
  auto* bench = app.add_subcommand("bench", "Run settings over a manifest of instances");
  std::string manifest, settings_text = "BC-base,BC-best", out_dir = "bench_out";
  double bench_limit = 600.0;
  unsigned workers = 1;
  bench->add_option("manifest", manifest, "File listing instance paths")->required();
  bench->add_option("--settings", settings_text,
                    "Comma-separated list: BC-base, BC-best, CP-base, CP-best or LABEL=bc:IFG+RO+S1");
  bench->add_option("--out-dir", out_dir, "Directory for the CSV files");
  bench->add_option("--time-limit", bench_limit, "Seconds per run");
  bench->add_option("--workers", workers, "Parallel runs");

  // export-milp
  auto* exp = app.add_subcommand("export-milp", "Write the McCormick linearization (LP + aux)");
  std::string exp_in, exp_out;
  exp->add_option("instance", exp_in, "Instance file")->required();
  exp->add_option("out", exp_out, "Output LP path; the aux file gets '.aux' appended")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      spec.family = family == "qbcov" ? GeneratorSpec::Family::kQBCov : GeneratorSpec::Family::kQBMKP;
      const auto text = write_instance(generate(spec));
      if (gen_out.empty()) std::cout << text;
      else write_text(gen_out, text);
    } else if (*solve) {
      const auto inst = read_instance_file(inst_path);
      SolveConfig cfg;
      cfg.placement = parse_placement(sep);
      cfg.removal = parse_removal(removal);
      cfg.norm = NormalizationSpec::parse(norm);
      cfg.time_limit = time_limit;
      const auto m = parse_method(method);
      BilevelResult r = m == Method::kBranchAndCut   ? branch_and_cut(inst, cfg)
                        : m == Method::kCuttingPlane ? cutting_plane(inst, cfg)
                                                     : brute_force(inst);
      std::cout << "status: " << to_string(r.status) << '\n'
                << "objective: " << (r.z_star ? format_rational(*r.z_star) : "-") << '\n'
                << "lower_bound: " << opt(r.lower_bound) << '\n'
                << "root_bound: " << opt(r.root_bound) << '\n'
                << "nodes: " << r.record.n_node << '\n'
                << "integer_cuts: " << r.record.n_icut << '\n'
                << "fractional_cuts: " << r.record.n_fcut << '\n'
                << "cuts_with_removal: " << r.record.n_red << '\n'
                << "follower_seconds: " << r.record.t_follower << '\n'
                << "separation_seconds: " << r.record.t_separation << '\n'
                << "seconds: " << r.record.runtime << '\n';
      SolutionRecord sol;
      sol.status = r.status;
      sol.objective = r.z_star;
      if (r.best_x) sol.x = *r.best_x;
      if (r.best_y) sol.y = *r.best_y;
      if (sol_out.empty()) std::cout << write_solution(sol);
      else write_text(sol_out, write_solution(sol));
    } else if (*bench) {
      std::vector<BenchSetting> settings;
      for (const auto& s : split(settings_text, ',')) settings.push_back(parse_setting(s));
      const auto insts = read_manifest(manifest);
      const auto rep = run_benchmark(insts, settings, bench_limit, workers);
      std::filesystem::create_directories(out_dir);
      const auto dir = std::filesystem::path(out_dir);
      write_text((dir / "records.csv").string(), records_csv(rep.rows));
      for (std::size_t s = 0; s < settings.size(); ++s) {
        write_text((dir / ("ecdf_runtime_" + settings[s].label + ".csv")).string(),
                   ecdf_csv(rep.runtime[s]));
        write_text((dir / ("ecdf_gapstar_" + settings[s].label + ".csv")).string(),
                   ecdf_csv(rep.gap_star[s]));
      }
      for (const auto& row : rep.rows)
        if (!row.error.empty())
          std::cerr << row.record.instance << " / " << row.record.setting << ": " << row.error << '\n';
      std::cout << rep.rows.size() << " runs, " << rep.kept.size() << " of " << insts.size()
                << " instances kept; results in " << out_dir << '\n';
    } else if (*exp) {
      const auto mc = export_mccormick(read_instance_file(exp_in));
      write_text(exp_out, mc.lp);
      write_text(exp_out + ".aux", mc.aux);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
