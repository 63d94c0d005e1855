#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "vldcop.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int die(const std::string& what) {
  std::fprintf(stderr, "error: %s (%s)\n", what.c_str(), vldcop_last_error());
  return 1;
}

std::vector<std::string> collect_runs(const std::vector<std::string>& inputs) {
  std::vector<std::string> paths;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& entry : fs::directory_iterator(in))
        if (entry.path().extension() == ".jsonl")
          paths.push_back(entry.path().string());
    } else {
      paths.push_back(in);
    }
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

std::vector<const char*> c_ptrs(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

int run_one(const json& cfg) {
  vldcop_run* run = nullptr;
  const int rc = vldcop_run_execute(cfg.dump().c_str(), &run);
  json progress{{"event", "run"},
                {"archetype", cfg.value("archetype", "dsa-oracle")},
                {"instance_seed", cfg.value("instance_seed", 0)},
                {"run_seed", cfg.value("run_seed", 0)},
                {"ok", rc == VLDCOP_OK}};
  if (rc == VLDCOP_OK) {
    char* m = nullptr;
    if (vldcop_run_metrics(run, &m) == VLDCOP_OK) {
      progress["metrics"] = json::parse(m);
      vldcop_string_free(m);
    }
  } else {
    progress["error"] = vldcop_last_error();
  }
  std::printf("%s\n", progress.dump().c_str());
  vldcop_run_free(run);
  return rc == VLDCOP_OK ? 0 : 1;
}

int cmd_run(const std::string& config_path) {
  std::string text;
  {
    FILE* f = std::fopen(config_path.c_str(), "rb");
    if (!f) return die("cannot read " + config_path);
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
    std::fclose(f);
  }
  json cfg = json::parse(text, nullptr, false);
  if (cfg.is_discarded()) return die("malformed config " + config_path);

  // sweep manifest: a base config fanned out over seeds and archetypes
  if (cfg.contains("instance_seeds") || cfg.contains("archetypes")) {
    json base = cfg.value("base", json::object());
    std::vector<std::uint64_t> seeds =
        cfg.value("instance_seeds", std::vector<std::uint64_t>{0});
    std::vector<std::string> archetypes = cfg.value(
        "archetypes", std::vector<std::string>{base.value("archetype", "dsa-oracle")});
    int failures = 0;
    for (const auto& arch : archetypes)
      for (std::uint64_t seed : seeds) {
        json one = base;
        one["archetype"] = arch;
        one["instance_seed"] = seed;
        if (!one.contains("run_seed")) one["run_seed"] = seed;
        failures += run_one(one);
      }
    return failures == 0 ? 0 : 1;
  }
  return run_one(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VL-DCOP benchmark generator and simulation harness"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a benchmark task");
  std::string bench = "ldgc", topology = "random", gen_out = ".";
  int n = 10, m = 23, domain = 4;
  std::uint64_t seed = 0;
  gen->add_option("--bench", bench, "ldgc | vldgc | ldms");
  gen->add_option("--topology", topology, "random | scale-free");
  gen->add_option("--n", n, "number of agents");
  gen->add_option("--m", m, "number of edges");
  gen->add_option("--domain", domain, "domain size");
  gen->add_option("--seed", seed, "instance seed");
  gen->add_option("--out", gen_out, "output directory");

  auto* run = app.add_subcommand("run", "execute a run config or sweep manifest");
  std::string config_path;
  run->add_option("--config", config_path, "config file (JSON)")->required();

  auto* report = app.add_subcommand("report", "aggregate run logs");
  std::vector<std::string> report_in;
  std::string report_out = "report";
  report->add_option("inputs", report_in, "run logs or directories")->required();
  report->add_option("--out", report_out, "output directory");

  auto* exp = app.add_subcommand("export-distill", "export (prompt, decision) pairs");
  std::vector<std::string> exp_in;
  std::string exp_kinds, exp_out = "distill.jsonl";
  long exp_budget = 0;
  exp->add_option("inputs", exp_in, "run logs or directories")->required();
  exp->add_option("--kinds", exp_kinds, "comma-separated task-kind filter");
  exp->add_option("--budget", exp_budget, "exact pair count (0 = all)");
  exp->add_option("--out", exp_out, "output file");

  auto* val = app.add_subcommand("validate", "re-check task or run files");
  std::vector<std::string> val_in;
  val->add_option("files", val_in, "task documents or run logs")->required();

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    vldcop_task* task = nullptr;
    if (vldcop_task_generate(bench.c_str(), topology.c_str(), n, m, domain, seed,
                             &task) != VLDCOP_OK)
      return die("generation failed");
    if (vldcop_task_validate(task) != VLDCOP_OK) {
      vldcop_task_free(task);
      return die("generated task failed validation");
    }
    if (vldcop_task_export(task, gen_out.c_str()) != VLDCOP_OK) {
      vldcop_task_free(task);
      return die("export failed");
    }
    char* summary = nullptr;
    if (vldcop_task_summary(task, &summary) == VLDCOP_OK) {
      std::printf("%s\n", json{{"event", "gen"}, {"summary", summary},
                               {"out", gen_out}}
                              .dump()
                              .c_str());
      vldcop_string_free(summary);
    }
    vldcop_task_free(task);
    return 0;
  }

  if (run->parsed()) return cmd_run(config_path);

  if (report->parsed()) {
    auto paths = collect_runs(report_in);
    if (paths.empty()) return die("no run logs found");
    auto ptrs = c_ptrs(paths);
    if (vldcop_report(ptrs.data(), ptrs.size(), report_out.c_str()) != VLDCOP_OK)
      return die("report failed");
    std::printf("%s\n", json{{"event", "report"},
                             {"runs", paths.size()},
                             {"out", report_out}}
                            .dump()
                            .c_str());
    return 0;
  }

  if (exp->parsed()) {
    auto paths = collect_runs(exp_in);
    if (paths.empty()) return die("no run logs found");
    auto ptrs = c_ptrs(paths);
    long count = 0;
    if (vldcop_export_distill(ptrs.data(), ptrs.size(), exp_kinds.c_str(),
                              exp_budget, exp_out.c_str(), &count) != VLDCOP_OK)
      return die("export failed");
    std::printf("%s\n", json{{"event", "export-distill"},
                             {"pairs", count},
                             {"out", exp_out}}
                            .dump()
                            .c_str());
    return 0;
  }

  if (val->parsed()) {
    int failures = 0;
    for (const auto& f : val_in) {
      const int rc = vldcop_validate_file(f.c_str());
      std::printf("%s\n", json{{"event", "validate"},
                               {"file", f},
                               {"ok", rc == VLDCOP_OK},
                               {"error", rc == VLDCOP_OK ? "" : vldcop_last_error()}}
                              .dump()
                              .c_str());
      if (rc != VLDCOP_OK) ++failures;
    }
    return failures == 0 ? 0 : 1;
  }

  return 0;
}
