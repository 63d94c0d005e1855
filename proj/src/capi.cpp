#include "vldcop.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vldcop/harness.hpp"
#include "vldcop/taskio.hpp"

using namespace vldcop;

struct vldcop_task {
  VlTask task;
};

struct vldcop_run {
  RunRecord record;
};

namespace {

thread_local std::string g_last_error = "ok";

int fail(int code, const std::string& what) {
  g_last_error = what;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(VLDCOP_EINVAL, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(VLDCOP_EINVAL, e.what());
  } catch (const std::exception& e) {
    return fail(VLDCOP_EFAILED, e.what());
  }
}

}  // namespace

extern "C" {

const char* vldcop_version(void) { return "0.1.0"; }

const char* vldcop_last_error(void) { return g_last_error.c_str(); }

void vldcop_string_free(char* s) { delete[] s; }

int vldcop_task_generate(const char* benchmark, const char* topology, int n,
                         int m, int domain_size, uint64_t seed,
                         vldcop_task** out) {
  if (!benchmark || !out) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    GenOptions opt;
    opt.scale_free = topology && std::string(topology) == "scale-free";
    *out = new vldcop_task{gen_task(benchmark, n, m, domain_size, seed, opt)};
    return VLDCOP_OK;
  });
}

int vldcop_task_load(const char* path, vldcop_task** out) {
  if (!path || !out) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    *out = new vldcop_task{load_task(path)};
    return VLDCOP_OK;
  });
}

int vldcop_task_save(const vldcop_task* task, const char* path) {
  if (!task || !path) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    save_task(task->task, path);
    return VLDCOP_OK;
  });
}

int vldcop_task_text(const vldcop_task* task, char** out) {
  if (!task || !out) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    *out = dup_string(serialize_task(task->task));
    return VLDCOP_OK;
  });
}

int vldcop_task_summary(const vldcop_task* task, char** out) {
  if (!task || !out) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    const VlTask& t = task->task;
    std::ostringstream s;
    s << t.benchmark << ": " << t.instance.agents.size() << " agents, "
      << t.instance.variables.size() << " variables, "
      << t.instance.edges.size() << " edges, |D|="
      << (t.instance.domains.empty() ? 0 : t.instance.domains[0].size())
      << ", seed " << t.seed;
    *out = dup_string(s.str());
    return VLDCOP_OK;
  });
}

int vldcop_task_validate(const vldcop_task* task) {
  if (!task) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    validate_task(task->task);
    return VLDCOP_OK;
  });
}

int vldcop_task_export(const vldcop_task* task, const char* dir) {
  if (!task || !dir) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    namespace fs = std::filesystem;
    const VlTask& t = task->task;
    fs::create_directories(dir);
    save_task(t, (fs::path(dir) / "task.txt").string());
    for (std::size_t a = 0; a < t.instructions.size(); ++a) {
      const std::string name = t.instance.agents[a];
      std::ofstream out(fs::path(dir) / (name + "_instructions.txt"),
                        std::ios::binary);
      if (!out) return fail(VLDCOP_EIO, "cannot write instruction file");
      out << t.instructions[a].text << "\n";
      if (t.instructions[a].chart) {
        std::ofstream svg(fs::path(dir) / (name + "_pref.svg"), std::ios::binary);
        if (!svg) return fail(VLDCOP_EIO, "cannot write chart file");
        svg << render_chart(*t.instructions[a].chart);
      }
    }
    return VLDCOP_OK;
  });
}

void vldcop_task_free(vldcop_task* task) { delete task; }

int vldcop_run_execute(const char* config_json, vldcop_run** out) {
  if (!config_json || !out) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    RunConfig cfg = RunConfig::from_json(config_json);
    RunRecord rec = run_experiment(cfg);
    if (rec.failed) {
      *out = new vldcop_run{std::move(rec)};
      return fail(VLDCOP_EFAILED, "run failed; partial record preserved");
    }
    *out = new vldcop_run{std::move(rec)};
    return VLDCOP_OK;
  });
}

int vldcop_run_save(const vldcop_run* run, const char* path) {
  if (!run || !path) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    save_run(run->record, path);
    return VLDCOP_OK;
  });
}

int vldcop_run_load(const char* path, vldcop_run** out) {
  if (!path || !out) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    *out = new vldcop_run{load_run(path)};
    return VLDCOP_OK;
  });
}

int vldcop_run_text(const vldcop_run* run, char** out) {
  if (!run || !out) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    *out = dup_string(serialize_run(run->record));
    return VLDCOP_OK;
  });
}

int vldcop_run_metrics(const vldcop_run* run, char** out) {
  if (!run || !out) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    MetricsSummary m = metrics(run->record);
    nlohmann::json j{{"mean_cost", m.mean_cost},
                     {"anytime_cost", m.anytime_cost},
                     {"sat", m.sat},
                     {"anytime_sat", m.anytime_sat},
                     {"total_queries", m.total_queries},
                     {"queries_per_agent", m.queries_per_agent},
                     {"fallbacks", m.fallbacks}};
    *out = dup_string(j.dump());
    return VLDCOP_OK;
  });
}

void vldcop_run_free(vldcop_run* run) { delete run; }

static int load_records(const char* const* run_paths, size_t count,
                        std::vector<RunRecord>& records) {
  if (!run_paths || count == 0) return fail(VLDCOP_EINVAL, "no run logs given");
  for (size_t i = 0; i < count; ++i) records.push_back(load_run(run_paths[i]));
  return VLDCOP_OK;
}

int vldcop_report(const char* const* run_paths, size_t count,
                  const char* out_dir) {
  if (!out_dir) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    std::vector<RunRecord> records;
    int rc = load_records(run_paths, count, records);
    if (rc != VLDCOP_OK) return rc;
    report(records, out_dir);
    return VLDCOP_OK;
  });
}

int vldcop_export_distill(const char* const* run_paths, size_t count,
                          const char* kinds, long budget, const char* path,
                          long* out_count) {
  if (!path) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    std::vector<RunRecord> records;
    int rc = load_records(run_paths, count, records);
    if (rc != VLDCOP_OK) return rc;
    std::vector<std::string> filter;
    if (kinds && *kinds) {
      std::istringstream ss(kinds);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) filter.push_back(item);
    }
    long n = export_distill(records, filter, budget, path);
    if (out_count) *out_count = n;
    return VLDCOP_OK;
  });
}

int vldcop_validate_file(const char* path) {
  if (!path) return fail(VLDCOP_EINVAL, "null argument");
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(VLDCOP_EIO, std::string("cannot read ") + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.rfind("{", 0) == 0) {
      parse_run(text);  // throws on malformed logs
    } else {
      validate_task(parse_task(text));
    }
    return VLDCOP_OK;
  });
}

}  // extern "C"
