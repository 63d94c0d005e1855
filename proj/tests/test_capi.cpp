#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>
#include <vldcop.h>

namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("vldcop-capi-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  vldcop_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and error strings are always available") {
  CHECK(vldcop_version() != nullptr);
  CHECK(vldcop_last_error() != nullptr);
}

TEST_CASE("task lifecycle through the c api") {
  vldcop_task* task = nullptr;
  REQUIRE(vldcop_task_generate("ldgc", "random", 10, 23, 4, 7, &task) ==
          VLDCOP_OK);
  REQUIRE(task != nullptr);
  CHECK(vldcop_task_validate(task) == VLDCOP_OK);

  char* text = nullptr;
  REQUIRE(vldcop_task_text(task, &text) == VLDCOP_OK);
  std::string doc = take(text);
  CHECK_FALSE(doc.empty());

  char* summary = nullptr;
  REQUIRE(vldcop_task_summary(task, &summary) == VLDCOP_OK);
  std::string line = take(summary);
  CHECK(line.find("ldgc") != std::string::npos);
  CHECK(line.find("10") != std::string::npos);

  fs::path dir = temp_dir("task");
  fs::path path = dir / "task.txt";
  REQUIRE(vldcop_task_save(task, path.string().c_str()) == VLDCOP_OK);

  vldcop_task* loaded = nullptr;
  REQUIRE(vldcop_task_load(path.string().c_str(), &loaded) == VLDCOP_OK);
  char* text2 = nullptr;
  REQUIRE(vldcop_task_text(loaded, &text2) == VLDCOP_OK);
  CHECK(take(text2) == doc);

  CHECK(vldcop_validate_file(path.string().c_str()) == VLDCOP_OK);

  vldcop_task_free(loaded);
  vldcop_task_free(task);
  fs::remove_all(dir);
}

TEST_CASE("task export writes per-agent instruction files") {
  vldcop_task* task = nullptr;
  REQUIRE(vldcop_task_generate("vldgc", "random", 6, 9, 3, 2, &task) ==
          VLDCOP_OK);
  fs::path dir = temp_dir("export");
  REQUIRE(vldcop_task_export(task, dir.string().c_str()) == VLDCOP_OK);
  CHECK(fs::exists(dir / "task.txt"));
  int instructions = 0, charts = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.find("_instructions.txt") != std::string::npos) ++instructions;
    if (name.find(".svg") != std::string::npos) ++charts;
  }
  CHECK(instructions == 6);
  CHECK(charts == 6);
  vldcop_task_free(task);
  fs::remove_all(dir);
}

TEST_CASE("bad arguments produce EINVAL and a message") {
  vldcop_task* task = nullptr;
  CHECK(vldcop_task_generate("mystery", "random", 10, 23, 4, 7, &task) ==
        VLDCOP_EINVAL);
  CHECK(task == nullptr);
  CHECK(std::string(vldcop_last_error()).find("mystery") != std::string::npos);

  CHECK(vldcop_task_generate("ldgc", "random", 10, 2, 4, 7, &task) ==
        VLDCOP_EINVAL);
  CHECK(vldcop_task_generate(nullptr, "random", 10, 23, 4, 7, &task) ==
        VLDCOP_EINVAL);
  CHECK(vldcop_task_text(nullptr, nullptr) == VLDCOP_EINVAL);

  vldcop_task* loaded = nullptr;
  CHECK(vldcop_task_load("/nonexistent/task.txt", &loaded) != VLDCOP_OK);
  CHECK(loaded == nullptr);
}

TEST_CASE("run lifecycle through the c api") {
  nlohmann::json cfg{{"benchmark", "ldgc"},
                     {"archetype", "fmc-dsa"},
                     {"adapter", {{"kind", "scripted"}}},
                     {"iterations", 20},
                     {"instance_seed", 5},
                     {"run_seed", 9}};
  vldcop_run* run = nullptr;
  REQUIRE(vldcop_run_execute(cfg.dump().c_str(), &run) == VLDCOP_OK);
  REQUIRE(run != nullptr);

  char* text = nullptr;
  REQUIRE(vldcop_run_text(run, &text) == VLDCOP_OK);
  std::string log = take(text);
  CHECK(log.find("\"record\":\"header\"") != std::string::npos);
  CHECK(log.find("\"record\":\"summary\"") != std::string::npos);

  char* mtext = nullptr;
  REQUIRE(vldcop_run_metrics(run, &mtext) == VLDCOP_OK);
  nlohmann::json m = nlohmann::json::parse(take(mtext));
  CHECK(m.contains("mean_cost"));
  CHECK(m.contains("anytime_cost"));
  CHECK(m.at("total_queries").get<long>() == 2 * 23 + 10 * 20);

  fs::path dir = temp_dir("run");
  fs::path path = dir / "run.jsonl";
  REQUIRE(vldcop_run_save(run, path.string().c_str()) == VLDCOP_OK);
  CHECK(vldcop_validate_file(path.string().c_str()) == VLDCOP_OK);

  vldcop_run* loaded = nullptr;
  REQUIRE(vldcop_run_load(path.string().c_str(), &loaded) == VLDCOP_OK);
  char* text2 = nullptr;
  REQUIRE(vldcop_run_text(loaded, &text2) == VLDCOP_OK);
  CHECK(take(text2) == log);

  vldcop_run_free(loaded);
  vldcop_run_free(run);
  fs::remove_all(dir);
}

TEST_CASE("malformed run configs are rejected") {
  vldcop_run* run = nullptr;
  CHECK(vldcop_run_execute("not json", &run) == VLDCOP_EINVAL);
  CHECK(run == nullptr);
  CHECK(vldcop_run_execute("{\"archetype\":\"hillclimb\"}", &run) ==
        VLDCOP_EINVAL);
  CHECK(vldcop_run_execute(nullptr, &run) == VLDCOP_EINVAL);
}

TEST_CASE("report and distill export through the c api") {
  fs::path dir = temp_dir("report");
  std::vector<std::string> paths;
  for (int seed = 0; seed < 3; ++seed) {
    nlohmann::json cfg{{"benchmark", "ldgc"},
                       {"archetype", "fmc-dsa"},
                       {"adapter", {{"kind", "scripted"}}},
                       {"iterations", 15},
                       {"instance_seed", 1},
                       {"run_seed", seed},
                       {"capture", true}};
    vldcop_run* run = nullptr;
    REQUIRE(vldcop_run_execute(cfg.dump().c_str(), &run) == VLDCOP_OK);
    fs::path p = dir / ("run" + std::to_string(seed) + ".jsonl");
    REQUIRE(vldcop_run_save(run, p.string().c_str()) == VLDCOP_OK);
    vldcop_run_free(run);
    paths.push_back(p.string());
  }
  std::vector<const char*> cpaths;
  for (const auto& p : paths) cpaths.push_back(p.c_str());

  fs::path out = dir / "report";
  REQUIRE(vldcop_report(cpaths.data(), cpaths.size(), out.string().c_str()) ==
          VLDCOP_OK);
  CHECK(fs::exists(out / "aggregate.csv"));
  CHECK(fs::exists(out / "cost_curves.svg"));

  long count = 0;
  fs::path pairs = dir / "pairs.jsonl";
  REQUIRE(vldcop_export_distill(cpaths.data(), cpaths.size(), "get-max-action",
                                100, pairs.string().c_str(), &count) ==
          VLDCOP_OK);
  CHECK(count == 100);
  CHECK(fs::exists(pairs));

  // over-budget request fails cleanly
  CHECK(vldcop_export_distill(cpaths.data(), cpaths.size(), "get-max-action",
                              1000000, pairs.string().c_str(), &count) !=
        VLDCOP_OK);
  fs::remove_all(dir);
}

TEST_CASE("validate_file flags corrupted inputs") {
  fs::path dir = temp_dir("validate");
  fs::path bad = dir / "bad.txt";
  std::ofstream(bad) << "this is neither a task nor a run log\n";
  CHECK(vldcop_validate_file(bad.string().c_str()) != VLDCOP_OK);
  CHECK(vldcop_validate_file("/nonexistent/file") != VLDCOP_OK);
  fs::remove_all(dir);
}
