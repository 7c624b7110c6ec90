#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "cobble/bench.hpp"
#include "cobble/errors.hpp"
#include "cobble/failsafe.hpp"
#include "cobble/mini_prover.hpp"

using namespace cobble;

namespace {

std::set<std::string> ids(int n, const std::string& prefix) {
  std::set<std::string> out;
  for (int i = 0; i < n; ++i) out.insert(prefix + std::to_string(i));
  return out;
}

// in-memory manifest exercising all four outcomes
std::vector<BenchmarkRecord> small_manifest() {
  std::vector<BenchmarkRecord> records;
  {
    BenchmarkRecord r;
    r.id = "T_hammer";
    r.statement = "A \\/ ~A";
    r.environment = R"({"atoms":["A"]})";
    records.push_back(r);
  }
  {
    BenchmarkRecord r;
    r.id = "T_cot";
    r.statement = "A -> A";
    r.environment = R"({"atoms":["A"],"hammer_blocklist":["A"]})";
    records.push_back(r);
  }
  {
    BenchmarkRecord r;
    r.id = "T_splice";
    r.statement = "(A -> ((B -> B) /\\ (C \\/ ~C))) /\\ (B -> B /\\ B)";
    r.environment = R"({"atoms":["A","B","C"],"hammer_blocklist":["A"]})";
    records.push_back(r);
  }
  {
    BenchmarkRecord r;
    r.id = "T_none";
    r.statement = "A /\\ B";  // not a tautology; nothing sound can close it
    r.environment = R"({"atoms":["A","B"]})";
    records.push_back(r);
  }
  return records;
}

std::string write_stub() {
  std::string path = "bench_stub.jsonl";
  std::ofstream out(path, std::ios::trunc);
  out << R"({"theorem":"T_hammer","reply":"no idea"})" << "\n";
  out << R"({"theorem":"T_cot","variant":"plain","sample":0,"phase":"proof","reply":"Proof. intro H. exact H. Qed."})" << "\n";
  out << R"({"theorem":"T_cot","reply":"no idea"})" << "\n";
  out << R"({"theorem":"T_splice","variant":"plain","sample":0,"phase":"proof","reply":"Proof. split. - bad_one. - bad_two. Qed."})" << "\n";
  out << R"({"theorem":"T_splice","variant":"plain","sample":4,"phase":"proof","reply":"Proof. intro HA. split. - intro HB. exact HB. - bad_y. Qed."})" << "\n";
  out << R"({"theorem":"T_splice","reply":"no idea"})" << "\n";
  out << R"({"theorem":"T_none","reply":"no idea"})" << "\n";
  return path;
}

BenchConfig stub_config(std::vector<std::string> tools) {
  BenchConfig config;
  config.tools = std::move(tools);
  config.stub_path = write_stub();
  return config;
}

}  // namespace

TEST_CASE("success rate matches the published cells") {
  CHECK(success_rate(ids(48, "t"), 100) == doctest::Approx(0.48));
  CHECK(format_percent_int(success_rate(ids(48, "t"), 100)) == "48");
  CHECK(format_percent_int(success_rate(ids(27, "t"), 100)) == "27");
  CHECK(success_rate({}, 5) == 0.0);
  CHECK_THROWS_AS((void)success_rate({}, 0), EmptyBenchmarkError);
}

TEST_CASE("value added matches the published cells") {
  // |X \ Y| = 34, |Y| = 17
  std::set<std::string> x = ids(34, "x");
  std::set<std::string> y = ids(17, "y");
  CHECK(format_percent_1dp(value_added(x, y)) == "200.0");

  // |X \ Y| = 11, |Y| = 27
  x = ids(11, "x");
  y = ids(27, "y");
  CHECK(format_percent_1dp(value_added(x, y)) == "40.7");

  CHECK(value_added(ids(5, "t"), ids(5, "t")) == 0.0);
  CHECK_THROWS_AS((void)value_added(ids(3, "x"), {}), UndefinedBaselineError);
}

TEST_CASE("percent formatting rounds halves away from zero") {
  CHECK(format_percent_1dp(0.71875) == "71.9");
  CHECK(format_percent_1dp(0.0) == "0.0");
  CHECK(format_percent_1dp(1.0) == "100.0");
  CHECK(format_percent_int(0.485) == "49");
  CHECK(format_percent_int(0.0) == "0");
}

TEST_CASE("metric algebra holds on overlapping sets") {
  std::set<std::string> y = {"a", "b", "c"};
  // X subset of Y iff zero value added
  CHECK(value_added({"a", "b"}, y) == 0.0);
  CHECK(value_added({"a", "d"}, y) > 0.0);
  // success rate is monotone under inclusion
  CHECK(success_rate({"a"}, 10) < success_rate({"a", "b"}, 10));

  // union tools are plain set unions before the metrics
  std::set<std::string> tool_a = {"a", "d"};
  std::set<std::string> tool_b = {"b", "e"};
  std::set<std::string> all_prior;
  all_prior.insert(tool_a.begin(), tool_a.end());
  all_prior.insert(tool_b.begin(), tool_b.end());
  CHECK(all_prior.size() == 4);
  CHECK(value_added({"a", "b", "f"}, all_prior) == doctest::Approx(0.25));
}

TEST_CASE("tool names parse into strategy plus switches") {
  ToolSpec plain = parse_tool("cobblestone");
  CHECK(plain.strategy == "cobblestone");
  CHECK_FALSE(plain.no_hammer);

  ToolSpec ablated = parse_tool("cobblestone-nohammer");
  CHECK(ablated.strategy == "cobblestone");
  CHECK(ablated.no_hammer);

  ToolSpec stacked = parse_tool("cobblestone-perfprems-nohammer");
  CHECK(stacked.no_hammer);
  CHECK(stacked.perfprems);
  CHECK_FALSE(stacked.perfdecomp);

  CHECK(parse_tool("cot").strategy == "cot");
  CHECK(parse_tool("tbt").strategy == "tbt");
  CHECK(parse_tool("cobblestone-perfdecomp").perfdecomp);
  CHECK_THROWS_AS((void)parse_tool("sledgehammer"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_tool("-nohammer"), std::invalid_argument);
}

TEST_CASE("a benchmark run separates the strategies as constructed") {
  std::vector<BenchmarkRecord> manifest = small_manifest();
  BenchConfig config = stub_config({"cobblestone", "cot"});
  RunReport report = run_benchmark(manifest, config);

  CHECK(report.proved.at("cobblestone") ==
        std::set<std::string>{"T_hammer", "T_cot", "T_splice"});
  CHECK(report.proved.at("cot") == std::set<std::string>{"T_cot"});
  CHECK(report.theorem_order ==
        std::vector<std::string>{"T_hammer", "T_cot", "T_splice", "T_none"});

  // report soundness: every stored proof re-verifies from scratch
  for (const auto& [id, per_tool] : report.cells) {
    for (const auto& [tool, cell] : per_tool) {
      if (!cell.proof) continue;
      const BenchmarkRecord* record = nullptr;
      for (const BenchmarkRecord& r : manifest) {
        if (r.id == id) record = &r;
      }
      REQUIRE(record != nullptr);
      MiniProver fresh(record->statement, parse_environment(record->environment));
      StrictRun run = run_script_strict(parse_script(*cell.proof), fresh,
                                        fresh.initial_state());
      REQUIRE(run.ok);
      CHECK(fresh.check_complete(run.final_state));
    }
  }

  // the unprovable row carries traces, not errors
  CHECK(report.cells.at("T_none").at("cobblestone").error.empty());
  CHECK_FALSE(report.cells.at("T_none").at("cobblestone").proof.has_value());
}

TEST_CASE("an empty manifest refuses to run") {
  BenchConfig config = stub_config({"cobblestone"});
  CHECK_THROWS_AS((void)run_benchmark({}, config), EmptyBenchmarkError);
}

TEST_CASE("reports are byte-identical across runs and job counts") {
  std::vector<BenchmarkRecord> manifest = small_manifest();
  BenchConfig config = stub_config({"cobblestone", "cot", "tbt"});

  config.jobs = 1;
  std::string first = report_to_json(run_benchmark(manifest, config));
  std::string second = report_to_json(run_benchmark(manifest, config));
  CHECK(first == second);

  config.jobs = 8;
  std::string parallel = report_to_json(run_benchmark(manifest, config));
  CHECK(first == parallel);
}

TEST_CASE("reports round-trip through json") {
  std::vector<BenchmarkRecord> manifest = small_manifest();
  BenchConfig config = stub_config({"cobblestone", "cot"});
  RunReport report = run_benchmark(manifest, config);

  RunReport back = report_from_json(report_to_json(report));
  CHECK(back.proved == report.proved);
  CHECK(back.tool_order == report.tool_order);
  CHECK(back.theorem_order == report.theorem_order);
  CHECK(back.config_echo == report.config_echo);
  CHECK(report_to_json(back) == report_to_json(report));

  CHECK_THROWS_AS((void)report_from_json("not json"), ManifestError);
  CHECK_THROWS_AS((void)report_from_json("{}"), ManifestError);
}

TEST_CASE("markdown summarizes rates and value added") {
  std::vector<BenchmarkRecord> manifest = small_manifest();
  BenchConfig config = stub_config({"cobblestone", "cot"});
  RunReport report = run_benchmark(manifest, config);

  std::string md = report_markdown(report);
  CHECK(md.find("| cobblestone | 3/4 | 75% |") != std::string::npos);
  CHECK(md.find("| cot | 1/4 | 25% |") != std::string::npos);
  // X \ Y = {T_hammer, T_splice}, |Y| = 1 -> 200.0%
  CHECK(md.find("| cot | 200.0% |") != std::string::npos);
}

TEST_CASE("wall clocks appear only when asked for") {
  std::vector<BenchmarkRecord> manifest = {small_manifest()[0]};
  BenchConfig config = stub_config({"cobblestone"});
  RunReport plain = run_benchmark(manifest, config);
  CHECK(plain.cells.at("T_hammer").at("cobblestone").wall_ms == -1);
  CHECK(report_to_json(plain).find("wall_ms") == std::string::npos);

  config.timings = true;
  RunReport timed = run_benchmark(manifest, config);
  CHECK(timed.cells.at("T_hammer").at("cobblestone").wall_ms >= 0);
  CHECK(report_to_json(timed).find("wall_ms") != std::string::npos);
}

TEST_CASE("recorded sessions replay to the same results") {
  std::filesystem::create_directories("bench_rec");
  std::vector<BenchmarkRecord> manifest = small_manifest();

  BenchConfig live = stub_config({"cobblestone", "cot"});
  live.backend.record_dir = "bench_rec";
  RunReport live_report = run_benchmark(manifest, live);

  BenchConfig replay = stub_config({"cobblestone", "cot"});
  replay.backend.kind = "replay";
  replay.backend.arg = "bench_rec";
  RunReport replay_once = run_benchmark(manifest, replay);
  RunReport replay_twice = run_benchmark(manifest, replay);

  // replay runs are byte-identical to each other
  CHECK(report_to_json(replay_once) == report_to_json(replay_twice));

  // and agree with the live run on everything but the backend echo
  CHECK(replay_once.proved == live_report.proved);
  for (const auto& [id, per_tool] : live_report.cells) {
    for (const auto& [tool, cell] : per_tool) {
      CHECK(replay_once.cells.at(id).at(tool).proof == cell.proof);
      CHECK(replay_once.cells.at(id).at(tool).trace.samples_used ==
            cell.trace.samples_used);
    }
  }
}

TEST_CASE("per-cell failures never sink the run") {
  BenchmarkRecord broken;
  broken.id = "T_broken";
  broken.statement = "A ->";  // does not elaborate
  broken.environment = R"({"atoms":["A"]})";
  std::vector<BenchmarkRecord> manifest = {small_manifest()[0], broken};

  BenchConfig config = stub_config({"cobblestone"});
  RunReport report = run_benchmark(manifest, config);
  CHECK(report.proved.at("cobblestone") == std::set<std::string>{"T_hammer"});
  CHECK_FALSE(report.cells.at("T_broken").at("cobblestone").error.empty());
}
