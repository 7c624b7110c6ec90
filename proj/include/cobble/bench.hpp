#ifndef COBBLE_BENCH_HPP_
#define COBBLE_BENCH_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cobble/manifest.hpp"
#include "cobble/mini_prover.hpp"
#include "cobble/synthesizer.hpp"

namespace cobble {

// --- metrics ---------------------------------------------------------------

// |proved| / total. Throws EmptyBenchmarkError when total is 0.
double success_rate(const std::set<std::string>& proved, int total);

// |x \ y| / |y|. Throws UndefinedBaselineError when y is empty.
double value_added(const std::set<std::string>& x_proved,
                   const std::set<std::string>& y_proved);

// Rounded half away from zero, the way the figures print them.
std::string format_percent_1dp(double fraction);  // 0.71875 -> "71.9"
std::string format_percent_int(double fraction);  // 0.48 -> "48"

// --- tools -----------------------------------------------------------------

// A tool is a strategy name plus ablation/oracle suffixes, e.g.
// "cobblestone", "cot", "tbt", "cobblestone-nohammer",
// "cobblestone-perfprems", "cobblestone-perfdecomp".
struct ToolSpec {
  std::string name;
  std::string strategy;  // cobblestone | cot | tbt
  bool no_hammer = false;
  bool perfprems = false;
  bool perfdecomp = false;
};

ToolSpec parse_tool(const std::string& name);  // throws std::invalid_argument

// --- benchmark run ---------------------------------------------------------

struct BackendSpec {
  std::string kind = "mini";  // mini | replay | external
  std::string arg;            // replay: transcript dir; external: command line
  std::string record_dir;     // when set, live sessions are recorded here
};

struct BenchConfig {
  std::vector<std::string> tools = {"cobblestone"};
  BackendSpec backend;
  std::string stub_path;   // generator fixture; empty = remote
  bool remote = false;
  RemoteConfig remote_config;
  int jobs = 1;
  unsigned seed = 0;       // echoed into the report; stub runs are seed-free
  bool timings = false;    // wall clocks are noise, so they are opt-in
  SynthesisOptions options;
};

// One (theorem, tool) cell.
struct CellResult {
  std::optional<std::string> proof;  // wrapped script, re-verified
  RunTrace trace;
  std::string error;  // infrastructure failure for this cell, if any
  long long wall_ms = -1;  // filled only under timings
};

struct RunReport {
  std::vector<std::string> tool_order;             // config order
  std::vector<std::string> theorem_order;          // manifest order
  std::map<std::string, std::set<std::string>> proved;  // tool -> ids
  std::map<std::string, std::map<std::string, CellResult>> cells;  // id -> tool
  std::string config_echo;  // deterministic one-line summary
};

// Runs every configured tool on every record. Per-cell failures land in the
// cell's error field; the run itself only throws for an empty manifest or an
// unparseable config. Deterministic for stub/mini/replay backends, whatever
// the job count.
RunReport run_benchmark(const std::vector<BenchmarkRecord>& manifest,
                        const BenchConfig& config);

// One cell, shared by `bench` and `prove`.
CellResult run_tool(const BenchmarkRecord& record, const ToolSpec& tool,
                    const BenchConfig& config);

// The mini-prover environment a record runs in: the record's own environment
// plus every preceding lemma (those are in scope for `apply`). Use this to
// re-verify a reported proof outside a run.
MiniEnvironment mini_environment_of(const BenchmarkRecord& record);

// Deterministic serialization (object keys sorted, arrays in report order).
std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);  // throws ManifestError

// Success-rate rows for every tool plus value-added rows of the first tool
// over each of the others, markdown tables.
std::string report_markdown(const RunReport& report);

}  // namespace cobble

#endif  // COBBLE_BENCH_HPP_
