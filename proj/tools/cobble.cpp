// command-line front end: prove one theorem, run the benchmark grid, localize
// the failures in a hand-written script, extract oracle annotations, or
// re-render a stored report.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cobble/bench.hpp"
#include "cobble/errors.hpp"
#include "cobble/failsafe.hpp"
#include "cobble/manifest.hpp"
#include "cobble/mini_prover.hpp"
#include "cobble/oracles.hpp"
#include "cobble/script.hpp"

using namespace cobble;

namespace {

// --backend mini | replay:DIR | external:CMD
BackendSpec parse_backend(const std::string& text) {
  BackendSpec spec;
  auto colon = text.find(':');
  spec.kind = text.substr(0, colon);
  if (colon != std::string::npos) spec.arg = text.substr(colon + 1);
  if (spec.kind != "mini" && spec.kind != "replay" && spec.kind != "external") {
    throw CLI::ValidationError("--backend", "unknown backend: " + spec.kind);
  }
  if (spec.kind != "mini" && spec.arg.empty()) {
    throw CLI::ValidationError("--backend", spec.kind + " needs an argument, e.g. " +
                                                spec.kind + ":<path>");
  }
  return spec;
}

struct RunFlags {
  std::string backend = "mini";
  std::string generator;  // stub:FILE | remote | empty = none
  std::string record_dir;
  int jobs = 1;
  int seed = 0;
  bool timings = false;
  bool no_hammer = false;
  SynthesisOptions options;
  RemoteConfig remote;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags, bool with_jobs) {
  cmd->add_option("--backend", flags.backend,
                  "prover backend: mini | replay:DIR | external:CMD");
  cmd->add_option("--generator", flags.generator,
                  "sample source: stub:FILE | remote (default: none)");
  cmd->add_option("--record", flags.record_dir,
                  "write one session transcript per cell into this directory");
  if (with_jobs) cmd->add_option("--jobs", flags.jobs, "worker threads");
  cmd->add_option("--seed", flags.seed, "echoed into the report");
  cmd->add_flag("--timings", flags.timings, "measure wall time per cell");
  cmd->add_flag("--no-hammer", flags.no_hammer, "ablation: skip entry hammer and admit repair");
  cmd->add_option("--max-depth", flags.options.max_depth, "recursion depth cap");
  cmd->add_option("--max-invocations", flags.options.invocations_max,
                  "sampling rounds cap");
  cmd->add_option("--max-samples", flags.options.samples_max, "generator draw cap");
  cmd->add_option("--token-limit", flags.options.token_limit, "prompt token budget");
  cmd->add_option("--hammer-timeout-ms", flags.options.hammer.prover_timeout_ms,
                  "hammer proof search budget");
  cmd->add_option("--reconstruction-timeout-ms",
                  flags.options.hammer.reconstruction_timeout_ms,
                  "hammer reconstruction budget");
  cmd->add_option("--remote-url", flags.remote.base_url, "remote generator base URL");
  cmd->add_option("--remote-model", flags.remote.model, "remote generator model name");
  cmd->add_option("--remote-path", flags.remote.path, "remote generator API path");
}

BenchConfig config_from(const RunFlags& flags) {
  BenchConfig config;
  config.backend = parse_backend(flags.backend);
  config.backend.record_dir = flags.record_dir;
  if (flags.generator == "remote") {
    config.remote = true;
    config.remote_config = flags.remote;
  } else if (flags.generator.rfind("stub:", 0) == 0) {
    config.stub_path = flags.generator.substr(5);
  } else if (!flags.generator.empty()) {
    throw CLI::ValidationError("--generator", "unknown generator: " + flags.generator);
  }
  config.jobs = flags.jobs;
  config.seed = flags.seed;
  config.timings = flags.timings;
  config.options = flags.options;
  config.options.no_hammer = flags.no_hammer;
  return config;
}

const BenchmarkRecord& find_record(const std::vector<BenchmarkRecord>& records,
                                   const std::string& id) {
  for (const BenchmarkRecord& r : records) {
    if (r.id == id) return r;
  }
  throw ManifestError("no record with id " + id);
}

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_prove(const std::string& manifest_path, const std::string& id,
              const std::string& tool_name, const RunFlags& flags) {
  auto records = load_manifest(manifest_path);
  const BenchmarkRecord& record = find_record(records, id);
  CellResult cell = run_tool(record, parse_tool(tool_name), config_from(flags));
  if (!cell.error.empty()) {
    std::cerr << "error: " << cell.error << "\n";
    return 1;
  }
  for (const std::string& event : cell.trace.events) {
    std::cerr << "  " << event << "\n";
  }
  std::cerr << "samples " << cell.trace.samples_used << ", invocations "
            << cell.trace.invocations_used << ", depth "
            << cell.trace.max_depth_entered;
  if (cell.wall_ms >= 0) std::cerr << ", " << cell.wall_ms << " ms";
  std::cerr << "\n";
  if (cell.proof) {
    std::cout << *cell.proof << "\n";
  } else {
    std::cout << id << ": no proof found\n";
  }
  return 0;
}

int cmd_bench(const std::string& manifest_path, std::vector<std::string> tools,
              const std::string& out_path, const RunFlags& flags) {
  auto records = load_manifest(manifest_path);
  BenchConfig config = config_from(flags);
  if (!tools.empty()) config.tools = std::move(tools);
  RunReport report = run_benchmark(records, config);
  std::string json = report_to_json(report);
  if (out_path.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << json;
    std::cout << report_markdown(report) << "\n" << "report: " << out_path << "\n";
  }
  return 0;
}

int cmd_localize(const std::string& manifest_path, const std::string& id,
                 const std::string& statement, const std::string& env_json,
                 const std::string& script_path) {
  std::string theorem = statement;
  MiniEnvironment env;
  if (!manifest_path.empty() && !id.empty()) {
    auto records = load_manifest(manifest_path);
    const BenchmarkRecord& record = find_record(records, id);
    theorem = record.statement;
    env = mini_environment_of(record);
  } else if (!statement.empty()) {
    env = parse_environment(env_json);
  } else {
    std::cerr << "localize needs --manifest with --id, or --statement\n";
    return 2;
  }
  MiniProver prover(theorem, env);
  ProofScript script = parse_script(slurp(script_path));
  FailSafeResult result = run_failsafe(script, prover, prover.initial_state());
  std::cout << format_result(result);
  switch (classify(result)) {
    case ResultClass::Success: std::cout << "=> success\n"; break;
    case ResultClass::PartialSuccess:
      std::cout << "=> partial, " << count_failures(result) << " failing subgoal(s)\n";
      break;
    case ResultClass::Failure: std::cout << "=> failure\n"; break;
  }
  return 0;
}

int cmd_oracle_extract(const std::string& manifest_path, std::string out_path) {
  auto records = load_manifest(manifest_path);
  if (out_path.empty()) out_path = manifest_path;
  for (BenchmarkRecord& record : records) {
    if (!record.reference_proof) continue;
    std::map<std::string, std::string> index(record.preceding_lemmas.begin(),
                                             record.preceding_lemmas.end());
    auto premises = perfect_premises(record, index);
    if (!premises.empty()) record.oracle_premises = premises;
    MiniProver probe(record.statement, mini_environment_of(record));
    std::string decomposition_note = "no decomposition";
    if (auto decomposition = perfect_decomposition(record, probe)) {
      decomposition_note =
          "decomposition of " +
          std::to_string(flatten_sentences(*decomposition).size()) + " sentence(s)";
      decomposition->had_proof_open = false;  // store just the sentences
      record.oracle_decomposition = print_script(*decomposition);
    }
    std::cout << record.id << ": "
              << (record.oracle_premises ? record.oracle_premises->size() : 0)
              << " premise(s), " << decomposition_note << "\n";
  }
  save_manifest(records, out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_report(const std::string& path) {
  RunReport report = report_from_json(slurp(path));
  std::cout << report_markdown(report);
  if (!report.config_echo.empty()) std::cout << "\n" << report.config_echo << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divide-and-conquer proof synthesis over snapshot provers"};
  app.require_subcommand(1);

  // prove
  std::string manifest_path = "benchmarks/theorems.jsonl";
  std::string id, tool_name = "cobblestone";
  RunFlags prove_flags;
  CLI::App* prove = app.add_subcommand("prove", "synthesize one theorem");
  prove->add_option("id", id, "record id in the manifest")->required();
  prove->add_option("--manifest", manifest_path, "theorem manifest (jsonl)");
  prove->add_option("--tool", tool_name,
                    "strategy plus suffixes, e.g. cobblestone-nohammer");
  add_run_flags(prove, prove_flags, /*with_jobs=*/false);

  // bench
  std::string bench_manifest = "benchmarks/theorems.jsonl", out_path;
  std::vector<std::string> tools;
  RunFlags bench_flags;
  CLI::App* bench = app.add_subcommand("bench", "run the tool x theorem grid");
  bench->add_option("--manifest", bench_manifest, "theorem manifest (jsonl)");
  bench->add_option("--tools", tools, "comma-separated tool list")->delimiter(',');
  bench->add_option("--out", out_path, "write the JSON report here");
  add_run_flags(bench, bench_flags, /*with_jobs=*/true);

  // localize
  std::string loc_manifest, loc_id, loc_statement, loc_env = "{}", script_path;
  CLI::App* localize =
      app.add_subcommand("localize", "fail-safe run of a script, holes reported");
  localize->add_option("script", script_path, "script file, or - for stdin")
      ->required();
  localize->add_option("--manifest", loc_manifest, "theorem manifest (jsonl)");
  localize->add_option("--id", loc_id, "record id in the manifest");
  localize->add_option("--statement", loc_statement, "ad-hoc theorem statement");
  localize->add_option("--env", loc_env, "ad-hoc environment JSON");

  // oracle extract
  std::string oracle_manifest, oracle_out;
  CLI::App* oracle = app.add_subcommand("oracle", "oracle annotation tools");
  oracle->require_subcommand(1);
  CLI::App* extract = oracle->add_subcommand(
      "extract", "derive premises/decompositions from reference proofs");
  extract->add_option("--manifest", oracle_manifest, "theorem manifest (jsonl)")
      ->required();
  extract->add_option("--out", oracle_out, "write here instead of in place");

  // report
  std::string report_path;
  CLI::App* report = app.add_subcommand("report", "re-render a stored report");
  report->add_option("file", report_path, "report JSON, or - for stdin")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(prove)) {
      return cmd_prove(manifest_path, id, tool_name, prove_flags);
    }
    if (app.got_subcommand(bench)) {
      return cmd_bench(bench_manifest, tools, out_path, bench_flags);
    }
    if (app.got_subcommand(localize)) {
      return cmd_localize(loc_manifest, loc_id, loc_statement, loc_env, script_path);
    }
    if (app.got_subcommand(oracle)) {
      return cmd_oracle_extract(oracle_manifest, oracle_out);
    }
    if (app.got_subcommand(report)) {
      return cmd_report(report_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
