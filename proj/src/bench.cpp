#include "cobble/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "cobble/errors.hpp"
#include "cobble/external.hpp"
#include "cobble/mini_prover.hpp"
#include "cobble/oracles.hpp"
#include "cobble/transcript.hpp"
#include "json.hpp"

namespace cobble {

using nlohmann::json;

double success_rate(const std::set<std::string>& proved, int total) {
  if (total <= 0) throw EmptyBenchmarkError("success rate over zero theorems");
  return static_cast<double>(proved.size()) / total;
}

double value_added(const std::set<std::string>& x_proved,
                   const std::set<std::string>& y_proved) {
  if (y_proved.empty()) {
    throw UndefinedBaselineError("value added over a tool that proves nothing");
  }
  int extra = 0;
  for (const std::string& id : x_proved) {
    if (!y_proved.count(id)) ++extra;
  }
  return static_cast<double>(extra) / static_cast<double>(y_proved.size());
}

std::string format_percent_1dp(double fraction) {
  long long tenths = std::llround(fraction * 1000.0);
  std::string sign = tenths < 0 ? "-" : "";
  if (tenths < 0) tenths = -tenths;
  return sign + std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

std::string format_percent_int(double fraction) {
  long long whole = std::llround(fraction * 100.0);
  return std::to_string(whole);
}

ToolSpec parse_tool(const std::string& name) {
  ToolSpec spec;
  spec.name = name;
  std::string rest = name;
  auto take_suffix = [&](const std::string& suffix) {
    if (rest.size() > suffix.size() &&
        rest.compare(rest.size() - suffix.size(), suffix.size(), suffix) == 0) {
      rest.resize(rest.size() - suffix.size());
      return true;
    }
    return false;
  };
  for (bool took = true; took;) {
    took = false;
    if (take_suffix("-nohammer")) spec.no_hammer = took = true;
    if (take_suffix("-perfprems")) spec.perfprems = took = true;
    if (take_suffix("-perfdecomp")) spec.perfdecomp = took = true;
  }
  if (rest != "cobblestone" && rest != "cot" && rest != "tbt") {
    throw std::invalid_argument("unknown tool: " + name);
  }
  spec.strategy = rest;
  return spec;
}

MiniEnvironment mini_environment_of(const BenchmarkRecord& record) {
  MiniEnvironment env = parse_environment(record.environment);
  // lemmas proven earlier in the file are in scope for `apply`
  for (const auto& [name, statement] : record.preceding_lemmas) {
    bool present = std::any_of(env.lemmas.begin(), env.lemmas.end(),
                               [&](const auto& l) { return l.first == name; });
    if (!present) env.lemmas.emplace_back(name, parse_formula(statement));
  }
  return env;
}

namespace {

std::string cell_transcript_path(const std::string& dir,
                                 const BenchmarkRecord& record,
                                 const ToolSpec& tool) {
  return dir + "/" + record.id + "." + tool.name + ".jsonl";
}

// Session plus whatever owns it.
struct SessionRig {
  std::unique_ptr<ProverSession> base;
  std::unique_ptr<RecordingSession> recorder;
  ProverSession* session = nullptr;
  FreshSessionFactory fresh;
};

SessionRig open_session(const BenchmarkRecord& record, const ToolSpec& tool,
                        const BenchConfig& config) {
  SessionRig rig;
  const BackendSpec& backend = config.backend;
  if (backend.kind == "mini") {
    MiniEnvironment env = mini_environment_of(record);
    rig.base = std::make_unique<MiniProver>(record.statement, env);
    std::string statement = record.statement;
    rig.fresh = [statement, env] {
      return std::make_unique<MiniProver>(statement, env);
    };
  } else if (backend.kind == "replay") {
    rig.base = std::make_unique<ReplaySession>(
        cell_transcript_path(backend.arg, record, tool));
    // no live prover: assembled proofs get the structural check only
  } else if (backend.kind == "external") {
    rig.base = std::make_unique<ExternalProcessSession>(backend.arg,
                                                        record.statement);
    std::string command = backend.arg;
    std::string statement = record.statement;
    rig.fresh = [command, statement] {
      return std::make_unique<ExternalProcessSession>(command, statement);
    };
  } else {
    throw std::invalid_argument("unknown backend: " + backend.kind);
  }

  rig.session = rig.base.get();
  if (!backend.record_dir.empty() && backend.kind != "replay") {
    rig.recorder = std::make_unique<RecordingSession>(
        *rig.base, cell_transcript_path(backend.record_dir, record, tool),
        record.statement);
    rig.session = rig.recorder.get();
  }
  return rig;
}

std::map<std::string, std::string> lemma_index_of(const BenchmarkRecord& record) {
  std::map<std::string, std::string> index;
  for (const auto& [name, statement] : record.preceding_lemmas) {
    index.emplace(name, statement);
  }
  return index;
}

}  // namespace

CellResult run_tool(const BenchmarkRecord& record, const ToolSpec& tool,
                    const BenchConfig& config) {
  CellResult cell;
  auto started = std::chrono::steady_clock::now();
  try {
    SessionRig rig = open_session(record, tool, config);

    std::unique_ptr<GeneratorBackend> generator;
    if (config.remote) {
      generator = std::make_unique<RemoteGenerator>(config.remote_config);
    } else if (!config.stub_path.empty()) {
      generator = std::make_unique<StubGenerator>(config.stub_path);
    }

    SynthesisOptions options = config.options;
    options.no_hammer = options.no_hammer || tool.no_hammer;

    TheoremMeta meta = meta_of_record(record);
    if (tool.perfprems) {
      if (record.oracle_premises) {
        meta.oracle_premises = *record.oracle_premises;
      } else if (record.reference_proof) {
        meta.oracle_premises = perfect_premises(record, lemma_index_of(record));
      }
    }

    std::optional<ProofScript> decomposition;
    if (tool.perfdecomp) {
      if (record.oracle_decomposition) {
        decomposition = parse_script(*record.oracle_decomposition);
      } else if (record.reference_proof && rig.fresh) {
        std::unique_ptr<ProverSession> probe = rig.fresh();
        decomposition = perfect_decomposition(record, *probe);
      }
    }

    Synthesizer synth(*rig.session, generator.get(), rig.fresh, options);
    SynthesisResult result;
    if (tool.strategy == "cobblestone") {
      result = synth.cobblestone(meta, decomposition);
    } else if (tool.strategy == "cot") {
      result = synth.chain_of_thought(meta);
    } else {
      result = synth.tactic_by_tactic(meta);
    }
    cell.trace = result.trace;
    if (result.proof) cell.proof = print_script(*result.proof);
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  if (config.timings) {
    cell.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  }
  return cell;
}

RunReport run_benchmark(const std::vector<BenchmarkRecord>& manifest,
                        const BenchConfig& config) {
  if (manifest.empty()) throw EmptyBenchmarkError("manifest has no records");
  std::vector<ToolSpec> tools;
  for (const std::string& name : config.tools) tools.push_back(parse_tool(name));
  if (tools.empty()) throw std::invalid_argument("no tools configured");

  // every record gets a private slot; workers never share state
  std::vector<std::map<std::string, CellResult>> slots(manifest.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= manifest.size()) return;
      for (const ToolSpec& tool : tools) {
        slots[i][tool.name] = run_tool(manifest[i], tool, config);
      }
    }
  };
  int jobs = std::max(1, config.jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  RunReport report;
  report.tool_order = config.tools;
  for (const ToolSpec& tool : tools) report.proved[tool.name];  // stable keys
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const std::string& id = manifest[i].id;
    report.theorem_order.push_back(id);
    for (auto& [tool, cell] : slots[i]) {
      if (cell.proof) report.proved[tool].insert(id);
      report.cells[id][tool] = std::move(cell);
    }
  }

  std::string echo = "tools=";
  for (std::size_t i = 0; i < config.tools.size(); ++i) {
    if (i) echo.push_back(',');
    echo += config.tools[i];
  }
  echo += " backend=" + config.backend.kind;
  echo += config.remote ? " generator=remote"
          : config.stub_path.empty() ? " generator=none"
                                     : " generator=stub:" + config.stub_path;
  echo += " seed=" + std::to_string(config.seed);
  echo += " depth=" + std::to_string(config.options.max_depth);
  echo += " invocations=" + std::to_string(config.options.invocations_max);
  echo += " samples=" + std::to_string(config.options.samples_max);
  echo += std::string(" timings=") + (config.timings ? "on" : "off");
  report.config_echo = echo;
  return report;
}

std::string report_to_json(const RunReport& report) {
  json doc;
  doc["config"] = report.config_echo;
  doc["tools"] = report.tool_order;
  doc["theorems"] = report.theorem_order;
  json proved = json::object();
  for (const auto& [tool, ids] : report.proved) {
    proved[tool] = std::vector<std::string>(ids.begin(), ids.end());
  }
  doc["proved"] = proved;
  json results = json::object();
  for (const auto& [id, per_tool] : report.cells) {
    json row = json::object();
    for (const auto& [tool, cell] : per_tool) {
      json entry;
      entry["proved"] = cell.proof.has_value();
      if (cell.proof) entry["proof"] = *cell.proof;
      if (!cell.error.empty()) entry["error"] = cell.error;
      entry["samples"] = cell.trace.samples_used;
      entry["invocations"] = cell.trace.invocations_used;
      entry["max_depth"] = cell.trace.max_depth_entered;
      entry["events"] = cell.trace.events;
      if (cell.wall_ms >= 0) entry["wall_ms"] = cell.wall_ms;
      row[tool] = entry;
    }
    results[id] = row;
  }
  doc["results"] = results;
  return doc.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ManifestError("report is not a JSON object");
  }
  RunReport report;
  try {
    report.config_echo = doc.value("config", std::string());
    report.tool_order = doc.at("tools").get<std::vector<std::string>>();
    report.theorem_order = doc.at("theorems").get<std::vector<std::string>>();
    for (const auto& [tool, ids] : doc.at("proved").items()) {
      std::set<std::string>& set = report.proved[tool];
      for (const json& id : ids) set.insert(id.get<std::string>());
    }
    if (doc.contains("results")) {
      for (const auto& [id, row] : doc["results"].items()) {
        for (const auto& [tool, entry] : row.items()) {
          CellResult cell;
          if (entry.contains("proof")) cell.proof = entry["proof"].get<std::string>();
          cell.error = entry.value("error", std::string());
          cell.trace.samples_used = entry.value("samples", 0);
          cell.trace.invocations_used = entry.value("invocations", 0);
          cell.trace.max_depth_entered = entry.value("max_depth", 0);
          if (entry.contains("events")) {
            cell.trace.events = entry["events"].get<std::vector<std::string>>();
          }
          cell.wall_ms = entry.value("wall_ms", -1);
          report.cells[id][tool] = std::move(cell);
        }
      }
    }
  } catch (const json::exception& e) {
    throw ManifestError(std::string("malformed report: ") + e.what());
  }
  return report;
}

std::string report_markdown(const RunReport& report) {
  int total = static_cast<int>(report.theorem_order.size());
  std::string out;
  out += "| tool | proved | success rate |\n";
  out += "|---|---|---|\n";
  for (const std::string& tool : report.tool_order) {
    auto hit = report.proved.find(tool);
    std::size_t n = hit == report.proved.end() ? 0 : hit->second.size();
    out += "| " + tool + " | " + std::to_string(n) + "/" + std::to_string(total) +
           " | " + format_percent_int(success_rate(
                       hit == report.proved.end() ? std::set<std::string>{}
                                                  : hit->second,
                       total)) +
           "% |\n";
  }
  if (report.tool_order.size() > 1) {
    const std::string& subject = report.tool_order.front();
    const std::set<std::string>& x = report.proved.at(subject);
    out += "\nvalue added of " + subject + ":\n\n";
    out += "| over | value added |\n";
    out += "|---|---|\n";
    for (std::size_t i = 1; i < report.tool_order.size(); ++i) {
      const std::string& other = report.tool_order[i];
      const std::set<std::string>& y = report.proved.at(other);
      std::string value;
      try {
        value = format_percent_1dp(value_added(x, y)) + "%";
      } catch (const UndefinedBaselineError&) {
        value = "n/a";
      }
      out += "| " + other + " | " + value + " |\n";
    }
  }
  return out;
}

}  // namespace cobble
