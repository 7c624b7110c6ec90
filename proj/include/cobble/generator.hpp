#ifndef COBBLE_GENERATOR_HPP_
#define COBBLE_GENERATOR_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cobble/script.hpp"

namespace cobble {

// Two prompt dimensions: preceding-file context on/off, chain-of-thought
// on/off. Every sampling round draws one candidate per variant.
enum class PromptVariant { Plain, Context, Cot, ContextCot };

const std::array<PromptVariant, 4>& all_variants();
std::string variant_name(PromptVariant variant);
PromptVariant variant_from_name(const std::string& name);
bool variant_has_context(PromptVariant variant);
bool variant_is_cot(PromptVariant variant);

// Section headers. [[THEOREM STATEMENT]] is load-bearing for downstream
// parsing of prompts in fixtures; keep the table in sync with README.
inline constexpr const char* kHeaderTheorem = "[[THEOREM STATEMENT]]";
inline constexpr const char* kHeaderState = "[[PROOF STATE]]";
inline constexpr const char* kHeaderDefinitions = "[[DEFINITIONS]]";
inline constexpr const char* kHeaderPremises = "[[PREMISES]]";
inline constexpr const char* kHeaderContext = "[[CONTEXT]]";
inline constexpr const char* kHeaderReasoning = "[[REASONING]]";

// System messages per request kind.
inline constexpr const char* kSystemProof =
    "You are a proof engineer. Write a complete proof script for the stated "
    "theorem, starting with Proof. and ending with Qed.";
inline constexpr const char* kSystemReasoning =
    "You are a proof engineer. Think step by step about how the stated "
    "theorem could be proven. Describe a strategy; do not write the proof "
    "script yet.";
inline constexpr const char* kSystemTactic =
    "You are a proof engineer. Reply with exactly one tactic sentence to "
    "apply next to the first goal.";

struct PromptSection {
  std::string header;
  std::string body;
};

struct PromptBundle {
  std::string system_message;
  std::vector<PromptSection> user_sections;
  PromptVariant variant = PromptVariant::Plain;
  int token_limit = 8192;
};

// Everything about the theorem a prompt can mention. `oracle_premises` is
// filled only when the premises oracle is active.
struct TheoremMeta {
  std::string id;
  std::string statement;
  std::vector<std::pair<std::string, std::string>> definitions;
  std::vector<std::pair<std::string, std::string>> preceding_lemmas;
  std::vector<std::pair<std::string, std::string>> oracle_premises;
};

// Whitespace-delimited token estimate; long words count as
// ceil(length / chars_per_token). Only monotonicity matters here.
int approx_token_count(const std::string& text, int chars_per_token = 4);

// Assembles the sections for one request. Order: theorem statement, proof
// state, definitions, premises (when supplied), context (context variants),
// reasoning (when non-empty; used by the second chain-of-thought request).
//
// When the bundle exceeds token_limit, the context body loses words from its
// start until everything fits (the kept part is a literal suffix); a context
// reduced to nothing is dropped entirely. Throws PromptOverflowError only
// when the sections other than context already exceed the limit.
PromptBundle build_prompt(const TheoremMeta& meta, const std::string& proof_state,
                          PromptVariant variant, int token_limit = 8192,
                          const std::string& reasoning = "");

// Flattens user sections to one message body.
std::string render_user_message(const PromptBundle& bundle);

// One generator call. `phase` distinguishes the three request kinds:
// "proof", "reasoning" (first half of chain-of-thought), "tactic".
struct GeneratorRequest {
  std::string theorem_id;
  PromptVariant variant = PromptVariant::Plain;
  int sample_index = 0;
  std::string phase;
  std::string system_message;
  std::string user_text;
};

class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  virtual std::string complete(const GeneratorRequest& request) = 0;
};

// Scripted backend for tests and benchmarks. The fixture is JSONL; each line
// is {"theorem": id, "variant": name, "sample": n, "phase": p, "reply": text}.
// An optional "requires" string gates the line on the prompt containing that
// substring (how premise-aware replies get modeled); entries for one key are
// tried in file order. Lines carrying only {"theorem", "reply"} act as that
// theorem's fallback for any request without a served entry. A request
// matching neither throws BackendError — budget tests rely on running the
// script list dry.
class StubGenerator : public GeneratorBackend {
 public:
  explicit StubGenerator(const std::string& path);

  std::string complete(const GeneratorRequest& request) override;

  const std::vector<GeneratorRequest>& requests() const { return requests_; }

 private:
  struct Key {
    std::string theorem;
    std::string variant;
    int sample;
    std::string phase;
    bool operator<(const Key& other) const;
  };
  struct Entry {
    std::string requires_text;  // reply served only when the prompt contains it
    std::string reply;
  };
  std::map<Key, std::vector<Entry>> replies_;
  std::map<std::string, std::string> fallbacks_;
  std::vector<GeneratorRequest> requests_;
};

// Chat-completions client. Configuration only; never contacted by the test
// suite.
struct RemoteConfig {
  std::string base_url;       // e.g. https://api.example.com
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env = "GENERATOR_API_KEY";
  double temperature = 1.0;   // sampling temperature for every request
  int timeout_ms = 120000;
};

class RemoteGenerator : public GeneratorBackend {
 public:
  explicit RemoteGenerator(RemoteConfig config);
  std::string complete(const GeneratorRequest& request) override;

 private:
  RemoteConfig config_;
};

// One whole-proof draw.
struct Candidate {
  std::string raw_text;
  ProofScript script;  // meaningful iff parseable
  bool parseable = false;
  PromptVariant variant = PromptVariant::Plain;
  int sample_index = 0;
};

// Code fences stripped, then the slice from the first `Proof.` through the
// first following `Qed.`/`Admitted.` (whole text when no markers). Throws
// UnparseableError when nothing parses.
ProofScript extract_proof(const std::string& raw);

// Draws one candidate. Chain-of-thought variants make two requests: the
// reasoning pass, then the proof pass with the reasoning appended as its own
// section. Unparseable output yields a candidate with parseable=false.
Candidate sample_candidate(const TheoremMeta& meta, const std::string& proof_state,
                           PromptVariant variant, int sample_index,
                           GeneratorBackend& backend, int token_limit = 8192);

}  // namespace cobble

#endif  // COBBLE_GENERATOR_HPP_
