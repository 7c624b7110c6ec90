#ifndef COBBLE_SYNTHESIZER_HPP_
#define COBBLE_SYNTHESIZER_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cobble/failsafe.hpp"
#include "cobble/generator.hpp"
#include "cobble/prover.hpp"
#include "cobble/repair.hpp"
#include "cobble/script.hpp"

namespace cobble {

// Shared across one theorem's entire search, recursion included.
struct BudgetLedger {
  int samples_used = 0;
  int samples_max = 20;
  int invocations_used = 0;
  int invocations_max = 5;

  bool can_sample() const { return samples_used < samples_max; }
  bool can_invoke() const { return invocations_used < invocations_max; }
};

struct SynthesisOptions {
  int max_depth = 5;
  int samples_max = 20;       // whole-theorem cap on generator draws
  int invocations_max = 5;    // four-sample rounds across the recursion
  bool no_hammer = false;     // drops entry hammer AND admit repair
  int token_limit = 8192;
  HammerConfig hammer;
};

// What actually happened, for budget checks and reports.
struct RunTrace {
  int samples_used = 0;
  int invocations_used = 0;
  int max_depth_entered = 0;  // 0 = top level only
  std::vector<std::string> events;
};

struct SynthesisResult {
  std::optional<ProofScript> proof;  // wrapped, admit-free, re-verified
  RunTrace trace;
};

// Makes a fresh session at the theorem's initial state, used to re-verify
// assembled proofs from scratch. May be empty (e.g. replayed transcripts,
// where no live prover exists); then the from-scratch check is skipped and
// only the structural zero-admit check runs.
using FreshSessionFactory = std::function<std::unique_ptr<ProverSession>()>;

// Flattens a success-classified result, wraps it in Proof./Qed., and
// re-executes it on `fresh` from its initial state. Throws
// AssemblyVerificationError when anything is left unproven — that signals an
// executor bug, never a normal miss.
ProofScript assemble_proof(const FailSafeResult& result, ProverSession& fresh);

// Wrap + verify for an already-flattened script (what assemble_proof does
// after script_of_result).
ProofScript finalize_proof(ProofScript script, ProverSession* fresh);

// One theorem, one session, one budget.
class Synthesizer {
 public:
  Synthesizer(ProverSession& session, GeneratorBackend* generator,
              FreshSessionFactory fresh_session, SynthesisOptions options);

  // The divide-and-conquer search. Per round: hammer at entry; sample one
  // candidate per prompt variant; fail-safe + repair each; recurse into the
  // failing subgoals of the best partial successes, splicing sub-proofs in.
  // `oracle_decomposition`, when given, replaces sampling at the top level:
  // its prefix is executed and its subgoals recursed directly.
  SynthesisResult cobblestone(
      const TheoremMeta& meta,
      const std::optional<ProofScript>& oracle_decomposition = std::nullopt);

  // Whole-proof sampling only: n draws cycling the variants, each checked by
  // plain execution. First success wins.
  SynthesisResult chain_of_thought(const TheoremMeta& meta, int n_samples = 10);

  // Stepwise search: at every state try hammer, then up to
  // `attempts_per_step` single-tactic predictions, recursing on the produced
  // goals with backtracking.
  SynthesisResult tactic_by_tactic(const TheoremMeta& meta, int max_steps = 20,
                                   int attempts_per_step = 3);

 private:
  struct StepResult {
    ProofScript script;
    StateId after = 0;  // focus level of entry, goal closed
  };

  std::optional<ProofScript> solve(const TheoremMeta& meta, StateId state,
                                   int depth_remaining,
                                   const ProofScript* oracle_prefix);
  std::optional<ProofScript> recurse_partials(
      const TheoremMeta& meta, std::vector<FailSafeResult> partials,
      int depth_remaining);
  std::optional<StepResult> tbt_goal(const TheoremMeta& meta, StateId state,
                                     int steps_left, int attempts_per_step);
  Candidate draw(const TheoremMeta& meta, StateId state, PromptVariant variant);
  void note(const std::string& event);

  ProverSession& session_;
  GeneratorBackend* generator_;
  FreshSessionFactory fresh_session_;
  SynthesisOptions options_;
  BudgetLedger ledger_;
  RunTrace trace_;
};

}  // namespace cobble

#endif  // COBBLE_SYNTHESIZER_HPP_
