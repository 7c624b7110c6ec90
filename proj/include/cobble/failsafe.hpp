#ifndef COBBLE_FAILSAFE_HPP_
#define COBBLE_FAILSAFE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cobble/prover.hpp"
#include "cobble/script.hpp"

namespace cobble {

struct ExecutedSentence {
  Sentence sentence;
  // nullopt: never executed (a prior sentence already failed). An admit
  // written by the generator is recorded as an error without being run: it
  // is an unproven hole to localize, not progress.
  std::optional<SessionOutcome> outcome;
};

enum class ResultClass { Success, PartialSuccess, Failure };

// The result structure of one fail-safe run. Invariants:
//   - prefix_succeeds=false implies subproof_results is empty
//   - placeholder implies prefix is exactly one admit sentence
//   - prefix_succeeds=true implies |subproof_results| == goals_after_prefix
struct FailSafeResult {
  std::vector<ExecutedSentence> prefix;
  bool prefix_succeeds = false;
  std::vector<FailSafeResult> subproof_results;
  StateId entry_state = 0;  // the subgoal's start; repair and recursion re-prove from here
  StateId end_state = 0;    // last good snapshot (post-prefix when it succeeded)
  bool placeholder = false; // synthesized single-admit hole
  int goals_after_prefix = 0;
};

// success iff prefix succeeded and every child is a success; failure iff the
// prefix failed (placeholders count as failures); partial success otherwise.
ResultClass classify(const FailSafeResult& result);

// Failure-classified nodes in the tree (the holes recursion must fill).
int count_failures(const FailSafeResult& result);

struct DecomposingPrefix {
  std::size_t length = 0;  // sentence count
  int goals = 0;           // ≥ 2
  StateId state = 0;       // snapshot after those sentences
};

// Longest proper prefix of `sentences` that executes from `from` without
// error and leaves ≥2 goals. Execution stops at the first failing sentence
// (admit sentences count as failures); the scan then walks backwards.
std::optional<DecomposingPrefix> find_decomposing_prefix(
    const std::vector<Sentence>& sentences, ProverSession& session, StateId from);

// Reconciles goal count vs subproof count: trims extras, appends single-admit
// placeholders for missing ones.
std::vector<ProofScript> fix_subproof_count(int goals, std::vector<ProofScript> subproofs);

// Executes `script` from `from`, skipping over errors: a failing subproof is
// closed with admit so its siblings still execute; a failing prefix is
// salvaged down to a decomposing prefix (original subproofs discarded, one
// placeholder child per goal) when one exists. Never corrupts `from`.
FailSafeResult run_failsafe(const ProofScript& script, ProverSession& session,
                            StateId from);

// Rebuilds the proof script a success-classified result stands for.
// Placeholder and failing nodes must have been repaired or replaced first.
ProofScript script_of_result(const FailSafeResult& result);

struct StrictRun {
  bool ok = false;
  StateId final_state = 0;
  std::string error;
};

// Plain execution with no skipping: any error outcome aborts. Drives
// focus/unfocus for bullets. The caller decides what the final state means
// (typically via check_complete).
StrictRun run_script_strict(const ProofScript& script, ProverSession& session,
                            StateId from);

// Human-readable tree dump for diagnostics (the `localize` subcommand).
std::string format_result(const FailSafeResult& result);

}  // namespace cobble

#endif  // COBBLE_FAILSAFE_HPP_
