#ifndef COBBLE_PROVER_HPP_
#define COBBLE_PROVER_HPP_

#include <cstdint>
#include <string>

namespace cobble {

// Snapshot token. Tokens stay valid for the life of the session; rollback is
// implicit (rerun from an older token).
using StateId = std::uint64_t;

enum class OutcomeStatus { Ok, Error };

// Result of one session step. Tactic-level failures are data, never
// exceptions; on error the originating snapshot stays usable.
struct SessionOutcome {
  OutcomeStatus status = OutcomeStatus::Error;
  int goals_remaining = 0;  // meaningful when ok
  std::string message;      // meaningful when error
  StateId state = 0;        // new snapshot when ok; the origin when error

  bool ok() const { return status == OutcomeStatus::Ok; }
};

inline SessionOutcome outcome_ok(StateId state, int goals) {
  SessionOutcome o;
  o.status = OutcomeStatus::Ok;
  o.state = state;
  o.goals_remaining = goals;
  return o;
}

inline SessionOutcome outcome_error(StateId origin, std::string message) {
  SessionOutcome o;
  o.status = OutcomeStatus::Error;
  o.state = origin;
  o.message = std::move(message);
  return o;
}

struct SessionConfig {
  int sentence_timeout_ms = 10000;  // per-sentence wall clock; timeout = error outcome
};

// One prover session holding immutable snapshots. A session is positioned at
// no particular state; every operation names its snapshot explicitly, so
// running from state s never disturbs anything later run from s.
//
// Callers must serialize operations on a session. Distinct sessions are
// independent.
class ProverSession {
 public:
  virtual ~ProverSession() = default;

  // Snapshot of the freshly opened theorem: exactly one goal.
  virtual StateId initial_state() = 0;

  // Executes one sentence against the first goal visible at `from`.
  virtual SessionOutcome run_sentence(StateId from, const std::string& sentence) = 0;

  // Same, with an explicit wall-clock budget (hammer calls get a bigger one
  // than plain tactics). Backends without real time limits ignore the hint.
  virtual SessionOutcome run_sentence_within(StateId from,
                                             const std::string& sentence,
                                             int timeout_ms) {
    (void)timeout_ms;
    return run_sentence(from, sentence);
  }

  // Focuses the first pending goal (bullets are never sent as text; the
  // executor drives focusing explicitly).
  virtual SessionOutcome focus_next_goal(StateId from) = 0;

  // Leaves a fully closed focus. Errors when the focused goal is still open.
  virtual SessionOutcome unfocus(StateId from) = 0;

  // True iff no goals remain AND no admit was executed on the path here.
  virtual bool check_complete(StateId state) = 0;

  // Goals visible at the current focus level.
  virtual int goal_count(StateId state) = 0;

  // Printable form of the first visible goal (hypotheses and conclusion),
  // used for prompts and diagnostics.
  virtual std::string goal_text(StateId state) = 0;
};

}  // namespace cobble

#endif  // COBBLE_PROVER_HPP_
