#ifndef COBBLE_EXTERNAL_HPP_
#define COBBLE_EXTERNAL_HPP_

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "cobble/prover.hpp"

namespace cobble {

// Adapter for a real prover wrapped as a child process. The child speaks a
// line protocol on stdin/stdout, one JSON object per line:
//
//   -> {"op":"start","statement":S}        <- {"status":"ok","goals":1}
//   -> {"op":"add","text":T}               <- {"status":"ok","goals":N}
//                                          <- {"status":"error","message":M}
//   -> {"op":"cancel"}                     <- {"status":"ok","goals":N}
//   -> {"op":"focus"} / {"op":"unfocus"}   <- like add
//   -> {"op":"goals"}                      <- {"value":N}
//   -> {"op":"complete"}                   <- {"value":true|false}
//   -> {"op":"text"}                       <- {"value":"..."}
//
// The child is linear (add/cancel), so this adapter implements the snapshot
// protocol on top: it remembers the op path behind every token and, when
// asked to run from an older token, cancels back to the common ancestor and
// replays forward. `cancel` must undo exactly one successful add/focus/
// unfocus. Errors must not consume an undo step.
//
// Per-sentence timeout: if the child does not answer within
// SessionConfig.sentence_timeout_ms, the call returns an error outcome and
// the child is killed; subsequent calls throw SessionDeadError.
//
// This adapter is exercised via recorded transcripts, not in CI.
class ExternalProcessSession : public ProverSession {
 public:
  ExternalProcessSession(const std::string& command, const std::string& statement,
                         SessionConfig config = {});
  ~ExternalProcessSession() override;

  ExternalProcessSession(const ExternalProcessSession&) = delete;
  ExternalProcessSession& operator=(const ExternalProcessSession&) = delete;

  StateId initial_state() override;
  SessionOutcome run_sentence(StateId from, const std::string& sentence) override;
  // Widens the poll deadline for this one call (hammer runs get more time
  // than plain tactics; the budget covers any snapshot replay it triggers).
  SessionOutcome run_sentence_within(StateId from, const std::string& sentence,
                                     int timeout_ms) override;
  SessionOutcome focus_next_goal(StateId from) override;
  SessionOutcome unfocus(StateId from) override;
  bool check_complete(StateId state) override;
  int goal_count(StateId state) override;
  std::string goal_text(StateId state) override;

 private:
  struct Step {
    enum Kind { Add, Focus, Unfocus } kind;
    std::string text;  // Add only
  };

  std::string request(const std::string& line);  // one round trip
  void sync_to(StateId token);                   // cancel/replay to a snapshot
  SessionOutcome step_from(StateId from, Step step);
  void kill_child(const std::string& why);

  SessionConfig config_;
  int active_timeout_ms_ = 0;  // deadline for the call in flight
  int child_pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string read_buffer_;
  bool dead_ = false;
  std::string death_reason_;

  std::map<StateId, std::vector<Step>> paths_;  // token -> ops from the root
  StateId current_ = 0;                         // token the child is at now
  std::map<StateId, int> cached_goals_;
  StateId next_token_ = 1;

  // the child is assumed deterministic (snapshot sync relies on it), so a
  // step repeated from the same token returns its original outcome without
  // another round trip; transcripts stay closed under replay
  std::map<std::tuple<StateId, int, std::string>, SessionOutcome> step_memo_;
};

}  // namespace cobble

#endif  // COBBLE_EXTERNAL_HPP_
