#ifndef COBBLE_TRANSCRIPT_HPP_
#define COBBLE_TRANSCRIPT_HPP_

#include <fstream>
#include <map>
#include <string>
#include <utility>

#include "cobble/prover.hpp"

namespace cobble {

// Wraps a live session and logs every call with its result, one JSON object
// per line. The file replays later through ReplaySession, so backends that
// are slow or absent (external processes) can be tested offline.
class RecordingSession : public ProverSession {
 public:
  // `statement` is stored in the opening record for provenance.
  RecordingSession(ProverSession& inner, const std::string& path,
                   const std::string& statement);

  StateId initial_state() override;
  SessionOutcome run_sentence(StateId from, const std::string& sentence) override;
  SessionOutcome run_sentence_within(StateId from, const std::string& sentence,
                                     int timeout_ms) override;
  SessionOutcome focus_next_goal(StateId from) override;
  SessionOutcome unfocus(StateId from) override;
  bool check_complete(StateId state) override;
  int goal_count(StateId state) override;
  std::string goal_text(StateId state) override;

 private:
  SessionOutcome log_step(const char* op, StateId from, const std::string* text,
                          SessionOutcome o);

  ProverSession& inner_;
  std::ofstream out_;
};

// Serves a recorded transcript. Only (state, input) pairs present in the file
// are answerable; anything else throws SessionDeadError with a diagnostic,
// which is exactly the property tests rely on (replay never invents results).
class ReplaySession : public ProverSession {
 public:
  explicit ReplaySession(const std::string& path);

  StateId initial_state() override;
  SessionOutcome run_sentence(StateId from, const std::string& sentence) override;
  SessionOutcome focus_next_goal(StateId from) override;
  SessionOutcome unfocus(StateId from) override;
  bool check_complete(StateId state) override;
  int goal_count(StateId state) override;
  std::string goal_text(StateId state) override;

  const std::string& statement() const { return statement_; }

 private:
  StateId initial_ = 0;
  std::string statement_;
  std::map<std::pair<StateId, std::string>, SessionOutcome> runs_;
  std::map<StateId, SessionOutcome> focuses_;
  std::map<StateId, SessionOutcome> unfocuses_;
  std::map<StateId, bool> completes_;
  std::map<StateId, int> counts_;
  std::map<StateId, std::string> texts_;
};

}  // namespace cobble

#endif  // COBBLE_TRANSCRIPT_HPP_
