#ifndef COBBLE_MINI_PROVER_HPP_
#define COBBLE_MINI_PROVER_HPP_

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cobble/formula.hpp"
#include "cobble/prover.hpp"

namespace cobble {

// Theorem environment for the toy backend: declared atoms and constants,
// named lemmas usable via `apply <name>`, and the hammer fault knobs.
struct MiniEnvironment {
  std::set<std::string> atoms;
  std::set<std::string> constants;
  std::vector<std::pair<std::string, Formula>> lemmas;
  std::set<std::string> hammer_blocklist;  // hammer fails when the conclusion mentions these
  int hammer_max_atoms = 16;               // hammer fails on larger entailment problems
};

// Parses the JSON environment object from a benchmark record. Unknown keys
// are rejected. Throws EnvironmentError.
MiniEnvironment parse_environment(const std::string& json_text);

struct MiniGoal {
  std::vector<std::pair<std::string, Formula>> hypotheses;
  Formula conclusion;
};

// Deterministic propositional backend. Goals form a stack of focus frames;
// the visible goals are the top frame. Snapshots are whole-state copies kept
// in a token map, so every token stays live until the session dies.
class MiniProver : public ProverSession {
 public:
  // Throws EnvironmentError when the statement fails to elaborate (unknown
  // syntax, constants used as atoms, more than 16 atoms, ...).
  MiniProver(const std::string& statement, MiniEnvironment env);

  StateId initial_state() override;
  SessionOutcome run_sentence(StateId from, const std::string& sentence) override;
  SessionOutcome focus_next_goal(StateId from) override;
  SessionOutcome unfocus(StateId from) override;
  bool check_complete(StateId state) override;
  int goal_count(StateId state) override;
  std::string goal_text(StateId state) override;

  const Formula& theorem() const { return theorem_; }
  const MiniEnvironment& environment() const { return env_; }

 private:
  struct State {
    std::vector<std::vector<MiniGoal>> frames;  // back = current focus level
    bool tainted = false;                       // an admit happened on this path

    int visible() const {
      return frames.empty() ? 0 : static_cast<int>(frames.back().size());
    }
    int total() const {
      int n = 0;
      for (const auto& f : frames) n += static_cast<int>(f.size());
      return n;
    }
  };

  const State& at(StateId id) const;
  StateId store(State s);

  SessionOutcome run_uncached(StateId from, const std::string& sentence);
  SessionOutcome focus_uncached(StateId from);
  SessionOutcome unfocus_uncached(StateId from);

  MiniEnvironment env_;
  Formula theorem_;
  std::map<StateId, State> states_;
  StateId next_id_ = 1;

  // ops are pure over immutable snapshots, so rerunning one from an old
  // token hands back the original outcome (same token). Recorded transcripts
  // stay closed under replay this way.
  std::map<std::pair<StateId, std::string>, SessionOutcome> run_memo_;
  std::map<StateId, SessionOutcome> focus_memo_;
  std::map<StateId, SessionOutcome> unfocus_memo_;
};

// The hammer decision procedure, exposed for the equivalence test: true iff
// the hypotheses classically entail the conclusion by truth-table
// enumeration. Fault knobs are NOT applied here.
bool truth_table_entails(const std::vector<std::pair<std::string, Formula>>& hypotheses,
                         const Formula& conclusion);

}  // namespace cobble

#endif  // COBBLE_MINI_PROVER_HPP_
