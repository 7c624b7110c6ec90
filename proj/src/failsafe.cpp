#include "cobble/failsafe.hpp"

#include "cobble/errors.hpp"

namespace cobble {

ResultClass classify(const FailSafeResult& result) {
  if (!result.prefix_succeeds) return ResultClass::Failure;
  for (const FailSafeResult& child : result.subproof_results) {
    if (classify(child) != ResultClass::Success) return ResultClass::PartialSuccess;
  }
  return ResultClass::Success;
}

int count_failures(const FailSafeResult& result) {
  int n = classify(result) == ResultClass::Failure ? 1 : 0;
  for (const FailSafeResult& child : result.subproof_results) {
    n += count_failures(child);
  }
  return n;
}

std::optional<DecomposingPrefix> find_decomposing_prefix(
    const std::vector<Sentence>& sentences, ProverSession& session, StateId from) {
  std::vector<SessionOutcome> outcomes;
  StateId cur = from;
  for (const Sentence& s : sentences) {
    if (s.kind == SentenceKind::Admit) break;  // a hole, not progress
    SessionOutcome o = session.run_sentence(cur, s.text);
    if (!o.ok()) break;
    outcomes.push_back(o);
    cur = o.state;
  }
  for (std::size_t k = outcomes.size(); k >= 1; --k) {
    if (outcomes[k - 1].goals_remaining >= 2) {
      return DecomposingPrefix{k, outcomes[k - 1].goals_remaining,
                               outcomes[k - 1].state};
    }
  }
  return std::nullopt;
}

std::vector<ProofScript> fix_subproof_count(int goals,
                                            std::vector<ProofScript> subproofs) {
  if (goals < static_cast<int>(subproofs.size())) {
    subproofs.resize(static_cast<std::size_t>(goals));
  }
  while (static_cast<int>(subproofs.size()) < goals) {
    ProofScript placeholder;
    placeholder.prefix.push_back(make_sentence("admit."));
    subproofs.push_back(std::move(placeholder));
  }
  return subproofs;
}

namespace {

struct NodeRun {
  FailSafeResult result;
  StateId closed = 0;  // this focus level fully closed (proven or admitted)
};

// Infrastructure steps the executor itself issues (focus, restoration admits,
// unfocus) must succeed; a backend refusing them cannot be worked around.
StateId must(const SessionOutcome& o, const char* what) {
  if (!o.ok()) {
    throw BackendError(std::string("fail-safe executor: ") + what +
                       " rejected: " + o.message);
  }
  return o.state;
}

FailSafeResult placeholder_at(StateId goal_state) {
  FailSafeResult node;
  node.entry_state = goal_state;
  node.end_state = goal_state;
  node.placeholder = true;
  node.prefix.push_back(
      {make_sentence("admit."), outcome_error(goal_state, "admit: unproven hole")});
  return node;
}

NodeRun run_node(const ProofScript& node, ProverSession& session, StateId entry) {
  NodeRun run;
  FailSafeResult& result = run.result;
  result.entry_state = entry;

  StateId cur = entry;
  std::size_t done = 0;
  bool failed = false;
  for (const Sentence& s : node.prefix) {
    if (failed) {
      result.prefix.push_back({s, std::nullopt});
      continue;
    }
    if (s.kind == SentenceKind::Admit) {
      result.prefix.push_back({s, outcome_error(cur, "admit: unproven hole")});
      failed = true;
      continue;
    }
    SessionOutcome o = session.run_sentence(cur, s.text);
    result.prefix.push_back({s, o});
    if (o.ok()) {
      cur = o.state;
      ++done;
    } else {
      failed = true;
    }
  }

  if (!failed) {
    result.prefix_succeeds = true;
    result.end_state = cur;
    int goals = done > 0 ? result.prefix[done - 1].outcome->goals_remaining
                         : session.goal_count(entry);
    result.goals_after_prefix = goals;

    std::size_t original = node.subproofs.size();
    std::vector<ProofScript> fixed = fix_subproof_count(goals, node.subproofs);
    StateId walk = cur;
    for (std::size_t i = 0; i < fixed.size(); ++i) {
      StateId focused = must(session.focus_next_goal(walk), "focus");
      if (i < original) {
        NodeRun child = run_node(fixed[i], session, focused);
        walk = must(session.unfocus(child.closed), "unfocus");
        result.subproof_results.push_back(std::move(child.result));
      } else {
        result.subproof_results.push_back(placeholder_at(focused));
        StateId admitted = must(session.run_sentence(focused, "admit."), "admit");
        walk = must(session.unfocus(admitted), "unfocus");
      }
    }
    run.closed = walk;
    return run;
  }

  // the prefix failed: salvage the longest recorded point with ≥2 goals
  std::size_t salvage = 0;
  for (std::size_t k = done; k >= 1; --k) {
    if (result.prefix[k - 1].outcome->goals_remaining >= 2) {
      salvage = k;
      break;
    }
  }

  if (salvage > 0) {
    // the decomposing prefix replaces the whole node; original subproofs are
    // dropped and every goal becomes an admit hole
    const SessionOutcome& at = *result.prefix[salvage - 1].outcome;
    int goals = at.goals_remaining;
    StateId state = at.state;
    result.prefix.resize(salvage);
    result.prefix_succeeds = true;
    result.end_state = state;
    result.goals_after_prefix = goals;
    StateId walk = state;
    for (int i = 0; i < goals; ++i) {
      StateId focused = must(session.focus_next_goal(walk), "focus");
      result.subproof_results.push_back(placeholder_at(focused));
      StateId admitted = must(session.run_sentence(focused, "admit."), "admit");
      walk = must(session.unfocus(admitted), "unfocus");
    }
    run.closed = walk;
    return run;
  }

  result.prefix_succeeds = false;
  result.end_state =
      done > 0 ? result.prefix[done - 1].outcome->state : entry;
  int remaining = done > 0 ? result.prefix[done - 1].outcome->goals_remaining
                           : session.goal_count(entry);
  StateId walk = result.end_state;
  for (int i = 0; i < remaining; ++i) {
    walk = must(session.run_sentence(walk, "admit."), "admit");
  }
  run.closed = walk;
  return run;
}

}  // namespace

FailSafeResult run_failsafe(const ProofScript& script, ProverSession& session,
                            StateId from) {
  return run_node(script, session, from).result;
}

ProofScript script_of_result(const FailSafeResult& result) {
  if (!result.prefix_succeeds) {
    throw AssemblyVerificationError(
        "result still contains an unrepaired failure node");
  }
  ProofScript node;
  for (const ExecutedSentence& es : result.prefix) {
    node.prefix.push_back(es.sentence);
  }
  for (const FailSafeResult& child : result.subproof_results) {
    node.subproofs.push_back(script_of_result(child));
  }
  return node;
}

StrictRun run_script_strict(const ProofScript& script, ProverSession& session,
                            StateId from) {
  StateId cur = from;
  for (const Sentence& s : script.prefix) {
    SessionOutcome o = session.run_sentence(cur, s.text);
    if (!o.ok()) return {false, cur, "'" + s.text + "': " + o.message};
    cur = o.state;
  }
  for (const ProofScript& sub : script.subproofs) {
    SessionOutcome f = session.focus_next_goal(cur);
    if (!f.ok()) return {false, cur, "bullet: " + f.message};
    StrictRun inner = run_script_strict(sub, session, f.state);
    if (!inner.ok) return inner;
    SessionOutcome u = session.unfocus(inner.final_state);
    if (!u.ok()) return {false, inner.final_state, "closing bullet: " + u.message};
    cur = u.state;
  }
  return {true, cur, ""};
}

namespace {

const char* class_name(ResultClass c) {
  switch (c) {
    case ResultClass::Success: return "success";
    case ResultClass::PartialSuccess: return "partial_success";
    case ResultClass::Failure: return "failure";
  }
  return "?";
}

void format_into(const FailSafeResult& r, int depth, std::string& out) {
  std::string ind(static_cast<std::size_t>(depth) * 2, ' ');
  out += ind + "[" + class_name(classify(r)) + "]";
  if (r.placeholder) out += " placeholder";
  if (r.prefix_succeeds) {
    out += " prefix ok, " + std::to_string(r.goals_after_prefix) + " goal(s)";
  }
  out += "\n";
  for (const ExecutedSentence& es : r.prefix) {
    out += ind + "  " + es.sentence.text + " ";
    if (!es.outcome) {
      out += "[not run]";
    } else if (es.outcome->ok()) {
      out += "[ok, " + std::to_string(es.outcome->goals_remaining) + " goal(s)]";
    } else {
      out += "[error: " + es.outcome->message + "]";
    }
    out += "\n";
  }
  for (const FailSafeResult& child : r.subproof_results) {
    format_into(child, depth + 1, out);
  }
}

}  // namespace

std::string format_result(const FailSafeResult& result) {
  std::string out;
  format_into(result, 0, out);
  return out;
}

}  // namespace cobble
