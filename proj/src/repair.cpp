#include "cobble/repair.hpp"

namespace cobble {

std::optional<ProofScript> try_hammer_entry(ProverSession& session, StateId from,
                                            const HammerConfig& config) {
  SessionOutcome o =
      session.run_sentence_within(from, "hammer.", config.total_budget_ms());
  if (!o.ok() || o.goals_remaining != 0) return std::nullopt;
  ProofScript script;
  script.prefix.push_back(make_sentence("hammer."));
  return script;
}

namespace {

void repair_node(FailSafeResult& node, ProverSession& session,
                 const HammerConfig& config) {
  if (node.prefix_succeeds) {
    for (FailSafeResult& child : node.subproof_results) {
      repair_node(child, session, config);
    }
    return;
  }
  SessionOutcome o = session.run_sentence_within(node.entry_state, "hammer.",
                                                 config.total_budget_ms());
  if (!o.ok() || o.goals_remaining != 0) return;
  node.prefix.clear();
  node.prefix.push_back({make_sentence("hammer."), o});
  node.prefix_succeeds = true;
  node.goals_after_prefix = 0;
  node.end_state = o.state;
  node.placeholder = false;
  node.subproof_results.clear();
}

}  // namespace

FailSafeResult repair_admits(FailSafeResult result, ProverSession& session,
                             const HammerConfig& config) {
  repair_node(result, session, config);
  return result;
}

}  // namespace cobble
