#ifndef COBBLE_REPAIR_HPP_
#define COBBLE_REPAIR_HPP_

#include <optional>

#include "cobble/failsafe.hpp"
#include "cobble/prover.hpp"
#include "cobble/script.hpp"

namespace cobble {

// Wall-clock budgets for hammer attempts. The mini prover is total and
// ignores them; real backends get prover + reconstruction time as one
// deadline on the sentence.
struct HammerConfig {
  int prover_timeout_ms = 20000;
  int reconstruction_timeout_ms = 5000;

  int total_budget_ms() const {
    return prover_timeout_ms + reconstruction_timeout_ms;
  }
};

// Tries the hammer as the entire proof of the goal at `from`. Returns the
// one-sentence script when it closes the goal, nothing otherwise (timeouts
// included).
std::optional<ProofScript> try_hammer_entry(ProverSession& session, StateId from,
                                            const HammerConfig& config = {});

// Depth-first sweep over a fail-safe result: at every failure node
// (placeholder admit or failed body) the hammer runs from the node's entry
// snapshot; when it closes the goal the node is rewritten to the one-sentence
// success `hammer.`. Nodes the hammer cannot close are left untouched.
// Snapshots isolate trials, so the visit order is unobservable.
FailSafeResult repair_admits(FailSafeResult result, ProverSession& session,
                             const HammerConfig& config = {});

}  // namespace cobble

#endif  // COBBLE_REPAIR_HPP_
