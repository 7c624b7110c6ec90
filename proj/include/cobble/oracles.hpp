#ifndef COBBLE_ORACLES_HPP_
#define COBBLE_ORACLES_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cobble/manifest.hpp"
#include "cobble/prover.hpp"
#include "cobble/script.hpp"

namespace cobble {

// Lemmas the reference proof leans on: names from `lemma_index` that occur
// as identifiers in the proof text (word-boundary match, dotted names match
// whole, tactic keywords and the theorem itself never count). Order = first
// occurrence. Throws MissingReferenceProofError.
std::vector<std::pair<std::string, std::string>> perfect_premises(
    const BenchmarkRecord& record,
    const std::map<std::string, std::string>& lemma_index);

// A decomposing prefix lifted from the reference proof: the reference's own
// root prefix when executing it leaves >= 2 goals, otherwise the shortest
// prefix of the flattened sentence list that does; none when the reference
// never decomposes. Throws MissingReferenceProofError.
std::optional<ProofScript> perfect_decomposition(const BenchmarkRecord& record,
                                                 ProverSession& session);

// Identifier tokens of `text` in order: maximal [A-Za-z_][A-Za-z0-9_']*
// runs, with dots absorbed when both sides are identifiers (M.f is one
// token).
std::vector<std::string> extract_identifiers(const std::string& text);

}  // namespace cobble

#endif  // COBBLE_ORACLES_HPP_
