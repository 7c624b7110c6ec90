#include "cobble/oracles.hpp"

#include <cctype>
#include <set>

#include "cobble/errors.hpp"

namespace cobble {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_body(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// Tactic and vernacular words that never name a premise.
const std::set<std::string>& keyword_set() {
  static const std::set<std::string> kw = {
      "Proof", "Qed", "Admitted", "Abort",
      "intro", "intros", "split", "left", "right", "exact", "apply",
      "assumption", "destruct", "as", "in", "with", "idtac", "admit",
      "hammer", "reflexivity", "symmetry", "transitivity", "rewrite",
      "simpl", "unfold", "fold", "induction", "case", "contradiction",
      "exfalso", "trivial", "auto", "eauto", "tauto", "firstorder",
      "try", "repeat", "now", "constructor", "subst", "clear", "revert",
      "generalize", "specialize", "pose", "assert", "enough", "cut",
      "change", "remember", "inversion", "discriminate", "injection",
  };
  return kw;
}

}  // namespace

std::vector<std::string> extract_identifiers(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!ident_start(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && ident_body(text[j])) ++j;
    // absorb qualifiers: a dot glues only when an identifier follows it
    while (j + 1 < text.size() && text[j] == '.' && ident_start(text[j + 1])) {
      j += 2;
      while (j < text.size() && ident_body(text[j])) ++j;
    }
    out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> perfect_premises(
    const BenchmarkRecord& record,
    const std::map<std::string, std::string>& lemma_index) {
  if (!record.reference_proof) {
    throw MissingReferenceProofError("record " + record.id +
                                     " has no reference proof");
  }
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> taken;
  for (const std::string& token : extract_identifiers(*record.reference_proof)) {
    if (token == record.id) continue;
    if (keyword_set().count(token)) continue;
    auto hit = lemma_index.find(token);
    if (hit == lemma_index.end()) continue;
    if (!taken.insert(token).second) continue;
    out.emplace_back(hit->first, hit->second);
  }
  return out;
}

std::optional<ProofScript> perfect_decomposition(const BenchmarkRecord& record,
                                                 ProverSession& session) {
  if (!record.reference_proof) {
    throw MissingReferenceProofError("record " + record.id +
                                     " has no reference proof");
  }
  ProofScript reference = parse_script(*record.reference_proof);

  // the human's own structural prefix comes first
  {
    StateId state = session.initial_state();
    bool viable = !reference.prefix.empty();
    int goals = 1;
    for (const Sentence& s : reference.prefix) {
      if (!viable) break;
      if (s.kind == SentenceKind::Admit) {
        viable = false;
        break;
      }
      SessionOutcome o = session.run_sentence(state, s.text);
      if (!o.ok()) {
        viable = false;
        break;
      }
      state = o.state;
      goals = o.goals_remaining;
    }
    if (viable && goals >= 2) {
      ProofScript prefix;
      prefix.prefix = reference.prefix;
      return prefix;
    }
  }

  // otherwise the shortest flattened prefix that fans out
  std::vector<Sentence> flat = flatten_sentences(reference);
  StateId state = session.initial_state();
  std::vector<Sentence> kept;
  for (const Sentence& s : flat) {
    if (s.kind == SentenceKind::Admit) break;
    SessionOutcome o = session.run_sentence(state, s.text);
    if (!o.ok()) break;
    kept.push_back(s);
    state = o.state;
    if (o.goals_remaining >= 2) {
      ProofScript prefix;
      prefix.prefix = std::move(kept);
      return prefix;
    }
    if (o.goals_remaining == 0) break;  // closed outright, nothing to split
  }
  return std::nullopt;
}

}  // namespace cobble
