#ifndef COBBLE_SCRIPT_HPP_
#define COBBLE_SCRIPT_HPP_

#include <string>
#include <vector>

namespace cobble {

enum class SentenceKind { Tactic, ProofOpen, ProofClose, Admit, Hammer };

// One prover command ending in a period, e.g. "split; intro." or "admit.".
struct Sentence {
  std::string text;
  SentenceKind kind = SentenceKind::Tactic;
};

// Builds a sentence from raw text: whitespace is collapsed and the kind is
// classified from the command word.
Sentence make_sentence(const std::string& raw);

enum class ScriptCloser { None, Qed, Admitted };

// A proof body as a prefix of sentences followed by bulleted subproofs.
// Each subproof proves one focused subgoal and is itself a ProofScript.
struct ProofScript {
  std::vector<Sentence> prefix;
  std::vector<ProofScript> subproofs;
  int bullet_level = 0;       // 0 at the root; children are parent + 1
  std::string bullet;         // token as written ("-", "--", "+", ...); empty = default
  // Wrapper flags, meaningful on the root only.
  bool had_proof_open = false;
  ScriptCloser closer = ScriptCloser::None;

  bool is_leaf() const { return subproofs.empty(); }
};

// The bullet token a node prints with: the recorded one, or '-' repeated
// bullet_level times when none was recorded.
std::string effective_bullet(const ProofScript& node);

// Splits a candidate proof body (with or without surrounding Proof./Qed.)
// into the prefix/subproof tree. Sentences end at a period followed by
// whitespace or EOF, skipping comments (* ... *) and string literals.
// Bullets -, +, * (and repetitions --, ---, ...) open subproofs; sibling
// subproofs share one token; deeper repetition of the same character nests
// deeper. Throws MalformedScriptError on unterminated comments/strings,
// empty input, brace focusing, bullet tokens that pop below any opened
// level, or content after the closer.
ProofScript parse_script(const std::string& script_text);

struct PrintOptions {
  bool wrap = false;  // force Proof. ... Qed. around a bare script
};

// Prints prefix sentences space-joined on one line, each subproof on its own
// line behind its bullet token, recursively. Scripts carrying their own
// opener/closer flags print wrapped regardless of opts.
std::string print_script(const ProofScript& script, const PrintOptions& opts = {});

/// Structural equality: sentence texts and kinds, effective bullet tokens,
// levels, and tree shape. Wrapper flags are ignored.
bool structurally_equal(const ProofScript& a, const ProofScript& b);

// Number of Sentence nodes in the tree.
std::size_t sentence_count(const ProofScript& script);

// All sentences in print order (prefix first, then each subproof).
std::vector<Sentence> flatten_sentences(const ProofScript& script);

// Recomputes bullet_level from the tree shape (root = given level).
void renumber_levels(ProofScript& script, int root_level = 0);

// True if any sentence in the tree is an admit.
bool contains_admit(const ProofScript& script);

}  // namespace cobble

#endif  // COBBLE_SCRIPT_HPP_
