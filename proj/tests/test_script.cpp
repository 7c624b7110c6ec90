#include "cobble/script.hpp"

#include <random>
#include <string>
#include <vector>

#include "cobble/errors.hpp"
#include "doctest.h"

using namespace cobble;

TEST_CASE("single sentence") {
  ProofScript s = parse_script("reflexivity.");
  CHECK(s.prefix.size() == 1);
  CHECK(s.prefix[0].text == "reflexivity.");
  CHECK(s.prefix[0].kind == SentenceKind::Tactic);
  CHECK(s.subproofs.empty());
  CHECK_FALSE(s.had_proof_open);
  CHECK(s.closer == ScriptCloser::None);
}

TEST_CASE("wrapped script with two bullets") {
  ProofScript s = parse_script(
      "Proof. split; intro. - induction H. reflexivity. - subst. Qed.");
  CHECK(s.had_proof_open);
  CHECK(s.closer == ScriptCloser::Qed);
  REQUIRE(s.prefix.size() == 1);
  CHECK(s.prefix[0].text == "split; intro.");
  REQUIRE(s.subproofs.size() == 2);
  CHECK(s.subproofs[0].bullet_level == 1);
  CHECK(s.subproofs[0].bullet == "-");
  REQUIRE(s.subproofs[0].prefix.size() == 2);
  CHECK(s.subproofs[0].prefix[0].text == "induction H.");
  CHECK(s.subproofs[0].prefix[1].text == "reflexivity.");
  REQUIRE(s.subproofs[1].prefix.size() == 1);
  CHECK(s.subproofs[1].prefix[0].text == "subst.");
}

TEST_CASE("whitespace is collapsed inside sentences") {
  ProofScript s = parse_script("split;\n        intro.");
  REQUIRE(s.prefix.size() == 1);
  CHECK(s.prefix[0].text == "split; intro.");
}

TEST_CASE("dotted identifiers do not end a sentence") {
  ProofScript s = parse_script("apply Nat.add_comm.");
  REQUIRE(s.prefix.size() == 1);
  CHECK(s.prefix[0].text == "apply Nat.add_comm.");
}

TEST_CASE("comments are dropped, including nested ones") {
  ProofScript s = parse_script(
      "(* leading (* nested *) note *) split. (* mid *) - intro. - intro.");
  REQUIRE(s.prefix.size() == 1);
  CHECK(s.prefix[0].text == "split.");
  CHECK(s.subproofs.size() == 2);
}

TEST_CASE("comment inside a sentence leaves a single gap") {
  ProofScript s = parse_script("split(* why not *); intro.");
  REQUIRE(s.prefix.size() == 1);
  CHECK(s.prefix[0].text == "split ; intro.");
}

TEST_CASE("string literals may hold periods and doubled quotes") {
  ProofScript s = parse_script("idtac \"done. really\"\"x\".");
  REQUIRE(s.prefix.size() == 1);
  CHECK(s.prefix[0].text == "idtac \"done. really\"\"x\".");
}

TEST_CASE("nested bullet levels with distinct runs") {
  ProofScript s = parse_script(
      "split.\n"
      "- split.\n"
      "-- exact HA.\n"
      "-- exact HB.\n"
      "- exact HC.");
  REQUIRE(s.subproofs.size() == 2);
  REQUIRE(s.subproofs[0].subproofs.size() == 2);
  CHECK(s.subproofs[0].subproofs[0].bullet == "--");
  CHECK(s.subproofs[0].subproofs[0].bullet_level == 2);
  CHECK(s.subproofs[1].prefix[0].text == "exact HC.");
}

TEST_CASE("mixed bullet characters nest") {
  ProofScript s = parse_script("split. - split. + a. + b. - c.");
  REQUIRE(s.subproofs.size() == 2);
  REQUIRE(s.subproofs[0].subproofs.size() == 2);
  CHECK(s.subproofs[0].subproofs[0].bullet == "+");
  CHECK(s.subproofs[1].prefix[0].text == "c.");
}

TEST_CASE("chained bullets open nested subproofs on one line") {
  ProofScript s = parse_script("- -- x.\n-- y.");
  REQUIRE(s.subproofs.size() == 1);
  CHECK(s.subproofs[0].prefix.empty());
  REQUIRE(s.subproofs[0].subproofs.size() == 2);
  CHECK(s.subproofs[0].subproofs[0].prefix[0].text == "x.");
  CHECK(s.subproofs[0].subproofs[1].prefix[0].text == "y.");
}

TEST_CASE("admit and hammer sentences are classified") {
  ProofScript s = parse_script("split. - admit. - hammer.");
  CHECK(s.subproofs[0].prefix[0].kind == SentenceKind::Admit);
  CHECK(s.subproofs[1].prefix[0].kind == SentenceKind::Hammer);
  CHECK(contains_admit(s));
  ProofScript t = parse_script("split. - hammer. - hammer.");
  CHECK_FALSE(contains_admit(t));
}

TEST_CASE("Admitted closer is recorded") {
  ProofScript s = parse_script("Proof. intro H. admit. Admitted.");
  CHECK(s.closer == ScriptCloser::Admitted);
  CHECK(contains_admit(s));
}

TEST_CASE("malformed scripts are rejected") {
  CHECK_THROWS_AS(parse_script(""), MalformedScriptError);
  CHECK_THROWS_AS(parse_script("   \n\t "), MalformedScriptError);
  CHECK_THROWS_AS(parse_script("(* only a comment *)"), MalformedScriptError);
  CHECK_THROWS_AS(parse_script("Proof. Qed."), MalformedScriptError);
  CHECK_THROWS_AS(parse_script("intro H"), MalformedScriptError);
  CHECK_THROWS_AS(parse_script("intro. Qed. extra."), MalformedScriptError);
  CHECK_THROWS_AS(parse_script("intro. Proof. x."), MalformedScriptError);
  CHECK_THROWS_AS(parse_script("(* open forever. intro."), MalformedScriptError);
  CHECK_THROWS_AS(parse_script("idtac \"no close."), MalformedScriptError);
  CHECK_THROWS_AS(parse_script("split. { intro. }"), MalformedScriptError);
  // a shorter run of an open bullet character matches nothing
  CHECK_THROWS_AS(parse_script("split. -- a. - b."), MalformedScriptError);
}

TEST_CASE("print renders one line per node") {
  ProofScript s = parse_script("split.\n- intro HA. split.\n-- exact HA.\n-- hammer.\n- hammer.");
  CHECK(print_script(s) ==
        "split.\n- intro HA. split.\n-- exact HA.\n-- hammer.\n- hammer.");
  PrintOptions wrap;
  wrap.wrap = true;
  CHECK(print_script(parse_script("intro."), wrap) == "Proof.\nintro.\nQed.");
}

TEST_CASE("print uses default bullets when none were recorded") {
  ProofScript root;
  root.prefix.push_back(make_sentence("split."));
  ProofScript a;
  a.prefix.push_back(make_sentence("exact H."));
  ProofScript b;
  b.prefix.push_back(make_sentence("hammer."));
  root.subproofs = {a, b};
  renumber_levels(root);
  CHECK(print_script(root) == "split.\n- exact H.\n- hammer.");
}

TEST_CASE("flatten follows print order") {
  ProofScript s = parse_script("split. - a. -- b. -- c. - d.");
  std::vector<Sentence> flat = flatten_sentences(s);
  REQUIRE(flat.size() == 5);
  CHECK(flat[0].text == "split.");
  CHECK(flat[1].text == "a.");
  CHECK(flat[2].text == "b.");
  CHECK(flat[3].text == "c.");
  CHECK(flat[4].text == "d.");
  CHECK(sentence_count(s) == 5);
}

TEST_CASE("structural equality ignores wrapper flags") {
  ProofScript a = parse_script("Proof. split. - x. - y. Qed.");
  ProofScript b = parse_script("split. - x. - y.");
  CHECK(structurally_equal(a, b));
  ProofScript c = parse_script("split. - x. - z.");
  CHECK_FALSE(structurally_equal(a, c));
  ProofScript d = parse_script("split. + x. + y.");
  CHECK_FALSE(structurally_equal(a, d));  // different bullet tokens
}

namespace {

ProofScript random_tree(std::mt19937& rng, int depth) {
  static const char* pool[] = {"intro H.",    "split.",      "reflexivity.",
                               "apply f_equal.", "assumption.", "left.",
                               "exact HB.",   "hammer.",     "destruct H as [A B]."};
  std::uniform_int_distribution<int> pick(0, 8);
  std::uniform_int_distribution<int> plen(1, 3);
  ProofScript node;
  int n = plen(rng);
  for (int i = 0; i < n; ++i) node.prefix.push_back(make_sentence(pool[pick(rng)]));
  if (depth > 0) {
    std::uniform_int_distribution<int> arity(0, 3);
    int kids = arity(rng);
    if (kids == 1) kids = 2;  // a single subproof never arises from splitting
    for (int i = 0; i < kids; ++i) {
      node.subproofs.push_back(random_tree(rng, depth - 1));
    }
  }
  return node;
}

}  // namespace

TEST_CASE("print and parse round-trip on random trees") {
  std::mt19937 rng(20240817);
  for (int i = 0; i < 200; ++i) {
    ProofScript tree = random_tree(rng, 3);
    renumber_levels(tree);
    std::string text = print_script(tree);
    ProofScript back = parse_script(text);
    CHECK(structurally_equal(tree, back));
    CHECK(print_script(back) == text);
  }
}
