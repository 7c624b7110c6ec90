#include "doctest.h"

#include <fstream>

#include "cobble/errors.hpp"
#include "cobble/manifest.hpp"
#include "cobble/mini_prover.hpp"

using namespace cobble;

TEST_CASE("records survive a json round-trip") {
  BenchmarkRecord r;
  r.id = "T01";
  r.statement = "(A -> A) /\\ (B -> B)";
  r.definitions = {{"conj", "and intro"}};
  r.preceding_lemmas = {{"lem_a", "A -> A"}, {"lem_b", "B -> B"}};
  r.reference_proof = "Proof. split; intro.\n- exact H.\n- exact H. Qed.";
  r.environment = R"({"atoms":["A","B"],"hammer_blocklist":["A"]})";
  r.oracle_premises = {{{"lem_a", "A -> A"}}};
  r.oracle_decomposition = "split; intro.";

  BenchmarkRecord back = record_from_json(record_to_json(r));
  CHECK(back.id == r.id);
  CHECK(back.statement == r.statement);
  CHECK(back.definitions == r.definitions);
  CHECK(back.preceding_lemmas == r.preceding_lemmas);
  CHECK(back.reference_proof == r.reference_proof);
  CHECK(back.oracle_premises == r.oracle_premises);
  CHECK(back.oracle_decomposition == r.oracle_decomposition);
  // the environment text re-parses to the same knobs
  MiniEnvironment env = parse_environment(back.environment);
  CHECK(env.atoms == std::set<std::string>{"A", "B"});
  CHECK(env.hammer_blocklist == std::set<std::string>{"A"});
}

TEST_CASE("optional fields stay absent through the round-trip") {
  BenchmarkRecord r;
  r.id = "bare";
  r.statement = "A";
  BenchmarkRecord back = record_from_json(record_to_json(r));
  CHECK_FALSE(back.reference_proof.has_value());
  CHECK_FALSE(back.oracle_premises.has_value());
  CHECK_FALSE(back.oracle_decomposition.has_value());
  CHECK(back.definitions.empty());
  CHECK(back.preceding_lemmas.empty());
  CHECK(parse_environment(back.environment).atoms.empty());
}

TEST_CASE("manifest files load in order and write back identically") {
  std::string path = "manifest_roundtrip.jsonl";
  {
    std::ofstream out(path, std::ios::trunc);
    out << R"({"id":"T01","statement":"A \\/ ~A","environment":{"atoms":["A"]}})" << "\n";
    out << "\n";  // blank lines are fine
    out << R"({"id":"T02","statement":"B -> B","environment":{"atoms":["B"]}})" << "\n";
  }
  std::vector<BenchmarkRecord> records = load_manifest(path);
  REQUIRE(records.size() == 2);
  CHECK(records[0].id == "T01");
  CHECK(records[1].id == "T02");
  CHECK(records[1].statement == "B -> B");

  std::string copy = "manifest_copy.jsonl";
  save_manifest(records, copy);
  std::vector<BenchmarkRecord> again = load_manifest(copy);
  REQUIRE(again.size() == 2);
  CHECK(record_to_json(again[0]) == record_to_json(records[0]));
  CHECK(record_to_json(again[1]) == record_to_json(records[1]));
}

TEST_CASE("manifest loading rejects garbage") {
  std::string path = "manifest_bad.jsonl";

  auto write_and_load = [&](const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    out << content;
    out.close();
    return load_manifest(path);
  };

  CHECK_THROWS_AS((void)write_and_load("not json\n"), ManifestError);
  CHECK_THROWS_AS((void)write_and_load(R"({"statement":"A"})" "\n"), ManifestError);
  CHECK_THROWS_AS((void)write_and_load(R"({"id":"X"})" "\n"), ManifestError);
  CHECK_THROWS_AS((void)write_and_load(R"({"id":"X","statement":"A"})" "\n"
                                       R"({"id":"X","statement":"B"})" "\n"),
                  ManifestError);
  CHECK_THROWS_AS((void)load_manifest("no_such_file.jsonl"), ManifestError);
}

TEST_CASE("meta keeps the prompt-facing fields and leaves premises to the caller") {
  BenchmarkRecord r;
  r.id = "T03";
  r.statement = "C";
  r.definitions = {{"d", "text"}};
  r.preceding_lemmas = {{"lem", "B"}};
  r.oracle_premises = {{{"lem", "B"}}};
  TheoremMeta meta = meta_of_record(r);
  CHECK(meta.id == "T03");
  CHECK(meta.statement == "C");
  CHECK(meta.definitions == r.definitions);
  CHECK(meta.preceding_lemmas == r.preceding_lemmas);
  CHECK(meta.oracle_premises.empty());
}

TEST_CASE("the shipped benchmark corpus loads and every record is well-formed") {
  auto records = load_manifest(std::string(COBBLE_BENCH_DIR) + "/theorems.jsonl");
  REQUIRE(records.size() == 30);
  for (const BenchmarkRecord& r : records) {
    CAPTURE(r.id);
    // statement and lemmas must parse, and the environment + lemma merge must
    // produce a prover that accepts the theorem
    MiniEnvironment env = parse_environment(r.environment);
    for (const auto& [name, statement] : r.preceding_lemmas) {
      env.lemmas.emplace_back(name, parse_formula(statement));
    }
    CHECK_NOTHROW(MiniProver(r.statement, env));
    if (r.reference_proof) {
      CHECK(r.reference_proof->find("Qed.") != std::string::npos);
    }
  }
}
