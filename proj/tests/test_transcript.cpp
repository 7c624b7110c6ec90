#include "cobble/transcript.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cobble/errors.hpp"
#include "cobble/mini_prover.hpp"
#include "doctest.h"

using namespace cobble;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// drives a small proof, exercising every session op
void drive(ProverSession& s) {
  StateId s0 = s.initial_state();
  SessionOutcome split = s.run_sentence(s0, "split.");
  REQUIRE(split.ok());
  REQUIRE(s.goal_count(split.state) == 2);

  SessionOutcome bad = s.run_sentence(split.state, "reflexivity.");
  REQUIRE_FALSE(bad.ok());

  SessionOutcome f1 = s.focus_next_goal(split.state);
  REQUIRE(f1.ok());
  SessionOutcome h1 = s.run_sentence(f1.state, "hammer.");
  REQUIRE(h1.ok());
  SessionOutcome u1 = s.unfocus(h1.state);
  REQUIRE(u1.ok());

  SessionOutcome f2 = s.focus_next_goal(u1.state);
  REQUIRE(f2.ok());
  REQUIRE_FALSE(s.unfocus(f2.state).ok());  // still open
  SessionOutcome h2 = s.run_sentence(f2.state, "hammer.");
  REQUIRE(h2.ok());
  SessionOutcome u2 = s.unfocus(h2.state);
  REQUIRE(u2.ok());

  CHECK(s.goal_text(f2.state) == "============\nB \\/ ~B");
  CHECK(s.check_complete(u2.state));
  CHECK_FALSE(s.check_complete(s0));
}

}  // namespace

TEST_CASE("record then replay serves identical outcomes") {
  const char* path = "transcript_roundtrip.jsonl";
  const char* stmt = "(A \\/ ~A) /\\ (B \\/ ~B)";
  {
    MiniProver mini(stmt, MiniEnvironment{});
    RecordingSession rec(mini, path, stmt);
    drive(rec);
  }

  ReplaySession replay(path);
  CHECK(replay.statement() == stmt);
  CHECK(replay.initial_state() == 1);
  drive(replay);  // every call answered from the file, same results
  std::remove(path);
}

TEST_CASE("recording the same run twice is byte-identical") {
  const char* a = "transcript_a.jsonl";
  const char* b = "transcript_b.jsonl";
  const char* stmt = "A -> A";
  for (const char* path : {a, b}) {
    MiniProver mini(stmt, MiniEnvironment{});
    RecordingSession rec(mini, path, stmt);
    SessionOutcome o = rec.run_sentence(rec.initial_state(), "intro H.");
    REQUIRE(o.ok());
    o = rec.run_sentence(o.state, "exact H.");
    REQUIRE(o.ok());
    rec.check_complete(o.state);
  }
  CHECK(slurp(a) == slurp(b));
  std::remove(a);
  std::remove(b);
}

TEST_CASE("replay refuses pairs that were never recorded") {
  const char* path = "transcript_partial.jsonl";
  {
    MiniProver mini("A \\/ ~A", MiniEnvironment{});
    RecordingSession rec(mini, path, "A \\/ ~A");
    rec.run_sentence(rec.initial_state(), "hammer.");
  }
  ReplaySession replay(path);
  CHECK(replay.run_sentence(replay.initial_state(), "hammer.").ok());
  CHECK_THROWS_AS(replay.run_sentence(replay.initial_state(), "split."),
                  SessionDeadError);
  CHECK_THROWS_AS(replay.focus_next_goal(replay.initial_state()), SessionDeadError);
  CHECK_THROWS_AS(replay.check_complete(42), SessionDeadError);
  std::remove(path);
}

TEST_CASE("missing or broken transcript files are backend errors") {
  CHECK_THROWS_AS(ReplaySession{"no_such_file.jsonl"}, BackendError);
  const char* path = "transcript_broken.jsonl";
  {
    std::ofstream out(path);
    out << "this is not json\n";
  }
  CHECK_THROWS_AS(ReplaySession{path}, BackendError);
  std::remove(path);
  {
    std::ofstream out(path);  // valid lines but no start record
    out << R"({"op":"complete","state":1,"value":true})" << "\n";
  }
  CHECK_THROWS_AS(ReplaySession{path}, BackendError);
  std::remove(path);
}
