#include "cobble/transcript.hpp"

#include "cobble/errors.hpp"
#include "json.hpp"

namespace cobble {

namespace {

using nlohmann::json;

json outcome_record(const char* op, StateId from, const std::string* text,
                    const SessionOutcome& o) {
  json j;
  j["op"] = op;
  j["from"] = from;
  if (text) j["text"] = *text;
  if (o.ok()) {
    j["status"] = "ok";
    j["state"] = o.state;
    j["goals"] = o.goals_remaining;
  } else {
    j["status"] = "error";
    j["message"] = o.message;
  }
  return j;
}

SessionOutcome outcome_from(const json& j, StateId origin) {
  if (j.at("status") == "ok") {
    return outcome_ok(j.at("state").get<StateId>(), j.at("goals").get<int>());
  }
  return outcome_error(origin, j.at("message").get<std::string>());
}

}  // namespace

RecordingSession::RecordingSession(ProverSession& inner, const std::string& path,
                                   const std::string& statement)
    : inner_(inner), out_(path, std::ios::trunc) {
  if (!out_) throw BackendError("cannot open transcript for writing: " + path);
  json j;
  j["op"] = "start";
  j["statement"] = statement;
  j["state"] = inner_.initial_state();
  j["goals"] = inner_.goal_count(inner_.initial_state());
  out_ << j.dump() << "\n" << std::flush;
}

StateId RecordingSession::initial_state() { return inner_.initial_state(); }

SessionOutcome RecordingSession::log_step(const char* op, StateId from,
                                          const std::string* text, SessionOutcome o) {
  out_ << outcome_record(op, from, text, o).dump() << "\n" << std::flush;
  return o;
}

SessionOutcome RecordingSession::run_sentence(StateId from, const std::string& sentence) {
  return log_step("run", from, &sentence, inner_.run_sentence(from, sentence));
}

SessionOutcome RecordingSession::run_sentence_within(StateId from,
                                                     const std::string& sentence,
                                                     int timeout_ms) {
  // the budget is not part of the replay key; the record looks like any run
  return log_step("run", from, &sentence,
                  inner_.run_sentence_within(from, sentence, timeout_ms));
}

SessionOutcome RecordingSession::focus_next_goal(StateId from) {
  return log_step("focus", from, nullptr, inner_.focus_next_goal(from));
}

SessionOutcome RecordingSession::unfocus(StateId from) {
  return log_step("unfocus", from, nullptr, inner_.unfocus(from));
}

bool RecordingSession::check_complete(StateId state) {
  bool v = inner_.check_complete(state);
  json j;
  j["op"] = "complete";
  j["state"] = state;
  j["value"] = v;
  out_ << j.dump() << "\n" << std::flush;
  return v;
}

int RecordingSession::goal_count(StateId state) {
  int v = inner_.goal_count(state);
  json j;
  j["op"] = "goals";
  j["state"] = state;
  j["value"] = v;
  out_ << j.dump() << "\n" << std::flush;
  return v;
}

std::string RecordingSession::goal_text(StateId state) {
  std::string v = inner_.goal_text(state);
  json j;
  j["op"] = "text";
  j["state"] = state;
  j["value"] = v;
  out_ << j.dump() << "\n" << std::flush;
  return v;
}

ReplaySession::ReplaySession(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BackendError("cannot open transcript: " + path);
  std::string line;
  std::size_t lineno = 0;
  bool saw_start = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw BackendError("transcript " + path + " line " + std::to_string(lineno) +
                         ": " + e.what());
    }
    const std::string op = j.at("op").get<std::string>();
    if (op == "start") {
      initial_ = j.at("state").get<StateId>();
      statement_ = j.value("statement", "");
      saw_start = true;
    } else if (op == "run") {
      StateId from = j.at("from").get<StateId>();
      runs_.emplace(std::make_pair(from, j.at("text").get<std::string>()),
                    outcome_from(j, from));
    } else if (op == "focus") {
      StateId from = j.at("from").get<StateId>();
      focuses_.emplace(from, outcome_from(j, from));
    } else if (op == "unfocus") {
      StateId from = j.at("from").get<StateId>();
      unfocuses_.emplace(from, outcome_from(j, from));
    } else if (op == "complete") {
      completes_.emplace(j.at("state").get<StateId>(), j.at("value").get<bool>());
    } else if (op == "goals") {
      counts_.emplace(j.at("state").get<StateId>(), j.at("value").get<int>());
    } else if (op == "text") {
      texts_.emplace(j.at("state").get<StateId>(), j.at("value").get<std::string>());
    } else {
      throw BackendError("transcript " + path + ": unknown op '" + op + "'");
    }
  }
  if (!saw_start) throw BackendError("transcript " + path + " has no start record");
}

StateId ReplaySession::initial_state() { return initial_; }

SessionOutcome ReplaySession::run_sentence(StateId from, const std::string& sentence) {
  auto it = runs_.find({from, sentence});
  if (it == runs_.end()) {
    throw SessionDeadError("transcript has no record for state " +
                           std::to_string(from) + " + '" + sentence + "'");
  }
  return it->second;
}

SessionOutcome ReplaySession::focus_next_goal(StateId from) {
  auto it = focuses_.find(from);
  if (it == focuses_.end()) {
    throw SessionDeadError("transcript has no focus record at state " +
                           std::to_string(from));
  }
  return it->second;
}

SessionOutcome ReplaySession::unfocus(StateId from) {
  auto it = unfocuses_.find(from);
  if (it == unfocuses_.end()) {
    throw SessionDeadError("transcript has no unfocus record at state " +
                           std::to_string(from));
  }
  return it->second;
}

bool ReplaySession::check_complete(StateId state) {
  auto it = completes_.find(state);
  if (it == completes_.end()) {
    throw SessionDeadError("transcript has no completeness record at state " +
                           std::to_string(state));
  }
  return it->second;
}

int ReplaySession::goal_count(StateId state) {
  auto it = counts_.find(state);
  if (it == counts_.end()) {
    throw SessionDeadError("transcript has no goal count at state " +
                           std::to_string(state));
  }
  return it->second;
}

std::string ReplaySession::goal_text(StateId state) {
  auto it = texts_.find(state);
  if (it == texts_.end()) {
    throw SessionDeadError("transcript has no goal text at state " +
                           std::to_string(state));
  }
  return it->second;
}

}  // namespace cobble
