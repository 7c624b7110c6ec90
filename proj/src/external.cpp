#include "cobble/external.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <tuple>

#include "cobble/errors.hpp"
#include "json.hpp"

namespace cobble {

using nlohmann::json;

ExternalProcessSession::ExternalProcessSession(const std::string& command,
                                               const std::string& statement,
                                               SessionConfig config)
    : config_(config), active_timeout_ms_(config.sentence_timeout_ms) {
  int to_pipe[2];    // parent writes -> child stdin
  int from_pipe[2];  // child stdout -> parent reads
  if (pipe(to_pipe) != 0 || pipe(from_pipe) != 0) {
    throw BackendError("cannot create pipes for external prover");
  }
  child_pid_ = fork();
  if (child_pid_ < 0) throw BackendError("fork failed for external prover");
  if (child_pid_ == 0) {
    dup2(to_pipe[0], STDIN_FILENO);
    dup2(from_pipe[1], STDOUT_FILENO);
    close(to_pipe[0]);
    close(to_pipe[1]);
    close(from_pipe[0]);
    close(from_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_pipe[0]);
  close(from_pipe[1]);
  to_child_ = to_pipe[1];
  from_child_ = from_pipe[0];

  json start;
  start["op"] = "start";
  start["statement"] = statement;
  json reply = json::parse(request(start.dump()));
  if (reply.value("status", "error") != "ok") {
    kill_child("start rejected");
    throw EnvironmentError("external prover rejected the statement: " +
                           reply.value("message", "no message"));
  }
  paths_[next_token_] = {};
  cached_goals_[next_token_] = reply.value("goals", 1);
  current_ = next_token_;
  ++next_token_;
}

ExternalProcessSession::~ExternalProcessSession() {
  if (child_pid_ > 0) {
    kill(child_pid_, SIGTERM);
    int status = 0;
    waitpid(child_pid_, &status, 0);
  }
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
}

void ExternalProcessSession::kill_child(const std::string& why) {
  dead_ = true;
  death_reason_ = why;
  if (child_pid_ > 0) {
    kill(child_pid_, SIGKILL);
    int status = 0;
    waitpid(child_pid_, &status, 0);
    child_pid_ = -1;
  }
}

std::string ExternalProcessSession::request(const std::string& line) {
  if (dead_) throw SessionDeadError("external prover is gone: " + death_reason_);

  std::string payload = line + "\n";
  std::size_t written = 0;
  while (written < payload.size()) {
    ssize_t n = write(to_child_, payload.data() + written, payload.size() - written);
    if (n <= 0) {
      kill_child("write failed");
      throw SessionDeadError("external prover stopped reading");
    }
    written += static_cast<std::size_t>(n);
  }

  for (;;) {
    std::size_t nl = read_buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string reply = read_buffer_.substr(0, nl);
      read_buffer_.erase(0, nl + 1);
      return reply;
    }
    struct pollfd pfd;
    pfd.fd = from_child_;
    pfd.events = POLLIN;
    int pr = poll(&pfd, 1, active_timeout_ms_);
    if (pr == 0) {
      kill_child("timeout after " + std::to_string(active_timeout_ms_) + " ms");
      throw SessionDeadError("external prover timed out");
    }
    if (pr < 0) {
      kill_child("poll failed");
      throw SessionDeadError("external prover poll failed");
    }
    char buf[4096];
    ssize_t n = read(from_child_, buf, sizeof buf);
    if (n <= 0) {
      kill_child("eof");
      throw SessionDeadError("external prover closed its output");
    }
    read_buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

StateId ExternalProcessSession::initial_state() { return 1; }

// Rewind/replay the linear child until it sits at `token`'s path.
void ExternalProcessSession::sync_to(StateId token) {
  auto target_it = paths_.find(token);
  if (target_it == paths_.end()) {
    throw SessionDeadError("unknown snapshot token " + std::to_string(token));
  }
  const std::vector<Step>& target = target_it->second;
  const std::vector<Step>& at = paths_.at(current_);

  std::size_t common = 0;
  while (common < target.size() && common < at.size() &&
         at[common].kind == target[common].kind && at[common].text == target[common].text) {
    ++common;
  }
  for (std::size_t i = at.size(); i > common; --i) {
    json c;
    c["op"] = "cancel";
    json reply = json::parse(request(c.dump()));
    if (reply.value("status", "error") != "ok") {
      kill_child("cancel rejected");
      throw SessionDeadError("external prover rejected a cancel");
    }
  }
  for (std::size_t i = common; i < target.size(); ++i) {
    json r;
    switch (target[i].kind) {
      case Step::Add:
        r["op"] = "add";
        r["text"] = target[i].text;
        break;
      case Step::Focus: r["op"] = "focus"; break;
      case Step::Unfocus: r["op"] = "unfocus"; break;
    }
    json reply = json::parse(request(r.dump()));
    if (reply.value("status", "error") != "ok") {
      kill_child("replay diverged");
      throw SessionDeadError("external prover diverged on replay");
    }
  }
  current_ = token;
}

SessionOutcome ExternalProcessSession::step_from(StateId from, Step step) {
  if (dead_) throw SessionDeadError(death_reason_);
  auto key = std::make_tuple(from, static_cast<int>(step.kind), step.text);
  auto hit = step_memo_.find(key);
  if (hit != step_memo_.end()) return hit->second;
  sync_to(from);
  json r;
  switch (step.kind) {
    case Step::Add:
      r["op"] = "add";
      r["text"] = step.text;
      break;
    case Step::Focus: r["op"] = "focus"; break;
    case Step::Unfocus: r["op"] = "unfocus"; break;
  }
  json reply = json::parse(request(r.dump()));
  if (reply.value("status", "error") != "ok") {
    SessionOutcome o =
        outcome_error(from, reply.value("message", "external prover error"));
    step_memo_.emplace(std::move(key), o);
    return o;
  }
  StateId token = next_token_++;
  std::vector<Step> path = paths_.at(from);
  path.push_back(std::move(step));
  paths_[token] = std::move(path);
  current_ = token;
  int goals = reply.value("goals", 0);
  cached_goals_[token] = goals;
  SessionOutcome o = outcome_ok(token, goals);
  step_memo_.emplace(std::move(key), o);
  return o;
}

SessionOutcome ExternalProcessSession::run_sentence(StateId from,
                                                    const std::string& sentence) {
  return step_from(from, Step{Step::Add, sentence});
}

SessionOutcome ExternalProcessSession::run_sentence_within(
    StateId from, const std::string& sentence, int timeout_ms) {
  struct Restore {
    int* slot;
    int saved;
    ~Restore() { *slot = saved; }
  } restore{&active_timeout_ms_, active_timeout_ms_};
  active_timeout_ms_ = timeout_ms;
  return step_from(from, Step{Step::Add, sentence});
}

SessionOutcome ExternalProcessSession::focus_next_goal(StateId from) {
  return step_from(from, Step{Step::Focus, ""});
}

SessionOutcome ExternalProcessSession::unfocus(StateId from) {
  return step_from(from, Step{Step::Unfocus, ""});
}

bool ExternalProcessSession::check_complete(StateId state) {
  sync_to(state);
  json r;
  r["op"] = "complete";
  json reply = json::parse(request(r.dump()));
  return reply.value("value", false);
}

int ExternalProcessSession::goal_count(StateId state) {
  auto it = cached_goals_.find(state);
  if (it != cached_goals_.end()) return it->second;
  sync_to(state);
  json r;
  r["op"] = "goals";
  json reply = json::parse(request(r.dump()));
  int goals = reply.value("value", 0);
  cached_goals_[state] = goals;
  return goals;
}

std::string ExternalProcessSession::goal_text(StateId state) {
  sync_to(state);
  json r;
  r["op"] = "text";
  json reply = json::parse(request(r.dump()));
  return reply.value("value", "");
}

}  // namespace cobble
