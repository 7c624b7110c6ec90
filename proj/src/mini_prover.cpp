#include "cobble/mini_prover.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "cobble/errors.hpp"
#include "json.hpp"

namespace cobble {

namespace {

using Hyps = std::vector<std::pair<std::string, Formula>>;

struct TacticResult {
  bool ok = false;
  std::string error;
  std::vector<MiniGoal> goals;
  bool admitted = false;

  static TacticResult fail(std::string msg) {
    TacticResult r;
    r.error = std::move(msg);
    return r;
  }
  static TacticResult produce(std::vector<MiniGoal> gs, bool adm = false) {
    TacticResult r;
    r.ok = true;
    r.goals = std::move(gs);
    r.admitted = adm;
    return r;
  }
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string fresh_name(const Hyps& hyps) {
  auto used = [&](const std::string& n) {
    return std::any_of(hyps.begin(), hyps.end(),
                       [&](const auto& h) { return h.first == n; });
  };
  if (!used("H")) return "H";
  for (int i = 0;; ++i) {
    std::string n = "H" + std::to_string(i);
    if (!used(n)) return n;
  }
}

TacticResult do_intro(const MiniGoal& g, const std::string& name) {
  MiniGoal next = g;
  if (g.conclusion.kind == FormulaKind::Impl) {
    next.hypotheses.emplace_back(name.empty() ? fresh_name(g.hypotheses) : name,
                                 g.conclusion.kids[0]);
    next.conclusion = g.conclusion.kids[1];
  } else if (g.conclusion.kind == FormulaKind::Not) {
    next.hypotheses.emplace_back(name.empty() ? fresh_name(g.hypotheses) : name,
                                 g.conclusion.kids[0]);
    next.conclusion = f_false();
  } else {
    return TacticResult::fail("intro: goal is not an implication");
  }
  return TacticResult::produce({std::move(next)});
}

const Formula* find_hyp(const Hyps& hyps, const std::string& name) {
  for (const auto& [n, f] : hyps) {
    if (n == name) return &f;
  }
  return nullptr;
}

TacticResult do_apply(const MiniGoal& g, const Formula& f, const std::string& name) {
  // backchain: peel premises off an implication chain until the goal matches
  std::vector<Formula> premises;
  Formula target = f;
  for (;;) {
    if (target == g.conclusion) {
      std::vector<MiniGoal> out;
      for (Formula& p : premises) {
        out.push_back(MiniGoal{g.hypotheses, std::move(p)});
      }
      return TacticResult::produce(std::move(out));
    }
    if (target.kind == FormulaKind::Impl) {
      premises.push_back(target.kids[0]);
      target = target.kids[1];
    } else if (target.kind == FormulaKind::Not) {
      premises.push_back(target.kids[0]);
      target = f_false();
    } else {
      return TacticResult::fail("apply: " + name + " does not apply to the goal");
    }
  }
}

}  // namespace

bool truth_table_entails(const Hyps& hypotheses, const Formula& conclusion) {
  std::set<std::string> atom_set = atoms_of(conclusion);
  for (const auto& [name, f] : hypotheses) {
    (void)name;
    std::set<std::string> more = atoms_of(f);
    atom_set.insert(more.begin(), more.end());
  }
  std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
  if (atoms.size() > 16) return false;  // environments cap atoms; stay total anyway
  std::uint32_t rows = 1u << atoms.size();
  for (std::uint32_t row = 0; row < rows; ++row) {
    std::map<std::string, bool> assignment;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      assignment[atoms[i]] = (row >> i) & 1u;
    }
    bool hyps_hold = true;
    for (const auto& [name, f] : hypotheses) {
      (void)name;
      if (!eval_formula(f, assignment)) {
        hyps_hold = false;
        break;
      }
    }
    if (hyps_hold && !eval_formula(conclusion, assignment)) return false;
  }
  return true;
}

MiniEnvironment parse_environment(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw EnvironmentError(std::string("environment is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw EnvironmentError("environment must be a JSON object");

  MiniEnvironment env;
  for (const auto& [key, value] : doc.items()) {
    if (key == "atoms" || key == "constants" || key == "hammer_blocklist") {
      if (!value.is_array()) throw EnvironmentError(key + " must be an array");
      for (const auto& v : value) {
        if (!v.is_string()) throw EnvironmentError(key + " entries must be strings");
        if (key == "atoms") env.atoms.insert(v.get<std::string>());
        if (key == "constants") env.constants.insert(v.get<std::string>());
        if (key == "hammer_blocklist") env.hammer_blocklist.insert(v.get<std::string>());
      }
    } else if (key == "lemmas") {
      if (!value.is_array()) throw EnvironmentError("lemmas must be an array");
      for (const auto& v : value) {
        if (!v.is_object() || !v.contains("name") || !v.contains("statement")) {
          throw EnvironmentError("each lemma needs name and statement");
        }
        env.lemmas.emplace_back(v["name"].get<std::string>(),
                                parse_formula(v["statement"].get<std::string>()));
      }
    } else if (key == "hammer_max_atoms") {
      if (!value.is_number_integer()) throw EnvironmentError("hammer_max_atoms must be an integer");
      env.hammer_max_atoms = value.get<int>();
    } else {
      throw EnvironmentError("unknown environment key: " + key);
    }
  }
  return env;
}

MiniProver::MiniProver(const std::string& statement, MiniEnvironment env)
    : env_(std::move(env)) {
  theorem_ = parse_formula(statement);

  // identifiers in the statement and lemmas auto-declare atoms; constants
  // must be declared up front, and never double as atoms
  auto absorb = [&](const Formula& f, const std::string& what) {
    for (const std::string& a : atoms_of(f)) {
      if (env_.constants.count(a)) {
        throw EnvironmentError(what + " uses constant '" + a + "' as a proposition");
      }
      env_.atoms.insert(a);
    }
    for (const std::string& c : constants_of(f)) {
      if (!env_.constants.count(c)) {
        throw EnvironmentError(what + " compares undeclared constant '" + c + "'");
      }
    }
  };
  absorb(theorem_, "statement");
  for (const auto& [name, f] : env_.lemmas) absorb(f, "lemma " + name);

  if (env_.atoms.size() > 16) {
    throw EnvironmentError("theorem uses " + std::to_string(env_.atoms.size()) +
                           " atoms; the cap is 16");
  }

  State init;
  init.frames.push_back({MiniGoal{{}, theorem_}});
  store(std::move(init));
}

StateId MiniProver::initial_state() { return 1; }

const MiniProver::State& MiniProver::at(StateId id) const {
  auto it = states_.find(id);
  if (it == states_.end()) {
    throw SessionDeadError("unknown snapshot token " + std::to_string(id));
  }
  return it->second;
}

StateId MiniProver::store(State s) {
  StateId id = next_id_++;
  states_.emplace(id, std::move(s));
  return id;
}

namespace {

// Applies one simple (no `;`) tactic to a goal.
TacticResult apply_simple(const MiniGoal& g, const std::vector<std::string>& w,
                          const MiniEnvironment& env) {
  const std::string& t = w[0];

  if (t == "idtac") return TacticResult::produce({g});

  if (t == "intro") {
    if (w.size() > 2) return TacticResult::fail("intro: too many arguments");
    return do_intro(g, w.size() == 2 ? w[1] : "");
  }

  if (t == "intros") {
    if (w.size() == 1) {
      MiniGoal cur = g;
      while (cur.conclusion.kind == FormulaKind::Impl ||
             cur.conclusion.kind == FormulaKind::Not) {
        TacticResult r = do_intro(cur, "");
        cur = r.goals[0];
      }
      return TacticResult::produce({std::move(cur)});
    }
    MiniGoal cur = g;
    for (std::size_t i = 1; i < w.size(); ++i) {
      TacticResult r = do_intro(cur, w[i]);
      if (!r.ok) return r;
      cur = r.goals[0];
    }
    return TacticResult::produce({std::move(cur)});
  }

  if (t == "split") {
    if (w.size() > 1) return TacticResult::fail("split: too many arguments");
    if (g.conclusion.kind == FormulaKind::And) {
      return TacticResult::produce({MiniGoal{g.hypotheses, g.conclusion.kids[0]},
                                    MiniGoal{g.hypotheses, g.conclusion.kids[1]}});
    }
    if (g.conclusion.kind == FormulaKind::Iff) {
      return TacticResult::produce(
          {MiniGoal{g.hypotheses, f_impl(g.conclusion.kids[0], g.conclusion.kids[1])},
           MiniGoal{g.hypotheses, f_impl(g.conclusion.kids[1], g.conclusion.kids[0])}});
    }
    return TacticResult::fail("split: goal is not a conjunction");
  }

  if (t == "left" || t == "right") {
    if (w.size() > 1) return TacticResult::fail(t + ": too many arguments");
    if (g.conclusion.kind != FormulaKind::Or) {
      return TacticResult::fail(t + ": goal is not a disjunction");
    }
    return TacticResult::produce(
        {MiniGoal{g.hypotheses, g.conclusion.kids[t == "left" ? 0 : 1]}});
  }

  if (t == "assumption") {
    for (const auto& [name, f] : g.hypotheses) {
      (void)name;
      if (f == g.conclusion) return TacticResult::produce({});
    }
    return TacticResult::fail("assumption: no hypothesis matches the goal");
  }

  if (t == "exact") {
    if (w.size() != 2) return TacticResult::fail("exact: expected one hypothesis name");
    const Formula* f = find_hyp(g.hypotheses, w[1]);
    if (!f) return TacticResult::fail("exact: no hypothesis named " + w[1]);
    if (!(*f == g.conclusion)) {
      return TacticResult::fail("exact: " + w[1] + " does not match the goal");
    }
    return TacticResult::produce({});
  }

  if (t == "apply") {
    if (w.size() != 2) return TacticResult::fail("apply: expected one name");
    const Formula* f = find_hyp(g.hypotheses, w[1]);
    if (!f) {
      for (const auto& [name, lf] : env.lemmas) {
        if (name == w[1]) {
          f = &lf;
          break;
        }
      }
    }
    if (!f) return TacticResult::fail("apply: no hypothesis or lemma named " + w[1]);
    return do_apply(g, *f, w[1]);
  }

  if (t == "reflexivity") {
    if (g.conclusion.kind == FormulaKind::Eq && g.conclusion.name == g.conclusion.rhs) {
      return TacticResult::produce({});
    }
    if (g.conclusion.kind == FormulaKind::Iff &&
        g.conclusion.kids[0] == g.conclusion.kids[1]) {
      return TacticResult::produce({});
    }
    return TacticResult::fail("reflexivity: goal is not a reflexive equality");
  }

  if (t == "admit") return TacticResult::produce({}, /*adm=*/true);

  if (t == "hammer") {
    std::set<std::string> concl_atoms = atoms_of(g.conclusion);
    for (const std::string& a : concl_atoms) {
      if (env.hammer_blocklist.count(a)) {
        return TacticResult::fail("hammer: goal not provable");
      }
    }
    std::set<std::string> problem_atoms = concl_atoms;
    for (const auto& [name, f] : g.hypotheses) {
      (void)name;
      std::set<std::string> more = atoms_of(f);
      problem_atoms.insert(more.begin(), more.end());
    }
    if (static_cast<int>(problem_atoms.size()) > env.hammer_max_atoms) {
      return TacticResult::fail("hammer: goal not provable");
    }
    if (!truth_table_entails(g.hypotheses, g.conclusion)) {
      return TacticResult::fail("hammer: goal not provable");
    }
    return TacticResult::produce({});
  }

  return TacticResult::fail("unknown tactic: " + t);
}

// `t1; t2; ...`: apply the head to the goal, then the tail to every goal it
// produced, Coq style.
TacticResult apply_sequence(const MiniGoal& g,
                            const std::vector<std::string>& parts, std::size_t idx,
                            const MiniEnvironment& env) {
  std::vector<std::string> w = words_of(parts[idx]);
  if (w.empty()) return TacticResult::fail("empty tactic in sequence");
  TacticResult head = apply_simple(g, w, env);
  if (!head.ok || idx + 1 == parts.size()) return head;
  std::vector<MiniGoal> out;
  bool admitted = head.admitted;
  for (const MiniGoal& sub : head.goals) {
    TacticResult rest = apply_sequence(sub, parts, idx + 1, env);
    if (!rest.ok) return rest;
    admitted = admitted || rest.admitted;
    out.insert(out.end(), rest.goals.begin(), rest.goals.end());
  }
  return TacticResult::produce(std::move(out), admitted);
}

}  // namespace

SessionOutcome MiniProver::run_sentence(StateId from, const std::string& sentence) {
  auto key = std::make_pair(from, sentence);
  auto hit = run_memo_.find(key);
  if (hit != run_memo_.end()) return hit->second;
  SessionOutcome o = run_uncached(from, sentence);
  run_memo_.emplace(std::move(key), o);
  return o;
}

SessionOutcome MiniProver::run_uncached(StateId from, const std::string& sentence) {
  const State& st = at(from);
  if (st.visible() == 0) {
    return outcome_error(from, "no goals are visible at this focus level");
  }

  std::string body = trim(sentence);
  if (!body.empty() && body.back() == '.') body.pop_back();
  body = trim(body);
  if (body.empty()) return outcome_error(from, "empty sentence");

  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == ';') {
      parts.push_back(trim(body.substr(start, i - start)));
      start = i + 1;
    }
  }

  TacticResult r = apply_sequence(st.frames.back().front(), parts, 0, env_);
  if (!r.ok) return outcome_error(from, r.error);

  State next = st;
  auto& frame = next.frames.back();
  frame.erase(frame.begin());
  frame.insert(frame.begin(), r.goals.begin(), r.goals.end());
  next.tainted = next.tainted || r.admitted;
  int visible = next.visible();
  return outcome_ok(store(std::move(next)), visible);
}

SessionOutcome MiniProver::focus_next_goal(StateId from) {
  auto hit = focus_memo_.find(from);
  if (hit != focus_memo_.end()) return hit->second;
  SessionOutcome o = focus_uncached(from);
  focus_memo_.emplace(from, o);
  return o;
}

SessionOutcome MiniProver::focus_uncached(StateId from) {
  const State& st = at(from);
  if (st.visible() == 0) return outcome_error(from, "focus: no goal to focus");
  State next = st;
  MiniGoal g = next.frames.back().front();
  next.frames.back().erase(next.frames.back().begin());
  next.frames.push_back({std::move(g)});
  return outcome_ok(store(std::move(next)), 1);
}

SessionOutcome MiniProver::unfocus(StateId from) {
  auto hit = unfocus_memo_.find(from);
  if (hit != unfocus_memo_.end()) return hit->second;
  SessionOutcome o = unfocus_uncached(from);
  unfocus_memo_.emplace(from, o);
  return o;
}

SessionOutcome MiniProver::unfocus_uncached(StateId from) {
  const State& st = at(from);
  if (st.frames.size() < 2) return outcome_error(from, "unfocus: no enclosing focus level");
  if (!st.frames.back().empty()) {
    return outcome_error(from, "unfocus: focused goal is still open");
  }
  State next = st;
  next.frames.pop_back();
  int visible = next.visible();
  return outcome_ok(store(std::move(next)), visible);
}

bool MiniProver::check_complete(StateId state) {
  const State& st = at(state);
  return st.total() == 0 && !st.tainted;
}

int MiniProver::goal_count(StateId state) { return at(state).visible(); }

std::string MiniProver::goal_text(StateId state) {
  const State& st = at(state);
  if (st.visible() == 0) return "no goals";
  const MiniGoal& g = st.frames.back().front();
  std::string out;
  for (const auto& [name, f] : g.hypotheses) {
    out += name;
    out += " : ";
    out += print_formula(f);
    out += "\n";
  }
  out += "============\n";
  out += print_formula(g.conclusion);
  if (st.visible() > 1) {
    out += "\n(" + std::to_string(st.visible() - 1) + " more goals)";
  }
  return out;
}

}  // namespace cobble
