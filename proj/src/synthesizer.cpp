#include "cobble/synthesizer.hpp"

#include <algorithm>

#include "cobble/errors.hpp"

namespace cobble {

ProofScript finalize_proof(ProofScript script, ProverSession* fresh) {
  renumber_levels(script);
  script.had_proof_open = true;
  script.closer = ScriptCloser::Qed;
  if (contains_admit(script)) {
    throw AssemblyVerificationError("assembled proof still contains admit");
  }
  if (fresh) {
    StrictRun run = run_script_strict(script, *fresh, fresh->initial_state());
    if (!run.ok) {
      throw AssemblyVerificationError("assembled proof fails from scratch: " +
                                      run.error);
    }
    if (!fresh->check_complete(run.final_state)) {
      throw AssemblyVerificationError("assembled proof leaves goals open");
    }
  }
  return script;
}

ProofScript assemble_proof(const FailSafeResult& result, ProverSession& fresh) {
  return finalize_proof(script_of_result(result), &fresh);
}

Synthesizer::Synthesizer(ProverSession& session, GeneratorBackend* generator,
                         FreshSessionFactory fresh_session,
                         SynthesisOptions options)
    : session_(session),
      generator_(generator),
      fresh_session_(std::move(fresh_session)),
      options_(options) {}

void Synthesizer::note(const std::string& event) {
  trace_.events.push_back(event);
}

Candidate Synthesizer::draw(const TheoremMeta& meta, StateId state,
                            PromptVariant variant) {
  int index = ledger_.samples_used++;
  return sample_candidate(meta, session_.goal_text(state), variant, index,
                          *generator_, options_.token_limit);
}

SynthesisResult Synthesizer::cobblestone(
    const TheoremMeta& meta,
    const std::optional<ProofScript>& oracle_decomposition) {
  ledger_ = BudgetLedger{0, options_.samples_max, 0, options_.invocations_max};
  trace_ = RunTrace{};

  const ProofScript* oracle =
      oracle_decomposition ? &*oracle_decomposition : nullptr;
  std::optional<ProofScript> script;
  while (true) {
    int invocations_before = ledger_.invocations_used;
    script = solve(meta, session_.initial_state(), options_.max_depth, oracle);
    if (script) break;
    if (ledger_.invocations_used == invocations_before) break;  // nothing moved
    if (!ledger_.can_invoke() || !ledger_.can_sample()) break;
    note("round ended without a proof; starting another");
  }

  trace_.samples_used = ledger_.samples_used;
  trace_.invocations_used = ledger_.invocations_used;
  if (!script) return {std::nullopt, trace_};
  std::unique_ptr<ProverSession> fresh =
      fresh_session_ ? fresh_session_() : nullptr;
  return {finalize_proof(std::move(*script), fresh.get()), trace_};
}

std::optional<ProofScript> Synthesizer::solve(const TheoremMeta& meta,
                                              StateId state, int depth_remaining,
                                              const ProofScript* oracle_prefix) {
  if (depth_remaining < 0) return std::nullopt;
  trace_.max_depth_entered =
      std::max(trace_.max_depth_entered, options_.max_depth - depth_remaining);

  if (!options_.no_hammer) {
    if (auto proof = try_hammer_entry(session_, state, options_.hammer)) {
      note("hammer closed the goal at entry");
      return proof;
    }
  }

  if (oracle_prefix) {
    // the human decomposition replaces sampling at this level
    FailSafeResult r = run_failsafe(*oracle_prefix, session_, state);
    switch (classify(r)) {
      case ResultClass::Success:
        note("oracle decomposition closed the goal by itself");
        return script_of_result(r);
      case ResultClass::PartialSuccess: {
        note("oracle decomposition produced " +
             std::to_string(r.subproof_results.size()) + " subgoals");
        std::vector<FailSafeResult> partials;
        partials.push_back(std::move(r));
        return recurse_partials(meta, std::move(partials), depth_remaining);
      }
      case ResultClass::Failure:
        note("oracle decomposition failed to execute");
        return std::nullopt;
    }
  }

  if (depth_remaining == 0) return std::nullopt;  // no sampling at the floor
  if (!generator_ || !ledger_.can_invoke() || !ledger_.can_sample()) {
    return std::nullopt;
  }

  ++ledger_.invocations_used;
  std::vector<Candidate> candidates;
  for (PromptVariant variant : all_variants()) {
    if (!ledger_.can_sample()) break;
    candidates.push_back(draw(meta, state, variant));
  }

  std::vector<FailSafeResult> partials;
  for (const Candidate& candidate : candidates) {
    if (!candidate.parseable) {
      note("sample " + std::to_string(candidate.sample_index) +
           " (" + variant_name(candidate.variant) + ") unparseable");
      continue;
    }
    FailSafeResult result = run_failsafe(candidate.script, session_, state);
    if (!options_.no_hammer) {
      result = repair_admits(std::move(result), session_, options_.hammer);
    }
    switch (classify(result)) {
      case ResultClass::Success:
        note("sample " + std::to_string(candidate.sample_index) +
             " (" + variant_name(candidate.variant) + ") verified whole");
        return script_of_result(result);
      case ResultClass::PartialSuccess:
        note("sample " + std::to_string(candidate.sample_index) +
             " (" + variant_name(candidate.variant) + ") partial, " +
             std::to_string(count_failures(result)) + " failing node(s)");
        partials.push_back(std::move(result));
        break;
      case ResultClass::Failure:
        note("sample " + std::to_string(candidate.sample_index) +
             " (" + variant_name(candidate.variant) + ") failed outright");
        break;
    }
  }

  return recurse_partials(meta, std::move(partials), depth_remaining);
}

namespace {

void collect_failures(FailSafeResult& node, std::vector<FailSafeResult*>& out) {
  if (classify(node) == ResultClass::Failure) {
    out.push_back(&node);
    return;  // failure nodes have no children
  }
  for (FailSafeResult& child : node.subproof_results) {
    collect_failures(child, out);
  }
}

}  // namespace

std::optional<ProofScript> Synthesizer::recurse_partials(
    const TheoremMeta& meta, std::vector<FailSafeResult> partials,
    int depth_remaining) {
  if (partials.empty()) return std::nullopt;

  std::stable_sort(partials.begin(), partials.end(),
                   [](const FailSafeResult& a, const FailSafeResult& b) {
                     return count_failures(a) < count_failures(b);
                   });

  for (FailSafeResult& tree : partials) {
    std::vector<FailSafeResult*> failing;
    collect_failures(tree, failing);
    for (FailSafeResult* node : failing) {
      std::optional<ProofScript> sub =
          solve(meta, node->entry_state, depth_remaining - 1, nullptr);
      if (!sub) continue;
      // splice: the sub-proof must re-run clean from the node's snapshot
      FailSafeResult spliced = run_failsafe(*sub, session_, node->entry_state);
      if (classify(spliced) == ResultClass::Success) {
        *node = std::move(spliced);
      } else {
        note("spliced sub-proof did not re-verify; leaving the hole");
      }
    }
    if (classify(tree) == ResultClass::Success) {
      note("tree completed after recursion");
      return script_of_result(tree);
    }
  }
  return std::nullopt;
}

SynthesisResult Synthesizer::chain_of_thought(const TheoremMeta& meta,
                                              int n_samples) {
  ledger_ = BudgetLedger{0, options_.samples_max, 0, options_.invocations_max};
  trace_ = RunTrace{};

  for (int i = 0; i < n_samples && generator_; ++i) {
    if (!ledger_.can_sample()) break;
    Candidate candidate =
        draw(meta, session_.initial_state(), all_variants()[i % 4]);
    if (!candidate.parseable) {
      note("sample " + std::to_string(candidate.sample_index) + " unparseable");
      continue;
    }
    StrictRun run =
        run_script_strict(candidate.script, session_, session_.initial_state());
    if (run.ok && session_.check_complete(run.final_state)) {
      note("sample " + std::to_string(candidate.sample_index) + " proved whole");
      trace_.samples_used = ledger_.samples_used;
      std::unique_ptr<ProverSession> fresh =
          fresh_session_ ? fresh_session_() : nullptr;
      return {finalize_proof(candidate.script, fresh.get()), trace_};
    }
    note("sample " + std::to_string(candidate.sample_index) + " rejected" +
         (run.ok ? " (incomplete)" : ": " + run.error));
  }
  trace_.samples_used = ledger_.samples_used;
  return {std::nullopt, trace_};
}

SynthesisResult Synthesizer::tactic_by_tactic(const TheoremMeta& meta,
                                              int max_steps,
                                              int attempts_per_step) {
  ledger_ = BudgetLedger{0, options_.samples_max, 0, options_.invocations_max};
  trace_ = RunTrace{};

  std::optional<StepResult> found =
      tbt_goal(meta, session_.initial_state(), max_steps, attempts_per_step);
  trace_.samples_used = ledger_.samples_used;
  if (!found) return {std::nullopt, trace_};
  std::unique_ptr<ProverSession> fresh =
      fresh_session_ ? fresh_session_() : nullptr;
  return {finalize_proof(std::move(found->script), fresh.get()), trace_};
}

std::optional<Synthesizer::StepResult> Synthesizer::tbt_goal(
    const TheoremMeta& meta, StateId state, int steps_left,
    int attempts_per_step) {
  if (steps_left <= 0) return std::nullopt;

  if (!options_.no_hammer) {
    SessionOutcome h = session_.run_sentence_within(
        state, "hammer.", options_.hammer.total_budget_ms());
    if (h.ok() && h.goals_remaining == 0) {
      StepResult result;
      result.script.prefix.push_back(make_sentence("hammer."));
      result.after = h.state;
      return result;
    }
  }

  for (int attempt = 0; attempt < attempts_per_step; ++attempt) {
    if (!generator_ || !ledger_.can_sample()) break;
    int index = ledger_.samples_used++;
    PromptBundle bundle = build_prompt(meta, session_.goal_text(state),
                                       PromptVariant::Plain, options_.token_limit);
    bundle.system_message = kSystemTactic;
    GeneratorRequest request{meta.id,
                             PromptVariant::Plain,
                             index,
                             "tactic",
                             bundle.system_message,
                             render_user_message(bundle)};
    std::string reply = generator_->complete(request);

    Sentence tactic;
    try {
      std::vector<Sentence> flat = flatten_sentences(extract_proof(reply));
      if (flat.empty()) continue;
      tactic = flat.front();  // one tactic was asked for; use only the first
    } catch (const UnparseableError&) {
      continue;
    }
    if (tactic.kind == SentenceKind::Admit) continue;

    SessionOutcome o = session_.run_sentence(state, tactic.text);
    if (!o.ok()) continue;

    if (o.goals_remaining == 0) {
      StepResult result;
      result.script.prefix.push_back(tactic);
      result.after = o.state;
      return result;
    }
    if (o.goals_remaining == 1) {
      std::optional<StepResult> rest =
          tbt_goal(meta, o.state, steps_left - 1, attempts_per_step);
      if (!rest) continue;  // backtrack, try another prediction
      rest->script.prefix.insert(rest->script.prefix.begin(), tactic);
      return rest;
    }

    // the tactic split the goal: each piece gets its own bullet
    StepResult result;
    result.script.prefix.push_back(tactic);
    StateId walk = o.state;
    bool closed_all = true;
    for (int g = 0; g < o.goals_remaining; ++g) {
      SessionOutcome f = session_.focus_next_goal(walk);
      if (!f.ok()) {
        closed_all = false;
        break;
      }
      std::optional<StepResult> child =
          tbt_goal(meta, f.state, steps_left - 1, attempts_per_step);
      if (!child) {
        closed_all = false;
        break;
      }
      result.script.subproofs.push_back(std::move(child->script));
      SessionOutcome u = session_.unfocus(child->after);
      if (!u.ok()) {
        closed_all = false;
        break;
      }
      walk = u.state;
    }
    if (closed_all) {
      result.after = walk;
      return result;
    }
  }
  return std::nullopt;
}

}  // namespace cobble
