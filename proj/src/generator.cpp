#include "cobble/generator.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <tuple>

#include "cobble/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cobble {

const std::array<PromptVariant, 4>& all_variants() {
  static const std::array<PromptVariant, 4> variants = {
      PromptVariant::Plain, PromptVariant::Context, PromptVariant::Cot,
      PromptVariant::ContextCot};
  return variants;
}

std::string variant_name(PromptVariant variant) {
  switch (variant) {
    case PromptVariant::Plain: return "plain";
    case PromptVariant::Context: return "context";
    case PromptVariant::Cot: return "cot";
    case PromptVariant::ContextCot: return "context_cot";
  }
  return "?";
}

PromptVariant variant_from_name(const std::string& name) {
  for (PromptVariant v : all_variants()) {
    if (variant_name(v) == name) return v;
  }
  throw BackendError("unknown prompt variant: " + name);
}

bool variant_has_context(PromptVariant variant) {
  return variant == PromptVariant::Context || variant == PromptVariant::ContextCot;
}

bool variant_is_cot(PromptVariant variant) {
  return variant == PromptVariant::Cot || variant == PromptVariant::ContextCot;
}

int approx_token_count(const std::string& text, int chars_per_token) {
  int tokens = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) {
      int len = static_cast<int>(i - start);
      tokens += (len + chars_per_token - 1) / chars_per_token;
    }
  }
  return tokens;
}

namespace {

std::string name_value_block(
    const std::vector<std::pair<std::string, std::string>>& items) {
  std::string body;
  for (const auto& [name, text] : items) {
    if (!body.empty()) body += "\n";
    body += name + " : " + text;
  }
  return body;
}

int section_tokens(const PromptSection& s) {
  return approx_token_count(s.header) + approx_token_count(s.body);
}

}  // namespace

PromptBundle build_prompt(const TheoremMeta& meta, const std::string& proof_state,
                          PromptVariant variant, int token_limit,
                          const std::string& reasoning) {
  PromptBundle bundle;
  bundle.variant = variant;
  bundle.token_limit = token_limit;
  bundle.system_message =
      (variant_is_cot(variant) && reasoning.empty()) ? kSystemReasoning
                                                     : kSystemProof;

  bundle.user_sections.push_back({kHeaderTheorem, meta.statement});
  bundle.user_sections.push_back({kHeaderState, proof_state});
  bundle.user_sections.push_back({kHeaderDefinitions,
                                  name_value_block(meta.definitions)});
  if (!meta.oracle_premises.empty()) {
    bundle.user_sections.push_back({kHeaderPremises,
                                    name_value_block(meta.oracle_premises)});
  }

  std::string context_body;
  if (variant_has_context(variant)) {
    context_body = name_value_block(meta.preceding_lemmas);
  }
  if (!reasoning.empty()) {
    bundle.user_sections.push_back({kHeaderReasoning, reasoning});
  }

  int fixed = approx_token_count(bundle.system_message);
  for (const PromptSection& s : bundle.user_sections) fixed += section_tokens(s);
  if (fixed > token_limit) {
    throw PromptOverflowError("prompt for " + meta.id + " needs " +
                              std::to_string(fixed) + " tokens before context; limit " +
                              std::to_string(token_limit));
  }

  if (variant_has_context(variant)) {
    int header_cost = approx_token_count(kHeaderContext);
    // trim words off the front until the whole bundle fits
    std::size_t cut = 0;
    while (true) {
      std::string suffix = context_body.substr(cut);
      if (fixed + header_cost + approx_token_count(suffix) <= token_limit) {
        if (!suffix.empty()) {
          // place context before any reasoning section so the truncatable
          // tail stays in one spot
          PromptSection section{kHeaderContext, suffix};
          if (!reasoning.empty()) {
            bundle.user_sections.insert(bundle.user_sections.end() - 1, section);
          } else {
            bundle.user_sections.push_back(section);
          }
        }
        break;
      }
      // drop the leading word
      while (cut < context_body.size() &&
             std::isspace(static_cast<unsigned char>(context_body[cut]))) {
        ++cut;
      }
      while (cut < context_body.size() &&
             !std::isspace(static_cast<unsigned char>(context_body[cut]))) {
        ++cut;
      }
      while (cut < context_body.size() &&
             std::isspace(static_cast<unsigned char>(context_body[cut]))) {
        ++cut;
      }
      if (cut >= context_body.size()) break;  // context gone entirely
    }
  }
  return bundle;
}

std::string render_user_message(const PromptBundle& bundle) {
  std::string out;
  for (const PromptSection& s : bundle.user_sections) {
    if (!out.empty()) out += "\n\n";
    out += s.header + "\n" + s.body;
  }
  return out;
}

bool StubGenerator::Key::operator<(const Key& other) const {
  return std::tie(theorem, variant, sample, phase) <
         std::tie(other.theorem, other.variant, other.sample, other.phase);
}

StubGenerator::StubGenerator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BackendError("cannot open stub replies: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw BackendError("stub replies " + path + " line " +
                         std::to_string(lineno) + ": " + e.what());
    }
    std::string theorem = j.at("theorem").get<std::string>();
    std::string reply = j.at("reply").get<std::string>();
    if (j.contains("variant") || j.contains("sample") || j.contains("phase")) {
      Key key{theorem, j.value("variant", std::string("plain")),
              j.value("sample", 0), j.value("phase", std::string("proof"))};
      replies_[key].push_back(Entry{j.value("requires", std::string()), reply});
    } else {
      fallbacks_[theorem] = reply;
    }
  }
}

std::string StubGenerator::complete(const GeneratorRequest& request) {
  requests_.push_back(request);
  Key key{request.theorem_id, variant_name(request.variant),
          request.sample_index, request.phase};
  auto it = replies_.find(key);
  if (it != replies_.end()) {
    for (const Entry& entry : it->second) {
      if (entry.requires_text.empty() ||
          request.user_text.find(entry.requires_text) != std::string::npos) {
        return entry.reply;
      }
    }
  }
  auto fb = fallbacks_.find(request.theorem_id);
  if (fb != fallbacks_.end()) return fb->second;
  throw BackendError("stub replies exhausted for theorem " + request.theorem_id +
                     " (variant " + variant_name(request.variant) + ", sample " +
                     std::to_string(request.sample_index) + ", phase " +
                     request.phase + ")");
}

RemoteGenerator::RemoteGenerator(RemoteConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) {
    throw BackendError("remote generator needs an endpoint URL");
  }
}

std::string RemoteGenerator::complete(const GeneratorRequest& request) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (!key) {
    throw BackendError("remote generator: environment variable " +
                       config_.api_key_env + " is not set");
  }
  nlohmann::json body;
  body["model"] = config_.model;
  body["temperature"] = config_.temperature;
  body["messages"] = nlohmann::json::array(
      {{{"role", "system"}, {"content", request.system_message}},
       {{"role", "user"}, {"content", request.user_text}}});

  httplib::Client client(config_.base_url);
  client.set_read_timeout(config_.timeout_ms / 1000,
                          (config_.timeout_ms % 1000) * 1000);
  httplib::Headers headers = {
      {"Authorization", std::string("Bearer ") + key}};
  auto res = client.Post(config_.path, headers, body.dump(), "application/json");
  if (!res) {
    throw BackendError("remote generator: no response from " + config_.base_url);
  }
  if (res->status != 200) {
    throw BackendError("remote generator: HTTP " + std::to_string(res->status) +
                       " from " + config_.base_url);
  }
  try {
    nlohmann::json reply = nlohmann::json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("remote generator: malformed reply: ") + e.what());
  }
}

ProofScript extract_proof(const std::string& raw) {
  // drop fence lines wholesale; everything between them survives
  std::string text;
  std::istringstream lines(raw);
  std::string line;
  while (std::getline(lines, line)) {
    std::size_t first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line.compare(first, 3, "```") == 0) continue;
    text += line;
    text += "\n";
  }

  std::size_t open = text.find("Proof.");
  std::size_t begin = 0, end = text.size();
  if (open != std::string::npos) {
    begin = open;
    std::size_t qed = text.find("Qed.", open);
    std::size_t adm = text.find("Admitted.", open);
    std::size_t close = std::min(qed == std::string::npos ? text.size() : qed,
                                 adm == std::string::npos ? text.size() : adm);
    if (close < text.size()) {
      end = close + (close == qed ? 4 : 9);
    }
  }
  try {
    return parse_script(text.substr(begin, end - begin));
  } catch (const MalformedScriptError& e) {
    throw UnparseableError(std::string("no proof script in output: ") + e.what());
  }
}

Candidate sample_candidate(const TheoremMeta& meta, const std::string& proof_state,
                           PromptVariant variant, int sample_index,
                           GeneratorBackend& backend, int token_limit) {
  Candidate candidate;
  candidate.variant = variant;
  candidate.sample_index = sample_index;

  std::string reasoning;
  if (variant_is_cot(variant)) {
    PromptBundle ask = build_prompt(meta, proof_state, variant, token_limit);
    GeneratorRequest request{meta.id,       variant,
                             sample_index,  "reasoning",
                             ask.system_message, render_user_message(ask)};
    reasoning = backend.complete(request);
    // an empty reasoning reply must not demote the second request back to
    // the reasoning prompt
    if (reasoning.empty()) reasoning = "(none)";
  }

  PromptBundle bundle =
      build_prompt(meta, proof_state, variant, token_limit, reasoning);
  GeneratorRequest request{meta.id,       variant,
                           sample_index,  "proof",
                           bundle.system_message, render_user_message(bundle)};
  candidate.raw_text = backend.complete(request);
  try {
    candidate.script = extract_proof(candidate.raw_text);
    candidate.parseable = true;
  } catch (const UnparseableError&) {
    candidate.parseable = false;
  }
  return candidate;
}

}  // namespace cobble
