#include "cobble/script.hpp"

#include <algorithm>
#include <cctype>

#include "cobble/errors.hpp"

namespace cobble {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string collapse_ws(const std::string& s) {
  std::string out;
  bool pending_gap = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_gap = !out.empty();
    } else {
      if (pending_gap) out.push_back(' ');
      pending_gap = false;
      out.push_back(c);
    }
  }
  return out;
}

bool is_bullet_char(char c) { return c == '-' || c == '+' || c == '*'; }

struct Item {
  enum Type { Bullet, Sent };
  Type type;
  std::string text;  // the bullet token, or the raw sentence text
};

// Splits raw text into bullet tokens and period-terminated sentences.
// Comments (* ... *) nest and are dropped; string literals may contain
// periods and escape a quote by doubling it.
class Scanner {
 public:
  explicit Scanner(const std::string& text) : text_(text) {}

  std::vector<Item> run() {
    std::vector<Item> items;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) break;
      char c = text_[pos_];
      if (c == '(' && peek(1) == '*') {
        skip_comment();
        continue;
      }
      if (c == '{' || c == '}') {
        throw MalformedScriptError("brace focusing is not supported");
      }
      if (is_bullet_char(c)) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] == c) ++pos_;
        items.push_back({Item::Bullet, text_.substr(start, pos_ - start)});
        continue;
      }
      items.push_back({Item::Sent, scan_sentence()});
    }
    return items;
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  void skip_comment() {
    std::size_t depth = 0;
    while (pos_ < text_.size()) {
      if (text_[pos_] == '(' && peek(1) == '*') {
        ++depth;
        pos_ += 2;
      } else if (text_[pos_] == '*' && peek(1) == ')') {
        --depth;
        pos_ += 2;
        if (depth == 0) return;
      } else {
        ++pos_;
      }
    }
    throw MalformedScriptError("unterminated comment");
  }

  std::string scan_sentence() {
    std::string out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '(' && peek(1) == '*') {
        skip_comment();
        out.push_back(' ');
        continue;
      }
      if (c == '"') {
        out.push_back(c);
        ++pos_;
        for (;;) {
          if (pos_ >= text_.size()) {
            throw MalformedScriptError("unterminated string literal");
          }
          char sc = text_[pos_];
          out.push_back(sc);
          if (sc == '"') {
            if (peek(1) == '"') {  // doubled quote stays inside the literal
              out.push_back('"');
              pos_ += 2;
              continue;
            }
            ++pos_;
            break;
          }
          ++pos_;
        }
        continue;
      }
      if (c == '.') {
        char next = peek(1);
        if (next == '\0' || is_space(next)) {
          out.push_back('.');
          ++pos_;
          return out;
        }
      }
      out.push_back(c);
      ++pos_;
    }
    throw MalformedScriptError("sentence does not end with a period: " +
                               collapse_ws(out));
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Sentence make_sentence(const std::string& raw) {
  Sentence s;
  s.text = collapse_ws(raw);
  if (s.text == "admit.") {
    s.kind = SentenceKind::Admit;
  } else if (s.text == "hammer.") {
    s.kind = SentenceKind::Hammer;
  } else if (s.text == "Proof.") {
    s.kind = SentenceKind::ProofOpen;
  } else if (s.text == "Qed." || s.text == "Admitted.") {
    s.kind = SentenceKind::ProofClose;
  }
  return s;
}

std::string effective_bullet(const ProofScript& node) {
  if (!node.bullet.empty()) return node.bullet;
  int level = std::max(node.bullet_level, 0);
  return std::string(static_cast<std::size_t>(level), '-');
}

ProofScript parse_script(const std::string& script_text) {
  std::vector<Item> items = Scanner(script_text).run();

  ProofScript root;
  std::vector<ProofScript*> nodes{&root};  // nodes[k] is the open node at depth k
  std::vector<std::string> bullets;        // bullets[k] belongs to nodes[k + 1]
  bool saw_closer = false;
  bool saw_sentence = false;
  bool at_start = true;

  for (const Item& item : items) {
    if (saw_closer) {
      throw MalformedScriptError("content after Qed. or Admitted.");
    }
    if (item.type == Item::Bullet) {
      at_start = false;
      auto match = std::find(bullets.begin(), bullets.end(), item.text);
      if (match != bullets.end()) {
        // sibling: pop back to the matching level, reopen under its parent
        std::size_t keep = static_cast<std::size_t>(match - bullets.begin());
        nodes.resize(keep + 1);
        bullets.resize(keep);
      } else {
        for (const std::string& open : bullets) {
          if (open[0] == item.text[0] && item.text.size() < open.size()) {
            throw MalformedScriptError("bullet '" + item.text +
                                       "' does not match any open level");
          }
        }
      }
      ProofScript* parent = nodes.back();
      parent->subproofs.emplace_back();
      ProofScript* child = &parent->subproofs.back();
      child->bullet = item.text;
      child->bullet_level = static_cast<int>(nodes.size());
      nodes.push_back(child);
      bullets.push_back(item.text);
      continue;
    }
    Sentence s = make_sentence(item.text);
    if (s.kind == SentenceKind::ProofOpen) {
      if (!at_start) {
        throw MalformedScriptError("Proof. can only open a script");
      }
      root.had_proof_open = true;
      at_start = false;
      continue;
    }
    at_start = false;
    if (s.kind == SentenceKind::ProofClose) {
      root.closer = (s.text == "Qed.") ? ScriptCloser::Qed : ScriptCloser::Admitted;
      saw_closer = true;
      continue;
    }
    nodes.back()->prefix.push_back(std::move(s));
    saw_sentence = true;
  }

  if (!saw_sentence) throw MalformedScriptError("empty proof script");
  return root;
}

namespace {

std::string render(const ProofScript& node) {
  std::string out;
  for (std::size_t i = 0; i < node.prefix.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += node.prefix[i].text;
  }
  for (const ProofScript& child : node.subproofs) {
    std::string body = render(child);
    if (!out.empty()) out.push_back('\n');
    out += effective_bullet(child);
    if (!body.empty()) {
      out.push_back(' ');
      out += body;
    }
  }
  return out;
}

}  // namespace

std::string print_script(const ProofScript& script, const PrintOptions& opts) {
  std::string body = render(script);
  // a script that knows it was closed prints closed; opts.wrap forces the
  // wrapper onto bare scripts
  bool wrap = opts.wrap ||
              (script.had_proof_open && script.closer != ScriptCloser::None);
  if (!wrap) return body;
  const char* close =
      script.closer == ScriptCloser::Admitted ? "Admitted." : "Qed.";
  return "Proof.\n" + body + "\n" + close;
}

bool structurally_equal(const ProofScript& a, const ProofScript& b) {
  if (a.prefix.size() != b.prefix.size()) return false;
  for (std::size_t i = 0; i < a.prefix.size(); ++i) {
    if (a.prefix[i].text != b.prefix[i].text) return false;
    if (a.prefix[i].kind != b.prefix[i].kind) return false;
  }
  if (a.subproofs.size() != b.subproofs.size()) return false;
  for (std::size_t i = 0; i < a.subproofs.size(); ++i) {
    if (effective_bullet(a.subproofs[i]) != effective_bullet(b.subproofs[i])) {
      return false;
    }
    if (!structurally_equal(a.subproofs[i], b.subproofs[i])) return false;
  }
  return true;
}

std::size_t sentence_count(const ProofScript& script) {
  std::size_t n = script.prefix.size();
  for (const ProofScript& child : script.subproofs) n += sentence_count(child);
  return n;
}

namespace {

void flatten_into(const ProofScript& node, std::vector<Sentence>& out) {
  out.insert(out.end(), node.prefix.begin(), node.prefix.end());
  for (const ProofScript& child : node.subproofs) flatten_into(child, out);
}

}  // namespace

std::vector<Sentence> flatten_sentences(const ProofScript& script) {
  std::vector<Sentence> out;
  flatten_into(script, out);
  return out;
}

void renumber_levels(ProofScript& script, int root_level) {
  script.bullet_level = root_level;
  // drop recorded tokens too: spliced subtrees may carry bullet styles that
  // would clash with their new siblings when printed and reparsed
  script.bullet.clear();
  for (ProofScript& child : script.subproofs) {
    renumber_levels(child, root_level + 1);
  }
}

bool contains_admit(const ProofScript& script) {
  for (const Sentence& s : script.prefix) {
    if (s.kind == SentenceKind::Admit) return true;
  }
  for (const ProofScript& child : script.subproofs) {
    if (contains_admit(child)) return true;
  }
  return false;
}

}  // namespace cobble
