#include "cobble/formula.hpp"

#include <cctype>
#include <utility>

#include "cobble/errors.hpp"

namespace cobble {

bool Formula::operator==(const Formula& other) const {
  if (kind != other.kind || name != other.name || rhs != other.rhs) return false;
  return kids == other.kids;
}

Formula f_true() { return Formula{FormulaKind::True, "", "", {}}; }
Formula f_false() { return Formula{FormulaKind::False, "", "", {}}; }
Formula f_atom(std::string name) {
  return Formula{FormulaKind::Atom, std::move(name), "", {}};
}
Formula f_not(Formula f) {
  return Formula{FormulaKind::Not, "", "", {std::move(f)}};
}
Formula f_and(Formula l, Formula r) {
  return Formula{FormulaKind::And, "", "", {std::move(l), std::move(r)}};
}
Formula f_or(Formula l, Formula r) {
  return Formula{FormulaKind::Or, "", "", {std::move(l), std::move(r)}};
}
Formula f_impl(Formula l, Formula r) {
  return Formula{FormulaKind::Impl, "", "", {std::move(l), std::move(r)}};
}
Formula f_iff(Formula l, Formula r) {
  return Formula{FormulaKind::Iff, "", "", {std::move(l), std::move(r)}};
}
Formula f_eq(std::string lhs, std::string rhs) {
  return Formula{FormulaKind::Eq, std::move(lhs), std::move(rhs), {}};
}

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw EnvironmentError("formula syntax: " + why + " at offset " +
                           std::to_string(pos) + " in '" + text + "'");
  }

  void skip() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool take(const std::string& tok) {
    skip();
    if (text.compare(pos, tok.size(), tok) != 0) return false;
    pos += tok.size();
    return true;
  }

  char peek() {
    skip();
    return pos < text.size() ? text[pos] : '\0';
  }

  std::string ident() {
    skip();
    if (pos >= text.size() || !ident_start(text[pos])) fail("expected identifier");
    std::size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    return text.substr(start, pos - start);
  }

  // impl := iff ('->' impl)?     right-associative, loosest
  Formula impl() {
    Formula l = iff();
    if (take("->")) return f_impl(std::move(l), impl());
    return l;
  }

  // iff := or ('<->' or)?        non-associative
  Formula iff() {
    Formula l = disj();
    if (take("<->")) return f_iff(std::move(l), disj());
    return l;
  }

  Formula disj() {
    Formula l = conj();
    if (take("\\/")) return f_or(std::move(l), disj());
    return l;
  }

  Formula conj() {
    Formula l = neg();
    if (take("/\\")) return f_and(std::move(l), conj());
    return l;
  }

  Formula neg() {
    if (take("~")) return f_not(neg());
    return atom();
  }

  Formula atom() {
    skip();
    if (take("(")) {
      Formula inner = impl();
      if (!take(")")) fail("expected ')'");
      return inner;
    }
    char c = peek();
    if (!ident_start(c)) fail("expected atom, constant, or '('");
    std::string name = ident();
    if (name == "True") return f_true();
    if (name == "False") return f_false();
    if (take("=")) return f_eq(std::move(name), ident());
    return f_atom(std::move(name));
  }
};

// precedence levels, loosest binds lowest
int level(FormulaKind k) {
  switch (k) {
    case FormulaKind::Impl: return 1;
    case FormulaKind::Iff: return 2;
    case FormulaKind::Or: return 3;
    case FormulaKind::And: return 4;
    case FormulaKind::Not: return 5;
    default: return 6;
  }
}

void print_into(const Formula& f, int min_level, std::string& out) {
  int own = level(f.kind);
  bool parens = own < min_level;
  if (parens) out.push_back('(');
  switch (f.kind) {
    case FormulaKind::True: out += "True"; break;
    case FormulaKind::False: out += "False"; break;
    case FormulaKind::Atom: out += f.name; break;
    case FormulaKind::Eq:
      out += f.name;
      out += " = ";
      out += f.rhs;
      break;
    case FormulaKind::Not:
      out.push_back('~');
      print_into(f.kids[0], 5, out);
      break;
    case FormulaKind::Impl:
      print_into(f.kids[0], 2, out);
      out += " -> ";
      print_into(f.kids[1], 1, out);
      break;
    case FormulaKind::Iff:
      print_into(f.kids[0], 3, out);
      out += " <-> ";
      print_into(f.kids[1], 3, out);
      break;
    case FormulaKind::Or:
      print_into(f.kids[0], 4, out);
      out += " \\/ ";
      print_into(f.kids[1], 3, out);
      break;
    case FormulaKind::And:
      print_into(f.kids[0], 5, out);
      out += " /\\ ";
      print_into(f.kids[1], 4, out);
      break;
  }
  if (parens) out.push_back(')');
}

void collect(const Formula& f, std::set<std::string>& atoms,
             std::set<std::string>& consts) {
  if (f.kind == FormulaKind::Atom) atoms.insert(f.name);
  if (f.kind == FormulaKind::Eq) {
    consts.insert(f.name);
    consts.insert(f.rhs);
  }
  for (const Formula& k : f.kids) collect(k, atoms, consts);
}

}  // namespace

Formula parse_formula(const std::string& text) {
  Parser p{text};
  Formula f = p.impl();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return f;
}

std::string print_formula(const Formula& f) {
  std::string out;
  print_into(f, 1, out);
  return out;
}

std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> atoms, consts;
  collect(f, atoms, consts);
  return atoms;
}

std::set<std::string> constants_of(const Formula& f) {
  std::set<std::string> atoms, consts;
  collect(f, atoms, consts);
  return consts;
}

bool eval_formula(const Formula& f, const std::map<std::string, bool>& assignment) {
  switch (f.kind) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Atom: {
      auto it = assignment.find(f.name);
      return it != assignment.end() && it->second;
    }
    case FormulaKind::Eq: return f.name == f.rhs;
    case FormulaKind::Not: return !eval_formula(f.kids[0], assignment);
    case FormulaKind::And:
      return eval_formula(f.kids[0], assignment) && eval_formula(f.kids[1], assignment);
    case FormulaKind::Or:
      return eval_formula(f.kids[0], assignment) || eval_formula(f.kids[1], assignment);
    case FormulaKind::Impl:
      return !eval_formula(f.kids[0], assignment) || eval_formula(f.kids[1], assignment);
    case FormulaKind::Iff:
      return eval_formula(f.kids[0], assignment) == eval_formula(f.kids[1], assignment);
  }
  return false;
}

}  // namespace cobble
