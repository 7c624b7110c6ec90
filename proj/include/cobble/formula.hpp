#ifndef COBBLE_FORMULA_HPP_
#define COBBLE_FORMULA_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

namespace cobble {

enum class FormulaKind { True, False, Atom, Not, And, Or, Impl, Iff, Eq };

// Propositional formula over named atoms plus equalities between declared
// constants. Connective children live in kids (1 for Not, 2 otherwise).
struct Formula {
  FormulaKind kind = FormulaKind::True;
  std::string name;      // Atom: the atom; Eq: left constant
  std::string rhs;       // Eq: right constant
  std::vector<Formula> kids;

  bool operator==(const Formula& other) const;
};

Formula f_true();
Formula f_false();
Formula f_atom(std::string name);
Formula f_not(Formula f);
Formula f_and(Formula l, Formula r);
Formula f_or(Formula l, Formula r);
Formula f_impl(Formula l, Formula r);
Formula f_iff(Formula l, Formula r);
Formula f_eq(std::string lhs, std::string rhs);

// Parses `->`, `<->`, `\/`, `/\`, `~`, `=`, parentheses, True/False and
// identifiers with Coq-like precedence (-> loosest and right-associative,
// then <->, \/, /\, ~ tightest). Throws EnvironmentError on bad syntax.
Formula parse_formula(const std::string& text);

// Prints with minimal parentheses; parse_formula(print_formula(f)) == f.
std::string print_formula(const Formula& f);

// Atom names occurring in f, sorted.
std::set<std::string> atoms_of(const Formula& f);

// Constant names occurring on either side of an Eq, sorted.
std::set<std::string> constants_of(const Formula& f);

// Classical evaluation. Atoms read from the assignment (absent = false);
// Eq is true iff both sides are the same constant.
bool eval_formula(const Formula& f, const std::map<std::string, bool>& assignment);

}  // namespace cobble

#endif  // COBBLE_FORMULA_HPP_
