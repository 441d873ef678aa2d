// automata.hpp -- NFA engine, a regex subset, builders for elementary
// piecewise testable / local / renewal languages, letter relations and the
// syntactic monoid with its idempotent exponent.
#pragma once

#include <memory>
#include <variant>

#include "qms/core.hpp"

namespace qms {

// ---------------------------------------------------------------------------
// Nfa

/// Nondeterministic finite automaton without epsilon transitions.
struct Nfa {
  Alphabet alphabet;
  int num_states = 0;
  // per-state: letter -> sorted target list
  std::vector<std::map<Letter, std::vector<int>>> delta;
  std::set<int> initial;
  std::set<int> final;

  void add_transition(int from, Letter a, int to);
  bool accepts(const Word& w) const;
};

bool is_empty_language(const Nfa& n);
/// Some accepted word (shortest), if any.
std::optional<Word> shortest_accepted(const Nfa& n);

Nfa nfa_union(const Nfa& a, const Nfa& b);
Nfa nfa_intersection(const Nfa& a, const Nfa& b);
/// Complement via determinization; determinized state count capped.
Nfa nfa_complement(const Nfa& a, size_t det_cap = 1 << 16);
/// Deterministic, complete automaton for the same language.
Nfa determinize(const Nfa& a, size_t det_cap = 1 << 16);
/// S* L S* over the same alphabet.
Nfa pad_both_sides(const Nfa& a);

// ---------------------------------------------------------------------------
// Regex

/// Abstract syntax: empty language, epsilon, letter, any letter,
/// concatenation, union, star, complement.
struct Regex {
  struct Empty {};
  struct Epsilon {};
  struct Lit {
    Letter a;
  };
  struct Any {};
  struct Concat {
    std::shared_ptr<Regex> l, r;
  };
  struct Union {
    std::shared_ptr<Regex> l, r;
  };
  struct Star {
    std::shared_ptr<Regex> e;
  };
  struct Complement {
    std::shared_ptr<Regex> e;
  };
  std::variant<Empty, Epsilon, Lit, Any, Concat, Union, Star, Complement> node;
};

/// Grammar: single-glyph letters, juxtaposition concatenates, `+` unions,
/// `*` stars (postfix), `~` complements (prefix), `@` any letter, `()`
/// groups, whitespace ignored. The empty regex denotes the empty language.
Regex parse_regex(const Alphabet& alpha, std::string_view text);

Nfa compile(const Alphabet& alpha, const Regex& r, size_t det_cap = 1 << 16);
Nfa compile(const Alphabet& alpha, std::string_view regex_text);

// ---------------------------------------------------------------------------
// Language family builders

/// a_1 S* a_2 S* ... S* a_k (exactly {a_1} when k = 1).
Nfa build_elementary_pt(const Alphabet& alpha, const Word& letters);
/// (A S* n S* B) \ S* F S* with F a set of two-letter words.
Nfa build_local(const Alphabet& alpha, const std::set<Letter>& A,
                const std::set<Letter>& B, const std::set<Word>& F);
/// u (w_1 + ... + w_k)* v.
Nfa build_renewal(const Alphabet& alpha, const Word& u, const Word& v,
                  const std::vector<Word>& ws);

// ---------------------------------------------------------------------------
// Letter relations

/// Boolean relation on Q x Q; composition is boolean matrix product.
struct BoolRelation {
  int n = 0;
  std::vector<bool> bits;  // row-major

  static BoolRelation identity(int n);
  bool get(int i, int j) const { return bits[static_cast<size_t>(i) * n + j]; }
  void set(int i, int j, bool v) { bits[static_cast<size_t>(i) * n + j] = v; }
  BoolRelation compose(const BoolRelation& o) const;
  bool operator==(const BoolRelation&) const = default;
  auto operator<=>(const BoolRelation&) const = default;
};

/// Relation of reading w: (q, q') set iff the automaton can go q -> q'.
/// Letters outside the alphabet are an error.
BoolRelation word_relation(const Nfa& n, const Word& w);

// ---------------------------------------------------------------------------
// Syntactic monoid

/// Transition monoid of the minimal DFA: one element per distinct state
/// function, with a representative word each.
class SyntacticMonoid {
 public:
  /// Builds the minimal complete DFA for L(n) and generates its monoid.
  explicit SyntacticMonoid(const Nfa& n, size_t element_cap = 200000);

  int size() const { return static_cast<int>(elements_.size()); }
  int identity() const { return id_; }
  int product(int x, int y) const;
  const Word& representative(int x) const { return reps_[x]; }

  /// Least p >= 1 with m^p = m^(p+1) for every element, or nullopt when
  /// some element generates a nontrivial cycle (not aperiodic).
  std::optional<int> idempotent_exponent() const;

 private:
  std::vector<std::vector<int>> elements_;  // state maps of the minimal DFA
  std::vector<Word> reps_;
  std::map<std::vector<int>, int> index_;
  std::vector<std::vector<int>> letter_action_;  // generator index per letter
  int id_ = 0;
};

/// Minimal complete DFA for L(n) (Moore refinement after determinizing).
Nfa minimal_dfa(const Nfa& n, size_t det_cap = 1 << 16);

}  // namespace qms
