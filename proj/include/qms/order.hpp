// order.hpp -- generating-order semidecision against a language oracle,
// generator detection, and the table-driven halting decision.
#pragma once

#include <functional>
#include <memory>

#include "qms/core.hpp"
#include "qms/substitution.hpp"
#include "qms/template_subshift.hpp"

namespace qms {

/// A subshift presented through its language: a total map n -> B_n(X).
/// Results are memoized behind the call operator.
class LanguageOracle {
 public:
  LanguageOracle(Alphabet alpha, std::function<std::set<Word>(int)> lang);

  const Alphabet& alphabet() const { return alpha_; }
  const std::set<Word>& language_n(int n) const;
  bool in_language(const Word& w) const;

  static LanguageOracle from_points(Alphabet alpha, std::vector<EpPoint> pts);
  static LanguageOracle from_template(const TemplateSubshift& T);
  /// SFT with the given forbidden words; language taken as the words
  /// avoiding the forbidden set (exact for the fixtures used here).
  static LanguageOracle from_forbidden(Alphabet alpha, std::set<Word> forbidden);
  /// Factor language of a substitution system, stabilized by iteration;
  /// exact for primitive substitutions.
  static LanguageOracle from_substitution(const Substitution& tau);

 private:
  Alphabet alpha_;
  std::function<std::set<Word>(int)> lang_;
  mutable std::map<int, std::set<Word>> cache_;
};

/// A verified pair (k, h): in the order-k SFT approximation, every word of
/// length |v| + 2h carrying v at its center contains u.
struct ProvenBound {
  Word u, v;
  int k = 0;
  int h = 0;
};

struct LeqResult {
  bool proven = false;
  ProvenBound bound;  // valid when proven
};

/// All length-m words whose every length-k factor lies in B_k(X): the
/// order-k SFT approximation language at length m (m >= k).
std::set<Word> sft_approx_words(const LanguageOracle& oracle, int k, int m);

/// Semidecides u <=_X v: Proven only with a verified (k, h) pair; sound,
/// complete only up to the budget. Both words must be in the language.
LeqResult leq_semidecide(const LanguageOracle& oracle, const Word& u,
                         const Word& v, int budget = 8);

struct GeneratorResult {
  bool proven = false;
  std::vector<ProvenBound> bounds;  // one per word of B_n
  Word failing_word;                // first word left unproven, if any
};

/// Proven iff u <=_X w was proven for every u in B_n(X).
GeneratorResult generator_check(const LanguageOracle& oracle, const Word& w,
                                int probe_length, int budget = 8);

/// Inputs to the table-driven halting decision: representatives of the
/// generating poset, the halting matrix between their cylinders, and
/// proven h bounds. Resolution of ~ classes is supplied, not computed.
struct HaltingTables {
  std::vector<Word> reps;
  std::vector<std::vector<bool>> H;  // H[i][j]: halting answer [w_i]->[w_j]
  std::function<int(const Word&)> resolve;  // word -> rep index, -1 if unknown
  std::function<int(const Word&, const Word&)> h_bound;  // h_{a,b}
};

/// Checks a direct window of the paper-prescribed size for a u -> v
/// transition (with j >= min_j); otherwise falls back to the table.
bool halting_with_tables(const HaltingTables& tables,
                         const LanguageOracle& oracle, const Word& u,
                         const Word& v, Index min_j = 0);

}  // namespace qms
