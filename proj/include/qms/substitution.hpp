// substitution.hpp -- substitution systems X_tau: iteration, growth
// classification, syndeticity of long symbols, subsystem counting, and the
// regular-intersection decision with its periodicity certificate.
#pragma once

#include <gmpxx.h>

#include "qms/automata.hpp"
#include "qms/core.hpp"

namespace qms {

/// Non-erasing letter-to-word substitution.
class Substitution {
 public:
  Substitution(Alphabet alpha, std::map<Letter, Word> image);

  /// Line format: `letter -> word`, single glyphs, `#` comments.
  static Substitution parse(std::string_view text);

  const Alphabet& alphabet() const { return alpha_; }
  const Word& image(Letter a) const;
  std::string to_string() const;

 private:
  Alphabet alpha_;
  std::map<Letter, Word> image_;
};

/// M[a][b] = occurrences of b in tau(a); powers give iterate lengths.
class IncidenceMatrix {
 public:
  explicit IncidenceMatrix(const Substitution& tau);
  /// |tau^n(a)| via exact matrix powers.
  mpz_class iterate_length(Letter a, int n) const;

 private:
  std::vector<Letter> letters_;
  std::vector<std::vector<mpz_class>> m_;
  int index_of(Letter a) const;
};

/// tau^n(a); throws BudgetError past the length cap.
Word iterate(const Substitution& tau, Letter a, int n,
             size_t length_cap = 10'000'000);

/// Letters whose iterate lengths are unbounded: a is long iff it reaches,
/// in the occurrence graph b -> c for c in tau(b), a cycle through some
/// letter d with |tau(d)| >= 2.
std::set<Letter> long_symbols(const Substitution& tau);

struct SyndeticResult {
  enum Kind { Syndetic, NonSyndetic, Budget } kind;
  int m = 0;               // on Syndetic: every factor of length >= m
                           // contains a long symbol
  Word pumping_witness;    // on NonSyndetic: a short run that derives a
                           // strictly longer copy of itself
};

/// Decides whether long symbols occur syndetically in X_tau by a least
/// fixpoint over maximal short runs with flank contributions.
SyndeticResult syndetic_long(const Substitution& tau, int cap = 10000);

/// 2^(|S|^(m+1)), the subsystem-count bound for syndeticity constant m.
mpz_class quasiminimal_bound(const Substitution& tau, int m);

/// B(k) = sum_j C(k,j) 2^(j(j-1)).
mpz_class subsystem_count_B(int k);

/// All subsystems of the k-block-letter example, enumerated extensionally
/// as their short-word languages; k <= 3 for the enumeration to stay desk
/// scale.
std::vector<std::set<Word>> brute_force_subsystems(int k);

/// Certificate for "tau^n(a) in L for some n".
struct RegIntersectCertificate {
  bool yes = false;
  int witness_n = -1;      // on yes: least n with tau^n(a) in L
  int t = -1, p = -1;      // relation period: R_t = R_{t+p}
};

/// Decidable regular intersection along iterates of one letter.
RegIntersectCertificate decide_regular_intersection(const Substitution& tau,
                                                    Letter a, const Nfa& L,
                                                    int iteration_cap = 4096);

/// Re-checks a certificate: on yes, direct evaluation of tau^n(a) when the
/// word is materializable; on no, the relation equality R_t = R_{t+p}.
bool verify_regular_intersection(const Substitution& tau, Letter a,
                                 const Nfa& L,
                                 const RegIntersectCertificate& cert,
                                 size_t length_cap = 200'000);

/// The paper's language-level procedure: is tau^n(a) in S* L S* for some n
/// and some a? This can strictly over-approximate B(X_tau) n L != empty.
struct LanguageIntersection {
  bool nonempty = false;
  Letter witness_letter = -1;
  int witness_n = -1;
  std::map<Letter, RegIntersectCertificate> per_letter;
};
LanguageIntersection decide_language_intersection(const Substitution& tau,
                                                  const Nfa& L,
                                                  int iteration_cap = 4096);

/// All length-n factors of tau^l(a) over a in S, l <= depth; an
/// over-approximation of B_n(X_tau), monotone in depth.
std::set<Word> xtau_factors(const Substitution& tau, int n, int depth,
                            size_t length_cap = 10'000'000);

}  // namespace qms
