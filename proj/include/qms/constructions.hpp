// constructions.hpp -- the oracle-parameterized universal subshifts:
// one-minimal, transitive locally-testable, modular (simple and primorial),
// counting, and the Dyck-shift construction, with their solvers and
// reduction verifiers; prefix-code extraction and the generic builder.
#pragma once

#include <array>
#include <gmpxx.h>

#include "qms/order.hpp"
#include "qms/ruler.hpp"

namespace qms {

// ---------------------------------------------------------------------------
// HaltingOracle

/// Finite table standing in for a Turing machine enumeration: machine
/// indices start at 1, entries say "halts exactly after step s" or "never
/// halts"; indices beyond the table never halt. The dovetail map h feeding
/// the constructions is the ruler sequence shifted to 1-based indices.
class HaltingOracle {
 public:
  HaltingOracle() = default;
  explicit HaltingOracle(std::map<int, Index> halts_at);

  /// Line format: `INDEX halts STEP`, `INDEX never`, optional
  /// `default never`, `#` comments.
  static HaltingOracle parse(std::string_view text);

  bool halts(int j) const;
  std::optional<Index> halt_step(int j) const;
  /// Halts at some step s < step.
  bool halts_before(int j, Index step) const;
  /// Halts at some step s <= step.
  bool halts_within(int j, Index step) const;

  /// Dovetail: machine index scheduled at position i (infinite-to-one).
  static int dovetail(Index i) { return ruler::ruler_value(i) + 1; }

  const std::map<int, Index>& halting_entries() const { return table_; }
  std::string to_string() const;

 private:
  std::map<int, Index> table_;  // only halting entries are stored
};

// ---------------------------------------------------------------------------
// One-minimal construction (universal, finitely many minimal subsystems)

/// Orbit closure of the points x_i = INF(0) 1^i 2^(i+s_i) 3 INF(3) for
/// halting machines (halt step s_i) and INF(0) 1^i 2 INF(2) otherwise.
class OneMinimalSystem {
 public:
  explicit OneMinimalSystem(HaltingOracle oracle);

  const Alphabet& alphabet() const { return alpha_; }
  const HaltingOracle& oracle() const { return oracle_; }

  /// The generating point for machine i >= 1.
  EpPoint point(int i) const;

  /// Exact membership of w in B(X), by case analysis on the run shape.
  bool member(const Word& w) const;

  /// Halting status of T_i (table lookup).
  bool solver(int i) const;
  /// Scans the generated point x_i for a [0 1^i 2] -> [3] transition.
  bool transition_witness(int i) const;

  /// The enveloping template system (independent-exponent envelope of the
  /// never-halting family plus one connector template per halting entry).
  TemplateSubshift as_templates() const;

 private:
  HaltingOracle oracle_;
  Alphabet alpha_;
};

// ---------------------------------------------------------------------------
// Prefix codes from right-perfect subshifts

/// Branch-and-restrict extraction of an infinite prefix code: words are
/// enumerated by length then lexicographically; each round takes the first
/// word with two one-symbol extensions, emits the smaller branch and
/// restricts the enumeration to the other.
std::vector<Word> extract_prefix_code(const LanguageOracle& y, int count,
                                      int horizon = 64);
/// Mirror image (suffix code from a left-perfect subshift).
std::vector<Word> extract_suffix_code(const LanguageOracle& y, int count,
                                      int horizon = 64);

// ---------------------------------------------------------------------------
// Transitive construction with undecidable halting along a clopen set

/// x = tau(psi) over the alphabet of Y plus a fresh marker 0, where
/// tau(n) = 0 u_h(n) w_n v_h(n) (non-halting) or 0 u_h(n) w_n v_h(n)+1
/// (halting), u/v prefix and suffix codes of Y, psi the two-sided ruler
/// point.
class TransitiveLtConstruction {
 public:
  /// y must use letters >= 1; the marker is letter 0.
  TransitiveLtConstruction(HaltingOracle oracle, LanguageOracle y,
                           int code_count = 12);

  const Alphabet& alphabet() const { return alpha_; }
  const std::vector<Word>& prefix_code() const { return u_; }
  const std::vector<Word>& suffix_code() const { return v_; }

  /// Image of symbol value n.
  Word tau_image(Index n) const;
  /// Window of tau(psi); the image of psi_0 starts at position 0.
  Word window(Index lo, Index hi) const;

  bool solver(int j) const { return oracle_.halts(j); }
  /// Scans [0, len) of x for a factor 0 u_j (nonzero)* v_(j+1) 0.
  bool scan_witness(int j, Index len) const;

 private:
  HaltingOracle oracle_;
  LanguageOracle y_;
  std::vector<Word> u_, v_;
  Alphabet alpha_;
  mutable std::map<std::pair<int, Index>, Word> w_cache_;
  Word choose_w(Index n) const;  // the computable w_n
};

// ---------------------------------------------------------------------------
// Countable constructions: modular (simple), primorial, counting

/// Point accessor plus the look-up data that makes the orbit closure of a
/// sparse-nonzero point decidable.
struct CountablePointSpec {
  Alphabet alpha;
  std::function<Word(Index, Index)> window;  // inclusive point window
  /// Is INF(0) s INF(0) a limit point of the system?
  std::function<bool(Letter)> limit_point;
  /// m(n): beyond this coordinate, two nonzero symbols are > n apart.
  std::function<Index(Index)> far_bound;
  /// Largest |coordinate| carrying s, when s occurs but its sunny point is
  /// not in the system; nullopt = s never occurs.
  std::function<std::optional<Index>(Letter)> max_coordinate;
};

/// Membership in the orbit closure by the three-case analysis: several
/// nonzero symbols force a bounded window, single-nonzero words consult
/// the limit table, all-zero words are always present.
bool countable_member(const CountablePointSpec& x, const Word& w);

/// x = INF(0).tau(0 1 2 ...) with tau(i) = 1 0^(2^i), or 1 0^(p_h(i) 2^i)
/// when T_h(i) halted before step i; p_j is the j-th odd prime.
class ModularSimpleConstruction {
 public:
  explicit ModularSimpleConstruction(HaltingOracle oracle);

  static Index odd_prime(int j);  // p_1 = 3, p_2 = 5, ...

  /// Zero-run length following the 1 of block i.
  Index zero_run(Index i) const;
  /// Start coordinate of block i (position of its 1); block 0 starts at 0.
  Index block_start(Index i) const;
  Word window(Index lo, Index hi) const;

  bool solver(int j) const { return oracle_.halts(j); }
  /// Some zero-run divisible by p_j with both flanking 1s in [0, len).
  bool gap_witness(int j, Index len) const;

  CountablePointSpec point_spec() const;

 private:
  HaltingOracle oracle_;
};

/// Primorial variant: levels of exact big-integer arithmetic. Conforming
/// mode uses the paper's growth condition (level 2 prime computable, its
/// primorial not materializable); toy mode drops the growth condition and
/// stays materializable.
class PrimorialConstruction {
 public:
  enum class Mode { Conforming, Toy };

  struct Level {
    int index = 0;            // i
    mpz_class prime;          // p(f(i))
    mpz_class primorial;      // p(f(i))#
    int machine = 0;          // h(i)
    bool halting = false;     // halting clause applies at this level
    mpz_class k;              // the modular-inverse coefficient, if halting
    mpz_class distance;       // |tau(i)|: spacing of consecutive 1s
  };

  PrimorialConstruction(Mode mode, HaltingOracle oracle, int levels);

  Mode mode() const { return mode_; }
  bool conforming() const { return mode_ == Mode::Conforming; }
  const std::vector<Level>& levels() const { return levels_; }

  /// p(f(i)); in conforming mode computable one step past the
  /// materializable levels.
  const mpz_class& prime_at(int i) const;

  /// 2j p(f(j-1))# <= p(f(j-1))^p(f(j-1)) <= p(f(j)) for computed j.
  bool growth_chain_holds() const;

  bool solver(int j) const { return oracle_.halts(j); }
  /// Some computed distance == 1 mod p(f(j)).
  bool symbolic_witness(int j) const;

  /// Toy mode only: materializes INF(0).tau(0 1 ...) out to len symbols.
  Word window(Index len) const;

 private:
  Mode mode_;
  HaltingOracle oracle_;
  std::vector<mpz_class> primes_;      // may hold one more than levels_
  std::vector<Level> levels_;
};

/// x = INF(0).tau(0 1 2 ...) with tau(i) = 2 0^i, or 2 (0^i 1)^h(i) 0^i
/// when T_h(i) halted before step i.
class CountingConstruction {
 public:
  explicit CountingConstruction(HaltingOracle oracle);

  Word block(Index i) const;
  Index block_start(Index i) const;
  Word window(Index lo, Index hi) const;

  bool solver(int j) const { return oracle_.halts(j); }
  /// Some factor 2 (0^i 1)^j 0^i 2 fully inside [0, len).
  bool block_witness(int j, Index len) const;

  CountablePointSpec point_spec() const;

 private:
  HaltingOracle oracle_;
};

// ---------------------------------------------------------------------------
// Dyck construction (context-free model checking on a minimal subshift)

/// Letters 0..5 stand for [1 [2 [3 ]3 ]2 ]1; the PDA pushes s on [s and
/// pop-matches on ]s, watching the stack top for 3 1^k 2.
class DyckConstruction {
 public:
  static constexpr int kAlphabetSize = 6;
  static Letter open_bracket(int s) { return s - 1; }   // s in 1..3
  static Letter close_bracket(int s) { return 6 - s; }  // s in 1..3

  struct Level {
    int index = 0;                // i
    std::array<Word, 6> words;    // [1 [2 [3 ]3 ]2 ]1 in letter order 0..5
    Index length = 0;             // n_i
    bool halting_inserted = false;
  };

  struct PdaRun {
    bool accepted = false;        // no mismatched pop
    bool pattern_seen = false;    // 3 1^k 2 appeared on top of the stack
    bool prefix_invariant = true; // stack stayed v or v 3 w' on every
                                  // proper prefix
    Index max_stack = 0;
  };

  DyckConstruction(HaltingOracle oracle, int depth,
                   Index length_cap = 64'000'000);

  const Alphabet& alphabet() const { return alpha_; }
  const std::vector<Level>& levels() const { return levels_; }
  /// The all-pairs word u_i for a given level's words.
  static Word pair_word(const std::array<Word, 6>& words);

  static PdaRun pda_check(const Word& w, int k, const Word& initial_stack = {});

  bool solver(int j) const { return oracle_.halts(j); }
  /// Pattern 3 1^j 2 observed while reading the deepest level's [1 word.
  bool pattern_witness(int j) const;

 private:
  HaltingOracle oracle_;
  Alphabet alpha_;
  std::vector<Level> levels_;
};

// ---------------------------------------------------------------------------
// Generic quasiminimal builder

/// Window of tau(psi) for a substitution n -> marker . B(Y)-word with
/// image lengths nondecreasing and unbounded on the probed range; the
/// hypothesis is checked and violations are errors.
class GenericBuild {
 public:
  GenericBuild(std::function<Word(Index)> tau, Letter marker, Alphabet alpha);
  /// Image of psi_0 starts at position 0.
  Word window(Index lo, Index hi) const;

 private:
  std::function<Word(Index)> tau_;
  Letter marker_;
  Alphabet alpha_;
  Word image_checked(Index n) const;
};

}  // namespace qms
