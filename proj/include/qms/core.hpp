// core.hpp -- alphabets, finite words, eventually periodic bi-infinite
// points, clopen sets and semilinear occurrence sets.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qms {

using Letter = int;
using Word = std::vector<Letter>;
using Index = long long;

/// Malformed textual input (files, CLI arguments, literals).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A search or materialization exceeded its configured budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Alphabet

/// Finite ordered set of letters (small non-negative integers) with an
/// optional printable glyph per letter. Glyphs are presentation-only.
class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(std::vector<Letter> letters, std::map<Letter, char> glyphs);

  /// Letters 0..k-1 with default glyphs 0-9, a-z.
  static Alphabet range(int k);
  /// One letter per glyph, letter values 0..n-1 in glyph order.
  static Alphabet from_glyphs(std::string_view glyphs);

  int size() const { return static_cast<int>(letters_.size()); }
  const std::vector<Letter>& letters() const { return letters_; }
  bool contains(Letter a) const;
  bool contains_word(const Word& w) const;
  char glyph(Letter a) const;
  std::optional<Letter> letter_of(char g) const;

  /// Parses a glyph string; throws ParseError on unknown glyphs.
  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& w) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<Letter> letters_;
  std::map<Letter, char> glyphs_;
};

// ---------------------------------------------------------------------------
// Word helpers

Word concat(const Word& a, const Word& b);
Word repeat(const Word& w, Index times);
Word reversed(const Word& w);
bool is_subword(const Word& u, const Word& w);
bool starts_with(const Word& w, const Word& prefix);
bool ends_with(const Word& w, const Word& suffix);
/// Shortest x with w = x^k; w itself if primitive.
Word primitive_root(const Word& w);
/// Lexicographically least rotation (Booth-style scan, w nonempty).
int least_rotation_index(const Word& w);

/// Exactly the length-n factors of w (empty set when n > |w|).
std::set<Word> factors(const Word& w, int n);

/// Words over natural numbers print as space-separated decimals.
std::string format_nat_word(const Word& w);
Word parse_nat_word(std::string_view text);

// ---------------------------------------------------------------------------
// SemilinearSet

/// Arithmetic progression {start + n*step : n >= 0}; step 0 is a singleton,
/// negative steps descend.
struct Progression {
  Index start = 0;
  Index step = 0;
  bool contains(Index i) const;
  auto operator<=>(const Progression&) const = default;
};

/// Finite union of arithmetic progressions with decidable membership.
class SemilinearSet {
 public:
  SemilinearSet() = default;
  explicit SemilinearSet(std::vector<Progression> ps);

  static SemilinearSet singleton(Index i);

  bool contains(Index i) const;
  bool empty() const { return progressions_.empty(); }
  const std::vector<Progression>& progressions() const { return progressions_; }
  void add(Progression p);
  /// Merges duplicate and nested progressions of equal step.
  void normalize();
  std::string to_string() const;

 private:
  std::vector<Progression> progressions_;
};

// ---------------------------------------------------------------------------
// Eventually periodic points

/// The point INF(u) v . v' w INF(w): left period u repeated into the past,
/// a finite center, right period w repeated into the future. Stored in
/// canonical form: periods are primitive and rotated minimal, the center
/// absorbs nothing that a period copy could express, so two presentations
/// of one point compare equal field-by-field and two presentations of
/// shift-equivalent points differ only in origin.
class EpPoint {
 public:
  /// center occupies [origin, origin+|center|); u blocks end at origin-1,
  /// w blocks start at origin+|center|. Periods must be nonempty.
  EpPoint(Word left, Word center, Word right, Index origin = 0);

  Letter at(Index i) const;
  /// Inclusive window [lo, hi].
  Word window(Index lo, Index hi) const;

  /// sigma^k: letter previously at i+k moves to i.
  EpPoint shifted(Index k) const;

  bool same_point(const EpPoint& other) const;
  bool same_orbit(const EpPoint& other) const;
  bool is_periodic() const;

  const Word& left() const { return left_; }
  const Word& center() const { return center_; }
  const Word& right() const { return right_; }
  Index origin() const { return origin_; }

  /// {i : p[i, i+|u|-1] = u} as a semilinear set; u nonempty.
  SemilinearSet occurrences(const Word& u) const;

  /// Length-n factors of the orbit closure (includes both tail periodic
  /// limit points).
  std::set<Word> language_n(int n) const;

  std::string to_string(const Alphabet& alpha) const;

 private:
  void canonicalize();
  Word left_, center_, right_;
  Index origin_ = 0;
};

/// Union of length-n factor sets of the orbit closures of the given points.
std::set<Word> language_n(const std::vector<EpPoint>& points, int n);

/// Point literal `INF(u) v . v' w INF(w)`, glyphs per alphabet,
/// whitespace-separated tokens, the dot its own token.
EpPoint parse_point(const Alphabet& alpha, std::string_view text);

// ---------------------------------------------------------------------------
// Clopen sets

/// Union of cylinders [w]_0 over a set of words of uniform width.
class ClopenSet {
 public:
  ClopenSet() = default;
  ClopenSet(int width, std::set<Word> words);
  /// Comma-separated glyph words, all the same length.
  static ClopenSet parse(const Alphabet& alpha, std::string_view text);

  int width() const { return width_; }
  const std::set<Word>& words() const { return words_; }
  bool matches(const Word& w) const { return words_.contains(w); }

 private:
  int width_ = 1;
  std::set<Word> words_;
};

}  // namespace qms
