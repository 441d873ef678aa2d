// template_subshift.hpp -- countable subshifts presented as finite unions
// of periodic-block templates: membership, Cantor-Bendixson derivative and
// rank, and the halting / modular / counting / tuple decision procedures.
#pragma once

#include "qms/core.hpp"

namespace qms {

/// One template: INF(left) c_1 q_1^e1 c_2 q_2^e2 ... c_k INF(right) with
/// free exponents e_i >= 0. Its closed semantics is the orbit closure of
/// all finite-exponent realizations (which adds every exponent->infinity
/// split point and the two tail periodic points).
class BlockTemplate {
 public:
  struct Block {
    Word connector_before;  // may be empty
    Word body;              // nonempty, repeated e >= 0 times
    bool operator==(const Block&) const = default;
    auto operator<=>(const Block&) const = default;
  };

  BlockTemplate(Word left_tail, std::vector<Block> blocks, Word final_connector,
                Word right_tail);

  static BlockTemplate point(const EpPoint& p);

  const Word& left_tail() const { return left_; }
  const Word& right_tail() const { return right_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Word& final_connector() const { return final_connector_; }
  int exponent_count() const { return static_cast<int>(blocks_.size()); }

  /// The realization with the given exponents, padded with `pad` extra
  /// copies of each tail; also reports which indices the core occupies.
  struct Realization {
    Word word;
    Index core_begin = 0;  // first index after the left padding
    Index core_end = 0;    // one past the final connector
  };
  Realization realize(const std::vector<Index>& exponents, Index pad) const;

  /// As an eventually periodic point (exponent-free templates only),
  /// centered with the core starting at 0.
  EpPoint as_point() const;

  /// Structural normal form: primitive, minimally rotated tails with the
  /// rotation remainders absorbed into the adjacent connectors.
  void normalize();

  bool operator==(const BlockTemplate&) const = default;
  auto operator<=>(const BlockTemplate&) const = default;

  std::string to_string(const Alphabet& alpha) const;

 private:
  Word left_;
  std::vector<Block> blocks_;
  Word final_connector_;
  Word right_;
};

/// Finite union of template closures.
class TemplateSubshift {
 public:
  TemplateSubshift() = default;
  explicit TemplateSubshift(std::vector<BlockTemplate> templates);
  TemplateSubshift(Alphabet alpha, std::vector<BlockTemplate> templates);

  /// Line format: one template per line, `|`-separated items `L:word`,
  /// `C:word`, `E:word`, `R:word`; first item L, last item R; `#` comments.
  static TemplateSubshift parse(std::string_view text);
  static TemplateSubshift parse(const Alphabet& alpha, std::string_view text);

  const std::vector<BlockTemplate>& templates() const { return templates_; }
  const Alphabet& alphabet() const { return alpha_; }
  bool empty() const { return templates_.empty(); }

  /// Exact membership of w in the language of the union of closures.
  bool member(const Word& w) const;

  /// All length-n factors (exact, via exponent saturation).
  std::set<Word> language_n(int n) const;

  /// The set of non-isolated points, again as a template subshift.
  TemplateSubshift cb_derivative() const;

  /// Number of derivative steps until empty.
  int cb_rank(int step_cap = 64) const;

  std::string to_string() const;

 private:
  std::vector<BlockTemplate> templates_;
  Alphabet alpha_;
  void dedupe();
};

// ---------------------------------------------------------------------------
// Decision procedures

struct Reachability {
  bool reachable = false;
  // witness: template index, exponents, start offset of the C window in the
  // realization, and the travel time j
  int template_index = -1;
  std::vector<Index> exponents;
  Index j = -1;
};

/// Halting: is there x in T and j >= min_j with x in [C], sigma^j(x) in [D]?
Reachability decide_halting(const TemplateSubshift& T, const ClopenSet& C,
                            const ClopenSet& D, Index min_j = 0);

/// Modular halting: additionally j = k mod m.
Reachability decide_modular(const TemplateSubshift& T, const ClopenSet& C,
                            const ClopenSet& D, Index k, Index m,
                            Index min_j = 0);

/// Counting: x in [C], sigma^j(x) in [D], exactly `count` intermediate
/// steps through [F], every other intermediate step through [E].
Reachability decide_counting(const TemplateSubshift& T, const ClopenSet& C,
                             const ClopenSet& D, const ClopenSet& E,
                             const ClopenSet& F, Index count);

/// Tuple: some point contains the given words in order at strictly
/// increasing positions.
bool decide_tuple(const TemplateSubshift& T, const std::vector<Word>& tuple);

}  // namespace qms
