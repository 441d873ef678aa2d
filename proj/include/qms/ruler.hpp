// ruler.hpp -- the ruler sequence, its maximal words, deterministic
// extension, and the computable two-sided point psi.
#pragma once

#include <optional>

#include "qms/core.hpp"

namespace qms {
namespace ruler {

/// 2-adic valuation of i+1: 0 1 0 2 0 1 0 3 ...
int ruler_value(Index i);

/// {n*2^(j+1) + 2^j - 1 : n >= 0}, the positions carrying symbol j.
SemilinearSet positions(int j);

/// phi[from..to] inclusive.
Word window(Index from, Index to);

/// The unique maximal word with top symbol k: length 2^(k+1)-1, symbol k
/// at index 2^k-1, all symbols <= k.
Word maximal_word(int k);

/// True iff w occurs in the ruler sequence; decided on a window of length
/// 2^(K+2) + |w| where K = max symbol of w.
bool is_factor(const Word& w);

struct NotAFactor : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The unique maximal word v w v' with the same top symbol as w.
/// Throws NotAFactor when w does not occur in the ruler sequence.
Word deterministic_extension(const Word& w);

/// Stepwise extension: first extend w to its maximal word, then insert the
/// given symbols (left first), re-extending maximally after each. An
/// inserted symbol must exceed the current top symbol.
Word extend_with(const Word& w, std::optional<int> left_sym,
                 std::optional<int> right_sym);

/// Central window psi[-radius, radius] of the computable two-sided point
/// built by the smallest-missing-symbol procedure.
Word psi_window(Index radius);

/// psi as a point accessor over an index range (shares the generation).
Word psi_range(Index lo, Index hi);

}  // namespace ruler
}  // namespace qms
