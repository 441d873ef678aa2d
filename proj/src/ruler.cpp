#include "qms/ruler.hpp"

#include <algorithm>
#include <bit>

namespace qms {
namespace ruler {

int ruler_value(Index i) {
  if (i < 0) throw ParseError("ruler_value wants a non-negative index");
  return std::countr_zero(static_cast<unsigned long long>(i) + 1ULL);
}

SemilinearSet positions(int j) {
  if (j < 0 || j > 60) throw ParseError("symbol out of range");
  Index p = Index(1) << (j + 1);
  Index off = (Index(1) << j) - 1;
  return SemilinearSet({Progression{off, p}});
}

Word window(Index from, Index to) {
  Word w;
  for (Index i = from; i <= to; ++i) w.push_back(ruler_value(i));
  return w;
}

Word maximal_word(int k) {
  if (k < 0 || k > 24) throw BudgetError("maximal word too large");
  Word m = {0};
  for (int j = 1; j <= k; ++j) {
    Word next = m;
    next.push_back(j);
    next.insert(next.end(), m.begin(), m.end());
    m = std::move(next);
  }
  return m;
}

static int top_symbol(const Word& w) {
  return *std::max_element(w.begin(), w.end());
}

bool is_factor(const Word& w) {
  if (w.empty()) return true;
  int K = top_symbol(w);
  if (K > 24) return false;  // outside desk-scale scan; symbols this large
                             // never arise from our constructions
  Index len = (Index(1) << (K + 2)) + static_cast<Index>(w.size());
  Word seg = window(0, len);
  return is_subword(w, seg);
}

// Locates w inside the maximal word of its top symbol. A ruler factor
// contains its top symbol exactly once, which pins the placement.
static std::optional<size_t> place_in_maximal(const Word& w, const Word& m) {
  int K = top_symbol(w);
  size_t j = 0;
  int count = 0;
  for (size_t i = 0; i < w.size(); ++i)
    if (w[i] == K) {
      j = i;
      ++count;
    }
  if (count != 1) return std::nullopt;
  size_t kpos = (size_t(1) << K) - 1;  // position of K inside m
  if (kpos < j || kpos - j + w.size() > m.size()) return std::nullopt;
  size_t start = kpos - j;
  for (size_t i = 0; i < w.size(); ++i)
    if (m[start + i] != w[i]) return std::nullopt;
  return start;
}

Word deterministic_extension(const Word& w) {
  if (w.empty()) throw NotAFactor("empty word has no deterministic extension");
  if (!is_factor(w)) throw NotAFactor("not a factor of the ruler sequence");
  Word m = maximal_word(top_symbol(w));
  if (!place_in_maximal(w, m))
    throw NotAFactor("not a factor of the ruler sequence");
  return m;
}

Word extend_with(const Word& w, std::optional<int> left_sym,
                 std::optional<int> right_sym) {
  Word cur = deterministic_extension(w);
  auto step = [&](int sym, bool on_left) {
    int k = top_symbol(cur);
    if (sym <= k)
      throw ParseError("inserted symbol must exceed the current top symbol " +
                       std::to_string(k));
    Word grown = cur;
    if (on_left)
      grown.insert(grown.begin(), sym);
    else
      grown.push_back(sym);
    cur = deterministic_extension(grown);
  };
  if (left_sym) step(*left_sym, true);
  if (right_sym) step(*right_sym, false);
  return cur;
}

// psi generation: the word covers coordinates [lo, lo+|word|-1] with the
// seed 0 fixed at coordinate 0. Each round appends the smallest missing
// symbol on the right, extends maximally, prepends the next smallest
// missing symbol on the left, extends maximally.
namespace {
struct PsiState {
  Word word = {0};
  Index lo = 0;

  int smallest_missing() const {
    std::vector<bool> seen(word.size() + 2, false);
    for (Letter a : word)
      if (a < static_cast<Letter>(seen.size())) seen[a] = true;
    int s = 0;
    while (seen[s]) ++s;
    return s;
  }

  void extend_max() {
    Word m = maximal_word(*std::max_element(word.begin(), word.end()));
    auto pos = place_in_maximal(word, m);
    if (!pos) throw std::logic_error("psi word lost ruler structure");
    lo -= static_cast<Index>(*pos);
    word = std::move(m);
  }

  void round() {
    word.push_back(smallest_missing());
    extend_max();
    word.insert(word.begin(), smallest_missing());
    lo -= 1;
    extend_max();
  }
};
}  // namespace

Word psi_range(Index lo_want, Index hi_want) {
  PsiState st;
  while (st.lo > lo_want ||
         st.lo + static_cast<Index>(st.word.size()) - 1 < hi_want) {
    st.round();
    if (st.word.size() > (size_t(1) << 26))
      throw BudgetError("psi window too large");
  }
  Word out;
  for (Index i = lo_want; i <= hi_want; ++i)
    out.push_back(st.word[static_cast<size_t>(i - st.lo)]);
  return out;
}

Word psi_window(Index radius) { return psi_range(-radius, radius); }

}  // namespace ruler
}  // namespace qms
