#include "qms/order.hpp"

#include <algorithm>

namespace qms {

// ---------------------------------------------------------------------------
// LanguageOracle

LanguageOracle::LanguageOracle(Alphabet alpha,
                               std::function<std::set<Word>(int)> lang)
    : alpha_(std::move(alpha)), lang_(std::move(lang)) {}

const std::set<Word>& LanguageOracle::language_n(int n) const {
  auto it = cache_.find(n);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(n, lang_(n)).first->second;
}

bool LanguageOracle::in_language(const Word& w) const {
  if (w.empty()) return true;
  return language_n(static_cast<int>(w.size())).contains(w);
}

LanguageOracle LanguageOracle::from_points(Alphabet alpha,
                                           std::vector<EpPoint> pts) {
  return LanguageOracle(std::move(alpha), [pts = std::move(pts)](int n) {
    return qms::language_n(pts, n);
  });
}

LanguageOracle LanguageOracle::from_template(const TemplateSubshift& T) {
  return LanguageOracle(T.alphabet(), [T](int n) { return T.language_n(n); });
}

LanguageOracle LanguageOracle::from_forbidden(Alphabet alpha,
                                              std::set<Word> forbidden) {
  return LanguageOracle(
      alpha, [alpha, forbidden = std::move(forbidden)](int n) {
        std::set<Word> out;
        // DFS over words of length n avoiding every forbidden factor
        Word cur;
        auto bad_suffix = [&]() {
          for (auto& f : forbidden)
            if (f.size() <= cur.size() &&
                std::equal(f.begin(), f.end(), cur.end() - f.size()))
              return true;
          return false;
        };
        std::function<void()> rec = [&]() {
          if (static_cast<int>(cur.size()) == n) {
            out.insert(cur);
            return;
          }
          for (Letter a : alpha.letters()) {
            cur.push_back(a);
            if (!bad_suffix()) rec();
            cur.pop_back();
          }
        };
        rec();
        return out;
      });
}

LanguageOracle LanguageOracle::from_substitution(const Substitution& tau) {
  return LanguageOracle(tau.alphabet(), [tau](int n) {
    // Iterate until the factor set of every letter's iterate stabilizes
    // twice in a row.
    std::set<Word> prev, cur;
    int depth = 1;
    for (;; ++depth) {
      cur = xtau_factors(tau, n, depth);
      if (depth > 2 && cur == prev) break;
      prev = cur;
      if (depth > 64) throw BudgetError("substitution language not stabilizing");
    }
    return cur;
  });
}

// ---------------------------------------------------------------------------
// SFT approximation

std::set<Word> sft_approx_words(const LanguageOracle& oracle, int k, int m) {
  if (m < k) throw ParseError("sft_approx_words wants m >= k");
  const auto& allowed = oracle.language_n(k);
  std::set<Word> out;
  Word cur;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(cur.size()) == m) {
      out.insert(cur);
      return;
    }
    for (Letter a : oracle.alphabet().letters()) {
      cur.push_back(a);
      bool ok = true;
      if (static_cast<int>(cur.size()) >= k) {
        Word win(cur.end() - k, cur.end());
        ok = allowed.contains(win);
      }
      if (ok) rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

// ---------------------------------------------------------------------------
// leq semidecision

namespace {

// True iff every word of length |v| + 2h that is legal at SFT order k and
// carries v centered contains u.
bool check_pair(const LanguageOracle& oracle, const Word& u, const Word& v,
                int k, int h, long long node_budget = 2'000'000) {
  const auto& allowed = oracle.language_n(k);
  int total = static_cast<int>(v.size()) + 2 * h;
  // Fill positions right of v, then left; check k-windows incrementally.
  Word w(total, -1);
  std::copy(v.begin(), v.end(), w.begin() + h);
  long long nodes = 0;

  auto window_ok = [&](int pos_lo) {
    if (pos_lo < 0 || pos_lo + k > total) return true;
    for (int i = pos_lo; i < pos_lo + k; ++i)
      if (w[i] < 0) return true;  // incomplete, checked later
    Word win(w.begin() + pos_lo, w.begin() + pos_lo + k);
    return allowed.contains(win);
  };

  // all complete words must contain u: search for a counterexample
  std::function<bool(int, int)> rec = [&](int r, int l) -> bool {
    if (++nodes > node_budget) throw BudgetError("leq enumeration too large");
    if (r < total) {
      for (Letter a : oracle.alphabet().letters()) {
        w[r] = a;
        if (window_ok(r - k + 1) && rec(r + 1, l)) return true;
        w[r] = -1;
      }
      return false;
    }
    if (l >= 0) {
      for (Letter a : oracle.alphabet().letters()) {
        w[l] = a;
        if (window_ok(l) && rec(r, l - 1)) return true;
        w[l] = -1;
      }
      return false;
    }
    return !is_subword(u, w);  // counterexample: legal, centered v, no u
  };
  return !rec(h + static_cast<int>(v.size()), h - 1);
}

}  // namespace

LeqResult leq_semidecide(const LanguageOracle& oracle, const Word& u,
                         const Word& v, int budget) {
  if (!oracle.in_language(u) || !oracle.in_language(v))
    throw ParseError("leq_semidecide wants words inside the language");
  int k0 = std::max<int>({2, static_cast<int>(u.size()),
                          static_cast<int>(v.size())});
  for (int d = 0; d <= budget; ++d) {
    for (int h = 0; h <= d; ++h) {
      int k = k0 + (d - h);
      bool ok;
      try {
        ok = check_pair(oracle, u, v, k, h);
      } catch (const BudgetError&) {
        continue;
      }
      if (ok) return LeqResult{true, ProvenBound{u, v, k, h}};
    }
  }
  return LeqResult{false, {}};
}

GeneratorResult generator_check(const LanguageOracle& oracle, const Word& w,
                                int probe_length, int budget) {
  GeneratorResult out;
  out.proven = true;
  for (const Word& u : oracle.language_n(probe_length)) {
    auto r = leq_semidecide(oracle, u, w, budget);
    if (!r.proven) {
      out.proven = false;
      out.failing_word = u;
      return out;
    }
    out.bounds.push_back(r.bound);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table-driven halting

bool halting_with_tables(const HaltingTables& tables,
                         const LanguageOracle& oracle, const Word& u,
                         const Word& v, Index min_j) {
  int i = tables.resolve(u);
  int j = tables.resolve(v);
  if (i < 0 || j < 0)
    throw ParseError("halting_with_tables could not resolve a representative");
  const Word& wi = tables.reps[i];
  const Word& wj = tables.reps[j];
  Index window = static_cast<Index>(wi.size()) + tables.h_bound(u, wi) +
                 tables.h_bound(wi, u) + static_cast<Index>(wj.size()) +
                 tables.h_bound(v, wj) + tables.h_bound(wj, v);
  // Direct check: some legal word shows u at 0 and v at offset jj >= min_j
  // within the window.
  Index max_off = window;
  int len = static_cast<int>(max_off + static_cast<Index>(v.size()));
  len = std::max<int>(len, static_cast<int>(u.size()));
  const auto& words = oracle.language_n(len);
  for (const Word& cand : words) {
    if (!starts_with(cand, u)) continue;
    for (Index off = min_j; off <= max_off; ++off) {
      if (off + static_cast<Index>(v.size()) > static_cast<Index>(cand.size()))
        break;
      if (std::equal(v.begin(), v.end(), cand.begin() + off)) return true;
    }
  }
  return tables.H[i][j];
}

}  // namespace qms
