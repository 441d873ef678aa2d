#include "qms/substitution.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace qms {

// ---------------------------------------------------------------------------
// Substitution

Substitution::Substitution(Alphabet alpha, std::map<Letter, Word> image)
    : alpha_(std::move(alpha)), image_(std::move(image)) {
  for (Letter a : alpha_.letters()) {
    auto it = image_.find(a);
    if (it == image_.end())
      throw ParseError("substitution misses a rule for a letter");
    if (it->second.empty())
      throw ParseError("substitution must be non-erasing");
    if (!alpha_.contains_word(it->second))
      throw ParseError("substitution image uses an unknown letter");
  }
  if (image_.size() != static_cast<size_t>(alpha_.size()))
    throw ParseError("substitution has a rule for an unknown letter");
}

Substitution Substitution::parse(std::string_view text) {
  struct Rule {
    char lhs;
    std::string rhs;
  };
  std::vector<Rule> rules;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string lhs, arrow, rhs;
    if (!(ls >> lhs)) continue;  // blank line
    if (!(ls >> arrow >> rhs) || arrow != "->" || lhs.size() != 1)
      throw ParseError("substitution rule must be `letter -> word`");
    std::string extra;
    if (ls >> extra) throw ParseError("trailing tokens in substitution rule");
    rules.push_back({lhs[0], rhs});
  }
  if (rules.empty()) throw ParseError("empty substitution");
  std::string glyphs;
  for (auto& r : rules) {
    if (glyphs.find(r.lhs) != std::string::npos)
      throw ParseError("duplicate substitution rule");
    glyphs += r.lhs;
  }
  Alphabet alpha = Alphabet::from_glyphs(glyphs);
  std::map<Letter, Word> image;
  for (auto& r : rules)
    image[*alpha.letter_of(r.lhs)] = alpha.parse_word(r.rhs);
  return Substitution(std::move(alpha), std::move(image));
}

const Word& Substitution::image(Letter a) const {
  auto it = image_.find(a);
  if (it == image_.end()) throw ParseError("letter outside alphabet");
  return it->second;
}

std::string Substitution::to_string() const {
  std::string s;
  for (Letter a : alpha_.letters()) {
    s += alpha_.glyph(a);
    s += " -> ";
    s += alpha_.format_word(image(a));
    s += '\n';
  }
  return s;
}

// ---------------------------------------------------------------------------
// IncidenceMatrix

IncidenceMatrix::IncidenceMatrix(const Substitution& tau)
    : letters_(tau.alphabet().letters()) {
  int k = static_cast<int>(letters_.size());
  m_.assign(k, std::vector<mpz_class>(k, 0));
  for (int i = 0; i < k; ++i)
    for (Letter b : tau.image(letters_[i])) m_[i][index_of(b)] += 1;
}

int IncidenceMatrix::index_of(Letter a) const {
  auto it = std::lower_bound(letters_.begin(), letters_.end(), a);
  if (it == letters_.end() || *it != a)
    throw ParseError("letter outside alphabet");
  return static_cast<int>(it - letters_.begin());
}

mpz_class IncidenceMatrix::iterate_length(Letter a, int n) const {
  int k = static_cast<int>(letters_.size());
  // row vector e_a * M^n, then sum
  std::vector<mpz_class> row(k, 0);
  row[index_of(a)] = 1;
  for (int step = 0; step < n; ++step) {
    std::vector<mpz_class> next(k, 0);
    for (int i = 0; i < k; ++i) {
      if (row[i] == 0) continue;
      for (int j = 0; j < k; ++j)
        if (m_[i][j] != 0) next[j] += row[i] * m_[i][j];
    }
    row = std::move(next);
  }
  mpz_class sum = 0;
  for (auto& x : row) sum += x;
  return sum;
}

// ---------------------------------------------------------------------------
// Iteration

Word iterate(const Substitution& tau, Letter a, int n, size_t length_cap) {
  if (!tau.alphabet().contains(a)) throw ParseError("letter outside alphabet");
  IncidenceMatrix M(tau);
  if (M.iterate_length(a, n) > static_cast<long>(length_cap))
    throw BudgetError("iterate exceeds the length budget");
  Word cur{a};
  for (int step = 0; step < n; ++step) {
    Word next;
    for (Letter b : cur) {
      const Word& im = tau.image(b);
      next.insert(next.end(), im.begin(), im.end());
    }
    cur = std::move(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Growth classification

std::set<Letter> long_symbols(const Substitution& tau) {
  const auto& ls = tau.alphabet().letters();
  int k = static_cast<int>(ls.size());
  auto idx = [&](Letter a) {
    return static_cast<int>(std::lower_bound(ls.begin(), ls.end(), a) -
                            ls.begin());
  };
  // reach[i][j]: j occurs in some tau^t(i), t >= 1
  std::vector<std::vector<bool>> reach(k, std::vector<bool>(k, false));
  for (int i = 0; i < k; ++i)
    for (Letter b : tau.image(ls[i])) reach[i][idx(b)] = true;
  for (int mid = 0; mid < k; ++mid)
    for (int i = 0; i < k; ++i)
      if (reach[i][mid])
        for (int j = 0; j < k; ++j)
          if (reach[mid][j]) reach[i][j] = true;
  std::set<Letter> out;
  for (int i = 0; i < k; ++i) {
    bool is_long = false;
    for (int d = 0; d < k && !is_long; ++d) {
      if (tau.image(ls[d]).size() < 2) continue;
      bool on_cycle = reach[d][d];
      bool reachable = (i == d) || reach[i][d];
      if (on_cycle && reachable) is_long = true;
    }
    if (is_long) out.insert(ls[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Syndeticity of long symbols

namespace {

// A maximal short run with its flanking long letters (-1 = word boundary).
struct Run {
  Letter left_flank;   // -1 for boundary
  Word content;        // short letters only (may be empty)
  Letter right_flank;  // -1 for boundary
  auto operator<=>(const Run&) const = default;
};

struct RunPieces {
  Letter first_long = -1, last_long = -1;
  Word short_prefix, short_suffix;
  std::vector<Run> internal;  // runs between long letters
};

RunPieces decompose(const Word& w, const std::set<Letter>& longs) {
  RunPieces out;
  Word cur;
  Letter prev_long = -1;
  for (Letter a : w) {
    if (longs.contains(a)) {
      if (prev_long == -1) {
        out.first_long = a;
        out.short_prefix = cur;
      } else {
        out.internal.push_back(Run{prev_long, cur, a});
      }
      cur.clear();
      prev_long = a;
    } else {
      cur.push_back(a);
    }
  }
  if (prev_long == -1) {
    out.short_prefix = cur;  // the whole word is short
  } else {
    out.last_long = prev_long;
    out.short_suffix = cur;
  }
  return out;
}

Word expand_word(const Substitution& tau, const Word& w) {
  Word out;
  for (Letter a : w) {
    const Word& im = tau.image(a);
    out.insert(out.end(), im.begin(), im.end());
  }
  return out;
}

}  // namespace

namespace {

// The flanks of a run evolve deterministically and independently of the
// content: a left flank c becomes the last long letter of tau(c) and
// contributes the short suffix of tau(c) to the run. The run lengths are
// unbounded iff some step on the flank's eventual cycle contributes a
// nonempty short word (content letters are short, so their own images
// stabilize in length).
bool flank_cycle_contributes(const Substitution& tau,
                             const std::set<Letter>& longs, Letter start,
                             bool left_side) {
  if (start == -1) return false;  // word boundary never contributes
  std::map<Letter, int> seen;
  std::vector<std::pair<Letter, bool>> chain;  // (flank, contributed)
  Letter cur = start;
  while (!seen.contains(cur)) {
    seen[cur] = static_cast<int>(chain.size());
    auto p = decompose(tau.image(cur), longs);
    const Word& contrib = left_side ? p.short_suffix : p.short_prefix;
    Letter next = left_side ? p.last_long : p.first_long;
    chain.emplace_back(cur, !contrib.empty());
    cur = next;
  }
  for (size_t i = seen[cur]; i < chain.size(); ++i)
    if (chain[i].second) return true;
  return false;
}

}  // namespace

SyndeticResult syndetic_long(const Substitution& tau, int cap) {
  std::set<Letter> longs = long_symbols(tau);

  // Seeds: all maximal short runs, with flanks, inside single letters and
  // single images.
  std::set<Run> seeds;
  for (Letter a : tau.alphabet().letters()) {
    if (!longs.contains(a)) seeds.insert(Run{-1, {a}, -1});
    auto pieces = decompose(tau.image(a), longs);
    if (pieces.first_long == -1) continue;  // image all short; reached via
                                            // the run successor anyway
    seeds.insert(Run{-1, pieces.short_prefix, pieces.first_long});
    seeds.insert(Run{pieces.last_long, pieces.short_suffix, -1});
    for (auto& r : pieces.internal) seeds.insert(r);
  }

  std::map<Letter, bool> left_grows, right_grows;
  for (Letter a : tau.alphabet().letters()) {
    if (!longs.contains(a)) continue;
    left_grows[a] = flank_cycle_contributes(tau, longs, a, true);
    right_grows[a] = flank_cycle_contributes(tau, longs, a, false);
  }
  auto unbounded = [&](const Run& r) {
    return (r.left_flank != -1 && left_grows[r.left_flank]) ||
           (r.right_flank != -1 && right_grows[r.right_flank]);
  };

  auto successor = [&](const Run& r) {
    Word next = expand_word(tau, r.content);
    Letter nl = -1, nr = -1;
    if (r.left_flank != -1) {
      auto p = decompose(tau.image(r.left_flank), longs);
      next.insert(next.begin(), p.short_suffix.begin(), p.short_suffix.end());
      nl = p.last_long;
    }
    if (r.right_flank != -1) {
      auto p = decompose(tau.image(r.right_flank), longs);
      next.insert(next.end(), p.short_prefix.begin(), p.short_prefix.end());
      nr = p.first_long;
    }
    return Run{nl, next, nr};
  };

  for (const Run& seed : seeds) {
    if (!unbounded(seed)) continue;
    // Produce the pumping witness: a run deriving a strictly longer copy of
    // itself with identical flanks.
    std::map<std::pair<Letter, Letter>, size_t> best;
    Run r = seed;
    for (int step = 0; step < cap; ++step) {
      auto key = std::make_pair(r.left_flank, r.right_flank);
      auto it = best.find(key);
      if (it != best.end() && r.content.size() > it->second)
        return SyndeticResult{SyndeticResult::NonSyndetic, 0, r.content};
      if (it == best.end()) best[key] = r.content.size();
      r = successor(r);
      if (static_cast<int>(r.content.size()) > cap) break;
    }
    return SyndeticResult{SyndeticResult::Budget, 0, {}};
  }

  // All chains bounded: collect every derivable run until each chain cycles.
  size_t max_len = 0;
  for (const Run& seed : seeds) {
    std::set<Run> chain_seen;
    Run r = seed;
    while (chain_seen.insert(r).second) {
      max_len = std::max(max_len, r.content.size());
      if (static_cast<int>(r.content.size()) > cap ||
          static_cast<int>(chain_seen.size()) > cap)
        return SyndeticResult{SyndeticResult::Budget, 0, {}};
      r = successor(r);
    }
  }
  return SyndeticResult{SyndeticResult::Syndetic,
                        static_cast<int>(max_len) + 1, {}};
}

mpz_class quasiminimal_bound(const Substitution& tau, int m) {
  mpz_class exp;
  mpz_ui_pow_ui(exp.get_mpz_t(), tau.alphabet().size(), m + 1);
  if (!exp.fits_ulong_p())
    throw BudgetError("quasiminimal bound exponent overflows");
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, exp.get_ui());
  return out;
}

// ---------------------------------------------------------------------------
// Subsystem counting

mpz_class subsystem_count_B(int k) {
  if (k < 0) throw ParseError("negative k");
  mpz_class total = 0;
  for (int j = 0; j <= k; ++j) {
    mpz_class binom, a;
    mpz_bin_uiui(binom.get_mpz_t(), k, j);
    mpz_ui_pow_ui(a.get_mpz_t(), 2, static_cast<unsigned long>(j) * (j - 1 < 0 ? 0 : j - 1));
    total += binom * a;
  }
  return total;
}

std::vector<std::set<Word>> brute_force_subsystems(int k) {
  if (k < 0 || k > 3) throw BudgetError("subsystem enumeration wants k <= 3");
  // Letters b_1..b_k are 1..k. Y_{K,J} is pinned down by its words of
  // length <= 2: b_i in the language iff i in K, b_i b_j iff (i,j) in J.
  std::vector<std::pair<int, int>> pairs;  // ordered (i, j), i != j
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j)
      if (i != j) pairs.emplace_back(i, j);
  std::vector<std::set<Word>> out;
  for (int kmask = 0; kmask < (1 << k); ++kmask) {
    std::vector<int> K;
    for (int i = 1; i <= k; ++i)
      if (kmask & (1 << (i - 1))) K.push_back(i);
    for (int jmask = 0; jmask < (1 << pairs.size()); ++jmask) {
      bool valid = true;
      std::vector<std::pair<int, int>> J;
      for (size_t t = 0; t < pairs.size(); ++t)
        if (jmask & (1 << t)) {
          auto [i, j] = pairs[t];
          if (!(kmask & (1 << (i - 1))) || !(kmask & (1 << (j - 1)))) {
            valid = false;
            break;
          }
          J.push_back(pairs[t]);
        }
      if (!valid) continue;
      // language sample: words of length <= 3 of union of b_i* b_j*
      std::set<Word> lang;
      for (int i : K) {
        lang.insert(Word{i});
        lang.insert(Word{i, i});
        lang.insert(Word{i, i, i});
      }
      for (auto [i, j] : J) {
        lang.insert(Word{i, j});
        lang.insert(Word{i, i, j});
        lang.insert(Word{i, j, j});
      }
      out.push_back(std::move(lang));
    }
  }
  // distinct (K, J) give distinct languages; assert extensionally
  std::set<std::set<Word>> dedup(out.begin(), out.end());
  if (dedup.size() != out.size())
    throw std::logic_error("subsystem languages collided");
  return out;
}

// ---------------------------------------------------------------------------
// Regular intersection (Lemma-style periodic relation sequence)

namespace {

using RelVector = std::vector<BoolRelation>;  // indexed by letter position

RelVector relation_step(const Substitution& tau, const RelVector& prev) {
  const auto& ls = tau.alphabet().letters();
  auto idx = [&](Letter a) {
    return static_cast<size_t>(std::lower_bound(ls.begin(), ls.end(), a) -
                               ls.begin());
  };
  RelVector next(ls.size());
  for (size_t i = 0; i < ls.size(); ++i) {
    BoolRelation r = BoolRelation::identity(prev.front().n);
    for (Letter b : tau.image(ls[i])) r = r.compose(prev[idx(b)]);
    next[i] = std::move(r);
  }
  return next;
}

bool relation_accepts(const Nfa& L, const BoolRelation& r) {
  for (int q : L.initial)
    for (int f : L.final)
      if (r.get(q, f)) return true;
  return false;
}

}  // namespace

RegIntersectCertificate decide_regular_intersection(const Substitution& tau,
                                                    Letter a, const Nfa& L,
                                                    int iteration_cap) {
  if (!(L.alphabet == tau.alphabet()))
    throw ParseError("automaton alphabet must match the substitution");
  const auto& ls = tau.alphabet().letters();
  auto idx = [&](Letter x) {
    return static_cast<size_t>(std::lower_bound(ls.begin(), ls.end(), x) -
                               ls.begin());
  };
  RelVector cur(ls.size());
  for (size_t i = 0; i < ls.size(); ++i)
    cur[i] = word_relation(L, Word{ls[i]});

  std::map<RelVector, int> first_seen;
  std::vector<RelVector> history;
  RegIntersectCertificate cert;
  int n = 0;
  while (true) {
    if (relation_accepts(L, cur[idx(a)]) && !cert.yes) {
      cert.yes = true;
      cert.witness_n = n;
    }
    auto it = first_seen.find(cur);
    if (it != first_seen.end()) {
      cert.t = it->second;
      cert.p = n - it->second;
      break;
    }
    first_seen[cur] = n;
    history.push_back(cur);
    if (n >= iteration_cap)
      throw BudgetError("relation sequence failed to close");
    cur = relation_step(tau, cur);
    ++n;
  }
  return cert;
}

bool verify_regular_intersection(const Substitution& tau, Letter a,
                                 const Nfa& L,
                                 const RegIntersectCertificate& cert,
                                 size_t length_cap) {
  const auto& ls = tau.alphabet().letters();
  if (cert.yes) {
    IncidenceMatrix M(tau);
    if (M.iterate_length(a, cert.witness_n) > static_cast<long>(length_cap))
      return true;  // witness too large to materialize; relation proof holds
    return L.accepts(iterate(tau, a, cert.witness_n, length_cap));
  }
  if (cert.t < 0 || cert.p <= 0) return false;
  RelVector cur(ls.size());
  for (size_t i = 0; i < ls.size(); ++i)
    cur[i] = word_relation(L, Word{ls[i]});
  for (int n = 0; n < cert.t; ++n) cur = relation_step(tau, cur);
  RelVector at_t = cur;
  for (int n = 0; n < cert.p; ++n) cur = relation_step(tau, cur);
  return at_t == cur;
}

LanguageIntersection decide_language_intersection(const Substitution& tau,
                                                  const Nfa& L,
                                                  int iteration_cap) {
  Nfa padded = pad_both_sides(L);
  LanguageIntersection out;
  for (Letter a : tau.alphabet().letters()) {
    auto cert = decide_regular_intersection(tau, a, padded, iteration_cap);
    if (cert.yes && !out.nonempty) {
      out.nonempty = true;
      out.witness_letter = a;
      out.witness_n = cert.witness_n;
    }
    out.per_letter[a] = cert;
  }
  return out;
}

std::set<Word> xtau_factors(const Substitution& tau, int n, int depth,
                            size_t length_cap) {
  std::set<Word> out;
  for (Letter a : tau.alphabet().letters()) {
    Word cur{a};
    for (int l = 0; l <= depth; ++l) {
      auto f = factors(cur, n);
      out.insert(f.begin(), f.end());
      if (l == depth) break;
      if (cur.size() * 4 > length_cap)
        throw BudgetError("xtau_factors exceeded the length budget");
      Word next = expand_word(tau, cur);
      if (next.size() > length_cap)
        throw BudgetError("xtau_factors exceeded the length budget");
      cur = std::move(next);
    }
  }
  return out;
}

}  // namespace qms
