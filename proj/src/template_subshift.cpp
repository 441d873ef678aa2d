#include "qms/template_subshift.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace qms {

// ---------------------------------------------------------------------------
// BlockTemplate

BlockTemplate::BlockTemplate(Word left_tail, std::vector<Block> blocks,
                             Word final_connector, Word right_tail)
    : left_(std::move(left_tail)),
      blocks_(std::move(blocks)),
      final_connector_(std::move(final_connector)),
      right_(std::move(right_tail)) {
  if (left_.empty() || right_.empty())
    throw ParseError("template tails must be nonempty");
  for (auto& b : blocks_)
    if (b.body.empty()) throw ParseError("template block body must be nonempty");
  normalize();
}

BlockTemplate BlockTemplate::point(const EpPoint& p) {
  return BlockTemplate(p.left(), {}, p.center(), p.right());
}

void BlockTemplate::normalize() {
  left_ = primitive_root(left_);
  right_ = primitive_root(right_);
  // Rotate tails minimal, spilling the remainder into the neighbors
  // (same points, canonical presentation).
  {
    int s = least_rotation_index(left_);
    if (s != 0) {
      Word a(left_.begin(), left_.begin() + s);
      Word b(left_.begin() + s, left_.end());
      Word& first = blocks_.empty() ? final_connector_ : blocks_[0].connector_before;
      first.insert(first.begin(), b.begin(), b.end());
      left_ = concat(b, a);
    }
  }
  {
    int t = least_rotation_index(right_);
    if (t != 0) {
      Word c(right_.begin(), right_.begin() + t);
      Word d(right_.begin() + t, right_.end());
      final_connector_.insert(final_connector_.end(), c.begin(), c.end());
      right_ = concat(d, c);
    }
  }
  // Strip whole tail copies off the core edges.
  Word& first = blocks_.empty() ? final_connector_ : blocks_[0].connector_before;
  while (starts_with(first, left_)) first.erase(first.begin(), first.begin() + left_.size());
  while (ends_with(final_connector_, right_))
    final_connector_.resize(final_connector_.size() - right_.size());
}

BlockTemplate::Realization BlockTemplate::realize(
    const std::vector<Index>& exponents, Index pad) const {
  if (exponents.size() != blocks_.size())
    throw ParseError("wrong number of exponents");
  Realization r;
  Index left_copies = pad / static_cast<Index>(left_.size()) + 1;
  Index right_copies = pad / static_cast<Index>(right_.size()) + 1;
  r.word = repeat(left_, left_copies);
  r.core_begin = static_cast<Index>(r.word.size());
  for (size_t i = 0; i < blocks_.size(); ++i) {
    r.word = concat(r.word, blocks_[i].connector_before);
    r.word = concat(r.word, repeat(blocks_[i].body, exponents[i]));
  }
  r.word = concat(r.word, final_connector_);
  r.core_end = static_cast<Index>(r.word.size());
  r.word = concat(r.word, repeat(right_, right_copies));
  return r;
}

EpPoint BlockTemplate::as_point() const {
  if (!blocks_.empty())
    throw ParseError("as_point wants an exponent-free template");
  return EpPoint(left_, final_connector_, right_, 0);
}

std::string BlockTemplate::to_string(const Alphabet& alpha) const {
  std::string s = "L:" + alpha.format_word(left_);
  for (auto& b : blocks_) {
    if (!b.connector_before.empty())
      s += " | C:" + alpha.format_word(b.connector_before);
    s += " | E:" + alpha.format_word(b.body);
  }
  if (!final_connector_.empty())
    s += " | C:" + alpha.format_word(final_connector_);
  s += " | R:" + alpha.format_word(right_);
  return s;
}

// ---------------------------------------------------------------------------
// TemplateSubshift

TemplateSubshift::TemplateSubshift(std::vector<BlockTemplate> templates)
    : templates_(std::move(templates)) {
  Letter top = 0;
  for (auto& t : templates_) {
    for (Letter a : t.left_tail()) top = std::max(top, a);
    for (Letter a : t.right_tail()) top = std::max(top, a);
    for (Letter a : t.final_connector()) top = std::max(top, a);
    for (auto& b : t.blocks()) {
      for (Letter a : b.connector_before) top = std::max(top, a);
      for (Letter a : b.body) top = std::max(top, a);
    }
  }
  alpha_ = Alphabet::range(top + 1);
  dedupe();
}

TemplateSubshift::TemplateSubshift(Alphabet alpha,
                                   std::vector<BlockTemplate> templates)
    : templates_(std::move(templates)), alpha_(std::move(alpha)) {
  dedupe();
}

void TemplateSubshift::dedupe() {
  std::sort(templates_.begin(), templates_.end());
  templates_.erase(std::unique(templates_.begin(), templates_.end()),
                   templates_.end());
}

TemplateSubshift TemplateSubshift::parse(std::string_view text) {
  // Infer the alphabet from the glyphs used.
  std::set<char> glyphs;
  for (char c : text)
    if (isalnum(static_cast<unsigned char>(c)) && c != 'L' && c != 'C' &&
        c != 'E' && c != 'R')
      glyphs.insert(c);
  std::string g(glyphs.begin(), glyphs.end());
  return parse(Alphabet::from_glyphs(g), text);
}

TemplateSubshift TemplateSubshift::parse(const Alphabet& alpha,
                                         std::string_view text) {
  std::vector<BlockTemplate> ts;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    // split on '|'
    std::vector<std::pair<char, Word>> items;
    std::istringstream ls(line);
    std::string piece;
    bool any = false;
    while (std::getline(ls, piece, '|')) {
      std::string tok;
      std::istringstream ps(piece);
      if (!(ps >> tok)) continue;
      any = true;
      if (tok.size() < 2 || tok[1] != ':')
        throw ParseError("template item must look like L:word");
      char kind = tok[0];
      if (kind != 'L' && kind != 'C' && kind != 'E' && kind != 'R')
        throw ParseError("template item kind must be L, C, E or R");
      items.emplace_back(kind, alpha.parse_word(tok.substr(2)));
    }
    if (!any) continue;
    if (items.size() < 2 || items.front().first != 'L' ||
        items.back().first != 'R')
      throw ParseError("template line must start with L: and end with R:");
    Word left = items.front().second;
    Word right = items.back().second;
    std::vector<BlockTemplate::Block> blocks;
    Word pending_connector;
    for (size_t i = 1; i + 1 < items.size(); ++i) {
      auto& [kind, w] = items[i];
      if (kind == 'C') {
        pending_connector = concat(pending_connector, w);
      } else if (kind == 'E') {
        blocks.push_back({pending_connector, w});
        pending_connector.clear();
      } else {
        throw ParseError("only C: and E: items may appear in the middle");
      }
    }
    ts.emplace_back(left, std::move(blocks), pending_connector, right);
  }
  return TemplateSubshift(alpha, std::move(ts));
}

std::string TemplateSubshift::to_string() const {
  std::string s;
  for (auto& t : templates_) s += t.to_string(alpha_) + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Membership and language

namespace {

// Enumerates exponent vectors bounded per-block, visiting f on each.
void for_each_exponents(int k, Index cap,
                        const std::function<void(const std::vector<Index>&)>& f) {
  std::vector<Index> e(k, 0);
  while (true) {
    f(e);
    int i = 0;
    while (i < k && e[i] == cap) {
      e[i] = 0;
      ++i;
    }
    if (i == k) break;
    ++e[i];
  }
}

Index total_core_length(const BlockTemplate& t) {
  Index s = static_cast<Index>(t.final_connector().size());
  for (auto& b : t.blocks())
    s += static_cast<Index>(b.connector_before.size() + b.body.size());
  s += static_cast<Index>(t.left_tail().size() + t.right_tail().size());
  return s;
}

}  // namespace

bool TemplateSubshift::member(const Word& w) const {
  if (w.empty()) return !templates_.empty();
  for (auto& t : templates_) {
    Index cap = static_cast<Index>(w.size()) + 2;
    Index pad = static_cast<Index>(w.size()) + total_core_length(t);
    bool found = false;
    for_each_exponents(t.exponent_count(), cap,
                       [&](const std::vector<Index>& e) {
                         if (found) return;
                         auto r = t.realize(e, pad);
                         if (is_subword(w, r.word)) found = true;
                       });
    if (found) return true;
  }
  return false;
}

std::set<Word> TemplateSubshift::language_n(int n) const {
  std::set<Word> out;
  if (n <= 0) return out;
  for (auto& t : templates_) {
    Index cap = n + 2;
    Index pad = n + total_core_length(t);
    for_each_exponents(t.exponent_count(), cap,
                       [&](const std::vector<Index>& e) {
                         auto r = t.realize(e, pad);
                         auto f = factors(r.word, n);
                         out.insert(f.begin(), f.end());
                       });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cantor-Bendixson derivative

namespace {

// Detects a block whose exponent does not change the realized points (the
// template is then locally periodic through that block); such a block
// witnesses no isolated-to-limit structure and must not produce splits.
bool block_degenerate(const BlockTemplate& t, size_t block_index) {
  for (Index others : {Index(0), Index(1)}) {
    std::vector<Index> e1(t.exponent_count(), others);
    std::vector<Index> e2 = e1;
    e1[block_index] = 1;
    e2[block_index] = 2;
    auto r1 = t.realize(e1, 4);
    auto r2 = t.realize(e2, 4);
    EpPoint p1(t.left_tail(), Word(r1.word.begin() + r1.core_begin,
                                   r1.word.begin() + r1.core_end),
               t.right_tail(), 0);
    EpPoint p2(t.left_tail(), Word(r2.word.begin() + r2.core_begin,
                                   r2.word.begin() + r2.core_end),
               t.right_tail(), 0);
    if (!p1.same_orbit(p2)) return false;
  }
  return true;
}

}  // namespace

TemplateSubshift TemplateSubshift::cb_derivative() const {
  std::vector<BlockTemplate> out;
  for (auto& t : templates_) {
    if (t.exponent_count() == 0) {
      // Isolated orbit of one eventually periodic point; only its tail
      // periodic points are limits. A periodic point is itself isolated.
      EpPoint p = t.as_point();
      if (p.is_periodic()) continue;
      out.push_back(BlockTemplate(p.left(), {}, {}, p.left()));
      out.push_back(BlockTemplate(p.right(), {}, {}, p.right()));
      continue;
    }
    for (size_t i = 0; i < t.blocks().size(); ++i) {
      if (block_degenerate(t, i)) continue;
      // left piece: everything before block i, right tail = block body
      {
        std::vector<BlockTemplate::Block> blocks(t.blocks().begin(),
                                                 t.blocks().begin() + i);
        Word final_conn = t.blocks()[i].connector_before;
        out.push_back(
            BlockTemplate(t.left_tail(), std::move(blocks), final_conn,
                          t.blocks()[i].body));
      }
      // right piece: block body as left tail, everything after block i
      {
        std::vector<BlockTemplate::Block> blocks(t.blocks().begin() + i + 1,
                                                 t.blocks().end());
        out.push_back(BlockTemplate(t.blocks()[i].body, std::move(blocks),
                                    t.final_connector(), t.right_tail()));
      }
    }
    // A template whose every block is degenerate realizes only finitely
    // many orbits; treat each as an exponent-free template.
    bool all_degenerate = true;
    for (size_t i = 0; i < t.blocks().size(); ++i)
      if (!block_degenerate(t, i)) all_degenerate = false;
    if (all_degenerate) {
      for (Index e : {Index(0), Index(1)}) {
        std::vector<Index> exps(t.exponent_count(), e);
        auto r = t.realize(exps, 2);
        EpPoint p(t.left_tail(), Word(r.word.begin() + r.core_begin,
                                      r.word.begin() + r.core_end),
                  t.right_tail(), 0);
        if (p.is_periodic()) continue;
        out.push_back(BlockTemplate(p.left(), {}, {}, p.left()));
        out.push_back(BlockTemplate(p.right(), {}, {}, p.right()));
      }
    }
  }
  return TemplateSubshift(alpha_, std::move(out));
}

int TemplateSubshift::cb_rank(int step_cap) const {
  TemplateSubshift cur = *this;
  int rank = 0;
  while (!cur.empty()) {
    cur = cur.cb_derivative();
    ++rank;
    if (rank > step_cap)
      throw BudgetError("Cantor-Bendixson iteration failed to reach a fixpoint");
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Decision procedures

namespace {

// Positions i in [0, |w|-width] whose window matches the clopen set.
std::vector<Index> clopen_hits(const Word& w, const ClopenSet& C) {
  std::vector<Index> out;
  if (w.size() < static_cast<size_t>(C.width())) return out;
  for (size_t i = 0; i + C.width() <= w.size(); ++i) {
    Word win(w.begin() + i, w.begin() + i + C.width());
    if (C.matches(win)) out.push_back(static_cast<Index>(i));
  }
  return out;
}

Index saturation_cap(const BlockTemplate& t, Index extra) {
  return extra + total_core_length(t) + 2;
}

}  // namespace

Reachability decide_halting(const TemplateSubshift& T, const ClopenSet& C,
                            const ClopenSet& D, Index min_j) {
  Reachability best;
  for (size_t ti = 0; ti < T.templates().size(); ++ti) {
    auto& t = T.templates()[ti];
    Index cap = saturation_cap(t, C.width() + D.width());
    Index pad = cap + C.width() + D.width();
    bool done = false;
    for_each_exponents(t.exponent_count(), cap,
                       [&](const std::vector<Index>& e) {
                         if (done) return;
                         auto r = t.realize(e, pad);
                         auto cs = clopen_hits(r.word, C);
                         auto ds = clopen_hits(r.word, D);
                         if (cs.empty() || ds.empty()) return;
                         Index dmax = ds.back();
                         for (Index i1 : cs) {
                           if (dmax - i1 < min_j) continue;
                           // smallest i2 with i2 - i1 >= min_j
                           auto it = std::lower_bound(ds.begin(), ds.end(),
                                                      i1 + min_j);
                           best.reachable = true;
                           best.template_index = static_cast<int>(ti);
                           best.exponents = e;
                           best.j = *it - i1;
                           done = true;
                           return;
                         }
                       });
    if (done) return best;
  }
  return best;
}

Reachability decide_modular(const TemplateSubshift& T, const ClopenSet& C,
                            const ClopenSet& D, Index k, Index m,
                            Index min_j) {
  if (m < 1 || k < 0 || k >= m) throw ParseError("need 0 <= k < m, m >= 1");
  Reachability best;
  for (size_t ti = 0; ti < T.templates().size(); ++ti) {
    auto& t = T.templates()[ti];
    Index base = saturation_cap(t, C.width() + D.width());
    Index cap = base + m * base;  // reach every residue pumping whole blocks
    Index pad = base * (m + 1) + C.width() + D.width();
    bool done = false;
    for_each_exponents(
        t.exponent_count(), cap, [&](const std::vector<Index>& e) {
          if (done) return;
          auto r = t.realize(e, pad);
          auto cs = clopen_hits(r.word, C);
          auto ds = clopen_hits(r.word, D);
          if (cs.empty() || ds.empty()) return;
          // D hits per residue class, ascending
          std::vector<std::vector<Index>> by_res(m);
          for (Index i2 : ds) by_res[((i2 % m) + m) % m].push_back(i2);
          for (Index i1 : cs) {
            Index want = (((i1 + k) % m) + m) % m;
            auto& lst = by_res[want];
            auto it = std::lower_bound(lst.begin(), lst.end(), i1 + min_j);
            if (it == lst.end()) continue;
            best.reachable = true;
            best.template_index = static_cast<int>(ti);
            best.exponents = e;
            best.j = *it - i1;
            done = true;
            return;
          }
        });
    if (done) return best;
  }
  return best;
}

Reachability decide_counting(const TemplateSubshift& T, const ClopenSet& C,
                             const ClopenSet& D, const ClopenSet& E,
                             const ClopenSet& F, Index count) {
  if (count < 0) throw ParseError("count must be non-negative");
  Reachability best;
  for (size_t ti = 0; ti < T.templates().size(); ++ti) {
    auto& t = T.templates()[ti];
    Index cap = saturation_cap(t, C.width() + D.width() + E.width() +
                                      F.width() + count);
    Index pad = cap + C.width() + D.width() + E.width() + F.width();
    bool done = false;
    for_each_exponents(
        t.exponent_count(), cap, [&](const std::vector<Index>& e) {
          if (done) return;
          auto r = t.realize(e, pad);
          Index n = static_cast<Index>(r.word.size());
          // classify every position; prefix sums make the pair check O(1)
          std::vector<Index> pre_neither(n + 1, 0), pre_mustF(n + 1, 0),
              pre_flex(n + 1, 0);
          for (Index i = 0; i < n; ++i) {
            bool e_ok = false, f_ok = false;
            if (i + E.width() <= n) {
              Word win(r.word.begin() + i, r.word.begin() + i + E.width());
              e_ok = E.matches(win);
            }
            if (i + F.width() <= n) {
              Word win(r.word.begin() + i, r.word.begin() + i + F.width());
              f_ok = F.matches(win);
            }
            pre_neither[i + 1] = pre_neither[i] + (!e_ok && !f_ok ? 1 : 0);
            pre_mustF[i + 1] = pre_mustF[i] + (!e_ok && f_ok ? 1 : 0);
            pre_flex[i + 1] = pre_flex[i] + (e_ok && f_ok ? 1 : 0);
          }
          auto cs = clopen_hits(r.word, C);
          auto ds = clopen_hits(r.word, D);
          for (Index i1 : cs) {
            for (Index i2 : ds) {
              if (i2 < i1) continue;
              Index lo = i1 + 1, hi = i2;  // intermediate range [lo, hi)
              if (lo > hi) lo = hi;
              Index neither = pre_neither[hi] - pre_neither[lo];
              Index mustF = pre_mustF[hi] - pre_mustF[lo];
              Index flex = pre_flex[hi] - pre_flex[lo];
              if (neither == 0 && mustF <= count && count <= mustF + flex) {
                best.reachable = true;
                best.template_index = static_cast<int>(ti);
                best.exponents = e;
                best.j = i2 - i1;
                done = true;
                return;
              }
            }
          }
        });
    if (done) return best;
  }
  return best;
}

bool decide_tuple(const TemplateSubshift& T, const std::vector<Word>& tuple) {
  if (tuple.empty()) throw ParseError("tuple must be nonempty");
  Index width_sum = 0;
  for (auto& w : tuple) width_sum += static_cast<Index>(w.size());
  for (auto& t : T.templates()) {
    Index cap = saturation_cap(t, width_sum);
    Index pad = width_sum + static_cast<Index>(tuple.size()) *
                                (total_core_length(t) + 2);
    bool found = false;
    for_each_exponents(t.exponent_count(), cap,
                       [&](const std::vector<Index>& e) {
                         if (found) return;
                         auto r = t.realize(e, pad);
                         // greedy earliest chaining
                         Index at = 0;
                         bool ok = true;
                         for (size_t wi = 0; wi < tuple.size() && ok; ++wi) {
                           auto& u = tuple[wi];
                           auto it = std::search(r.word.begin() + at,
                                                 r.word.end(), u.begin(),
                                                 u.end());
                           if (it == r.word.end()) {
                             ok = false;
                           } else {
                             at = static_cast<Index>(it - r.word.begin()) + 1;
                           }
                         }
                         if (ok) found = true;
                       });
    if (found) return true;
  }
  return false;
}

}  // namespace qms
