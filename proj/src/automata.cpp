#include "qms/automata.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <queue>

namespace qms {

// ---------------------------------------------------------------------------
// Nfa basics

void Nfa::add_transition(int from, Letter a, int to) {
  if (from < 0 || from >= num_states || to < 0 || to >= num_states)
    throw ParseError("transition references unknown state");
  if (!alphabet.contains(a))
    throw ParseError("transition references unknown letter");
  auto& v = delta[from][a];
  auto it = std::lower_bound(v.begin(), v.end(), to);
  if (it == v.end() || *it != to) v.insert(it, to);
}

static std::set<int> step(const Nfa& n, const std::set<int>& from, Letter a) {
  std::set<int> out;
  for (int q : from) {
    auto it = n.delta[q].find(a);
    if (it == n.delta[q].end()) continue;
    out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

bool Nfa::accepts(const Word& w) const {
  std::set<int> cur = initial;
  for (Letter a : w) {
    if (!alphabet.contains(a))
      throw ParseError("word letter outside the automaton alphabet");
    cur = step(*this, cur, a);
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(),
                     [&](int q) { return final.contains(q); });
}

std::optional<Word> shortest_accepted(const Nfa& n) {
  // BFS over subset states would be exponential; BFS over single states
  // suffices for existence since initial/final are state sets.
  std::vector<int> prev_state(n.num_states, -1);
  std::vector<Letter> prev_letter(n.num_states, -1);
  std::vector<bool> seen(n.num_states, false);
  std::deque<int> q;
  for (int s : n.initial) {
    seen[s] = true;
    q.push_back(s);
  }
  int hit = -1;
  while (!q.empty() && hit < 0) {
    int u = q.front();
    q.pop_front();
    if (n.final.contains(u)) {
      hit = u;
      break;
    }
    for (auto& [a, tos] : n.delta[u])
      for (int v : tos)
        if (!seen[v]) {
          seen[v] = true;
          prev_state[v] = u;
          prev_letter[v] = a;
          q.push_back(v);
        }
  }
  if (hit < 0) return std::nullopt;
  Word w;
  for (int s = hit; prev_state[s] >= 0; s = prev_state[s])
    w.push_back(prev_letter[s]);
  std::reverse(w.begin(), w.end());
  return w;
}

bool is_empty_language(const Nfa& n) { return !shortest_accepted(n).has_value(); }

Nfa nfa_union(const Nfa& a, const Nfa& b) {
  if (!(a.alphabet == b.alphabet)) throw ParseError("alphabet mismatch");
  Nfa r;
  r.alphabet = a.alphabet;
  r.num_states = a.num_states + b.num_states;
  r.delta.resize(r.num_states);
  for (int q = 0; q < a.num_states; ++q) r.delta[q] = a.delta[q];
  for (int q = 0; q < b.num_states; ++q)
    for (auto& [l, tos] : b.delta[q])
      for (int t : tos) r.delta[q + a.num_states][l].push_back(t + a.num_states);
  for (int q : a.initial) r.initial.insert(q);
  for (int q : b.initial) r.initial.insert(q + a.num_states);
  for (int q : a.final) r.final.insert(q);
  for (int q : b.final) r.final.insert(q + a.num_states);
  return r;
}

Nfa nfa_intersection(const Nfa& a, const Nfa& b) {
  if (!(a.alphabet == b.alphabet)) throw ParseError("alphabet mismatch");
  Nfa r;
  r.alphabet = a.alphabet;
  r.num_states = a.num_states * b.num_states;
  r.delta.resize(std::max(r.num_states, 1));
  auto code = [&](int x, int y) { return x * b.num_states + y; };
  for (int x = 0; x < a.num_states; ++x)
    for (auto& [l, xs] : a.delta[x]) {
      for (int y = 0; y < b.num_states; ++y) {
        auto it = b.delta[y].find(l);
        if (it == b.delta[y].end()) continue;
        for (int xt : xs)
          for (int yt : it->second)
            r.delta[code(x, y)][l].push_back(code(xt, yt));
      }
    }
  for (auto& m : r.delta)
    for (auto& [l, tos] : m) {
      std::sort(tos.begin(), tos.end());
      tos.erase(std::unique(tos.begin(), tos.end()), tos.end());
    }
  for (int x : a.initial)
    for (int y : b.initial) r.initial.insert(code(x, y));
  for (int x : a.final)
    for (int y : b.final) r.final.insert(code(x, y));
  if (r.num_states == 0) r.num_states = 1;  // keep a well-formed shell
  return r;
}

Nfa determinize(const Nfa& a, size_t det_cap) {
  std::map<std::set<int>, int> code;
  std::vector<std::set<int>> states;
  auto intern = [&](const std::set<int>& s) {
    auto it = code.find(s);
    if (it != code.end()) return it->second;
    if (states.size() >= det_cap)
      throw BudgetError("determinization exceeded the state cap");
    int id = static_cast<int>(states.size());
    code[s] = id;
    states.push_back(s);
    return id;
  };
  Nfa d;
  d.alphabet = a.alphabet;
  int start = intern(a.initial);
  std::deque<int> work{start};
  std::vector<std::map<Letter, int>> dtrans;
  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    if (static_cast<int>(dtrans.size()) <= id) dtrans.resize(id + 1);
    for (Letter l : a.alphabet.letters()) {
      std::set<int> nxt = step(a, states[id], l);
      size_t before = states.size();
      int nid = intern(nxt);
      dtrans.resize(std::max(dtrans.size(), states.size()));
      dtrans[id][l] = nid;
      if (states.size() > before) work.push_back(nid);
    }
  }
  d.num_states = static_cast<int>(states.size());
  d.delta.resize(d.num_states);
  for (int q = 0; q < d.num_states; ++q)
    for (auto& [l, t] : dtrans[q]) d.delta[q][l] = {t};
  d.initial = {start};
  for (int q = 0; q < d.num_states; ++q)
    for (int s : states[q])
      if (a.final.contains(s)) {
        d.final.insert(q);
        break;
      }
  return d;
}

Nfa nfa_complement(const Nfa& a, size_t det_cap) {
  Nfa d = determinize(a, det_cap);
  Nfa r = d;
  r.final.clear();
  for (int q = 0; q < d.num_states; ++q)
    if (!d.final.contains(q)) r.final.insert(q);
  return r;
}

Nfa pad_both_sides(const Nfa& a) {
  Nfa r;
  r.alphabet = a.alphabet;
  r.num_states = a.num_states + 2;
  r.delta.resize(r.num_states);
  int pre = a.num_states, post = a.num_states + 1;
  for (int q = 0; q < a.num_states; ++q) r.delta[q] = a.delta[q];
  for (Letter l : a.alphabet.letters()) {
    r.delta[pre][l].push_back(pre);
    r.delta[post][l].push_back(post);
  }
  // pre loops then enters like an initial state; finals may exit to post.
  for (int i : a.initial)
    for (auto& [l, tos] : a.delta[i])
      for (int t : tos) r.delta[pre][l].push_back(t);
  for (int q = 0; q < a.num_states; ++q)
    for (auto& [l, tos] : a.delta[q])
      for (int t : tos)
        if (a.final.contains(t)) r.delta[q][l].push_back(post);
  for (int i : a.initial)
    for (auto& [l, tos] : a.delta[i])
      for (int t : tos)
        if (a.final.contains(t)) r.delta[pre][l].push_back(post);
  for (auto& m : r.delta)
    for (auto& [l, tos] : m) {
      std::sort(tos.begin(), tos.end());
      tos.erase(std::unique(tos.begin(), tos.end()), tos.end());
    }
  r.initial = {pre};
  r.final = {post};
  for (int i : a.initial)
    if (a.final.contains(i)) {
      // epsilon in L: S* L S* accepts everything, including epsilon
      r.final.insert(pre);
    }
  return r;
}

// ---------------------------------------------------------------------------
// Regex parsing and compilation

namespace {

struct RegexParser {
  const Alphabet& alpha;
  std::string_view s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool done() {
    skip();
    return pos >= s.size();
  }
  char peek() {
    skip();
    return s[pos];
  }

  std::shared_ptr<Regex> mk(Regex r) { return std::make_shared<Regex>(std::move(r)); }

  std::shared_ptr<Regex> parse_union() {
    auto l = parse_concat();
    while (!done() && peek() == '+') {
      ++pos;
      auto r = parse_concat();
      l = mk(Regex{Regex::Union{l, r}});
    }
    return l;
  }

  std::shared_ptr<Regex> parse_concat() {
    std::shared_ptr<Regex> acc;
    while (!done() && peek() != '+' && peek() != ')') {
      auto u = parse_unary();
      acc = acc ? mk(Regex{Regex::Concat{acc, u}}) : u;
    }
    if (!acc) acc = mk(Regex{Regex::Empty{}});  // empty regex: empty language
    return acc;
  }

  std::shared_ptr<Regex> parse_unary() {
    if (peek() == '~') {
      ++pos;
      auto e = parse_unary();
      return mk(Regex{Regex::Complement{e}});
    }
    return parse_postfix();
  }

  std::shared_ptr<Regex> parse_postfix() {
    auto e = parse_atom();
    while (!done() && peek() == '*') {
      ++pos;
      e = mk(Regex{Regex::Star{e}});
    }
    return e;
  }

  std::shared_ptr<Regex> parse_atom() {
    if (done()) throw ParseError("regex ended unexpectedly");
    char c = peek();
    if (c == '(') {
      ++pos;
      auto e = parse_union();
      if (done() || peek() != ')') throw ParseError("unbalanced parenthesis");
      ++pos;
      return e;
    }
    if (c == '@') {
      ++pos;
      return mk(Regex{Regex::Any{}});
    }
    if (c == ')' || c == '*' || c == '+' || c == '~')
      throw ParseError(std::string("unexpected '") + c + "' in regex");
    auto a = alpha.letter_of(c);
    if (!a) throw ParseError(std::string("unknown glyph '") + c + "' in regex");
    ++pos;
    return mk(Regex{Regex::Lit{*a}});
  }
};

// Epsilon-NFA fragments for Thompson-style construction.
struct EpsNfa {
  int num_states = 0;
  std::vector<std::multimap<Letter, int>> delta;  // letter -1 = epsilon
  int start = 0, accept = 0;
};

constexpr Letter kEps = -1;

int fresh(EpsNfa& m) {
  m.delta.emplace_back();
  return m.num_states++;
}

void link(EpsNfa& m, int a, Letter l, int b) { m.delta[a].insert({l, b}); }

// Converts an epsilon NFA fragment to an Nfa via epsilon closure.
Nfa strip_epsilons(const Alphabet& alpha, const EpsNfa& m) {
  std::vector<std::set<int>> closure(m.num_states);
  for (int q = 0; q < m.num_states; ++q) {
    std::deque<int> w{q};
    closure[q].insert(q);
    while (!w.empty()) {
      int u = w.front();
      w.pop_front();
      auto [lo, hi] = m.delta[u].equal_range(kEps);
      for (auto it = lo; it != hi; ++it)
        if (closure[q].insert(it->second).second) w.push_back(it->second);
    }
  }
  Nfa n;
  n.alphabet = alpha;
  n.num_states = m.num_states;
  n.delta.resize(m.num_states);
  for (int q = 0; q < m.num_states; ++q)
    for (int c : closure[q])
      for (auto& [l, t] : m.delta[c])
        if (l != kEps)
          for (int tc : closure[t]) n.delta[q][l].push_back(tc);
  for (auto& mm : n.delta)
    for (auto& [l, tos] : mm) {
      std::sort(tos.begin(), tos.end());
      tos.erase(std::unique(tos.begin(), tos.end()), tos.end());
    }
  n.initial = {m.start};
  // q is final iff its epsilon closure reaches the accept state
  for (int q = 0; q < m.num_states; ++q)
    if (closure[q].contains(m.accept)) n.final.insert(q);
  return n;
}

// Embeds an arbitrary Nfa as an epsilon fragment.
void embed(EpsNfa& m, const Nfa& n, int& start, int& accept) {
  int base = m.num_states;
  for (int q = 0; q < n.num_states; ++q) fresh(m);
  start = fresh(m);
  accept = fresh(m);
  for (int q = 0; q < n.num_states; ++q)
    for (auto& [l, tos] : n.delta[q])
      for (int t : tos) link(m, base + q, l, base + t);
  for (int i : n.initial) link(m, start, kEps, base + i);
  for (int f : n.final) link(m, base + f, kEps, accept);
}

struct Compiler {
  const Alphabet& alpha;
  size_t det_cap;
  EpsNfa m;

  std::pair<int, int> go(const Regex& r) {
    int s = fresh(m), t = fresh(m);
    std::visit(
        [&](auto&& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Regex::Empty>) {
            // no transition
          } else if constexpr (std::is_same_v<T, Regex::Epsilon>) {
            link(m, s, kEps, t);
          } else if constexpr (std::is_same_v<T, Regex::Lit>) {
            link(m, s, node.a, t);
          } else if constexpr (std::is_same_v<T, Regex::Any>) {
            for (Letter l : alpha.letters()) link(m, s, l, t);
          } else if constexpr (std::is_same_v<T, Regex::Concat>) {
            auto [ls, lt] = go(*node.l);
            auto [rs, rt] = go(*node.r);
            link(m, s, kEps, ls);
            link(m, lt, kEps, rs);
            link(m, rt, kEps, t);
          } else if constexpr (std::is_same_v<T, Regex::Union>) {
            auto [ls, lt] = go(*node.l);
            auto [rs, rt] = go(*node.r);
            link(m, s, kEps, ls);
            link(m, s, kEps, rs);
            link(m, lt, kEps, t);
            link(m, rt, kEps, t);
          } else if constexpr (std::is_same_v<T, Regex::Star>) {
            auto [es, et] = go(*node.e);
            link(m, s, kEps, t);
            link(m, s, kEps, es);
            link(m, et, kEps, es);
            link(m, et, kEps, t);
          } else if constexpr (std::is_same_v<T, Regex::Complement>) {
            // Compile the subtree standalone, complement, then embed.
            Compiler sub{alpha, det_cap, {}};
            auto [ss, st] = sub.go(*node.e);
            sub.m.start = ss;
            sub.m.accept = st;
            Nfa inner = strip_epsilons(alpha, sub.m);
            Nfa comp = nfa_complement(inner, det_cap);
            int cs, ct;
            embed(m, comp, cs, ct);
            link(m, s, kEps, cs);
            link(m, ct, kEps, t);
          }
        },
        r.node);
    return {s, t};
  }
};

}  // namespace

Regex parse_regex(const Alphabet& alpha, std::string_view text) {
  RegexParser p{alpha, text};
  auto e = p.parse_union();
  if (!p.done()) throw ParseError("trailing characters in regex");
  return *e;
}

Nfa compile(const Alphabet& alpha, const Regex& r, size_t det_cap) {
  Compiler c{alpha, det_cap, {}};
  auto [s, t] = c.go(r);
  c.m.start = s;
  c.m.accept = t;
  return strip_epsilons(alpha, c.m);
}

Nfa compile(const Alphabet& alpha, std::string_view regex_text) {
  return compile(alpha, parse_regex(alpha, regex_text));
}

// ---------------------------------------------------------------------------
// Family builders

Nfa build_elementary_pt(const Alphabet& alpha, const Word& letters) {
  if (letters.empty()) throw ParseError("elementary PT language needs k >= 1");
  if (!alpha.contains_word(letters))
    throw ParseError("letter outside alphabet");
  int k = static_cast<int>(letters.size());
  Nfa n;
  n.alphabet = alpha;
  n.num_states = k + 1;
  n.delta.resize(n.num_states);
  for (int i = 0; i < k; ++i) {
    n.add_transition(i, letters[i], i + 1);
    if (i >= 1)
      for (Letter l : alpha.letters()) n.add_transition(i, l, i);
  }
  n.initial = {0};
  n.final = {k};
  return n;
}

Nfa build_local(const Alphabet& alpha, const std::set<Letter>& A,
                const std::set<Letter>& B, const std::set<Word>& F) {
  for (Letter a : A)
    if (!alpha.contains(a)) throw ParseError("A letter outside alphabet");
  for (Letter b : B)
    if (!alpha.contains(b)) throw ParseError("B letter outside alphabet");
  for (auto& f : F)
    if (f.size() != 2 || !alpha.contains_word(f))
      throw ParseError("forbidden factors must be two-letter words");
  // state 0 = initial, state 1+i = "last letter was alphabet.letters()[i]"
  Nfa n;
  n.alphabet = alpha;
  int m = alpha.size();
  n.num_states = m + 1;
  n.delta.resize(n.num_states);
  auto idx = [&](Letter a) {
    auto& ls = alpha.letters();
    return static_cast<int>(std::lower_bound(ls.begin(), ls.end(), a) -
                            ls.begin());
  };
  for (Letter a : A) n.add_transition(0, a, 1 + idx(a));
  for (Letter a : alpha.letters())
    for (Letter b : alpha.letters())
      if (!F.contains(Word{a, b})) n.add_transition(1 + idx(a), b, 1 + idx(b));
  n.initial = {0};
  for (Letter b : B) n.final.insert(1 + idx(b));
  return n;
}

Nfa build_renewal(const Alphabet& alpha, const Word& u, const Word& v,
                  const std::vector<Word>& ws) {
  auto word_regex = [&](const Word& w) {
    auto acc = std::make_shared<Regex>(Regex{Regex::Epsilon{}});
    for (Letter a : w) {
      auto lit = std::make_shared<Regex>(Regex{Regex::Lit{a}});
      acc = std::make_shared<Regex>(Regex{Regex::Concat{acc, lit}});
    }
    return acc;
  };
  std::shared_ptr<Regex> mid;
  for (auto& w : ws) {
    auto r = word_regex(w);
    mid = mid ? std::make_shared<Regex>(Regex{Regex::Union{mid, r}}) : r;
  }
  if (!mid) mid = std::make_shared<Regex>(Regex{Regex::Empty{}});
  auto star = std::make_shared<Regex>(Regex{Regex::Star{mid}});
  auto left = std::make_shared<Regex>(Regex{Regex::Concat{word_regex(u), star}});
  auto all =
      std::make_shared<Regex>(Regex{Regex::Concat{left, word_regex(v)}});
  return compile(alpha, *all);
}

// ---------------------------------------------------------------------------
// Relations

BoolRelation BoolRelation::identity(int n) {
  BoolRelation r;
  r.n = n;
  r.bits.assign(static_cast<size_t>(n) * n, false);
  for (int i = 0; i < n; ++i) r.set(i, i, true);
  return r;
}

BoolRelation BoolRelation::compose(const BoolRelation& o) const {
  BoolRelation r;
  r.n = n;
  r.bits.assign(static_cast<size_t>(n) * n, false);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (get(i, k))
        for (int j = 0; j < n; ++j)
          if (o.get(k, j)) r.set(i, j, true);
  return r;
}

BoolRelation word_relation(const Nfa& n, const Word& w) {
  if (!n.alphabet.contains_word(w))
    throw ParseError("word letter outside the automaton alphabet");
  BoolRelation r = BoolRelation::identity(n.num_states);
  for (Letter a : w) {
    BoolRelation el;
    el.n = n.num_states;
    el.bits.assign(static_cast<size_t>(el.n) * el.n, false);
    for (int q = 0; q < n.num_states; ++q) {
      auto it = n.delta[q].find(a);
      if (it == n.delta[q].end()) continue;
      for (int t : it->second) el.set(q, t, true);
    }
    r = r.compose(el);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Minimal DFA and syntactic monoid

Nfa minimal_dfa(const Nfa& n, size_t det_cap) {
  Nfa d = determinize(n, det_cap);  // complete by construction
  int m = d.num_states;
  std::vector<int> cls(m, 0);
  for (int q = 0; q < m; ++q) cls[q] = d.final.contains(q) ? 1 : 0;
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::vector<int>, int> sig_code;
    std::vector<int> next(m);
    for (int q = 0; q < m; ++q) {
      std::vector<int> sig{cls[q]};
      for (Letter l : d.alphabet.letters())
        sig.push_back(cls[d.delta[q].at(l).front()]);
      auto [it, fresh_sig] = sig_code.try_emplace(sig, static_cast<int>(sig_code.size()));
      next[q] = it->second;
    }
    if (next != cls) {
      changed = true;
      cls = std::move(next);
    }
  }
  int k = *std::max_element(cls.begin(), cls.end()) + 1;
  Nfa r;
  r.alphabet = d.alphabet;
  r.num_states = k;
  r.delta.resize(k);
  for (int q = 0; q < m; ++q)
    for (Letter l : d.alphabet.letters()) r.delta[cls[q]][l] = {cls[d.delta[q].at(l).front()]};
  r.initial = {cls[*d.initial.begin()]};
  for (int q : d.final) r.final.insert(cls[q]);
  return r;
}

SyntacticMonoid::SyntacticMonoid(const Nfa& n, size_t element_cap) {
  Nfa d = minimal_dfa(n);
  int m = d.num_states;
  std::vector<int> ident(m);
  for (int i = 0; i < m; ++i) ident[i] = i;
  auto intern = [&](const std::vector<int>& f, const Word& rep) {
    auto it = index_.find(f);
    if (it != index_.end()) return it->second;
    if (elements_.size() >= element_cap)
      throw BudgetError("syntactic monoid exceeded the element cap");
    int id = static_cast<int>(elements_.size());
    index_[f] = id;
    elements_.push_back(f);
    reps_.push_back(rep);
    return id;
  };
  id_ = intern(ident, {});
  std::deque<int> work{id_};
  while (!work.empty()) {
    int x = work.front();
    work.pop_front();
    for (Letter l : d.alphabet.letters()) {
      std::vector<int> f(m);
      for (int q = 0; q < m; ++q)
        f[q] = d.delta[elements_[x][q]].at(l).front();
      Word rep = reps_[x];
      rep.push_back(l);
      size_t before = elements_.size();
      int y = intern(f, rep);
      if (elements_.size() > before) work.push_back(y);
    }
  }
}

int SyntacticMonoid::product(int x, int y) const {
  const auto& f = elements_[x];
  const auto& g = elements_[y];
  std::vector<int> h(f.size());
  for (size_t q = 0; q < f.size(); ++q) h[q] = g[f[q]];
  auto it = index_.find(h);
  if (it == index_.end())
    throw std::logic_error("monoid not closed under product");
  return it->second;
}

std::optional<int> SyntacticMonoid::idempotent_exponent() const {
  int p = 1;
  for (int x = 0; x < size(); ++x) {
    // follow the power chain of x until it repeats
    std::map<int, int> seen;  // element -> exponent
    int cur = x, e = 1;
    while (!seen.contains(cur)) {
      seen[cur] = e;
      cur = product(cur, x);
      ++e;
    }
    int cycle = e - seen[cur];
    if (cycle != 1) return std::nullopt;  // nontrivial group inside
    // seen[cur] is the least t with x^t = x^(t+1): the powers below t are
    // pairwise distinct.
    p = std::max(p, seen[cur]);
  }
  return p;
}

}  // namespace qms
