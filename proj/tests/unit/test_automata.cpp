#include <doctest.h>

#include <functional>
#include <random>

#include "qms/automata.hpp"

using namespace qms;

TEST_SUITE_BEGIN("automata");

namespace {

Word W(std::initializer_list<Letter> ls) { return Word(ls); }

// Independent oracle: recursive segment matcher over the regex tree.
bool seg_match(const Alphabet& alpha, const Regex& r, const Word& w, size_t i,
               size_t j) {
  return std::visit(
      [&](auto&& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Regex::Empty>) {
          return false;
        } else if constexpr (std::is_same_v<T, Regex::Epsilon>) {
          return i == j;
        } else if constexpr (std::is_same_v<T, Regex::Lit>) {
          return j == i + 1 && w[i] == node.a;
        } else if constexpr (std::is_same_v<T, Regex::Any>) {
          return j == i + 1;
        } else if constexpr (std::is_same_v<T, Regex::Concat>) {
          for (size_t m = i; m <= j; ++m)
            if (seg_match(alpha, *node.l, w, i, m) &&
                seg_match(alpha, *node.r, w, m, j))
              return true;
          return false;
        } else if constexpr (std::is_same_v<T, Regex::Union>) {
          return seg_match(alpha, *node.l, w, i, j) ||
                 seg_match(alpha, *node.r, w, i, j);
        } else if constexpr (std::is_same_v<T, Regex::Star>) {
          if (i == j) return true;
          for (size_t m = i + 1; m <= j; ++m)
            if (seg_match(alpha, *node.e, w, i, m) &&
                seg_match(alpha, r, w, m, j))
              return true;
          return false;
        } else {  // Complement
          return !seg_match(alpha,
                            *std::get<Regex::Complement>(r.node).e, w, i, j);
        }
      },
      r.node);
}

bool brute_accepts(const Alphabet& alpha, const Regex& r, const Word& w) {
  return seg_match(alpha, r, w, 0, w.size());
}

std::vector<Word> all_words(const Alphabet& alpha, int max_len) {
  std::vector<Word> out{{}};
  std::vector<Word> frontier{{}};
  for (int l = 1; l <= max_len; ++l) {
    std::vector<Word> next;
    for (auto& w : frontier)
      for (Letter a : alpha.letters()) {
        Word e = w;
        e.push_back(a);
        next.push_back(e);
        out.push_back(e);
      }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("regex: even shift presentation") {
  Alphabet ab = Alphabet::from_glyphs("01");
  Nfa n = compile(ab, "(1(00)*)*");
  CHECK(n.accepts(ab.parse_word("11")));
  CHECK(n.accepts(ab.parse_word("100")));
  CHECK(n.accepts(ab.parse_word("1001")));
  CHECK(!n.accepts(ab.parse_word("1000")));
  CHECK(!n.accepts(ab.parse_word("101001")));
  CHECK(n.accepts({}));
  // agreement with the recursive matcher on every short word
  Regex r = parse_regex(ab, "(1(00)*)*");
  for (auto& w : all_words(ab, 8)) CHECK(n.accepts(w) == brute_accepts(ab, r, w));
}

TEST_CASE("regex: golden mean complement") {
  Alphabet ab = Alphabet::from_glyphs("01");
  Nfa n = compile(ab, "~(@*11@*)");
  CHECK(n.accepts(ab.parse_word("0101")));
  CHECK(!n.accepts(ab.parse_word("0110")));
  Regex r = parse_regex(ab, "~(@*11@*)");
  for (auto& w : all_words(ab, 7)) CHECK(n.accepts(w) == brute_accepts(ab, r, w));
}

TEST_CASE("regex: empty regex denotes the empty language") {
  Alphabet ab = Alphabet::from_glyphs("01");
  Nfa n = compile(ab, "");
  CHECK(is_empty_language(n));
  CHECK(!n.accepts({}));
}

TEST_CASE("regex: parse errors") {
  Alphabet ab = Alphabet::from_glyphs("01");
  CHECK_THROWS_AS(parse_regex(ab, "(01"), ParseError);
  CHECK_THROWS_AS(parse_regex(ab, "2"), ParseError);
  CHECK_THROWS_AS(parse_regex(ab, "0)1"), ParseError);
}

TEST_CASE("elementary piecewise testable languages") {
  Alphabet ab = Alphabet::from_glyphs("ab");
  Nfa single = build_elementary_pt(ab, ab.parse_word("a"));
  CHECK(single.accepts(ab.parse_word("a")));
  CHECK(!single.accepts(ab.parse_word("ab")));
  CHECK(!single.accepts(ab.parse_word("aa")));
  CHECK(!single.accepts({}));

  Nfa pt = build_elementary_pt(ab, ab.parse_word("ab"));
  CHECK(pt.accepts(ab.parse_word("ab")));
  CHECK(pt.accepts(ab.parse_word("aab")));
  CHECK(pt.accepts(ab.parse_word("abb")));
  CHECK(!pt.accepts(ab.parse_word("ba")));

  Alphabet abc = Alphabet::from_glyphs("123");
  Nfa pt13 = build_elementary_pt(abc, abc.parse_word("13"));
  CHECK(pt13.accepts(abc.parse_word("123")));
  CHECK(!pt13.accepts(abc.parse_word("321")));

  // definitional checker: a_1 ... a_k scattered, endpoints pinned
  auto definitional = [&](const Word& letters, const Word& w) {
    std::function<bool(size_t, size_t)> rec = [&](size_t li, size_t wi) {
      if (li == letters.size()) return wi == w.size();
      for (size_t p = wi; p < w.size(); ++p) {
        if (w[p] != letters[li]) continue;
        if (li == 0 && p != 0) break;  // first letter starts the word
        if (li + 1 == letters.size() && p + 1 != w.size()) continue;
        if (rec(li + 1, p + 1)) return true;
      }
      return false;
    };
    return rec(0, 0);
  };
  for (auto& w : all_words(ab, 6)) {
    CHECK(pt.accepts(w) == definitional(ab.parse_word("ab"), w));
    CHECK(single.accepts(w) == definitional(ab.parse_word("a"), w));
  }
}

TEST_CASE("local languages") {
  Alphabet ab = Alphabet::from_glyphs("01");
  std::set<Word> F{W({1, 1})};
  Nfa loc = build_local(ab, {0}, {0}, F);
  CHECK(loc.accepts(ab.parse_word("010")));
  CHECK(!loc.accepts(ab.parse_word("0110")));
  CHECK(loc.accepts(ab.parse_word("0")));

  Nfa all = build_local(ab, {0, 1}, {0, 1}, {});
  CHECK(!all.accepts({}));
  for (auto& w : all_words(ab, 5))
    if (!w.empty()) CHECK(all.accepts(w));

  Nfa none = build_local(ab, {}, {0, 1}, {});
  CHECK(is_empty_language(none));

  // definitional checker: first in A, last in B, no factor in F
  auto definitional = [&](const Word& w) {
    if (w.empty()) return false;
    if (w.front() != 0 || w.back() != 0) return false;
    for (size_t i = 0; i + 1 < w.size(); ++i)
      if (F.contains(W({w[i], w[i + 1]}))) return false;
    return true;
  };
  for (auto& w : all_words(ab, 6)) CHECK(loc.accepts(w) == definitional(w));
}

TEST_CASE("renewal languages") {
  Alphabet ab = Alphabet::from_glyphs("01");
  Nfa r = build_renewal(ab, ab.parse_word("1"), ab.parse_word("1"),
                        {ab.parse_word("0")});
  CHECK(r.accepts(ab.parse_word("101")));
  CHECK(r.accepts(ab.parse_word("1001")));
  CHECK(r.accepts(ab.parse_word("11")));
  CHECK(!r.accepts(ab.parse_word("10")));

  Nfa eps = build_renewal(ab, {}, {}, {ab.parse_word("0")});
  CHECK(eps.accepts({}));
  CHECK(eps.accepts(ab.parse_word("000")));
  CHECK(!eps.accepts(ab.parse_word("01")));

  // definitional checker: u, then a chunk parse, then v
  auto definitional = [&](const Word& u, const Word& v,
                          const std::vector<Word>& ws, const Word& w) {
    if (!starts_with(w, u)) return false;
    Word rest(w.begin() + u.size(), w.end());
    std::function<bool(size_t)> rec = [&](size_t at) -> bool {
      if (Word(rest.begin() + at, rest.end()) == v) return true;
      for (auto& chunk : ws) {
        if (chunk.empty() || at + chunk.size() > rest.size()) continue;
        if (std::equal(chunk.begin(), chunk.end(), rest.begin() + at) &&
            rec(at + chunk.size()))
          return true;
      }
      return false;
    };
    return rec(0);
  };
  for (auto& w : all_words(ab, 6))
    CHECK(r.accepts(w) ==
          definitional(ab.parse_word("1"), ab.parse_word("1"),
                       {ab.parse_word("0")}, w));
}

TEST_CASE("modular-halting renewal encoding shape") {
  // u = a1 a3^k, v = a2, w1 = a3^m realizes "j = k mod m" reachability
  Alphabet abc = Alphabet::from_glyphs("123");
  int k = 2, m = 3;
  Word u = abc.parse_word("133");  // a1 a3^2
  Word v = abc.parse_word("2");
  Nfa n = build_renewal(abc, u, v, {repeat(abc.parse_word("3"), m)});
  // accepted words are a1 3^(k+m t) a2: the travel distance is k mod m
  CHECK(n.accepts(abc.parse_word("1332")));
  CHECK(n.accepts(abc.parse_word("1333332")));
  CHECK(!n.accepts(abc.parse_word("132")));
}

TEST_CASE("boolean algebra laws extensionally") {
  Alphabet ab = Alphabet::from_glyphs("01");
  Nfa x = compile(ab, "0@*");
  Nfa y = compile(ab, "@*1");
  Nfa lhs = nfa_complement(nfa_union(x, y));
  Nfa rhs = nfa_intersection(nfa_complement(x), nfa_complement(y));
  for (auto& w : all_words(ab, 6)) CHECK(lhs.accepts(w) == rhs.accepts(w));
  Nfa dbl = nfa_complement(nfa_complement(x));
  for (auto& w : all_words(ab, 6)) CHECK(dbl.accepts(w) == x.accepts(w));
}

TEST_CASE("word relations form a monoid morphism") {
  std::mt19937 rng(23);
  Alphabet ab = Alphabet::from_glyphs("ab");
  std::uniform_int_distribution<int> nstates(1, 5), coin(0, 1), letter(0, 1),
      len(0, 4);
  for (int t = 0; t < 50; ++t) {
    Nfa n;
    n.alphabet = ab;
    n.num_states = nstates(rng);
    n.delta.resize(n.num_states);
    for (int q = 0; q < n.num_states; ++q)
      for (Letter a : ab.letters())
        for (int to = 0; to < n.num_states; ++to)
          if (coin(rng)) n.add_transition(q, a, to);
    n.initial = {0};
    n.final = {n.num_states - 1};
    Word u, v;
    for (int i = 0, L = len(rng); i < L; ++i) u.push_back(letter(rng));
    for (int i = 0, L = len(rng); i < L; ++i) v.push_back(letter(rng));
    CHECK(word_relation(n, concat(u, v)) ==
          word_relation(n, u).compose(word_relation(n, v)));
    CHECK(word_relation(n, {}) == BoolRelation::identity(n.num_states));
  }
  Nfa n = compile(ab, "a*");
  CHECK_THROWS_AS(word_relation(n, W({7})), ParseError);
}

TEST_CASE("syntactic monoid: idempotent exponents") {
  Alphabet ab = Alphabet::from_glyphs("ab");
  SyntacticMonoid m1(compile(ab, "a*ba*"));
  auto p1 = m1.idempotent_exponent();
  REQUIRE(p1.has_value());
  CHECK(*p1 == 2);
  SyntacticMonoid m2(compile(ab, "(aa)*"));
  CHECK(!m2.idempotent_exponent().has_value());
  SyntacticMonoid m3(compile(ab, "@*"));
  auto p3 = m3.idempotent_exponent();
  REQUIRE(p3.has_value());
  CHECK(*p3 == 1);
}

TEST_CASE("syntactic congruence brute force confirms the exponent") {
  Alphabet ab = Alphabet::from_glyphs("ab");
  Nfa n = compile(ab, "a*ba*");
  auto contexts = all_words(ab, 3);
  auto congruent = [&](const Word& u, const Word& v) {
    for (auto& x : contexts)
      for (auto& y : contexts)
        if (n.accepts(concat(concat(x, u), y)) !=
            n.accepts(concat(concat(x, v), y)))
          return false;
    return true;
  };
  CHECK(!congruent(ab.parse_word("b"), ab.parse_word("bb")));
  CHECK(congruent(ab.parse_word("bb"), ab.parse_word("bbb")));
  CHECK(congruent(ab.parse_word("a"), ab.parse_word("aa")));
}

TEST_CASE("idempotent exponent controls pumping") {
  Alphabet ab = Alphabet::from_glyphs("ab");
  Nfa n = compile(ab, "a*ba*");
  SyntacticMonoid m(n);
  int p = *m.idempotent_exponent();
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> len(0, 4), letter(0, 1);
  for (int t = 0; t < 100; ++t) {
    Word x, u, y;
    for (int i = 0, L = len(rng); i < L; ++i) x.push_back(letter(rng));
    for (int i = 0, L = len(rng); i < L; ++i) u.push_back(letter(rng));
    for (int i = 0, L = len(rng); i < L; ++i) y.push_back(letter(rng));
    Word up = repeat(u, p), up1 = repeat(u, p + 1);
    CHECK(n.accepts(concat(concat(x, up), y)) ==
          n.accepts(concat(concat(x, up1), y)));
  }
}

TEST_CASE("determinization cap fails loudly") {
  Alphabet ab = Alphabet::from_glyphs("01");
  Nfa n = compile(ab, "@*1@@@@@@@@@@@@@@@@@@");
  CHECK_THROWS_AS(determinize(n, 64), BudgetError);
}

TEST_SUITE_END();
