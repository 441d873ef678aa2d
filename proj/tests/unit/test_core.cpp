#include <doctest.h>

#include <random>

#include "qms/core.hpp"

using namespace qms;

TEST_SUITE_BEGIN("core");

namespace {
Word W(std::initializer_list<Letter> ls) { return Word(ls); }
}  // namespace

TEST_CASE("factors: sliding windows") {
  Alphabet ab = Alphabet::range(3);
  Word w = ab.parse_word("0102010");
  auto f = factors(w, 3);
  CHECK(f == std::set<Word>{W({0, 1, 0}), W({1, 0, 2}), W({0, 2, 0}),
                            W({2, 0, 1})});
  CHECK(factors(W({0, 0, 0}), 1) == std::set<Word>{W({0})});
  CHECK(factors(W({0, 1}), 3).empty());
}

TEST_CASE("factors: cardinality and lengths") {
  std::mt19937 rng(7);
  for (int t = 0; t < 50; ++t) {
    std::uniform_int_distribution<int> len(0, 12), letter(0, 2), nn(1, 5);
    Word w;
    int L = len(rng);
    for (int i = 0; i < L; ++i) w.push_back(letter(rng));
    int n = nn(rng);
    auto f = factors(w, n);
    if (static_cast<int>(w.size()) >= n)
      CHECK(static_cast<int>(f.size()) <= static_cast<int>(w.size()) - n + 1);
    for (auto& u : f) CHECK(static_cast<int>(u.size()) == n);
  }
}

TEST_CASE("ep point: windows and indexing") {
  // sunny-side-up INF(0).1 INF(0)
  EpPoint p({0}, {1}, {0}, 0);
  CHECK(p.at(0) == 1);
  CHECK(p.at(-1) == 0);
  CHECK(p.at(5) == 0);
  CHECK(p.window(-2, 2) == W({0, 0, 1, 0, 0}));
}

TEST_CASE("ep point: canonicalization") {
  // INF(00).1 INF(0) collapses to INF(0).1 INF(0)
  EpPoint a({0, 0}, {1}, {0}, 0);
  EpPoint b({0}, {1}, {0}, 0);
  CHECK(a.same_point(b));
  // center absorbing a period copy on the left
  EpPoint c({0}, {0, 1}, {0}, -1);
  CHECK(c.same_point(b));
  // canonicalization is idempotent by construction; canonical fields match
  CHECK(c.left() == W({0}));
  CHECK(c.center() == W({1}));
  CHECK(c.origin() == 0);
}

TEST_CASE("ep point: periodic points normalize") {
  EpPoint p({0, 1}, {}, {0, 1}, 0);
  EpPoint q({1, 0}, {}, {1, 0}, 1);
  CHECK(p.is_periodic());
  CHECK(q.is_periodic());
  CHECK(p.same_orbit(q));
  // INF(01) presented with rotated tails and a one-letter center
  EpPoint r({0, 1}, {0}, {1, 0}, 0);
  CHECK(r.is_periodic());
  CHECK(r.same_orbit(p));
}

TEST_CASE("ep shift") {
  EpPoint p({0}, {1}, {0}, 0);
  CHECK(p.shifted(0).same_point(p));
  EpPoint s = p.shifted(1);
  CHECK(s.at(-1) == 1);
  CHECK(s.at(0) == 0);
  // periodic invariance: shifting INF(01) by 2 is the identity
  EpPoint per({0, 1}, {}, {0, 1}, 0);
  CHECK(per.shifted(2).same_point(per));
  // shift is a bijection with inverse shift(-k)
  std::mt19937 rng(3);
  for (int t = 0; t < 20; ++t) {
    std::uniform_int_distribution<Index> k(-7, 7);
    Index kk = k(rng);
    CHECK(p.shifted(kk).shifted(-kk).same_point(p));
  }
}

TEST_CASE("occurrences: examples") {
  EpPoint p({0}, {1}, {0}, 0);
  auto one = p.occurrences(W({1}));
  CHECK(one.contains(0));
  CHECK(!one.contains(1));
  CHECK(!one.contains(-1));

  auto zero = p.occurrences(W({0}));
  CHECK(zero.contains(-1));
  CHECK(zero.contains(-17));
  CHECK(zero.contains(1));
  CHECK(zero.contains(23));
  CHECK(!zero.contains(0));
  CHECK(zero.progressions().size() == 2);

  EpPoint per({0, 1}, {}, {0, 1}, 0);
  auto oz = per.occurrences(W({0, 1}));
  for (Index i = -20; i <= 20; ++i) CHECK(oz.contains(i) == (i % 2 == 0));
}

TEST_CASE("occurrences agree with window extraction") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> letter(0, 1), len(1, 3), clen(0, 4),
      ulen(1, 6);
  for (int t = 0; t < 60; ++t) {
    Word L, C, R, u;
    int nl = len(rng), nc = clen(rng), nr = len(rng), nu = ulen(rng);
    for (int i = 0; i < nl; ++i) L.push_back(letter(rng));
    for (int i = 0; i < nc; ++i) C.push_back(letter(rng));
    for (int i = 0; i < nr; ++i) R.push_back(letter(rng));
    for (int i = 0; i < nu; ++i) u.push_back(letter(rng));
    EpPoint p(L, C, R, 0);
    auto occ = p.occurrences(u);
    for (Index i = -50; i <= 50; ++i) {
      Word win = p.window(i, i + static_cast<Index>(u.size()) - 1);
      CHECK(occ.contains(i) == (win == u));
    }
  }
}

TEST_CASE("language_n: examples") {
  EpPoint sunny({0}, {1}, {0}, 0);
  CHECK(sunny.language_n(3) ==
        std::set<Word>{W({0, 0, 0}), W({0, 0, 1}), W({0, 1, 0}), W({1, 0, 0})});
  EpPoint fixed({0}, {}, {0}, 0);
  CHECK(fixed.language_n(2) == std::set<Word>{W({0, 0})});
  EpPoint p({0}, {1, 2}, {0}, 0);
  CHECK(p.language_n(2) ==
        std::set<Word>{W({0, 0}), W({0, 1}), W({1, 2}), W({2, 0})});
}

TEST_CASE("language_n: monotone and factor-closed") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> letter(0, 1), len(1, 3);
  for (int t = 0; t < 20; ++t) {
    Word L{letter(rng)}, C, R{letter(rng)};
    for (int i = 0, n = len(rng); i < n; ++i) C.push_back(letter(rng));
    EpPoint p(L, C, R, 0);
    for (int n = 2; n <= 5; ++n) {
      auto big = p.language_n(n);
      auto small = p.language_n(n - 1);
      for (auto& w : big)
        for (auto& f : factors(w, n - 1)) CHECK(small.contains(f));
    }
  }
}

TEST_CASE("point literal round trip") {
  Alphabet ab = Alphabet::from_glyphs("01");
  EpPoint p = parse_point(ab, "INF(0) . 1 INF(0)");
  CHECK(p.same_point(EpPoint({0}, {1}, {0}, 0)));
  EpPoint q = parse_point(ab, "INF(00) . 1 INF(0)");
  CHECK(q.same_point(p));
  EpPoint r = parse_point(ab, "INF(0) 1 . INF(0)");
  CHECK(r.same_orbit(p));
  CHECK(!r.same_point(p));
  CHECK_THROWS_AS(parse_point(ab, "INF() . 1 INF(0)"), ParseError);
  // printing parses back to the same point
  EpPoint reparsed = parse_point(ab, p.to_string(ab));
  CHECK(reparsed.same_point(p));
}

TEST_CASE("semilinear sets") {
  SemilinearSet s;
  s.add({0, 2});
  s.add({-1, -1});
  s.normalize();
  CHECK(s.contains(0));
  CHECK(s.contains(4));
  CHECK(!s.contains(1));
  CHECK(s.contains(-1));
  CHECK(s.contains(-100));
  SemilinearSet single = SemilinearSet::singleton(7);
  CHECK(single.contains(7));
  CHECK(!single.contains(8));
}

TEST_CASE("clopen sets") {
  Alphabet ab = Alphabet::from_glyphs("01");
  ClopenSet c = ClopenSet::parse(ab, "01,10");
  CHECK(c.width() == 2);
  CHECK(c.matches(W({0, 1})));
  CHECK(!c.matches(W({1, 1})));
  CHECK_THROWS_AS(ClopenSet::parse(ab, "0,01"), ParseError);
}

TEST_SUITE_END();
