#include <doctest.h>

#include "qms/ruler.hpp"

using namespace qms;
using namespace qms::ruler;

TEST_SUITE_BEGIN("ruler");

TEST_CASE("ruler values match the displayed sequence") {
  // 0 1 0 2 0 1 0 3 0 1 0 2 0 1 0 4
  Word expect = {0, 1, 0, 2, 0, 1, 0, 3, 0, 1, 0, 2, 0, 1, 0, 4};
  CHECK(window(0, 15) == expect);
  CHECK(ruler_value(0) == 0);
  CHECK(ruler_value(7) == 3);
  CHECK(ruler_value(15) == 4);
}

TEST_CASE("positions formula") {
  CHECK(positions(0).progressions().front().start == 0);
  CHECK(positions(0).progressions().front().step == 2);
  auto p1 = positions(1);
  CHECK(p1.contains(1));
  CHECK(p1.contains(5));
  CHECK(p1.contains(9));
  CHECK(!p1.contains(3));
  auto p3 = positions(3);
  CHECK(p3.contains(7));
  CHECK(p3.contains(23));
  CHECK(p3.contains(39));
  // cross-check against direct scan
  for (int j = 0; j <= 6; ++j) {
    auto pj = positions(j);
    for (Index i = 0; i <= 4096; ++i)
      CHECK(pj.contains(i) == (ruler_value(i) == j));
  }
}

TEST_CASE("maximal words") {
  Alphabet ab = Alphabet::range(10);
  CHECK(maximal_word(1) == ab.parse_word("010"));
  CHECK(maximal_word(2) == ab.parse_word("0102010"));
  CHECK(maximal_word(3) == ab.parse_word("010201030102010"));
  for (int k = 0; k <= 8; ++k) {
    Word m = maximal_word(k);
    CHECK(static_cast<Index>(m.size()) == (Index(1) << (k + 1)) - 1);
    CHECK(m[(size_t(1) << k) - 1] == k);
    for (Letter a : m) CHECK(a <= k);
  }
}

TEST_CASE("is_factor") {
  CHECK(is_factor({0, 1, 0, 2, 0, 1, 0}));
  CHECK(!is_factor({4, 5}));
  CHECK(is_factor({0, 3, 0}));
  CHECK(!is_factor({0, 0}));
  CHECK(is_factor({3}));
  // validated against a longer scan
  for (Index i = 0; i < 200; ++i) {
    Word w = window(i, i + 9);
    CHECK(is_factor(w));
  }
}

TEST_CASE("deterministic extension of a single letter is the maximal word") {
  for (int k = 0; k <= 6; ++k)
    CHECK(deterministic_extension({k}) == maximal_word(k));
  CHECK_THROWS_AS(deterministic_extension({0, 0}), NotAFactor);
}

TEST_CASE("worked extension of 3") {
  Word m3 = deterministic_extension({3});
  CHECK(m3 == Word{0, 1, 0, 2, 0, 1, 0, 3, 0, 1, 0, 2, 0, 1, 0});
  // choosing 4 on the left and then 5 on the right gives the displayed
  // 63-symbol word
  Word got = extend_with({3}, 4, 5);
  Word expect;
  {
    Word m4 = maximal_word(4);
    expect = m4;
    expect.push_back(5);
    expect.insert(expect.end(), m4.begin(), m4.end());
  }
  CHECK(got == expect);
  CHECK(got.size() == 63);
  // invalid insertions are rejected
  CHECK_THROWS_AS(extend_with({3}, 3, {}), ParseError);
  CHECK_THROWS_AS(extend_with({3}, 5, 4), ParseError);
}

TEST_CASE("psi window matches the displayed point") {
  // ...01020103010201040102.010301020105010201030102010...
  Word left = {0, 1, 0, 2, 0, 1, 0, 3, 0, 1, 0, 2, 0, 1, 0, 4, 0, 1, 0, 2};
  Word right = {0, 1, 0, 3, 0, 1, 0, 2, 0, 1, 0, 5, 0, 1, 0, 2, 0, 1, 0, 3,
                0, 1, 0, 2, 0, 1, 0};
  Word got = psi_range(-20, 26);
  Word expect = left;
  expect.insert(expect.end(), right.begin(), right.end());
  CHECK(got == expect);
}

TEST_CASE("psi windows are prefix-consistent and factor-legal") {
  Word small = psi_window(16);
  Word big = psi_window(24);
  // the radius-16 window sits centered inside the radius-24 window
  Word middle(big.begin() + 8, big.end() - 8);
  CHECK(middle == small);
  Word w64 = psi_window(64);
  for (size_t i = 0; i + 9 <= w64.size(); ++i)
    CHECK(is_factor(Word(w64.begin() + i, w64.begin() + i + 9)));
}

TEST_CASE("Toeplitz property on a finite window") {
  for (Index i = 0; i <= 1024; ++i) {
    int j = ruler_value(i);
    Index p = Index(1) << (j + 1);
    for (Index k = 1; k <= 8; ++k) CHECK(ruler_value(i + k * p) == j);
  }
}

TEST_CASE("unique singularities at desk scale") {
  // for every m <= 16 there is k with no two symbols >= k within distance m
  Word w = window(0, 1 << 14);
  for (int m = 1; m <= 16; ++m) {
    int k = 1;
    bool ok = false;
    for (; k <= 14 && !ok; ++k) {
      ok = true;
      for (size_t i = 0; i < w.size() && ok; ++i) {
        if (w[i] < k) continue;
        for (size_t j = i + 1; j < std::min(w.size(), i + m + 1); ++j)
          if (w[j] >= k) {
            ok = false;
            break;
          }
      }
    }
    CHECK(ok);
  }
}

TEST_CASE("between equal symbols there is a strictly larger one") {
  // Between consecutive occurrences of l the unique larger symbol is
  // l + 1 + v2(n+1) for the n-th gap; in particular it is at least l + 1,
  // which is what forces a unique maximal symbol in every factor.
  Word w = window(0, 1 << 12);
  for (int l = 0; l <= 6; ++l) {
    Index prev = -1;
    for (Index i = 0; i < static_cast<Index>(w.size()); ++i) {
      if (w[static_cast<size_t>(i)] != l) continue;
      if (prev >= 0) {
        int larger = -1;
        int count = 0;
        for (Index k = prev + 1; k < i; ++k)
          if (w[static_cast<size_t>(k)] > l) {
            larger = w[static_cast<size_t>(k)];
            ++count;
          }
        CHECK(count == 1);
        CHECK(larger >= l + 1);
      }
      prev = i;
    }
    // exact value l+1 appears in every second gap
    std::vector<Index> pos;
    for (Index i = 0; i < static_cast<Index>(w.size()); ++i)
      if (w[static_cast<size_t>(i)] == l) pos.push_back(i);
    int exact = 0;
    for (size_t g = 0; g + 1 < std::min<size_t>(pos.size(), 17); ++g) {
      for (Index k = pos[g] + 1; k < pos[g + 1]; ++k)
        if (w[static_cast<size_t>(k)] == l + 1) ++exact;
    }
    CHECK(exact == 8);
  }
}

TEST_CASE("factors carry a unique maximal symbol") {
  for (Index i = 0; i < 128; ++i) {
    Word w = window(i, i + 12);
    int top = *std::max_element(w.begin(), w.end());
    CHECK(std::count(w.begin(), w.end(), top) == 1);
  }
}

TEST_SUITE_END();
