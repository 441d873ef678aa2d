#include <doctest.h>

#include <random>

#include "qms/ruler.hpp"
#include "qms/substitution.hpp"

using namespace qms;

TEST_SUITE_BEGIN("substitution");

namespace {

Substitution parse(const char* text) { return Substitution::parse(text); }

Substitution random_substitution(std::mt19937& rng, int max_letters,
                                 int max_image) {
  std::uniform_int_distribution<int> nletters(1, max_letters);
  int k = nletters(rng);
  std::uniform_int_distribution<int> ilen(1, max_image), letter(0, k - 1);
  Alphabet alpha = Alphabet::range(k);
  std::map<Letter, Word> img;
  for (int a = 0; a < k; ++a) {
    Word w;
    for (int i = 0, L = ilen(rng); i < L; ++i) w.push_back(letter(rng));
    img[a] = w;
  }
  return Substitution(alpha, img);
}

}  // namespace

TEST_CASE("parsing and formatting") {
  Substitution tau = parse("# comment\n0 -> 00\n1 -> 101\n");
  CHECK(tau.alphabet().size() == 2);
  CHECK(tau.image(0) == Word{0, 0});
  CHECK(tau.image(1) == Word{1, 0, 1});
  CHECK_THROWS_AS(parse("0 -> \n"), ParseError);
  CHECK_THROWS_AS(parse("0 -> 01\n"), ParseError);  // 1 has no rule
  CHECK_THROWS_AS(parse("0 -> 0\n0 -> 00\n"), ParseError);
}

TEST_CASE("iterate examples") {
  Substitution tau = parse("0 -> 00\n1 -> 101\n");
  CHECK(iterate(tau, 1, 2) == tau.alphabet().parse_word("10100101"));
  Substitution fix = parse("0 -> 0\n1 -> 010\n");
  CHECK(iterate(fix, 0, 5) == Word{0});
  Substitution four = parse("0 -> 00\n1 -> 11\n2 -> 20\n3 -> 2301\n");
  CHECK(iterate(four, 3, 2) == four.alphabet().parse_word("2023010011"));
}

TEST_CASE("iterate length equals the incidence-matrix row sum") {
  std::mt19937 rng(41);
  for (int t = 0; t < 30; ++t) {
    Substitution tau = random_substitution(rng, 4, 3);
    IncidenceMatrix M(tau);
    for (Letter a : tau.alphabet().letters()) {
      for (int n = 0; n <= 20; ++n) {
        mpz_class len = M.iterate_length(a, n);
        if (len <= 4000) {
          Word w = iterate(tau, a, n);
          CHECK(mpz_class(static_cast<long>(w.size())) == len);
        }
      }
    }
  }
}

TEST_CASE("iterate budget error") {
  Substitution tau = parse("0 -> 00\n1 -> 101\n");
  CHECK_THROWS_AS(iterate(tau, 0, 40, 1000), BudgetError);
}

TEST_CASE("gap exponents of the uncountable example follow the ruler") {
  Substitution tau = parse("0 -> 00\n1 -> 101\n");
  for (int n = 1; n <= 10; ++n) {
    Word w = iterate(tau, 1, n);
    std::vector<Index> ones;
    for (Index i = 0; i < static_cast<Index>(w.size()); ++i)
      if (w[static_cast<size_t>(i)] == 1) ones.push_back(i);
    REQUIRE(static_cast<Index>(ones.size()) == (Index(1) << n));
    for (size_t g = 0; g + 1 < ones.size(); ++g) {
      Index gap = ones[g + 1] - ones[g] - 1;
      CHECK(gap == (Index(1) << ruler::ruler_value(static_cast<Index>(g))));
    }
  }
}

TEST_CASE("long symbols: examples") {
  CHECK(long_symbols(parse("0 -> 0\n1 -> 010\n")) == std::set<Letter>{1});
  CHECK(long_symbols(parse("0 -> 00\n1 -> 101\n")) == std::set<Letter>{0, 1});
  CHECK(long_symbols(parse("a -> b\nb -> a\n")).empty());
}

TEST_CASE("long symbols agree with the matrix-length oracle") {
  // For non-erasing tau, lengths are nondecreasing; a bounded letter is
  // constant from step |S| on, and a long letter strictly grows somewhere
  // in every window of |S| steps past that point.
  std::mt19937 rng(43);
  for (int t = 0; t < 500; ++t) {
    Substitution tau = random_substitution(rng, 5, 4);
    IncidenceMatrix M(tau);
    int k = tau.alphabet().size();
    auto longs = long_symbols(tau);
    for (Letter a : tau.alphabet().letters()) {
      bool grows = M.iterate_length(a, 2 * k) > M.iterate_length(a, k);
      CHECK(grows == longs.contains(a));
    }
  }
}

TEST_CASE("syndetic long symbols: examples") {
  auto all_long = syndetic_long(parse("0 -> 00\n1 -> 101\n"));
  CHECK(all_long.kind == SyndeticResult::Syndetic);
  CHECK(all_long.m == 1);

  auto sunny = syndetic_long(parse("0 -> 0\n1 -> 010\n"));
  CHECK(sunny.kind == SyndeticResult::NonSyndetic);

  auto unary = syndetic_long(parse("a -> aa\n"));
  CHECK(unary.kind == SyndeticResult::Syndetic);
  CHECK(unary.m == 1);
}

TEST_CASE("syndetic pumping witnesses are short-letter runs") {
  Substitution tau = parse("0 -> 0\n1 -> 010\n");
  auto r = syndetic_long(tau, 10000);
  REQUIRE(r.kind == SyndeticResult::NonSyndetic);
  auto longs = long_symbols(tau);
  for (Letter a : r.pumping_witness) CHECK(!longs.contains(a));
}

TEST_CASE("quasiminimal bound") {
  Substitution two = parse("0 -> 00\n1 -> 101\n");
  CHECK(quasiminimal_bound(two, 1) == 16);
  CHECK(quasiminimal_bound(two, 2) == 256);
  Substitution three = parse("0 -> 00\n1 -> 11\n2 -> 21\n");
  CHECK(quasiminimal_bound(three, 1) == 512);
}

TEST_CASE("subsystem counts") {
  std::vector<long> expect{1, 2, 7, 80, 4381, 1069742};
  for (int k = 0; k <= 5; ++k)
    CHECK(subsystem_count_B(k) == expect[static_cast<size_t>(k)]);
  CHECK(brute_force_subsystems(2).size() == 7);
  CHECK(brute_force_subsystems(0).size() == 1);
  CHECK(brute_force_subsystems(1).size() == 2);
  for (int k = 0; k <= 8; ++k) {
    mpz_class a;
    mpz_ui_pow_ui(a.get_mpz_t(), 2,
                  static_cast<unsigned long>(k) * (k > 0 ? k - 1 : 0));
    CHECK(subsystem_count_B(k) >= a);
  }
}

TEST_CASE("regular intersection: examples") {
  Substitution tau = parse("0 -> 00\n1 -> 101\n");
  const Alphabet& ab = tau.alphabet();
  Nfa contains_1001 = compile(ab, "@*1001@*");
  auto yes = decide_regular_intersection(tau, 1, contains_1001);
  CHECK(yes.yes);
  CHECK(yes.witness_n == 2);
  CHECK(verify_regular_intersection(tau, 1, contains_1001, yes));

  Nfa contains_11 = compile(ab, "@*11@*");
  auto no = decide_regular_intersection(tau, 1, contains_11);
  CHECK(!no.yes);
  CHECK(no.p >= 1);
  CHECK(verify_regular_intersection(tau, 1, contains_11, no));
  for (int n = 0; n <= 12; ++n) {
    Word w = iterate(tau, 1, n, 100000);
    CHECK(!contains_11.accepts(w));
    if (static_cast<Index>(w.size()) > 50000) break;
  }

  Substitution id = parse("a -> a\n");
  Nfa just_a = compile(id.alphabet(), "a");
  auto fixed = decide_regular_intersection(id, 0, just_a);
  CHECK(fixed.yes);
  CHECK(fixed.witness_n == 0);
}

TEST_CASE("language intersection: examples and over-approximation") {
  Substitution tau = parse("0 -> 00\n1 -> 101\n");
  const Alphabet& ab = tau.alphabet();
  CHECK(!decide_language_intersection(tau, compile(ab, "11")).nonempty);
  CHECK(decide_language_intersection(tau, compile(ab, "1001")).nonempty);

  // tau' = (0 -> 00; 1 -> 10): "10" meets some tau^n(1) although no
  // bi-infinite point of the system contains a 1 at all
  Substitution tau2 = parse("0 -> 00\n1 -> 10\n");
  CHECK(decide_language_intersection(tau2, compile(tau2.alphabet(), "10"))
            .nonempty);
}

TEST_CASE("xtau factors") {
  Substitution tau = parse("0 -> 00\n1 -> 101\n");
  auto f = xtau_factors(tau, 3, 4);
  const Alphabet& ab = tau.alphabet();
  for (const char* s : {"101", "010", "000", "100", "001"})
    CHECK(f.contains(ab.parse_word(s)));
  CHECK(!f.contains(ab.parse_word("111")));

  Substitution fix = parse("0 -> 0\n1 -> 010\n");
  CHECK(xtau_factors(fix, 2, 3) ==
        std::set<Word>{Word{0, 0}, Word{0, 1}, Word{1, 0}});

  // depth monotonicity
  std::mt19937 rng(47);
  for (int t = 0; t < 50; ++t) {
    Substitution r = random_substitution(rng, 3, 3);
    auto small = xtau_factors(r, 2, 2, 1u << 20);
    auto big = xtau_factors(r, 2, 4, 1u << 20);
    for (auto& w : small) CHECK(big.contains(w));
  }
}

TEST_CASE("random regular-intersection instances agree with iteration") {
  std::mt19937 rng(53);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int done = 0; done < 60; ++done) {
    Substitution tau = random_substitution(rng, 4, 3);
    std::string glyphs;
    for (Letter a : tau.alphabet().letters())
      glyphs += tau.alphabet().glyph(a);
    std::uniform_int_distribution<int> g(0,
                                         static_cast<int>(glyphs.size()) - 1);
    std::string rx = "@*";
    for (int i = 0, L = 1 + coin(rng) + coin(rng); i < L; ++i)
      rx += glyphs[static_cast<size_t>(g(rng))];
    rx += "@*";
    Nfa L = compile(tau.alphabet(), rx);
    for (Letter a : tau.alphabet().letters()) {
      auto cert = decide_regular_intersection(tau, a, L);
      CHECK(verify_regular_intersection(tau, a, L, cert));
      IncidenceMatrix M(tau);
      for (int n = 0; n <= cert.t + cert.p; ++n) {
        if (M.iterate_length(a, n) > 20000) break;
        bool member = L.accepts(iterate(tau, a, n));
        if (member) {
          CHECK(cert.yes);
          CHECK(cert.witness_n <= n);
          break;
        }
        if (cert.yes && n == cert.witness_n) CHECK(member);
      }
    }
  }
}

TEST_SUITE_END();
