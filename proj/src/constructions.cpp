#include "qms/constructions.hpp"

#include <algorithm>
#include <sstream>

namespace qms {

// ---------------------------------------------------------------------------
// HaltingOracle

HaltingOracle::HaltingOracle(std::map<int, Index> halts_at)
    : table_(std::move(halts_at)) {
  for (auto& [j, s] : table_) {
    if (j < 1) throw ParseError("machine indices start at 1");
    if (s < 0) throw ParseError("halting steps are non-negative");
  }
}

HaltingOracle HaltingOracle::parse(std::string_view text) {
  std::map<int, Index> table;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "default") {
      std::string what;
      if (!(ls >> what) || what != "never")
        throw ParseError("only `default never` is supported");
      continue;
    }
    int j = 0;
    try {
      j = std::stoi(first);
    } catch (...) {
      throw ParseError("oracle line must start with a machine index");
    }
    std::string verb;
    if (!(ls >> verb)) throw ParseError("oracle line missing verb");
    if (verb == "never") {
      // explicit never entries are the default; nothing to record
    } else if (verb == "halts") {
      long long s;
      if (!(ls >> s)) throw ParseError("`halts` needs a step");
      table[j] = s;
    } else {
      throw ParseError("oracle verb must be `halts` or `never`");
    }
  }
  return HaltingOracle(std::move(table));
}

bool HaltingOracle::halts(int j) const { return table_.contains(j); }

std::optional<Index> HaltingOracle::halt_step(int j) const {
  auto it = table_.find(j);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

bool HaltingOracle::halts_before(int j, Index step) const {
  auto s = halt_step(j);
  return s && *s < step;
}

bool HaltingOracle::halts_within(int j, Index step) const {
  auto s = halt_step(j);
  return s && *s <= step;
}

std::string HaltingOracle::to_string() const {
  std::string s;
  for (auto& [j, st] : table_)
    s += std::to_string(j) + " halts " + std::to_string(st) + "\n";
  s += "default never\n";
  return s;
}

// ---------------------------------------------------------------------------
// OneMinimalSystem

OneMinimalSystem::OneMinimalSystem(HaltingOracle oracle)
    : oracle_(std::move(oracle)), alpha_(Alphabet::range(4)) {}

EpPoint OneMinimalSystem::point(int i) const {
  if (i < 1) throw ParseError("machine indices start at 1");
  auto s = oracle_.halt_step(i);
  Word ones(i, 1);
  if (s) {
    Word center = concat(ones, Word(static_cast<size_t>(i + *s), 2));
    return EpPoint({0}, center, {3}, 0);
  }
  return EpPoint({0}, ones, {2}, 0);
}

namespace {

// Run-length decomposition; nullopt when some letter repeats in separate
// runs or letters do not ascend.
std::optional<std::vector<std::pair<Letter, Index>>> ascending_runs(
    const Word& w) {
  std::vector<std::pair<Letter, Index>> runs;
  for (Letter a : w) {
    if (!runs.empty() && runs.back().first == a)
      ++runs.back().second;
    else
      runs.push_back({a, 1});
  }
  for (size_t i = 0; i + 1 < runs.size(); ++i)
    if (runs[i].first >= runs[i + 1].first) return std::nullopt;
  return runs;
}

}  // namespace

bool OneMinimalSystem::member(const Word& w) const {
  if (w.empty()) return true;
  if (!alpha_.contains_word(w)) return false;
  auto runs_opt = ascending_runs(w);
  if (!runs_opt) return false;
  auto& runs = *runs_opt;
  // only the adjacencies 01, 12, 23 occur in the generating points
  for (size_t i = 0; i + 1 < runs.size(); ++i)
    if (runs[i + 1].first != runs[i].first + 1) return false;

  auto count_of = [&](Letter a) -> Index {
    for (auto& [l, c] : runs)
      if (l == a) return c;
    return 0;
  };
  Index a = count_of(0), b = count_of(1), c = count_of(2), d = count_of(3);
  const auto& halting = oracle_.halting_entries();

  if (d == 0) {
    if (c == 0) return true;  // 0^a, 1^b, 0^a 1^b
    if (b == 0) return a == 0;  // 2^c always occurs; 0^a 2^c never
    if (a == 0) return true;    // 1^b 2^c: some never-halting i >= b
    // 0^a 1^b 2^c pins i = b
    auto s = oracle_.halt_step(static_cast<int>(b));
    return !s || c <= b + *s;
  }
  // d >= 1
  if (c == 0) {
    // 3^d alone needs some halting machine; other shapes touch 3 illegally
    if (a == 0 && b == 0) return !halting.empty();
    return false;
  }
  if (b == 0) {
    if (a != 0) return false;  // 0 adjacent to 2 never occurs
    // 2^c 3^d: some halting i with full 2-run >= c
    for (auto& [j, s] : halting)
      if (j + s >= c) return true;
    return false;
  }
  if (a == 0) {
    // 1^b 2^c 3^d: some halting j in [b, c] with j + s_j == c
    for (auto& [j, s] : halting)
      if (j >= b && j + s == c) return true;
    return false;
  }
  // 0^a 1^b 2^c 3^d pins i = b and the full 2-run
  auto s = oracle_.halt_step(static_cast<int>(b));
  return s && b + *s == c;
}

bool OneMinimalSystem::solver(int i) const { return oracle_.halts(i); }

bool OneMinimalSystem::transition_witness(int i) const {
  EpPoint x = point(i);
  auto s = oracle_.halt_step(i);
  Index hi = 2 * static_cast<Index>(i) + (s ? *s : 0) + 4;
  Word win = x.window(-2, hi);
  // look for 0 1^i 2 at some position, then a 3 at or after it
  Word pattern;
  pattern.push_back(0);
  pattern.insert(pattern.end(), static_cast<size_t>(i), 1);
  pattern.push_back(2);
  auto it = std::search(win.begin(), win.end(), pattern.begin(), pattern.end());
  if (it == win.end()) return false;
  return std::find(it, win.end(), 3) != win.end();
}

TemplateSubshift OneMinimalSystem::as_templates() const {
  std::vector<BlockTemplate> ts;
  ts.push_back(BlockTemplate({0}, {BlockTemplate::Block{{}, {1}}}, {}, {2}));
  for (auto& [i, s] : oracle_.halting_entries()) {
    Word center(static_cast<size_t>(i), 1);
    center.insert(center.end(), static_cast<size_t>(i + s), 2);
    ts.push_back(BlockTemplate({0}, {}, center, {3}));
  }
  return TemplateSubshift(alpha_, std::move(ts));
}

// ---------------------------------------------------------------------------
// Prefix code extraction

std::vector<Word> extract_prefix_code(const LanguageOracle& y, int count,
                                      int horizon) {
  std::vector<Word> code;
  Word restriction;  // words considered must begin with this
  auto extensions = [&](const Word& u) {
    std::vector<Letter> out;
    for (Letter a : y.alphabet().letters()) {
      Word ua = u;
      ua.push_back(a);
      if (y.in_language(ua)) out.push_back(a);
    }
    return out;
  };
  for (int j = 0; j < count; ++j) {
    bool found = false;
    int start_len = std::max<int>(1, static_cast<int>(restriction.size()));
    for (int len = start_len; len <= horizon && !found; ++len) {
      for (const Word& u : y.language_n(len)) {
        if (!starts_with(u, restriction)) continue;
        auto exts = extensions(u);
        if (exts.size() < 2) continue;
        Word emitted = u;
        emitted.push_back(exts[0]);
        code.push_back(emitted);
        restriction = u;
        restriction.push_back(exts[1]);
        found = true;
        break;
      }
    }
    if (!found)
      throw BudgetError("no branching word found within the horizon");
  }
  return code;
}

std::vector<Word> extract_suffix_code(const LanguageOracle& y, int count,
                                      int horizon) {
  LanguageOracle rev(y.alphabet(), [&y](int n) {
    std::set<Word> out;
    for (const Word& w : y.language_n(n)) out.insert(reversed(w));
    return out;
  });
  // rev's closure captures y by reference; extract eagerly
  auto code = extract_prefix_code(rev, count, horizon);
  for (auto& w : code) w = reversed(w);
  return code;
}

// ---------------------------------------------------------------------------
// TransitiveLtConstruction

TransitiveLtConstruction::TransitiveLtConstruction(HaltingOracle oracle,
                                                   LanguageOracle y,
                                                   int code_count)
    : oracle_(std::move(oracle)), y_(std::move(y)) {
  Letter top = 0;
  for (Letter a : y_.alphabet().letters()) {
    if (a < 1) throw ParseError("Y must use letters >= 1 (0 is the marker)");
    top = std::max(top, a);
  }
  alpha_ = Alphabet::range(top + 1);
  u_ = extract_prefix_code(y_, code_count + 1);
  v_ = extract_suffix_code(y_, code_count + 1);
}

Word TransitiveLtConstruction::choose_w(Index n) const {
  int j = HaltingOracle::dovetail(n);
  bool halting = oracle_.halts_before(j, n);
  if (j + 1 > static_cast<int>(v_.size()) || j > static_cast<int>(u_.size()))
    throw BudgetError("code_count too small for the probed range");
  const Word& u = u_[j - 1];
  const Word& v = halting ? v_[j] : v_[j - 1];  // v_(j+1) when halting

  // visit number of machine j at position n: h(i) = j iff
  // i = 2^(j-1) - 1 (mod 2^j)
  Index period = Index(1) << j;
  Index offset = (Index(1) << (j - 1)) - 1;
  Index visit = (n - offset) / period;  // 0-based

  // visit-th word of Y beginning with u, by length then lex
  Word target_prefix;
  {
    Index skip = visit;
    for (int len = static_cast<int>(u.size());; ++len) {
      if (len > 256) throw BudgetError("extension enumeration too deep");
      for (const Word& w : y_.language_n(len)) {
        if (!starts_with(w, u)) continue;
        if (skip == 0) {
          target_prefix = w;
          break;
        }
        --skip;
      }
      if (!target_prefix.empty()) break;
    }
  }
  Word g(target_prefix.begin() + u.size(), target_prefix.end());

  // extend g to w with u w v in B(Y) and |w| >= n (plus the length floor
  // that keeps |tau| nondecreasing, handled by the caller's floor)
  Index floor_len = std::max<Index>(n, static_cast<Index>(g.size()));
  for (Index L = floor_len;; ++L) {
    if (L > 4096) throw BudgetError("no suitable w found");
    int total = static_cast<int>(u.size() + L + v.size());
    for (const Word& cand : y_.language_n(total)) {
      if (!starts_with(cand, u)) continue;
      if (!ends_with(cand, v)) continue;
      Word mid(cand.begin() + u.size(), cand.end() - v.size());
      if (!starts_with(mid, g)) continue;
      return mid;
    }
  }
}

Word TransitiveLtConstruction::tau_image(Index n) const {
  if (n < 0) throw ParseError("substitution argument must be non-negative");
  int j = HaltingOracle::dovetail(n);
  bool halting = oracle_.halts_before(j, n);
  auto key = std::make_pair(j, n);
  auto it = w_cache_.find(key);
  Word w;
  if (it != w_cache_.end()) {
    w = it->second;
  } else {
    w = choose_w(n);
    w_cache_[key] = w;
  }
  Word img{0};
  img = concat(img, u_[j - 1]);
  img = concat(img, w);
  img = concat(img, halting ? v_[j] : v_[j - 1]);
  return img;
}

namespace {

// Materializes a window of tau(psi), anchoring the image of psi_0 at 0.
Word tau_psi_window(const std::function<Word(Index)>& image_of_symbol,
                    Index lo, Index hi) {
  if (lo > hi) return {};
  // Fetch enough psi symbols: every image has length >= 1.
  Index need_right = std::max<Index>(hi + 2, 2);
  Index need_left = std::min<Index>(lo - 2, -2);
  Word psi = ruler::psi_range(need_left, need_right);
  auto psi_at = [&](Index t) {
    return psi[static_cast<size_t>(t - need_left)];
  };
  // blocks t = 0, 1, ... cover [0, inf); t = -1, -2, ... cover the past
  std::map<Index, Word> images;  // by symbol value
  auto img = [&](Index t) -> const Word& {
    Index sym = psi_at(t);
    auto it = images.find(sym);
    if (it == images.end())
      it = images.emplace(sym, image_of_symbol(sym)).first;
    return it->second;
  };
  Word out(static_cast<size_t>(hi - lo + 1), 0);
  auto place = [&](Index start, const Word& w) {
    for (size_t i = 0; i < w.size(); ++i) {
      Index pos = start + static_cast<Index>(i);
      if (pos >= lo && pos <= hi) out[static_cast<size_t>(pos - lo)] = w[i];
    }
  };
  Index cur = 0;
  for (Index t = 0; cur <= hi; ++t) {
    const Word& w = img(t);
    place(cur, w);
    cur += static_cast<Index>(w.size());
    if (t > need_right) throw std::logic_error("psi fetch too small");
  }
  cur = 0;
  for (Index t = -1; cur > lo; --t) {
    const Word& w = img(t);
    cur -= static_cast<Index>(w.size());
    place(cur, w);
    if (t < need_left) throw std::logic_error("psi fetch too small");
  }
  return out;
}

}  // namespace

Word TransitiveLtConstruction::window(Index lo, Index hi) const {
  // Image lengths must be nondecreasing on the probed symbol range for the
  // quasiminimality argument; pad via the floor inside choose_w by probing
  // symbols in increasing order first.
  Index max_sym = 0;
  {
    Word psi = ruler::psi_range(std::min<Index>(lo - 2, -2),
                                std::max<Index>(hi + 2, 2));
    for (Letter s : psi) max_sym = std::max<Index>(max_sym, s);
  }
  Index prev_len = 0;
  std::map<Index, Word> images;
  for (Index s = 0; s <= max_sym; ++s) {
    Word img = tau_image(s);
    // enforce the nondecreasing-length floor by re-choosing w with more
    // padding if a shorter image appears
    while (static_cast<Index>(img.size()) < prev_len) {
      // lengthen w minimally: re-run the extension search with a larger
      // floor by temporarly bumping the cache
      int j = HaltingOracle::dovetail(s);
      bool halting = oracle_.halts_before(j, s);
      const Word& u = u_[j - 1];
      const Word& v = halting ? v_[j] : v_[j - 1];
      Index want_mid = prev_len - 1 - static_cast<Index>(u.size()) -
                       static_cast<Index>(v.size());
      Word w = w_cache_.at(std::make_pair(j, s));
      bool extended = false;
      for (Index L = std::max<Index>(want_mid, w.size() + 1); L <= 4096; ++L) {
        int total = static_cast<int>(u.size() + L + v.size());
        for (const Word& cand : y_.language_n(total)) {
          if (!starts_with(cand, u) || !ends_with(cand, v)) continue;
          Word mid(cand.begin() + u.size(), cand.end() - v.size());
          if (!starts_with(mid, w)) continue;
          w_cache_[std::make_pair(j, s)] = mid;
          extended = true;
          break;
        }
        if (extended) break;
      }
      if (!extended) throw BudgetError("could not keep image lengths monotone");
      img = tau_image(s);
    }
    prev_len = static_cast<Index>(img.size());
    images[s] = std::move(img);
  }
  return tau_psi_window([&](Index s) { return tau_image(s); }, lo, hi);
}

bool TransitiveLtConstruction::scan_witness(int j, Index len) const {
  if (j + 1 > static_cast<int>(v_.size())) throw ParseError("j beyond codes");
  Word win = window(0, len - 1);
  const Word& u = u_[j - 1];
  const Word& vnext = v_[j];
  // maximal 0-delimited blocks
  std::vector<Index> zeros;
  for (Index i = 0; i < static_cast<Index>(win.size()); ++i)
    if (win[static_cast<size_t>(i)] == 0) zeros.push_back(i);
  for (size_t z = 0; z + 1 < zeros.size(); ++z) {
    Index a = zeros[z] + 1, b = zeros[z + 1];  // block [a, b)
    if (b - a < static_cast<Index>(u.size() + vnext.size())) continue;
    Word block(win.begin() + a, win.begin() + b);
    if (starts_with(block, u) && ends_with(block, vnext)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// countable_member

bool countable_member(const CountablePointSpec& x, const Word& w) {
  if (w.empty()) return true;
  std::vector<size_t> nz;
  for (size_t i = 0; i < w.size(); ++i)
    if (w[i] != 0) nz.push_back(i);
  if (nz.empty()) return true;  // the all-zero point is always a limit
  Index len = static_cast<Index>(w.size());
  if (nz.size() == 1) {
    Letter s = w[nz[0]];
    if (x.limit_point(s)) return true;
    auto k = x.max_coordinate(s);
    if (!k) return false;
    Word seg = x.window(-(*k) - len, *k + len);
    return is_subword(w, seg);
  }
  Index m = x.far_bound(len);
  Word seg = x.window(-m - len, m + len);
  return is_subword(w, seg);
}

// ---------------------------------------------------------------------------
// ModularSimpleConstruction

ModularSimpleConstruction::ModularSimpleConstruction(HaltingOracle oracle)
    : oracle_(std::move(oracle)) {}

Index ModularSimpleConstruction::odd_prime(int j) {
  if (j < 1) throw ParseError("odd prime indices start at 1");
  mpz_class p = 2;
  for (int t = 0; t < j; ++t) {
    mpz_class next;
    mpz_nextprime(next.get_mpz_t(), p.get_mpz_t());
    p = next;
  }
  if (!p.fits_slong_p()) throw BudgetError("odd prime too large");
  return p.get_si();
}

Index ModularSimpleConstruction::zero_run(Index i) const {
  if (i < 0 || i > 50) throw BudgetError("block index out of desk range");
  int j = HaltingOracle::dovetail(i);
  Index base = Index(1) << i;
  if (oracle_.halts_before(j, i)) return odd_prime(j) * base;
  return base;
}

Index ModularSimpleConstruction::block_start(Index i) const {
  Index s = 0;
  for (Index t = 0; t < i; ++t) s += 1 + zero_run(t);
  return s;
}

Word ModularSimpleConstruction::window(Index lo, Index hi) const {
  Word out;
  if (lo > hi) return out;
  out.assign(static_cast<size_t>(hi - lo + 1), 0);
  Index cur = 0;
  for (Index t = 0; cur <= hi; ++t) {
    if (cur >= lo && cur <= hi) out[static_cast<size_t>(cur - lo)] = 1;
    cur += 1 + zero_run(t);
  }
  return out;
}

bool ModularSimpleConstruction::gap_witness(int j, Index len) const {
  Index p = odd_prime(j);
  Index cur = 0;
  for (Index t = 0; cur < len; ++t) {
    Index run = zero_run(t);
    Index next = cur + 1 + run;
    if (next < len && run % p == 0) return true;
    cur = next;
  }
  return false;
}

CountablePointSpec ModularSimpleConstruction::point_spec() const {
  CountablePointSpec spec;
  spec.alpha = Alphabet::range(2);
  spec.window = [this](Index lo, Index hi) { return window(lo, hi); };
  spec.limit_point = [](Letter s) { return s == 1; };
  spec.far_bound = [this](Index n) {
    Index t = 0;
    while (1 + (Index(1) << t) <= n) ++t;
    return block_start(t + 1) + 1;
  };
  spec.max_coordinate = [](Letter) -> std::optional<Index> {
    return std::nullopt;  // only letter 1 occurs and it is a limit point
  };
  return spec;
}

// ---------------------------------------------------------------------------
// PrimorialConstruction

PrimorialConstruction::PrimorialConstruction(Mode mode, HaltingOracle oracle,
                                             int levels)
    : mode_(mode), oracle_(std::move(oracle)) {
  if (levels < 0) throw ParseError("levels must be non-negative");
  if (mode_ == Mode::Conforming && levels > 2)
    throw BudgetError(
        "level overflow: conforming primorials are materializable for two "
        "levels only (p(f(2)) >= 29^29)");
  int primes_needed = levels + 1;  // one extra for the growth chain
  if (mode_ == Mode::Conforming) {
    primes_.push_back(3);
    // p(f(i)) = next prime >= p(f(i-1)) ^ p(f(i-1))
    while (static_cast<int>(primes_.size()) < std::max(primes_needed, 3)) {
      const mpz_class& prev = primes_.back();
      if (!prev.fits_ulong_p())
        throw BudgetError("growth tower exceeds computable primes");
      mpz_class power;
      mpz_pow_ui(power.get_mpz_t(), prev.get_mpz_t(), prev.get_ui());
      mpz_class candidate = power - 1;
      mpz_class next;
      mpz_nextprime(next.get_mpz_t(), candidate.get_mpz_t());
      primes_.push_back(next);
    }
  } else {
    for (int i = 0; i < std::max(primes_needed, 3); ++i)
      primes_.push_back(mpz_class(static_cast<long>(
          ModularSimpleConstruction::odd_prime(i + 1))));
  }

  for (int i = 0; i < levels; ++i) {
    Level lv;
    lv.index = i;
    lv.prime = primes_[i];
    if (!lv.prime.fits_ulong_p())
      throw BudgetError("level overflow: primorial not materializable");
    mpz_primorial_ui(lv.primorial.get_mpz_t(), lv.prime.get_ui() + 1);
    lv.machine = HaltingOracle::dovetail(i);
    lv.halting = oracle_.halts_before(lv.machine, i);
    if (lv.halting) {
      // modulus is the prime of the machine's own level: machine j uses
      // p(f(j-1)); the dovetail guarantees j - 1 <= i
      const mpz_class& q_prime = primes_[lv.machine - 1];
      mpz_class quotient = lv.primorial / q_prime;
      if (mpz_invert(lv.k.get_mpz_t(), quotient.get_mpz_t(),
                     q_prime.get_mpz_t()) == 0)
        throw std::logic_error("quotient not invertible");
      lv.distance = lv.primorial + quotient * lv.k;
    } else {
      lv.distance = lv.primorial;
    }
    levels_.push_back(std::move(lv));
  }
}

const mpz_class& PrimorialConstruction::prime_at(int i) const {
  if (i < 0 || i >= static_cast<int>(primes_.size()))
    throw ParseError("prime level out of the computed range");
  return primes_[i];
}

bool PrimorialConstruction::growth_chain_holds() const {
  for (size_t j = 1; j < primes_.size(); ++j) {
    const mpz_class& prev = primes_[j - 1];
    if (!prev.fits_ulong_p()) return true;  // beyond checkable range
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), prev.get_mpz_t(), prev.get_ui());
    mpz_class prim;
    mpz_primorial_ui(prim.get_mpz_t(), prev.get_ui() + 1);
    mpz_class lhs = 2 * static_cast<long>(j) * prim;
    if (!(lhs <= power && power <= primes_[j])) return false;
  }
  return true;
}

bool PrimorialConstruction::symbolic_witness(int j) const {
  if (j < 1 || j > static_cast<int>(primes_.size()))
    throw ParseError("machine index beyond the computed primes");
  const mpz_class& p = primes_[j - 1];
  for (auto& lv : levels_)
    if (lv.distance % p == 1) return true;
  return false;
}

Word PrimorialConstruction::window(Index len) const {
  if (mode_ != Mode::Toy)
    throw BudgetError("only toy parameters materialize words");
  Word out(static_cast<size_t>(len), 0);
  Index cur = 0;
  for (size_t i = 0; cur < len; ++i) {
    if (i >= levels_.size())
      throw BudgetError("window needs more levels than computed");
    out[static_cast<size_t>(cur)] = 1;
    const mpz_class& d = levels_[i].distance;
    if (!d.fits_slong_p()) throw BudgetError("distance overflows the window");
    cur += d.get_si();
  }
  return out;
}

// ---------------------------------------------------------------------------
// CountingConstruction

CountingConstruction::CountingConstruction(HaltingOracle oracle)
    : oracle_(std::move(oracle)) {}

Word CountingConstruction::block(Index i) const {
  if (i < 0) throw ParseError("block indices are non-negative");
  int j = HaltingOracle::dovetail(i);
  Word zeros(static_cast<size_t>(i), 0);
  Word out{2};
  if (oracle_.halts_before(j, i)) {
    for (int rep = 0; rep < j; ++rep) {
      out = concat(out, zeros);
      out.push_back(1);
    }
  }
  return concat(out, zeros);
}

Index CountingConstruction::block_start(Index i) const {
  Index s = 0;
  for (Index t = 0; t < i; ++t) s += static_cast<Index>(block(t).size());
  return s;
}

Word CountingConstruction::window(Index lo, Index hi) const {
  Word out;
  if (lo > hi) return out;
  out.assign(static_cast<size_t>(hi - lo + 1), 0);
  Index cur = 0;
  for (Index t = 0; cur <= hi; ++t) {
    Word b = block(t);
    for (size_t i = 0; i < b.size(); ++i) {
      Index pos = cur + static_cast<Index>(i);
      if (pos >= lo && pos <= hi) out[static_cast<size_t>(pos - lo)] = b[i];
    }
    cur += static_cast<Index>(b.size());
  }
  return out;
}

bool CountingConstruction::block_witness(int j, Index len) const {
  Index cur = 0;
  for (Index t = 0; cur < len; ++t) {
    Word b = block(t);
    Index next = cur + static_cast<Index>(b.size());
    if (HaltingOracle::dovetail(t) == j && oracle_.halts_before(j, t) &&
        next < len)
      return true;  // the block plus the following 2 lie inside the window
    cur = next;
  }
  return false;
}

CountablePointSpec CountingConstruction::point_spec() const {
  CountablePointSpec spec;
  spec.alpha = Alphabet::range(3);
  spec.window = [this](Index lo, Index hi) { return window(lo, hi); };
  bool any_halting = !oracle_.halting_entries().empty();
  spec.limit_point = [any_halting](Letter s) {
    if (s == 2) return true;
    if (s == 1) return any_halting;
    return false;
  };
  spec.far_bound = [this](Index n) { return block_start(n + 2); };
  spec.max_coordinate = [](Letter) -> std::optional<Index> {
    return std::nullopt;  // letters occur iff their sunny point is a limit
  };
  return spec;
}

// ---------------------------------------------------------------------------
// DyckConstruction

Word DyckConstruction::pair_word(const std::array<Word, 6>& w) {
  Word u;
  for (int s = 1; s <= 3; ++s)
    for (int s2 = 1; s2 <= 3; ++s2) {
      u = concat(u, w[open_bracket(s)]);
      u = concat(u, w[open_bracket(s2)]);
      u = concat(u, w[close_bracket(s2)]);
      u = concat(u, w[close_bracket(s)]);
      u = concat(u, w[open_bracket(s2)]);
      u = concat(u, w[close_bracket(s2)]);
    }
  return u;
}

DyckConstruction::DyckConstruction(HaltingOracle oracle, int depth,
                                   Index length_cap)
    : oracle_(std::move(oracle)), alpha_(Alphabet::range(6)) {
  Level base;
  base.index = 0;
  for (Letter l = 0; l < 6; ++l) base.words[l] = {l};
  base.length = 1;
  levels_.push_back(base);
  for (int i = 0; i + 1 < depth + 1; ++i) {
    const Level& prev = levels_.back();
    int machine = HaltingOracle::dovetail(i);
    bool halting = oracle_.halts_within(machine, i);
    Word u = pair_word(prev.words);
    Word insert;
    if (halting) {
      for (int r = 0; r < machine; ++r)
        insert = concat(insert, prev.words[open_bracket(1)]);
      insert = concat(insert, prev.words[open_bracket(2)]);
      insert = concat(insert, prev.words[close_bracket(2)]);
      for (int r = 0; r < machine; ++r)
        insert = concat(insert, prev.words[close_bracket(1)]);
    }
    Word prefix = concat(prev.words[open_bracket(3)], insert);
    prefix = concat(prefix, u);
    prefix = concat(prefix, prev.words[close_bracket(3)]);
    Level next;
    next.index = i + 1;
    next.halting_inserted = halting;
    for (Letter l = 0; l < 6; ++l) next.words[l] = concat(prefix, prev.words[l]);
    next.length = static_cast<Index>(next.words[0].size());
    if (next.length > length_cap)
      throw BudgetError("Dyck level exceeds the length cap");
    levels_.push_back(std::move(next));
  }
}

DyckConstruction::PdaRun DyckConstruction::pda_check(const Word& w, int k,
                                                     const Word& initial_stack) {
  PdaRun run;
  run.accepted = true;
  std::vector<int> stack(initial_stack.begin(), initial_stack.end());
  const size_t base = stack.size();
  auto pattern_on_top = [&]() {
    if (k < 0) return false;
    size_t need = static_cast<size_t>(k) + 2;
    if (stack.size() < need) return false;
    size_t top = stack.size() - 1;
    if (stack[top] != 2) return false;
    for (int t = 1; t <= k; ++t)
      if (stack[top - t] != 1) return false;
    return stack[top - k - 1] == 3;
  };
  auto extends_base_with_3 = [&]() {
    if (stack.size() < base) return false;
    for (size_t i = 0; i < base; ++i)
      if (stack[i] != initial_stack[i]) return false;
    return stack.size() == base || stack[base] == 3;
  };
  for (size_t pos = 0; pos < w.size(); ++pos) {
    Letter a = w[pos];
    if (a >= 0 && a <= 2) {
      stack.push_back(a + 1);  // push s on [s
    } else if (a >= 3 && a <= 5) {
      int s = 6 - a;  // pop-match on ]s
      if (stack.empty() || stack.back() != s) {
        run.accepted = false;
        return run;
      }
      stack.pop_back();
    } else {
      throw ParseError("letter outside the Dyck alphabet");
    }
    run.max_stack = std::max<Index>(run.max_stack,
                                    static_cast<Index>(stack.size()));
    if (pattern_on_top()) run.pattern_seen = true;
    if (pos + 1 < w.size() && !extends_base_with_3())
      run.prefix_invariant = false;
  }
  return run;
}

bool DyckConstruction::pattern_witness(int j) const {
  return pda_check(levels_.back().words[open_bracket(1)], j).pattern_seen;
}

// ---------------------------------------------------------------------------
// GenericBuild

GenericBuild::GenericBuild(std::function<Word(Index)> tau, Letter marker,
                           Alphabet alpha)
    : tau_(std::move(tau)), marker_(marker), alpha_(std::move(alpha)) {}

Word GenericBuild::image_checked(Index n) const {
  Word img = tau_(n);
  if (img.empty() || img.front() != marker_)
    throw ParseError("every image must begin with the marker");
  for (size_t i = 1; i < img.size(); ++i)
    if (img[i] == marker_)
      throw ParseError("the marker may not occur inside an image");
  if (!alpha_.contains_word(img)) throw ParseError("image letter unknown");
  return img;
}

Word GenericBuild::window(Index lo, Index hi) const {
  // hypothesis check on the probed symbol range: lengths nondecreasing
  Index max_sym = 0;
  {
    Word psi = ruler::psi_range(std::min<Index>(lo - 2, -2),
                                std::max<Index>(hi + 2, 2));
    for (Letter s : psi) max_sym = std::max<Index>(max_sym, s);
  }
  Index prev = 0;
  for (Index n = 0; n <= max_sym; ++n) {
    Index len = static_cast<Index>(image_checked(n).size());
    if (len < prev)
      throw ParseError("image lengths must be nondecreasing on the range");
    prev = len;
  }
  return tau_psi_window([this](Index s) { return image_checked(s); }, lo, hi);
}

}  // namespace qms
