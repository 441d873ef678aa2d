#include "qms/core.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace qms {

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<Letter> letters, std::map<Letter, char> glyphs)
    : letters_(std::move(letters)), glyphs_(std::move(glyphs)) {
  if (letters_.empty()) throw ParseError("alphabet must be nonempty");
  for (size_t i = 0; i + 1 < letters_.size(); ++i)
    if (letters_[i] >= letters_[i + 1])
      throw ParseError("alphabet letters must be strictly increasing");
  if (letters_.front() < 0) throw ParseError("letters must be non-negative");
  std::set<char> seen;
  for (auto& [a, g] : glyphs_)
    if (!seen.insert(g).second) throw ParseError("duplicate glyph");
}

static char default_glyph(Letter a) {
  if (a >= 0 && a <= 9) return static_cast<char>('0' + a);
  if (a >= 10 && a <= 35) return static_cast<char>('a' + (a - 10));
  return '?';
}

Alphabet Alphabet::range(int k) {
  std::vector<Letter> ls(k);
  std::map<Letter, char> gs;
  for (int i = 0; i < k; ++i) {
    ls[i] = i;
    gs[i] = default_glyph(i);
  }
  return Alphabet(std::move(ls), std::move(gs));
}

Alphabet Alphabet::from_glyphs(std::string_view glyphs) {
  std::vector<Letter> ls;
  std::map<Letter, char> gs;
  for (size_t i = 0; i < glyphs.size(); ++i) {
    ls.push_back(static_cast<Letter>(i));
    gs[static_cast<Letter>(i)] = glyphs[i];
  }
  return Alphabet(std::move(ls), std::move(gs));
}

bool Alphabet::contains(Letter a) const {
  return std::binary_search(letters_.begin(), letters_.end(), a);
}

bool Alphabet::contains_word(const Word& w) const {
  return std::all_of(w.begin(), w.end(), [&](Letter a) { return contains(a); });
}

char Alphabet::glyph(Letter a) const {
  auto it = glyphs_.find(a);
  return it != glyphs_.end() ? it->second : default_glyph(a);
}

std::optional<Letter> Alphabet::letter_of(char g) const {
  for (auto& [a, gl] : glyphs_)
    if (gl == g) return a;
  return std::nullopt;
}

Word Alphabet::parse_word(std::string_view text) const {
  Word w;
  for (char c : text) {
    if (c == ' ' || c == '\t') continue;
    auto a = letter_of(c);
    if (!a) throw ParseError(std::string("unknown glyph '") + c + "'");
    w.push_back(*a);
  }
  return w;
}

std::string Alphabet::format_word(const Word& w) const {
  std::string s;
  for (Letter a : w) s += glyph(a);
  return s;
}

// ---------------------------------------------------------------------------
// Word helpers

Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Word repeat(const Word& w, Index times) {
  Word r;
  r.reserve(w.size() * std::max<Index>(times, 0));
  for (Index i = 0; i < times; ++i) r.insert(r.end(), w.begin(), w.end());
  return r;
}

Word reversed(const Word& w) { return Word(w.rbegin(), w.rend()); }

bool is_subword(const Word& u, const Word& w) {
  if (u.empty()) return true;
  if (u.size() > w.size()) return false;
  return std::search(w.begin(), w.end(), u.begin(), u.end()) != w.end();
}

bool starts_with(const Word& w, const Word& prefix) {
  return prefix.size() <= w.size() &&
         std::equal(prefix.begin(), prefix.end(), w.begin());
}

bool ends_with(const Word& w, const Word& suffix) {
  return suffix.size() <= w.size() &&
         std::equal(suffix.rbegin(), suffix.rend(), w.rbegin());
}

Word primitive_root(const Word& w) {
  size_t n = w.size();
  for (size_t d = 1; d <= n / 2; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (size_t i = d; i < n && ok; ++i) ok = (w[i] == w[i - d]);
    if (ok) return Word(w.begin(), w.begin() + d);
  }
  return w;
}

int least_rotation_index(const Word& w) {
  int n = static_cast<int>(w.size());
  int best = 0;
  for (int s = 1; s < n; ++s) {
    for (int i = 0; i < n; ++i) {
      Letter a = w[(best + i) % n], b = w[(s + i) % n];
      if (b < a) {
        best = s;
        break;
      }
      if (b > a) break;
    }
  }
  return best;
}

std::set<Word> factors(const Word& w, int n) {
  std::set<Word> out;
  if (n <= 0 || static_cast<size_t>(n) > w.size()) return out;
  for (size_t i = 0; i + n <= w.size(); ++i)
    out.insert(Word(w.begin() + i, w.begin() + i + n));
  return out;
}

std::string format_nat_word(const Word& w) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(w[i]);
  }
  return s;
}

Word parse_nat_word(std::string_view text) {
  Word w;
  std::istringstream is{std::string(text)};
  long long v;
  while (is >> v) {
    if (v < 0) throw ParseError("letters must be non-negative");
    w.push_back(static_cast<Letter>(v));
  }
  if (!is.eof()) throw ParseError("bad natural-number word");
  return w;
}

// ---------------------------------------------------------------------------
// SemilinearSet

bool Progression::contains(Index i) const {
  if (step == 0) return i == start;
  Index d = i - start;
  if (step > 0) return d >= 0 && d % step == 0;
  return d <= 0 && (-d) % (-step) == 0;
}

SemilinearSet::SemilinearSet(std::vector<Progression> ps)
    : progressions_(std::move(ps)) {
  normalize();
}

SemilinearSet SemilinearSet::singleton(Index i) {
  return SemilinearSet({Progression{i, 0}});
}

bool SemilinearSet::contains(Index i) const {
  for (auto& p : progressions_)
    if (p.contains(i)) return true;
  return false;
}

void SemilinearSet::add(Progression p) { progressions_.push_back(p); }

void SemilinearSet::normalize() {
  std::sort(progressions_.begin(), progressions_.end());
  progressions_.erase(
      std::unique(progressions_.begin(), progressions_.end()),
      progressions_.end());
  // Drop progressions subsumed by another one of the same direction.
  std::vector<Progression> kept;
  for (auto& p : progressions_) {
    bool subsumed = false;
    for (auto& q : progressions_) {
      if (p == q || q.step == 0) continue;
      if (p.step == 0) {
        if (q.contains(p.start)) subsumed = true;
      } else if (p.step == q.step && q.contains(p.start)) {
        subsumed = true;
      }
      if (subsumed) break;
    }
    if (!subsumed) kept.push_back(p);
  }
  progressions_ = std::move(kept);
}

std::string SemilinearSet::to_string() const {
  std::string s = "{";
  for (size_t i = 0; i < progressions_.size(); ++i) {
    if (i) s += ", ";
    auto& p = progressions_[i];
    if (p.step == 0)
      s += std::to_string(p.start);
    else if (p.step > 0)
      s += std::to_string(p.start) + "+" + std::to_string(p.step) + "n";
    else
      s += std::to_string(p.start) + "-" + std::to_string(-p.step) + "n";
  }
  return s + "}";
}

// ---------------------------------------------------------------------------
// EpPoint

EpPoint::EpPoint(Word left, Word center, Word right, Index origin)
    : left_(std::move(left)),
      center_(std::move(center)),
      right_(std::move(right)),
      origin_(origin) {
  if (left_.empty() || right_.empty())
    throw ParseError("periods of an eventually periodic point are nonempty");
  canonicalize();
}

void EpPoint::canonicalize() {
  left_ = primitive_root(left_);
  right_ = primitive_root(right_);

  // Global periodicity: the left-periodic continuation covers the whole
  // point. Then the canonical form is INF(r).INF(r) with block-aligned
  // origin in [0, |r|).
  auto cont = [&](Index i) {  // continuation of the left period at origin+i
    Index m = static_cast<Index>(left_.size());
    return left_[((i % m) + m) % m];
  };
  bool periodic = left_.size() == right_.size();
  for (size_t i = 0; periodic && i < center_.size(); ++i)
    periodic = center_[i] == cont(static_cast<Index>(i));
  if (periodic)
    for (size_t j = 0; periodic && j < right_.size(); ++j)
      periodic = right_[j] == cont(static_cast<Index>(center_.size() + j));
  if (periodic) {
    int s = least_rotation_index(left_);
    Word r;
    for (size_t i = 0; i < left_.size(); ++i)
      r.push_back(left_[(s + i) % left_.size()]);
    Index m = static_cast<Index>(r.size());
    Index o = (((origin_ + s) % m) + m) % m;
    left_ = right_ = r;
    center_.clear();
    origin_ = o;
    return;
  }

  // Rotate both periods to their least rotation, spilling the cut-off part
  // into the center (pure re-presentation of the same point).
  {
    int s = least_rotation_index(left_);
    if (s != 0) {
      Word a(left_.begin(), left_.begin() + s);
      Word b(left_.begin() + s, left_.end());
      center_.insert(center_.begin(), b.begin(), b.end());
      origin_ -= static_cast<Index>(b.size());
      left_ = concat(b, a);
    }
  }
  {
    int t = least_rotation_index(right_);
    if (t != 0) {
      Word c(right_.begin(), right_.begin() + t);
      Word d(right_.begin() + t, right_.end());
      center_.insert(center_.end(), c.begin(), c.end());
      right_ = concat(d, c);
    }
  }

  // Greedy center minimization: strip whole period copies, left then right.
  while (starts_with(center_, left_)) {
    center_.erase(center_.begin(), center_.begin() + left_.size());
    origin_ += static_cast<Index>(left_.size());
  }
  while (ends_with(center_, right_))
    center_.resize(center_.size() - right_.size());
}

Letter EpPoint::at(Index i) const {
  Index rel = i - origin_;
  if (rel < 0) {
    Index m = static_cast<Index>(left_.size());
    return left_[((rel % m) + m) % m];
  }
  if (rel < static_cast<Index>(center_.size()))
    return center_[static_cast<size_t>(rel)];
  Index rr = rel - static_cast<Index>(center_.size());
  return right_[rr % static_cast<Index>(right_.size())];
}

Word EpPoint::window(Index lo, Index hi) const {
  Word w;
  for (Index i = lo; i <= hi; ++i) w.push_back(at(i));
  return w;
}

EpPoint EpPoint::shifted(Index k) const {
  return EpPoint(left_, center_, right_, origin_ - k);
}

bool EpPoint::same_point(const EpPoint& o) const {
  return left_ == o.left_ && center_ == o.center_ && right_ == o.right_ &&
         origin_ == o.origin_;
}

bool EpPoint::same_orbit(const EpPoint& o) const {
  return left_ == o.left_ && center_ == o.center_ && right_ == o.right_;
}

bool EpPoint::is_periodic() const { return center_.empty() && left_ == right_; }

SemilinearSet EpPoint::occurrences(const Word& u) const {
  if (u.empty()) throw ParseError("occurrences of the empty word");
  Index P = static_cast<Index>(left_.size());
  Index R = static_cast<Index>(right_.size());
  Index n = static_cast<Index>(u.size());
  Index c = static_cast<Index>(center_.size());
  auto match = [&](Index i) {
    for (Index j = 0; j < n; ++j)
      if (at(i + j) != u[j]) return false;
    return true;
  };
  SemilinearSet out;
  // Windows fully inside the left tail recur with period |left|.
  for (Index i = origin_ - n - P + 1; i <= origin_ - n; ++i)
    if (match(i)) out.add(Progression{i, -P});
  // Windows touching the center are singletons.
  for (Index i = origin_ - n + 1; i < origin_ + c; ++i)
    if (match(i)) out.add(Progression{i, 0});
  // Windows fully inside the right tail recur with period |right|.
  for (Index i = origin_ + c; i < origin_ + c + R; ++i)
    if (match(i)) out.add(Progression{i, R});
  out.normalize();
  return out;
}

std::set<Word> EpPoint::language_n(int n) const {
  std::set<Word> out;
  if (n <= 0) return out;
  Index P = static_cast<Index>(left_.size());
  Index R = static_cast<Index>(right_.size());
  Index c = static_cast<Index>(center_.size());
  for (Index i = origin_ - n - P; i <= origin_ + c + R; ++i)
    out.insert(window(i, i + n - 1));
  return out;
}

std::string EpPoint::to_string(const Alphabet& alpha) const {
  // Pad the displayed center with period copies until the dot (position 0)
  // falls inside it.
  Word disp = center_;
  Index start = origin_;
  while (start > 0) {
    disp.insert(disp.begin(), left_.begin(), left_.end());
    start -= static_cast<Index>(left_.size());
  }
  while (start + static_cast<Index>(disp.size()) < 0)
    disp.insert(disp.end(), right_.begin(), right_.end());
  Index split = -start;  // letters before the dot
  std::string s = "INF(" + alpha.format_word(left_) + ")";
  Word pre(disp.begin(), disp.begin() + split);
  Word post(disp.begin() + split, disp.end());
  if (!pre.empty()) s += " " + alpha.format_word(pre);
  s += " .";
  if (!post.empty()) s += " " + alpha.format_word(post);
  s += " INF(" + alpha.format_word(right_) + ")";
  return s;
}

std::set<Word> language_n(const std::vector<EpPoint>& points, int n) {
  std::set<Word> out;
  for (auto& p : points) {
    auto f = p.language_n(n);
    out.insert(f.begin(), f.end());
  }
  return out;
}

EpPoint parse_point(const Alphabet& alpha, std::string_view text) {
  std::vector<std::string> toks;
  std::istringstream is{std::string(text)};
  std::string t;
  while (is >> t) toks.push_back(t);
  auto inf_body = [&](const std::string& tok) -> std::optional<std::string> {
    if (tok.size() >= 6 && tok.substr(0, 4) == "INF(" && tok.back() == ')')
      return tok.substr(4, tok.size() - 5);
    if (tok == "INF()") return std::string();
    return std::nullopt;
  };
  if (toks.size() < 3) throw ParseError("point literal too short");
  auto lw = inf_body(toks.front());
  auto rw = inf_body(toks.back());
  if (!lw || !rw) throw ParseError("point literal must start and end in INF(word)");
  if (lw->empty() || rw->empty()) throw ParseError("empty period in point literal");
  Word pre, post;
  bool seen_dot = false;
  for (size_t i = 1; i + 1 < toks.size(); ++i) {
    if (toks[i] == ".") {
      if (seen_dot) throw ParseError("two dots in point literal");
      seen_dot = true;
      continue;
    }
    Word w = alpha.parse_word(toks[i]);
    auto& dst = seen_dot ? post : pre;
    dst.insert(dst.end(), w.begin(), w.end());
  }
  if (!seen_dot) throw ParseError("point literal needs a dot");
  Word center = concat(pre, post);
  return EpPoint(alpha.parse_word(*lw), center, alpha.parse_word(*rw),
                 -static_cast<Index>(pre.size()));
}

// ---------------------------------------------------------------------------
// ClopenSet

ClopenSet::ClopenSet(int width, std::set<Word> words)
    : width_(width), words_(std::move(words)) {
  if (width_ <= 0) throw ParseError("clopen width must be positive");
  for (auto& w : words_)
    if (static_cast<int>(w.size()) != width_)
      throw ParseError("clopen set words must have uniform width");
}

ClopenSet ClopenSet::parse(const Alphabet& alpha, std::string_view text) {
  std::set<Word> words;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string_view piece = text.substr(
        pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
    if (!piece.empty()) words.insert(alpha.parse_word(piece));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (words.empty()) throw ParseError("empty clopen set");
  int width = static_cast<int>(words.begin()->size());
  return ClopenSet(width, std::move(words));
}

}  // namespace qms
