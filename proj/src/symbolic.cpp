#include "ctl/symbolic.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "ctl/errors.hpp"

namespace ctl {

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::chacon: return "chacon";
    case SystemKind::odometer2: return "odometer2";
    case SystemKind::fullshift2: return "fullshift2";
  }
  return "?";
}

SystemKind parse_system_kind(std::string_view name) {
  if (name == "chacon") return SystemKind::chacon;
  if (name == "odometer2") return SystemKind::odometer2;
  if (name == "fullshift2") return SystemKind::fullshift2;
  throw ParameterError("unknown system '" + std::string(name) + "'");
}

std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (auto c : w) s.push_back(static_cast<char>('0' + c));
  return s;
}

Word word_from_string(std::string_view text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw ParameterError("word has non-binary symbol");
    w.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return w;
}

Word substitute(const Word& w, const std::vector<Word>& rules) {
  Word out;
  for (auto c : w) {
    const Word& image = rules.at(c);
    out.insert(out.end(), image.begin(), image.end());
  }
  return out;
}

namespace {

const std::vector<Word>& chacon_rules() {
  static const std::vector<Word> rules{{0, 0, 1, 0}, {1}};
  return rules;
}

}  // namespace

Word chacon_block(int m) {
  Word w{0};
  for (int i = 0; i < m; ++i) w = substitute(w, chacon_rules());
  return w;
}

SystemPtr SubshiftSystem::create(SystemKind kind, std::size_t generator_length,
                                 std::uint64_t seed) {
  std::shared_ptr<SubshiftSystem> sys(new SubshiftSystem());
  sys->kind_ = kind;
  sys->seed_ = seed;
  switch (kind) {
    case SystemKind::chacon: {
      sys->rules_ = chacon_rules();
      // Long enough to hold every factor of length kMaxWordLength a few times over.
      std::size_t want = std::max<std::size_t>(generator_length, 4096);
      int m = 0;
      std::size_t len = 1;
      while (len < want) {
        len = 3 * len + 1;
        ++m;
      }
      sys->power_ = m;
      sys->generator_ = chacon_block(m);
      break;
    }
    case SystemKind::fullshift2: {
      std::size_t want = std::max<std::size_t>(generator_length, 4096);
      std::mt19937_64 rng(seed);
      sys->generator_.resize(want);
      for (auto& c : sys->generator_) c = static_cast<std::uint8_t>(rng() & 1u);
      break;
    }
    case SystemKind::odometer2:
      break;
  }
  return sys;
}

std::uint32_t pack(const Word& w) {
  std::uint32_t code = 0;
  for (auto c : w) code = (code << 1) | c;
  return code;
}

Word unpack(std::uint32_t code, int length) {
  Word w(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) {
    w[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(code & 1u);
    code >>= 1;
  }
  return w;
}

Language::Language(SystemKind system, int length, std::vector<std::uint32_t> codes)
    : system_(system), length_(length), codes_(std::move(codes)) {
  std::sort(codes_.begin(), codes_.end());
  codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
}

bool Language::contains(const Word& w) const {
  return static_cast<int>(w.size()) == length_ && index_of(pack(w)) != npos;
}

std::size_t Language::index_of(std::uint32_t code) const {
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return npos;
  return static_cast<std::size_t>(it - codes_.begin());
}

namespace {

std::vector<std::uint32_t> factors(const Word& w, int length) {
  std::vector<std::uint32_t> out;
  auto L = static_cast<std::size_t>(length);
  if (w.size() < L) return out;
  std::uint32_t mask = length == 32 ? ~0u : ((1u << length) - 1u);
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    code = ((code << 1) | w[i]) & mask;
    if (i + 1 >= L) out.push_back(code);
  }
  return out;
}

Language compute_language(SystemKind kind, int length) {
  if (kind != SystemKind::chacon) {
    std::vector<std::uint32_t> all(std::size_t{1} << length);
    for (std::uint32_t c = 0; c < all.size(); ++c) all[c] = c;
    return Language(kind, length, std::move(all));
  }
  // Between consecutive tau^n(0) blocks of the fixed point there is at most one
  // spacer 1, so once |tau^n(0)| >= length every factor lies inside
  // tau^n(0) tau^n(0) or tau^n(0) 1 tau^n(0), both factors of tau^(n+1)(0).
  int n = 0;
  std::size_t len = 1;
  while (len < static_cast<std::size_t>(length)) {
    len = 3 * len + 1;
    ++n;
  }
  return Language(kind, length, factors(chacon_block(n + 1), length));
}

}  // namespace

const Language& language(SystemKind kind, int length) {
  if (length < 1) throw ParameterError("word length must be >= 1");
  if (length > kMaxWordLength)
    throw ResourceError("word length " + std::to_string(length) +
                        " exceeds enumeration budget " + std::to_string(kMaxWordLength));
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Language>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(static_cast<int>(kind), length);
  auto it = memo.find(key);
  if (it == memo.end()) {
    it = memo.emplace(key, std::make_unique<Language>(compute_language(kind, length))).first;
  }
  return *it->second;
}

void write_language(std::ostream& out, const Language& lang) {
  out << to_string(lang.system()) << ',' << lang.length() << ',' << lang.size() << '\n';
  for (std::size_t i = 0; i < lang.size(); ++i) out << word_to_string(lang.word(i)) << '\n';
}

Language read_language(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw DomainError("empty language cache");
  std::istringstream hs(header);
  std::string name, len_s, count_s;
  if (!std::getline(hs, name, ',') || !std::getline(hs, len_s, ',') ||
      !std::getline(hs, count_s))
    throw DomainError("malformed language cache header");
  SystemKind kind = parse_system_kind(name);
  int length = std::stoi(len_s);
  std::size_t count = std::stoul(count_s);
  std::vector<std::uint32_t> codes;
  std::string line;
  while (codes.size() < count && std::getline(in, line)) {
    if (static_cast<int>(line.size()) != length) throw DomainError("cache word of wrong length");
    codes.push_back(pack(word_from_string(line)));
  }
  if (codes.size() != count) throw DomainError("language cache truncated");
  return Language(kind, length, std::move(codes));
}

// ---------------------------------------------------------------------------
// CantorPoint

CantorPoint::CantorPoint(SystemPtr system, Word code, int first,
                         std::optional<std::int64_t> index)
    : system_(std::move(system)), code_(std::move(code)), first_(first), index_(index) {}

CantorPoint CantorPoint::from_code(SystemPtr system, Word code) {
  if (code.empty()) throw DomainError("empty code");
  if (system->two_sided()) {
    if (code.size() % 2 == 0) throw DomainError("two-sided code must have odd length");
    int k = static_cast<int>(code.size() / 2);
    return from_window(std::move(system), std::move(code), -k);
  }
  return from_window(std::move(system), std::move(code), 0);
}

CantorPoint CantorPoint::from_window(SystemPtr system, Word code, int first_offset) {
  if (code.empty()) throw DomainError("empty code");
  int last = first_offset + static_cast<int>(code.size()) - 1;
  if (first_offset > 0 || last < 0) throw DomainError("window must contain offset 0");
  if (!system->two_sided() && first_offset != 0) throw DomainError("odometer codes are prefixes");
  if (code.size() <= static_cast<std::size_t>(kMaxWordLength) &&
      !language(system->kind(), static_cast<int>(code.size())).contains(code))
    throw DomainError("inadmissible code " + word_to_string(code));
  return CantorPoint(std::move(system), std::move(code), first_offset, std::nullopt);
}

CantorPoint CantorPoint::from_index(SystemPtr system, std::int64_t index, int resolution) {
  if (resolution < 1) throw DomainError("resolution must be >= 1");
  if (!system->two_sided()) {
    Word digits(static_cast<std::size_t>(resolution));
    auto v = static_cast<std::uint64_t>(index);
    for (auto& d : digits) {
      d = static_cast<std::uint8_t>(v & 1u);
      v >>= 1;
    }
    return CantorPoint(std::move(system), std::move(digits), 0, index);
  }
  const Word& g = system->generator();
  auto lo = index - resolution;
  auto hi = index + resolution;
  if (lo < 0 || hi >= static_cast<std::int64_t>(g.size()))
    throw ResolutionError("generator word too short for index " + std::to_string(index));
  Word code(g.begin() + lo, g.begin() + hi + 1);
  return CantorPoint(std::move(system), std::move(code), -resolution, index);
}

int CantorPoint::resolution() const {
  if (!system_->two_sided()) return static_cast<int>(code_.size());
  return std::min(-first_, last_offset());
}

std::uint8_t CantorPoint::symbol_at(int offset) const {
  if (!knows(offset)) throw ResolutionError("offset outside the known window");
  return code_[static_cast<std::size_t>(offset - first_)];
}

Word CantorPoint::window(int lo, int length) const {
  if (!knows(lo) || !knows(lo + length - 1)) throw ResolutionError("window outside known code");
  auto b = code_.begin() + (lo - first_);
  return Word(b, b + length);
}

Word CantorPoint::centred(int radius) const {
  if (!system_->two_sided()) return window(0, radius);
  return window(-radius, 2 * radius + 1);
}

bool CantorPoint::operator==(const CantorPoint& other) const {
  return system_->kind() == other.system_->kind() && first_ == other.first_ &&
         code_ == other.code_;
}

namespace {

CantorPoint shifted(const CantorPoint& p, int delta) {
  const auto& sys = p.system_ptr();
  if (auto idx = p.generator_index()) {
    std::int64_t next = *idx + delta;
    int k = p.resolution();
    if (next - k >= 0 && next + k < static_cast<std::int64_t>(sys->generator().size()))
      return CantorPoint::from_index(sys, next, k);
  }
  // Symbol at offset j moves to offset j - delta.
  int first = p.first_offset() - delta;
  int last = p.last_offset() - delta;
  if (first > 0 || last < 0) throw ResolutionError("window exhausted and no generator available");
  return CantorPoint::from_window(sys, p.code(), first);
}

CantorPoint odometer_add(const CantorPoint& p, int delta) {
  if (auto idx = p.generator_index())
    return CantorPoint::from_index(p.system_ptr(), *idx + delta, p.resolution());
  Word digits = p.code();
  // delta is +1 (carry) or -1 (borrow)
  std::uint8_t carry_digit = delta > 0 ? 1 : 0;
  for (auto& d : digits) {
    if (d == carry_digit) {
      d = static_cast<std::uint8_t>(1 - d);
    } else {
      d = static_cast<std::uint8_t>(1 - d);
      break;
    }
  }
  return CantorPoint::from_window(p.system_ptr(), std::move(digits), 0);
}

}  // namespace

CantorPoint step(const CantorPoint& point) {
  if (!point.system().two_sided()) return odometer_add(point, +1);
  return shifted(point, +1);
}

CantorPoint step_inverse(const CantorPoint& point) {
  if (!point.system().two_sided()) return odometer_add(point, -1);
  return shifted(point, -1);
}

Rational cantor_metric(const CantorPoint& p, const CantorPoint& q) {
  if (p.system().kind() != q.system().kind()) throw DomainError("points from different systems");
  if (!p.system().two_sided()) {
    std::size_t n = std::min(p.code().size(), q.code().size());
    for (std::size_t j = 0; j < n; ++j)
      if (p.code()[j] != q.code()[j]) return pow2_neg(static_cast<int>(j));
    return Rational(0);
  }
  int lo = std::max(p.first_offset(), q.first_offset());
  int hi = std::min(p.last_offset(), q.last_offset());
  int reach = std::max(-lo, hi);
  for (int j = 0; j <= reach; ++j) {
    for (int off : {j, -j}) {
      if (off < lo || off > hi) continue;
      if (p.symbol_at(off) != q.symbol_at(off)) return pow2_neg(j);
    }
  }
  return Rational(0);
}

// ---------------------------------------------------------------------------
// Coverage

namespace {

constexpr std::int64_t kUnvisited = std::numeric_limits<std::int64_t>::max();

// Packed length-L window of f^n(start) (or f^-n) for n in [0, steps).
class OrbitWindows {
 public:
  OrbitWindows(const CantorPoint& start, int length, Direction direction, std::int64_t steps)
      : length_(length), sign_(direction == Direction::forward ? 1 : -1) {
    const auto& sys = start.system();
    if (!sys.two_sided()) {
      mode_ = Mode::odometer;
      if (start.resolution() < length)
        throw ResolutionError("odometer point resolution below word length");
      Word prefix = start.window(0, length);
      for (int i = 0; i < length; ++i) base_ |= static_cast<std::uint64_t>(prefix[i]) << i;
      table_.resize(std::size_t{1} << length);
      for (std::uint64_t v = 0; v < table_.size(); ++v) {
        Word w(static_cast<std::size_t>(length));
        for (int i = 0; i < length; ++i) w[i] = static_cast<std::uint8_t>((v >> i) & 1u);
        table_[v] = pack(w);
      }
      return;
    }
    lo_ = -(length / 2);
    if (auto idx = start.generator_index()) {
      std::int64_t first = *idx + lo_;
      std::int64_t far = sign_ > 0 ? first + (steps - 1) + length - 1 : first - (steps - 1);
      std::int64_t lo_ix = std::min(first, far);
      std::int64_t hi_ix = std::max(first + length - 1, far);
      if (lo_ix >= 0 && hi_ix < static_cast<std::int64_t>(sys.generator().size())) {
        mode_ = Mode::generator;
        gen_ = &sys.generator();
        origin_ = first;
        return;
      }
    }
    mode_ = Mode::window;
    CantorPoint x = start;
    cached_.reserve(static_cast<std::size_t>(steps));
    for (std::int64_t n = 0; n < steps; ++n) {
      cached_.push_back(pack(x.window(lo_, length)));
      if (n + 1 < steps) x = sign_ > 0 ? step(x) : step_inverse(x);
    }
  }

  std::uint32_t at(std::int64_t n) const {
    switch (mode_) {
      case Mode::odometer: {
        std::uint64_t mask = (std::uint64_t{1} << length_) - 1;
        std::uint64_t v = (base_ + static_cast<std::uint64_t>(sign_ * n)) & mask;
        return table_[v];
      }
      case Mode::generator: {
        std::int64_t b = origin_ + sign_ * n;
        std::uint32_t code = 0;
        for (int i = 0; i < length_; ++i) code = (code << 1) | (*gen_)[b + i];
        return code;
      }
      case Mode::window:
        return cached_[static_cast<std::size_t>(n)];
    }
    return 0;
  }

 private:
  enum class Mode { odometer, generator, window };
  Mode mode_ = Mode::window;
  int length_;
  int sign_;
  int lo_ = 0;
  std::uint64_t base_ = 0;
  std::vector<std::uint32_t> table_;
  const Word* gen_ = nullptr;
  std::int64_t origin_ = 0;
  std::vector<std::uint32_t> cached_;
};

// Runs `visit(n, first_visit)` over [0, steps) split into `workers` blocks and
// merges per-item first-visit times by minimum.
template <typename Visit>
std::vector<std::int64_t> first_visits(std::size_t items, std::int64_t steps, int workers,
                                       Visit visit) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::int64_t>(1, steps / 4096))));
  std::vector<std::vector<std::int64_t>> partial(static_cast<std::size_t>(workers),
                                                 std::vector<std::int64_t>(items, kUnvisited));
  auto run = [&](int w) {
    std::int64_t begin = steps * w / workers;
    std::int64_t end = steps * (w + 1) / workers;
    auto& fv = partial[static_cast<std::size_t>(w)];
    for (std::int64_t n = begin; n < end; ++n) visit(n, fv);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  auto& out = partial[0];
  for (std::size_t w = 1; w < partial.size(); ++w)
    for (std::size_t i = 0; i < items; ++i) out[i] = std::min(out[i], partial[w][i]);
  return std::move(out);
}

CoverageReport summarize(int depth, std::int64_t steps, std::vector<std::int64_t> fv) {
  CoverageReport r;
  r.depth = depth;
  r.total = fv.size();
  std::sort(fv.begin(), fv.end());
  std::int64_t last = 0;
  for (std::size_t i = 0; i < fv.size() && fv[i] != kUnvisited; ++i) {
    r.visited = i + 1;
    last = fv[i] + 1;
    bool group_end = i + 1 == fv.size() || fv[i + 1] != fv[i];
    if (group_end)
      r.plateau.emplace_back(last, Rational(static_cast<std::int64_t>(r.visited),
                                            static_cast<std::int64_t>(r.total)));
  }
  r.fraction = Rational(static_cast<std::int64_t>(r.visited), static_cast<std::int64_t>(r.total));
  r.steps_used = r.visited == r.total ? last : steps;
  return r;
}

}  // namespace

CoverageReport orbit_coverage(const CantorPoint& start, std::int64_t steps, int word_length,
                              Direction direction, int workers) {
  if (steps < 1) throw ParameterError("orbit length must be >= 1");
  const Language& lang = language(start.system().kind(), word_length);
  OrbitWindows windows(start, word_length, direction, steps);
  std::vector<std::size_t> slot(std::size_t{1} << word_length, Language::npos);
  for (std::size_t i = 0; i < lang.size(); ++i) slot[lang.codes()[i]] = i;
  auto fv = first_visits(lang.size(), steps, workers, [&](std::int64_t n, auto& out) {
    std::size_t s = slot[windows.at(n)];
    if (s == Language::npos) throw ConsistencyError("orbit produced an inadmissible window");
    if (out[s] == kUnvisited) out[s] = n;
  });
  return summarize(word_length, steps, std::move(fv));
}

CoverageReport product_orbit_coverage(const CantorPoint& a, const CantorPoint& b,
                                      std::int64_t steps, int word_length, int workers) {
  if (steps < 1) throw ParameterError("orbit length must be >= 1");
  if (a.system().kind() != b.system().kind()) throw DomainError("seeds from different systems");
  const Language& lang = language(a.system().kind(), word_length);
  std::size_t n_words = lang.size();
  if (n_words * n_words > (std::size_t{1} << 24))
    throw ResourceError("product language exceeds enumeration budget");
  OrbitWindows wa(a, word_length, Direction::forward, steps);
  OrbitWindows wb(b, word_length, Direction::forward, steps);
  std::vector<std::size_t> slot(std::size_t{1} << word_length, Language::npos);
  for (std::size_t i = 0; i < n_words; ++i) slot[lang.codes()[i]] = i;
  auto fv = first_visits(n_words * n_words, steps, workers, [&](std::int64_t n, auto& out) {
    std::size_t sa = slot[wa.at(n)];
    std::size_t sb = slot[wb.at(n)];
    if (sa == Language::npos || sb == Language::npos)
      throw ConsistencyError("orbit produced an inadmissible window");
    std::size_t s = sa * n_words + sb;
    if (out[s] == kUnvisited) out[s] = n;
  });
  return summarize(word_length, steps, std::move(fv));
}

SeedSearchResult search_product_seed(const SystemPtr& system, std::int64_t steps,
                                     int word_length, int candidates,
                                     std::int64_t probe_steps, std::uint64_t seed,
                                     int workers) {
  if (candidates < 1) throw ParameterError("need at least one seed candidate");
  std::mt19937_64 rng(seed);
  int k = system->two_sided() ? std::max(1, word_length / 2 + 1) : word_length;
  auto make_pair_at = [&](std::int64_t base, std::int64_t offset) {
    return std::make_pair(CantorPoint::from_index(system, base, k),
                          CantorPoint::from_index(system, base + offset, k));
  };
  std::int64_t base = k + word_length;
  std::int64_t max_offset = 0;
  if (system->two_sided()) {
    auto glen = static_cast<std::int64_t>(system->generator().size());
    max_offset = glen - base - steps - 2 * (k + word_length);
    if (max_offset < 1) throw ResourceError("generator word too short for seed search");
  } else {
    max_offset = std::int64_t{1} << 30;
  }
  std::uniform_int_distribution<std::int64_t> pick(1, max_offset);

  std::int64_t best_offset = 0;
  std::int64_t best_base = base;
  CoverageReport best;
  bool have = false;
  for (int c = 0; c < candidates; ++c) {
    std::int64_t offset = pick(rng);
    std::int64_t b0 = system->two_sided() ? base : pick(rng);
    auto [pa, pb] = make_pair_at(b0, offset);
    auto rep = product_orbit_coverage(pa, pb, std::min(steps, probe_steps), word_length, workers);
    bool better = !have || rep.visited > best.visited ||
                  (rep.visited == best.visited && rep.steps_used < best.steps_used);
    if (better) {
      best = rep;
      best_offset = offset;
      best_base = b0;
      have = true;
    }
  }
  auto [pa, pb] = make_pair_at(best_base, best_offset);
  auto full = product_orbit_coverage(pa, pb, steps, word_length, workers);
  return SeedSearchResult{pa, pb, std::move(full), best_offset, candidates};
}

}  // namespace ctl
