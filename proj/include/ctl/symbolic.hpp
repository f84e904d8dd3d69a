#pragma once

// Concrete Cantor-set homeomorphisms: the Chacon subshift (0 -> 0010, 1 -> 1)
// under the shift, the dyadic odometer and the full 2-shift. Points are finite
// windows, optionally backed by an index into a long generator word so that
// orbits can be followed without losing resolution.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctl/rational.hpp"

namespace ctl {

enum class SystemKind { chacon, odometer2, fullshift2 };

std::string_view to_string(SystemKind kind);
SystemKind parse_system_kind(std::string_view name);

using Word = std::vector<std::uint8_t>;

std::string word_to_string(const Word& w);
Word word_from_string(std::string_view text);

/// Longest word length the language oracle will enumerate.
inline constexpr int kMaxWordLength = 20;

/// Apply a letter-to-word substitution to every letter of `w`.
Word substitute(const Word& w, const std::vector<Word>& rules);

/// tau^m(0) for the Chacon substitution; |tau^m(0)| = (3^(m+1) - 1) / 2.
Word chacon_block(int m);

class SubshiftSystem;
using SystemPtr = std::shared_ptr<const SubshiftSystem>;

class SubshiftSystem {
 public:
  /// `generator_length` is a lower bound on the backing word (ignored for the
  /// odometer). The full-shift generator is drawn from `seed`.
  static SystemPtr create(SystemKind kind, std::size_t generator_length = 0,
                          std::uint64_t seed = 0);

  SystemKind kind() const { return kind_; }
  int alphabet_size() const { return 2; }
  bool two_sided() const { return kind_ != SystemKind::odometer2; }
  const std::vector<Word>& rules() const { return rules_; }
  const Word& generator() const { return generator_; }
  /// m such that the Chacon generator equals tau^m(0); -1 otherwise.
  int generator_power() const { return power_; }
  std::uint64_t seed() const { return seed_; }

 private:
  SubshiftSystem() = default;

  SystemKind kind_ = SystemKind::fullshift2;
  std::vector<Word> rules_;
  Word generator_;
  int power_ = -1;
  std::uint64_t seed_ = 0;
};

/// Words are packed first-symbol-most-significant, so integer order is
/// lexicographic order.
std::uint32_t pack(const Word& w);
Word unpack(std::uint32_t code, int length);

/// All admissible words of one length, sorted.
class Language {
 public:
  Language(SystemKind system, int length, std::vector<std::uint32_t> codes);

  SystemKind system() const { return system_; }
  int length() const { return length_; }
  std::size_t size() const { return codes_.size(); }
  const std::vector<std::uint32_t>& codes() const { return codes_; }
  Word word(std::size_t i) const { return unpack(codes_[i], length_); }

  bool contains(const Word& w) const;
  /// Position of a packed word, or npos.
  std::size_t index_of(std::uint32_t code) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  SystemKind system_;
  int length_;
  std::vector<std::uint32_t> codes_;
};

/// Admissible words of the given length (memoized, thread safe).
/// Throws ParameterError for length < 1 and ResourceError beyond kMaxWordLength.
const Language& language(SystemKind kind, int length);

/// Flat cache format: header `system,length,count`, then one word per line.
void write_language(std::ostream& out, const Language& lang);
Language read_language(std::istream& in);

/// A finite-resolution point. Two-sided systems store the symbols at offsets
/// [first_offset, first_offset + code.size()); the odometer stores the first
/// code.size() binary digits, least significant first.
class CantorPoint {
 public:
  /// Centred window of odd length 2k+1 (two-sided) or a prefix of length k.
  static CantorPoint from_code(SystemPtr system, Word code);
  static CantorPoint from_window(SystemPtr system, Word code, int first_offset);
  /// Point read from the system's generator word around `index`.
  static CantorPoint from_index(SystemPtr system, std::int64_t index, int resolution);

  const SubshiftSystem& system() const { return *system_; }
  const SystemPtr& system_ptr() const { return system_; }
  const Word& code() const { return code_; }
  int first_offset() const { return first_; }
  int last_offset() const { return first_ + static_cast<int>(code_.size()) - 1; }
  /// Usable radius (two-sided) or prefix length (odometer).
  int resolution() const;
  std::optional<std::int64_t> generator_index() const { return index_; }

  bool knows(int offset) const { return offset >= first_ && offset <= last_offset(); }
  std::uint8_t symbol_at(int offset) const;
  /// Symbols at offsets lo .. lo+length-1.
  Word window(int lo, int length) const;
  /// Symbols at offsets -radius .. radius (two-sided) or the first `radius` digits.
  Word centred(int radius) const;

  bool operator==(const CantorPoint& other) const;

 private:
  CantorPoint(SystemPtr system, Word code, int first, std::optional<std::int64_t> index);

  SystemPtr system_;
  Word code_;
  int first_ = 0;
  std::optional<std::int64_t> index_;
};

/// f: shift by +1 for subshifts, add one with carry for the odometer.
CantorPoint step(const CantorPoint& point);
CantorPoint step_inverse(const CantorPoint& point);

/// 2^-j where j is the least offset (by absolute value) or digit position at
/// which the codes differ among the positions both know; 0 if none differ.
Rational cantor_metric(const CantorPoint& p, const CantorPoint& q);

struct CoverageReport {
  int depth = 0;
  std::size_t total = 0;
  std::size_t visited = 0;
  Rational fraction{0};
  std::int64_t steps_used = 0;
  /// (orbit length, fraction) at every orbit length where the fraction grows.
  std::vector<std::pair<std::int64_t, Rational>> plateau;
};

enum class Direction { forward, backward };

/// Fraction of language(L) seen as windows of f^n(start) (or f^-n), n < steps.
/// Two-sided windows cover offsets -L/2 .. L-1-L/2; odometer windows are
/// prefixes. `workers` partitions the orbit; the result does not depend on it.
CoverageReport orbit_coverage(const CantorPoint& start, std::int64_t steps, int word_length,
                              Direction direction, int workers = 1);

/// Fraction of language(L)^2 visited by (f^n(a), f^n(b)), n < steps.
CoverageReport product_orbit_coverage(const CantorPoint& a, const CantorPoint& b,
                                      std::int64_t steps, int word_length, int workers = 1);

struct SeedSearchResult {
  CantorPoint first;
  CantorPoint second;
  CoverageReport report;
  std::int64_t offset = 0;
  int candidates_tried = 0;
};

/// Random search over seed pairs for the best product coverage. Candidates are
/// ranked on `probe_steps`, the best is re-run for `steps`.
SeedSearchResult search_product_seed(const SystemPtr& system, std::int64_t steps,
                                     int word_length, int candidates,
                                     std::int64_t probe_steps, std::uint64_t seed,
                                     int workers = 1);

}  // namespace ctl
