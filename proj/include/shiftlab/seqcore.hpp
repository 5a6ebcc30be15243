#pragma once

// Symbols, words, eventually periodic sequences and the shift metric.
//
// Sequence indices are 1-based throughout, matching the exponent of the
// metric rho(x, y) = 2^-k with k the first index where x and y disagree.

#include "shiftlab/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shiftlab {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

enum class Order { Less, Equal, Greater };

struct PrimitiveRoot {
  Word root;
  std::size_t multiplicity = 0;
};

/// Shortest u with w = u^m, via the KMP failure function. Requires |w| >= 1.
PrimitiveRoot primitive_root(std::span<const Symbol> w);

/// Index r such that rotating w left by r gives its least rotation (Booth).
std::size_t least_rotation(std::span<const Symbol> w);

/// Lexicographic order on finite words; a proper prefix is Less.
Order lex_compare(std::span<const Symbol> a, std::span<const Symbol> b);

/// A point u.v^inf kept in canonical form: v primitive, u minimal.
///
/// The periodic part is stored as a shared necklace (least rotation) plus an
/// offset, so shifting a periodic point and building whole orbits are O(1)
/// per point and share storage.
class EventuallyPeriodicSeq {
 public:
  EventuallyPeriodicSeq(Word preperiod, Word period);

  static EventuallyPeriodicSeq periodic(Word period) { return {Word{}, std::move(period)}; }
  static EventuallyPeriodicSeq constant(Symbol s) { return {Word{}, Word{s}}; }

  const Word& preperiod() const noexcept { return pre_; }
  Word period() const;
  std::size_t preperiod_length() const noexcept { return pre_.size(); }
  std::size_t period_length() const noexcept { return cycle_->word.size(); }
  bool is_periodic() const noexcept { return pre_.empty(); }

  /// Symbol at 1-based position `index`.
  Symbol at(std::size_t index) const;
  Word prefix(std::size_t n) const;

  /// Symbol `i` (0-based) of the period word.
  Symbol period_symbol(std::size_t i) const {
    const auto& w = cycle_->word;
    return w[(offset_ + i) % w.size()];
  }

  /// Necklace of the periodic part and the rotation offset of the period.
  const Word& necklace() const noexcept { return cycle_->word; }
  std::size_t necklace_hash() const noexcept { return cycle_->hash; }
  std::size_t rotation() const noexcept { return offset_; }
  bool same_necklace(const EventuallyPeriodicSeq& other) const noexcept;

  /// sigma^k(x), canonical.
  EventuallyPeriodicSeq shifted(std::uint64_t k) const;

  friend bool operator==(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b);
  /// Structural total order on canonical forms (for ordered containers).
  friend std::strong_ordering operator<=>(const EventuallyPeriodicSeq& a,
                                          const EventuallyPeriodicSeq& b);

  std::size_t hash() const noexcept;

 private:
  struct Cycle {
    Word word;
    std::size_t hash = 0;
  };

  EventuallyPeriodicSeq() = default;

  Word pre_;
  std::shared_ptr<const Cycle> cycle_;
  std::size_t offset_ = 0;
};

using Point = EventuallyPeriodicSeq;

/// 1-based index of the first disagreement, or nullopt when x == y.
///
/// Decided within max(|u1|,|u2|) + |v1| + |v2| - gcd(|v1|,|v2|) symbols
/// (Fine and Wilf), which never exceeds the lcm-based bound.
std::optional<std::uint64_t> first_difference(const Point& x, const Point& y);

/// Exact shift metric.
Rational rho(const Point& x, const Point& y);

Order lex_compare(const Point& x, const Point& y);

Point shift(const Point& x, std::uint64_t k);

// Text encoding.

enum class Codec { Numeric, Dyck };

inline constexpr Symbol kDyckOpenSquare = 0;   // [
inline constexpr Symbol kDyckCloseSquare = 1;  // ]
inline constexpr Symbol kDyckOpenRound = 2;    // (
inline constexpr Symbol kDyckCloseRound = 3;   // )

std::string format_word(std::span<const Symbol> w, Codec codec = Codec::Numeric);
Word parse_word(std::string_view text, Codec codec = Codec::Numeric);

/// Numeric points render as `pre(period)^inf`; Dyck points as `pre{period}^inf`
/// since round brackets are symbols there.
std::string format_point(const Point& x, Codec codec = Codec::Numeric);
Point parse_point(std::string_view text, Codec codec = Codec::Numeric);

/// True if the text looks like a point (ends with ^inf) rather than a word.
bool is_point_text(std::string_view text);

}  // namespace shiftlab

template <>
struct std::hash<shiftlab::EventuallyPeriodicSeq> {
  std::size_t operator()(const shiftlab::EventuallyPeriodicSeq& x) const noexcept {
    return x.hash();
  }
};
